#include "anon/verify/history.hpp"

#include <algorithm>

namespace anon::verify {

using sim::EventKind;

HistoryView::HistoryView(const sim::Trace& trace) : trace_(&trace), n_(trace.n) {
  int actors = n_;
  for (const auto& e : trace.events) actors = std::max(actors, e.actor + 1);
  crash_step_.resize(static_cast<std::size_t>(actors));
  mem_by_actor_.resize(static_cast<std::size_t>(actors));
  std::vector<std::vector<std::size_t>> open(static_cast<std::size_t>(actors));

  std::vector<Value> cells(static_cast<std::size_t>(std::max(n_, 0)), Value::empty_set());
  timeline_.push_back(cells);

  for (const auto& e : trace.events) {
    if (e.kind == EventKind::truncated) continue;
    if (e.actor < 0) {
      fail("event without an actor at step " + std::to_string(e.step));
      continue;
    }
    const auto a = static_cast<std::size_t>(e.actor);
    if (crash_step_[a]) fail("actor " + std::to_string(e.actor) + " acts after crashing");

    switch (e.kind) {
      case EventKind::invoke:
        open[a].push_back(ops_.size());
        ops_.push_back({e.actor, e.object, e.op, e.args, std::nullopt, e.step, std::nullopt});
        break;
      case EventKind::respond: {
        auto& stack = open[a];
        auto it = std::find_if(stack.rbegin(), stack.rend(), [&](std::size_t k) {
          return ops_[k].object == e.object && ops_[k].op == e.op;
        });
        if (it == stack.rend()) {
          fail("respond without invoke: " + e.object + "." + e.op + " at step " + std::to_string(e.step));
          break;
        }
        auto& rec = ops_[*it];
        rec.resp = e.step;
        rec.ret = e.ret;
        stack.erase(std::next(it).base());
        break;
      }
      case EventKind::crash:
        crash_step_[a] = e.step;
        break;
      default: {
        if (e.step != last_step_ + 1) {
          fail("memory steps are not consecutive at step " + std::to_string(e.step));
        }
        last_step_ = e.step;
        mem_by_actor_[a].push_back(&e);
        if (e.kind == EventKind::scan) {
          for (int i = 0; i < n_; ++i) touched_.insert(i);
          if (!e.ret || !e.ret->is_tuple() || static_cast<int>(e.ret->size()) != n_) {
            fail("scan at step " + std::to_string(e.step) + " does not return " + std::to_string(n_) + " cells");
          } else if (!std::equal(cells.begin(), cells.end(), e.ret->items().begin())) {
            fail("scan at step " + std::to_string(e.step) + " disagrees with the replayed registers");
          }
        } else {
          const int idx = !e.args.empty() && e.args[0].is_int() ? static_cast<int>(e.args[0].as_int()) : -1;
          touched_.insert(idx);
          if (idx < 0 || idx >= n_) {
            fail("register index out of range at step " + std::to_string(e.step));
          } else if (e.kind == EventKind::read) {
            if (!e.ret || !(*e.ret == cells[static_cast<std::size_t>(idx)]))
              fail("read at step " + std::to_string(e.step) + " disagrees with the replayed register");
          } else if (e.args.size() < 2 || !e.args[1].is_set()) {
            fail("write without a value-set at step " + std::to_string(e.step));
          } else {
            cells[static_cast<std::size_t>(idx)] = e.args[1];
          }
        }
        timeline_.push_back(cells);
        break;
      }
    }
  }
}

void HistoryView::fail(std::string msg) {
  if (!replay_error_) replay_error_ = std::move(msg);
}

std::vector<const OpRecord*> HistoryView::ops_on(std::string_view object) const {
  std::vector<const OpRecord*> out;
  for (const auto& op : ops_)
    if (op.object == object) out.push_back(&op);
  return out;
}

std::vector<std::string> HistoryView::objects() const {
  std::vector<std::string> out;
  for (const auto& op : ops_)
    if (std::find(out.begin(), out.end(), op.object) == out.end()) out.push_back(op.object);
  return out;
}

int HistoryView::crashed_count() const {
  return static_cast<int>(std::count_if(crash_step_.begin(), crash_step_.end(), [](const auto& c) { return c.has_value(); }));
}

}  // namespace anon::verify
