#include "anon/verify/linearize.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_set>

namespace anon::verify {

std::string_view to_string(TauMode m) { return m == TauMode::equality ? "equality" : "subset"; }

std::optional<std::uint64_t> tau_value(const HistoryView& h, const Value& v) {
  for (std::uint64_t tau = 0; tau <= h.last_step(); ++tau) {
    const auto& cells = h.cells_at(tau);
    if (std::all_of(cells.begin(), cells.end(), [&](const Value& c) { return c.contains(v); })) return tau;
  }
  return std::nullopt;
}

std::optional<std::uint64_t> tau_view(const HistoryView& h, const Value& view, TauMode mode) {
  for (std::uint64_t tau = 0; tau <= h.last_step(); ++tau) {
    const auto& cells = h.cells_at(tau);
    const bool hit = std::all_of(cells.begin(), cells.end(), [&](const Value& c) {
      return mode == TauMode::equality ? c == view : is_subset(view, c);
    });
    if (hit) return tau;
  }
  return std::nullopt;
}

namespace {

bool is_add(const OpRecord& op) { return op.op == "add"; }

Window op_window(const OpRecord& op, const HistoryView& h) {
  return {op.invoc, op.resp.value_or(h.last_step())};
}

std::string describe(const OpRecord& op) {
  std::string s = "actor " + std::to_string(op.actor) + " " + op.op;
  if (is_add(op) && !op.args.empty()) s += "(" + op.args[0].text() + ")";
  if (!is_add(op) && op.ret) s += " -> " + op.ret->text();
  return s;
}

Linearization failure(std::string detail, Window w) {
  Linearization out;
  out.verdict = Verdict::fail;
  out.detail = std::move(detail);
  out.window = w;
  return out;
}

}  // namespace

Linearization linearize_tau(const HistoryView& h, TauMode mode, std::string_view object) {
  if (h.replay_error()) return failure("trace does not replay: " + *h.replay_error(), {0, h.last_step()});

  struct Point {
    const OpRecord* op;
    std::uint64_t at;
  };
  std::vector<Point> pts;
  for (const OpRecord* op : h.ops_on(object)) {
    if (is_add(*op)) {
      if (op->args.empty()) return failure("add without argument", op_window(*op, h));
      auto tau = tau_value(h, op->args[0]);
      if (!tau) {
        if (op->complete())
          return failure(describe(*op) + " returned but its value never reached every register", op_window(*op, h));
        continue;
      }
      pts.push_back({op, std::max(*tau, op->invoc)});
    } else {
      if (!op->complete()) continue;
      if (!op->ret) return failure(describe(*op) + " returned no view", op_window(*op, h));
      auto tau = tau_view(h, *op->ret, mode);
      if (!tau)
        return failure(describe(*op) + ": the returned view never filled every register", op_window(*op, h));
      pts.push_back({op, std::max(*tau, op->invoc)});
    }
    const auto& p = pts.back();
    if (p.op->complete() && p.at > *p.op->resp)
      return failure(describe(*p.op) + " takes effect at step " + std::to_string(p.at) + ", after it responded",
                     op_window(*p.op, h));
  }

  std::stable_sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) {
    if (a.at != b.at) return a.at < b.at;
    if (is_add(*a.op) != is_add(*b.op)) return is_add(*a.op);
    return a.op->invoc < b.op->invoc;
  });

  Linearization out;
  Value state = Value::empty_set();
  for (const auto& p : pts) {
    if (is_add(*p.op)) {
      state = set_insert(state, p.op->args[0]);
    } else if (!(*p.op->ret == state)) {
      return failure(describe(*p.op) + " but the adds linearized before it give " + state.text(),
                     op_window(*p.op, h));
    }
    out.order.push_back(p.op);
    out.points.push_back(p.at);
  }
  return out;
}

namespace {

class Search {
 public:
  Search(std::vector<const OpRecord*> ops, std::uint64_t budget) : ops_(std::move(ops)), budget_(budget) {
    const auto m = ops_.size();
    prec_.assign(m, 0);
    for (std::size_t i = 0; i < m; ++i) {
      if (ops_[i]->complete()) required_ |= bit(i);
      for (std::size_t j = 0; j < m; ++j)
        if (i != j && ops_[j]->complete() && *ops_[j]->resp < ops_[i]->invoc) prec_[i] |= bit(j);
    }
  }

  std::optional<bool> run() {
    bool found = dfs(0, Value::empty_set());
    if (exhausted_) return std::nullopt;
    return found;
  }

  std::vector<const OpRecord*> witness() const {
    std::vector<const OpRecord*> out;
    for (auto i : path_) out.push_back(ops_[i]);
    return out;
  }

 private:
  static std::uint64_t bit(std::size_t i) { return std::uint64_t{1} << i; }

  bool dfs(std::uint64_t mask, const Value& state) {
    if ((mask & required_) == required_) return true;
    if (failed_.count(mask) != 0) return false;
    if (++nodes_ > budget_) {
      exhausted_ = true;
      return false;
    }
    for (std::size_t i = 0; i < ops_.size() && !exhausted_; ++i) {
      if ((mask & bit(i)) != 0 || (prec_[i] & ~mask) != 0) continue;
      const OpRecord& op = *ops_[i];
      Value next = state;
      if (op.op == "add") {
        next = set_insert(state, op.args[0]);
      } else if (!(*op.ret == state)) {
        continue;
      }
      path_.push_back(i);
      if (dfs(mask | bit(i), next)) return true;
      path_.pop_back();
    }
    if (!exhausted_) failed_.insert(mask);
    return false;
  }

  std::vector<const OpRecord*> ops_;
  std::uint64_t budget_;
  std::vector<std::uint64_t> prec_;
  std::uint64_t required_ = 0;
  std::unordered_set<std::uint64_t> failed_;
  std::vector<std::size_t> path_;
  std::uint64_t nodes_ = 0;
  bool exhausted_ = false;
};

}  // namespace

Linearization linearize_bruteforce(const HistoryView& h, const BruteForceOptions& opts, std::string_view object) {
  if (h.replay_error()) return failure("trace does not replay: " + *h.replay_error(), {0, h.last_step()});
  std::vector<const OpRecord*> ops;
  for (const OpRecord* op : h.ops_on(object)) {
    if (op->complete()) {
      if (is_add(*op) ? op->args.empty() : !op->ret)
        return failure("malformed " + describe(*op), op_window(*op, h));
      ops.push_back(op);
    } else if (is_add(*op) && opts.include_incomplete_adds && !op->args.empty()) {
      ops.push_back(op);
    }
  }
  Linearization out;
  if (ops.size() > 63) {
    out.verdict = Verdict::inconclusive;
    out.detail = std::to_string(ops.size()) + " operations exceed the search limit";
    return out;
  }
  Search search(ops, opts.node_budget);
  auto found = search.run();
  if (!found) {
    out.verdict = Verdict::inconclusive;
    out.detail = "search budget exhausted";
    return out;
  }
  if (!*found) {
    out.verdict = Verdict::fail;
    out.detail = "no order of the " + std::to_string(ops.size()) + " operations respects real time and the specification";
    out.window = Window{0, h.last_step()};
    return out;
  }
  out.order = search.witness();
  return out;
}

CheckReport check_linearizability(const HistoryView& h, TauMode mode, const BruteForceOptions& opts) {
  CheckReport rep;
  auto tau = linearize_tau(h, mode);
  auto brute = linearize_bruteforce(h, opts);
  rep.add({"linearizability-tau", std::string(weakset::kPhysicalObject), tau.verdict, tau.detail, tau.window});
  rep.add({"linearizability-bruteforce", std::string(weakset::kPhysicalObject), brute.verdict, brute.detail,
           brute.window});
  if (brute.verdict != Verdict::inconclusive) {
    const bool same = tau.verdict == brute.verdict;
    rep.add({"oracle-agreement", std::string(weakset::kPhysicalObject), same ? Verdict::pass : Verdict::fail,
             same ? "" : "tau checker says " + std::string(to_string(tau.verdict)) + ", search says " +
                             std::string(to_string(brute.verdict)),
             std::nullopt});
  } else {
    rep.add({"oracle-agreement", std::string(weakset::kPhysicalObject), Verdict::inconclusive, brute.detail,
             std::nullopt});
  }
  return rep;
}

CheckReport tau_mode_agreement(const HistoryView& h) {
  auto eq = linearize_tau(h, TauMode::equality);
  auto sub = linearize_tau(h, TauMode::subset);
  const bool same = eq.verdict == sub.verdict;
  CheckReport rep;
  rep.add({"tau-mode-agreement", std::string(weakset::kPhysicalObject), same ? Verdict::pass : Verdict::fail,
           same ? "" : "equality reading says " + std::string(to_string(eq.verdict)) + ", subset reading says " +
                           std::string(to_string(sub.verdict)),
           same ? std::nullopt : (eq.window ? eq.window : sub.window)});
  return rep;
}

}  // namespace anon::verify
