#include "anon/verify/monitors.hpp"

#include <map>

#include "anon/verify/linearize.hpp"
#include "anon/weakset/weak_set.hpp"

namespace anon::verify {

using sim::EventKind;

std::vector<AlphaPoint> alpha_series(const HistoryView& h, const Value& v) {
  const auto& mem = h.memory_events();
  std::vector<std::size_t> next(mem.size(), 0);
  std::vector<AlphaPoint> out;
  out.reserve(h.last_step() + 1);
  for (std::uint64_t tau = 0; tau <= h.last_step(); ++tau) {
    AlphaPoint p;
    for (std::size_t a = 0; a < mem.size(); ++a) {
      auto& k = next[a];
      while (k < mem[a].size() && mem[a][k]->step <= tau) ++k;
      if (k == mem[a].size()) {
        ++p.w;
        continue;
      }
      const auto& e = *mem[a][k];
      if (e.kind == EventKind::scan || e.kind == EventKind::read) ++p.r;
      else if (e.args.size() >= 2 && e.args[1].is_set() && e.args[1].contains(v)) ++p.w;
    }
    for (const auto& c : h.cells_at(tau))
      if (c.contains(v)) ++p.c;
    out.push_back(p);
  }
  return out;
}

CheckReport alpha_monitor(const HistoryView& h, const Value& v) {
  CheckReport rep;
  const std::string obj = v.text();
  if (h.replay_error()) {
    rep.add({"alpha-monotonicity", obj, Verdict::fail, "trace does not replay: " + *h.replay_error(), std::nullopt});
    return rep;
  }
  const auto series = alpha_series(h, v);
  const int n = h.n();

  Finding mono{"alpha-monotonicity", obj, Verdict::pass, "", std::nullopt};
  for (std::size_t tau = 0; tau + 1 < series.size(); ++tau) {
    if (series[tau].alpha() > n && series[tau + 1].alpha() < series[tau].alpha()) {
      mono.verdict = Verdict::fail;
      mono.detail = "alpha drops from " + std::to_string(series[tau].alpha()) + " to " +
                    std::to_string(series[tau + 1].alpha()) + " at step " + std::to_string(tau + 1);
      mono.window = Window{tau, tau + 1};
      break;
    }
  }
  rep.add(std::move(mono));

  const auto tv = tau_value(h, v);
  Finding persist{"persistence", obj, Verdict::vacuous, "value never in every register", std::nullopt};
  Finding start{"alpha-at-tau", obj, Verdict::vacuous, "value never in every register", std::nullopt};
  if (tv) {
    persist = {"persistence", obj, Verdict::pass, "", std::nullopt};
    for (std::uint64_t tau = *tv; tau < series.size(); ++tau) {
      if (series[tau].c == 0) {
        persist.verdict = Verdict::fail;
        persist.detail = "no register holds the value at step " + std::to_string(tau) + " (tau_v = " +
                         std::to_string(*tv) + ")";
        persist.window = Window{*tv, tau};
        break;
      }
    }
    const int a = series[*tv].alpha();
    start = {"alpha-at-tau", obj, a > n ? Verdict::pass : Verdict::fail,
             a > n ? "" : "alpha(tau_v) = " + std::to_string(a) + " <= n", Window{*tv, *tv}};
  }
  rep.add(std::move(persist));
  rep.add(std::move(start));
  return rep;
}

CheckReport alpha_monitor_all(const HistoryView& h) {
  std::vector<Value> values;
  for (const auto& per_actor : h.memory_events())
    for (const auto* e : per_actor)
      if ((e->kind == EventKind::update || e->kind == EventKind::write) && e->args.size() >= 2 && e->args[1].is_set())
        for (const auto& x : e->args[1].items()) values.push_back(x);
  const Value all = Value::set(std::move(values));

  std::map<std::string, Finding> summary;
  for (const char* name : {"alpha-monotonicity", "persistence", "alpha-at-tau"})
    summary[name] = Finding{name, "", Verdict::vacuous, "", std::nullopt};
  for (const auto& v : all.items()) {
    for (auto& f : alpha_monitor(h, v).findings) {
      auto& s = summary[f.check];
      if (s.verdict == Verdict::fail) continue;
      if (f.verdict == Verdict::fail || (f.verdict == Verdict::pass && s.verdict == Verdict::vacuous)) s = f;
    }
  }
  CheckReport rep;
  for (auto& [name, f] : summary) {
    if (f.verdict == Verdict::pass) f.object.clear();
    rep.add(std::move(f));
  }
  return rep;
}

CheckReport view_monotonicity(const HistoryView& h) {
  CheckReport rep;
  std::vector<Value> last(static_cast<std::size_t>(h.actors()), Value::empty_set());
  auto observe = [&](int actor, const Value& view, std::uint64_t step) {
    auto& prev = last[static_cast<std::size_t>(actor)];
    if (!is_subset(prev, view)) {
      rep.add({"view-monotonicity", "actor " + std::to_string(actor), Verdict::fail,
               "view " + view.text() + " drops elements of the earlier " + prev.text(), Window{step, step}});
      return false;
    }
    prev = view;
    return true;
  };
  for (const auto& e : h.trace().events) {
    bool ok = true;
    if (e.kind == EventKind::update && e.args.size() >= 2) ok = observe(e.actor, e.args[1], e.step);
    if (e.kind == EventKind::respond && e.object == weakset::kPhysicalObject && e.op == "get" && e.ret)
      ok = observe(e.actor, *e.ret, e.step);
    if (!ok) return rep;
  }
  rep.add({"view-monotonicity", "", Verdict::pass, "", std::nullopt});
  return rep;
}

CheckReport replay_soundness(const HistoryView& h) {
  CheckReport rep;
  if (h.replay_error()) rep.add({"replay", "", Verdict::fail, *h.replay_error(), std::nullopt});
  else rep.add({"replay", "", Verdict::pass, "", std::nullopt});
  return rep;
}

CheckReport space_accounting(const HistoryView& h, int n) {
  CheckReport rep;
  Finding f{"space", std::string(sim::kMemoryObject), Verdict::pass, "", std::nullopt};
  const auto& touched = h.touched_cells();
  if (h.n() != n) {
    f.verdict = Verdict::fail;
    f.detail = "register array has " + std::to_string(h.n()) + " cells, expected " + std::to_string(n);
  } else if (!touched.empty() && (*touched.begin() < 0 || *touched.rbegin() >= n)) {
    f.verdict = Verdict::fail;
    f.detail = "a memory event touches a register outside 0.." + std::to_string(n - 1);
  } else if (h.replay_error()) {
    f.verdict = Verdict::fail;
    f.detail = *h.replay_error();
  } else {
    f.detail = std::to_string(touched.size()) + " of " + std::to_string(n) + " registers touched";
  }
  rep.add(std::move(f));
  return rep;
}

}  // namespace anon::verify
