#include "anon/verify/protocol_checks.hpp"

#include <algorithm>
#include <map>

#include "anon/agreement/programs.hpp"
#include "anon/topology/solve.hpp"

namespace anon::verify {

namespace {

Finding finding(std::string check, std::string object, bool ok, std::string detail,
                std::optional<Window> w = std::nullopt) {
  return {std::move(check), std::move(object), ok ? Verdict::pass : Verdict::fail, ok ? "" : std::move(detail),
          ok ? std::nullopt : w};
}

Window op_window(const OpRecord& op) { return {op.invoc, op.resp.value_or(op.invoc)}; }

}  // namespace

// ---- barycentric agreement ------------------------------------------------

CheckReport check_bary(const HistoryView& h, int b) {
  const std::string obj(agreement::kBaryObject);
  const auto ops = h.ops_on(obj);
  std::vector<Value> ins;
  std::vector<const OpRecord*> done;
  for (const auto* op : ops) {
    if (!op->args.empty()) ins.push_back(op->args[0]);
    if (op->complete() && op->ret) done.push_back(op);
  }
  const Value sigma = Value::set(std::move(ins));

  CheckReport rep;
  std::optional<Finding> vertex, order, origin;
  for (const auto* op : done) {
    if (!vertex && !topology::is_bary_vertex(*op->ret, sigma, b))
      vertex = finding("bary-vertex", obj, false,
                       "output " + op->ret->text() + " is not a vertex of the subdivision of " + sigma.text(),
                       op_window(*op));
    if (!origin) {
      const Value f = b == 0 ? Value::set({*op->ret}) : topology::flatten(*op->ret, b);
      if (!f.is_set() || !is_subset(f, sigma))
        origin = finding("bary-validity", obj, false, "output " + op->ret->text() + " carries non-inputs",
                         op_window(*op));
    }
  }
  for (std::size_t i = 0; i < done.size() && !order && b > 0; ++i)
    for (std::size_t j = i + 1; j < done.size() && !order; ++j) {
      const Value& x = *done[i]->ret;
      const Value& y = *done[j]->ret;
      if (!x.is_set() || !y.is_set() || !topology::comparable(x, y))
        order = finding("bary-comparable", obj, false, "outputs " + x.text() + " and " + y.text() + " not nested",
                        Window{std::min(done[i]->invoc, done[j]->invoc),
                               std::max(*done[i]->resp, *done[j]->resp)});
    }
  rep.add(vertex.value_or(finding("bary-vertex", obj, true, "")));
  rep.add(order.value_or(finding("bary-comparable", obj, true, "")));
  rep.add(origin.value_or(finding("bary-validity", obj, true, "")));
  return rep;
}

// ---- BG simulation --------------------------------------------------------

namespace {

struct GridInfo {
  std::optional<Value> agreed;
  std::vector<const OpRecord*> proposes;
};

using Grid = std::map<std::pair<int, int>, GridInfo>;

Grid collect_grid(const HistoryView& h, CheckReport& rep) {
  Grid grid;
  bool ok = true;
  std::string detail;
  std::optional<Window> w;
  for (const auto& op : h.ops()) {
    auto rc = bgsim::parse_grid_name(op.object);
    if (!rc) continue;
    auto& g = grid[*rc];
    if (op.op == "propose") {
      g.proposes.push_back(&op);
    } else if (op.op == "resolve" && op.complete() && op.ret && !op.ret->is_nil()) {
      if (!g.agreed) {
        g.agreed = *op.ret;
      } else if (*g.agreed != *op.ret && ok) {
        ok = false;
        detail = op.object + " resolved to both " + g.agreed->text() + " and " + op.ret->text();
        w = op_window(op);
      }
    }
  }
  rep.add(finding("bg-grid-agreement", std::string(bgsim::kBgObject), ok, detail, w));
  return grid;
}

/// Round of P_j's state `s`, looked up among agreed states.
std::optional<int> round_of(const Grid& grid, int j, const Value& s) {
  for (const auto& [rc, g] : grid)
    if (rc.second == j && g.agreed && *g.agreed == s) return rc.first;
  return std::nullopt;
}

/// Per component, the round of the state it holds (-1 for nil).
std::optional<std::vector<int>> round_vector(const Grid& grid, const Value& view, int n) {
  std::vector<int> out;
  const auto comps = bgsim::state_components(view);
  for (int j = 0; j < n; ++j) {
    const Value& c = comps[static_cast<std::size_t>(j)];
    if (c.is_nil()) {
      out.push_back(-1);
      continue;
    }
    auto r = round_of(grid, j, c);
    if (!r) return std::nullopt;
    out.push_back(*r);
  }
  return out;
}

bool leq(const std::vector<int>& a, const std::vector<int>& b) {
  for (std::size_t k = 0; k < a.size(); ++k)
    if (a[k] > b[k]) return false;
  return true;
}

std::optional<std::string> replay_problem(const HistoryView& h, const Grid& grid, const Value& inputs, int n,
                                          std::optional<Window>& w) {
  std::map<std::pair<int, int>, std::vector<int>> vectors;
  for (const auto& [rc, g] : grid) {
    const auto [r, i] = rc;
    if (i < 0 || i >= n) return "grid object for unknown process " + std::to_string(i);
    if (!g.agreed) continue;
    const Value& s = *g.agreed;
    const std::string where = "state of P" + std::to_string(i) + " at round " + std::to_string(r);
    if (r == 0) {
      if (!bgsim::is_initial_state(s) || !inputs.contains(bgsim::state_input(s)))
        return where + " is not an input: " + s.text();
      continue;
    }
    if (!bgsim::is_view_state(s) || bgsim::state_components(s).size() != static_cast<std::size_t>(n))
      return where + " is not a view of " + std::to_string(n) + " components: " + s.text();
    auto prev = grid.find({r - 1, i});
    if (prev == grid.end() || !prev->second.agreed || bgsim::state_components(s)[static_cast<std::size_t>(i)] !=
                                                          *prev->second.agreed)
      return where + " does not extend its previous state";
    auto vec = round_vector(grid, s, n);
    if (!vec) return where + " holds a component no simulator agreed on";
    vectors[rc] = *vec;
  }

  for (auto a = vectors.begin(); a != vectors.end(); ++a)
    for (auto b = std::next(a); b != vectors.end(); ++b) {
      if (!leq(a->second, b->second) && !leq(b->second, a->second))
        return "views at (" + std::to_string(a->first.first) + "," + std::to_string(a->first.second) + ") and (" +
               std::to_string(b->first.first) + "," + std::to_string(b->first.second) +
               ") are not ordered like snapshots";
      if (a->first.second == b->first.second && !leq(a->second, b->second))
        return "views of P" + std::to_string(a->first.second) + " go back in time";
    }

  // Every proposal is the proposer's own input (round 0) or the view it
  // computed from its preceding read of BG.SET.
  std::vector<std::vector<const OpRecord*>> gets(static_cast<std::size_t>(h.actors()));
  std::vector<std::optional<Value>> own_input(static_cast<std::size_t>(h.actors()));
  for (const auto& op : h.ops()) {
    if (op.object == bgsim::kBgSet && op.op == "get" && op.complete())
      gets[static_cast<std::size_t>(op.actor)].push_back(&op);
    if (op.object == bgsim::kBgObject && !op.args.empty()) own_input[static_cast<std::size_t>(op.actor)] = op.args[0];
  }
  for (const auto& [rc, g] : grid) {
    const auto [r, i] = rc;
    for (const auto* p : g.proposes) {
      if (p->args.empty()) return "propose without argument on " + p->object;
      w = op_window(*p);
      const auto a = static_cast<std::size_t>(p->actor);
      if (r == 0) {
        if (!own_input[a] || p->args[0] != bgsim::initial_state(*own_input[a]))
          return "simulator " + std::to_string(p->actor) + " proposed a foreign initial state on " + p->object;
        continue;
      }
      const OpRecord* last = nullptr;
      for (const auto* gop : gets[a])
        if (*gop->resp <= p->invoc) last = gop;
      if (!last) return "proposal on " + p->object + " not preceded by a read of BG.SET";
      const Value& snap = *last->ret;
      if (p->args[0] != bgsim::view_state(bgsim::latest_views(snap, n)))
        return "proposal on " + p->object + " differs from the view read at step " + std::to_string(*last->resp);
      if (r != bgsim::latest_round(snap, i) + 1)
        return "proposal on " + p->object + " skips or repeats a round";
    }
  }
  w.reset();

  // What is published in BG.SET is agreed.
  for (const auto& op : h.ops()) {
    if (op.object != bgsim::kBgSet || op.op != "add" || op.args.empty()) continue;
    auto tr = bgsim::parse_triple(op.args[0]);
    if (!tr) return "malformed BG.SET entry " + op.args[0].text();
    auto g = grid.find({tr->round, tr->i});
    if (g == grid.end() || !g->second.agreed || *g->second.agreed != tr->state) {
      w = op_window(op);
      return "published state " + tr->state.text() + " was never agreed";
    }
  }
  return std::nullopt;
}

}  // namespace

int blocked_simulated_processes(const HistoryView& h, const bgsim::SimulatedProcessSpec& spec) {
  CheckReport scratch;
  const Grid grid = collect_grid(h, scratch);
  const int n = spec.n;
  std::vector<bool> terminal(static_cast<std::size_t>(n), false);
  for (const auto& [rc, g] : grid)
    if (g.agreed && rc.second >= 0 && rc.second < n && spec.terminal(*g.agreed))
      terminal[static_cast<std::size_t>(rc.second)] = true;
  int blocked = 0;
  for (int i = 0; i < n; ++i) {
    if (terminal[static_cast<std::size_t>(i)]) continue;
    const GridInfo* top = nullptr;
    for (const auto& [rc, g] : grid)
      if (rc.second == i) top = &g;
    if (!top || top->agreed) continue;
    const bool stuck = std::any_of(top->proposes.begin(), top->proposes.end(), [&](const OpRecord* p) {
      return !p->complete() && h.crashed(p->actor);
    });
    if (stuck) ++blocked;
  }
  return blocked;
}

CheckReport check_bgsim(const HistoryView& h, const bgsim::SimulatedProcessSpec& spec, int t) {
  const std::string obj(bgsim::kBgObject);
  const int n = spec.n;
  CheckReport rep;
  const Grid grid = collect_grid(h, rep);

  const auto sims = h.ops_on(obj);
  std::vector<Value> in;
  for (const auto* op : sims)
    if (!op->args.empty()) in.push_back(op->args[0]);
  const Value inputs = Value::set(std::move(in));

  std::optional<Window> w;
  auto problem = replay_problem(h, grid, inputs, n, w);
  rep.add(finding("bg-replay", obj, !problem, problem.value_or(""), w));

  // decisions
  std::vector<Value> allowed;
  std::vector<bool> terminal(static_cast<std::size_t>(n), false);
  for (const auto& [rc, g] : grid)
    if (g.agreed && rc.second >= 0 && rc.second < n && spec.terminal(*g.agreed)) {
      allowed.push_back(spec.decide(*g.agreed));
      terminal[static_cast<std::size_t>(rc.second)] = true;
    }
  const Value allowed_set = Value::set(std::move(allowed));
  std::vector<Value> dec;
  std::optional<std::string> task_problem;
  std::optional<Window> tw;
  for (const auto* op : sims) {
    if (!op->complete() || !op->ret) continue;
    dec.push_back(*op->ret);
    if (!task_problem && !allowed_set.contains(*op->ret)) {
      task_problem = "decision " + op->ret->text() + " is not the output of a terminal simulated state";
      tw = op_window(*op);
    }
  }
  const Value decisions = Value::set(std::move(dec));
  if (!task_problem && spec.name == "setagreement") {
    if (!is_subset(decisions, inputs))
      task_problem = "decisions " + decisions.text() + " are not inputs";
    else if (decisions.size() > static_cast<std::size_t>(t + 1))
      task_problem = std::to_string(decisions.size()) + " distinct decisions " + decisions.text();
  }
  if (!task_problem && spec.name == "flooding") {
    for (const auto& d : decisions.items())
      if (!d.is_set() || !is_subset(d, inputs)) task_problem = "decision " + d.text() + " names non-inputs";
  }
  rep.add(finding("bg-task", obj, !task_problem, task_problem.value_or(""), tw));

  bool live_undecided = false;
  for (const auto* op : sims)
    if (!op->complete() && !h.crashed(op->actor)) live_undecided = true;
  if (live_undecided && h.truncated())
    rep.add({"bg-termination", obj, Verdict::fail, "a live simulator had not decided when the run was cut off",
             std::nullopt});
  else
    rep.add({"bg-termination", obj, Verdict::pass, "", std::nullopt});

  const int blocked = blocked_simulated_processes(h, spec);
  const int crashed = h.crashed_count();
  rep.add(finding("bg-blocking", obj, blocked <= crashed,
                  std::to_string(blocked) + " simulated processes blocked by " + std::to_string(crashed) +
                      " crashed simulators"));
  return rep;
}

// ---- colorless task pipeline ----------------------------------------------

CheckReport check_solve(const HistoryView& h, const topology::ColorlessTask& task) {
  const std::string obj(topology::kSolveObject);
  const auto ops = h.ops_on(obj);
  std::vector<Value> in;
  std::vector<Value> out;
  for (const auto* op : ops) {
    if (!op->args.empty()) in.push_back(op->args[0]);
    if (op->complete() && op->ret) out.push_back(*op->ret);
  }
  const Value sigma = Value::set(std::move(in));
  const Value outputs = Value::set(std::move(out));
  CheckReport rep;
  if (!task.input.contains(sigma)) {
    rep.add({"solve-carried", obj, Verdict::vacuous, "inputs " + sigma.text() + " are not a simplex of I", {}});
    return rep;
  }
  std::string detail;
  const bool ok = topology::outputs_in_carrier(task, sigma, outputs, &detail);
  rep.add(finding("solve-carried", obj, ok, detail));
  return rep;
}

}  // namespace anon::verify
