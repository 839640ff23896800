#include <chrono>
#include <cstdint>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "anon/agreement/programs.hpp"
#include "anon/bgsim/bg.hpp"
#include "anon/sim/explore.hpp"
#include "anon/sim/simulator.hpp"
#include "anon/topology/complex.hpp"
#include "anon/topology/solve.hpp"
#include "anon/topology/task.hpp"
#include "anon/verify/agreement_checks.hpp"
#include "anon/verify/linearize.hpp"
#include "anon/verify/monitors.hpp"
#include "anon/verify/protocol_checks.hpp"
#include "anon/weakset/program.hpp"

using namespace anon;
using verify::CheckReport;
using verify::HistoryView;
using verify::Verdict;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Per-protocol tally of traces checked for register usage.
struct SpaceTally {
  std::map<std::string, std::pair<std::uint64_t, std::uint64_t>> by_protocol;  // traces, failures

  void check(const std::string& protocol, const HistoryView& h, int n) {
    auto& [traces, bad] = by_protocol[protocol];
    ++traces;
    const bool ok = verify::space_accounting(h, n).ok() && h.touched_cells().size() == static_cast<std::size_t>(n);
    if (!ok) ++bad;
  }
};

SpaceTally space;

sim::CrashPlan random_plan(std::mt19937_64& rng, int n, int t, std::uint64_t horizon) {
  sim::CrashPlan plan;
  const int k = static_cast<int>(rng() % static_cast<std::uint64_t>(t + 1));
  std::vector<int> actors(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) actors[static_cast<std::size_t>(i)] = i;
  std::shuffle(actors.begin(), actors.end(), rng);
  for (int i = 0; i < k; ++i) plan.rules.push_back({actors[static_cast<std::size_t>(i)], rng() % horizon, ""});
  return plan;
}

std::size_t fails_of(const CheckReport& r, std::string_view check) { return r.count(check, Verdict::fail); }

std::vector<std::pair<std::string, std::vector<std::vector<weakset::ScriptedOp>>>> weak_set_workloads() {
  using weakset::add_op;
  using weakset::get_op;
  return {{"add|add", {{add_op(1)}, {add_op(2)}}},
          {"add|get", {{add_op(1)}, {get_op()}}},
          {"get|get", {{get_op()}, {get_op()}}},
          {"add;get|add;get", {{add_op(1), get_op()}, {add_op(2), get_op()}}}};
}

// Criteria 1 and 2 share one exploration.
struct WeakSetSweep {
  std::uint64_t complete = 0, bounded = 0, nodes = 0;
  std::uint64_t tau_fail = 0, brute_fail = 0, disagree = 0, inconclusive = 0, tau_modes_differ = 0;
  std::uint64_t alpha_fail = 0, persistence_fail = 0, view_fail = 0;
  bool truncated = false;
};

WeakSetSweep weak_set_sweep() {
  WeakSetSweep s;
  for (const auto& [name, scripts] : weak_set_workloads()) {
    for (int t : {0, 1}) {
      auto rep = sim::explore(weakset::weak_set_program(2, scripts), {2, t, 1000, 0}, {40, t == 1, 200'000'000},
                              [&](const sim::Trace& tr) -> std::optional<std::string> {
                                HistoryView h(tr);
                                space.check("weakset", h, 2);
                                if (tr.truncated) return std::nullopt;
                                auto lin = verify::check_linearizability(h);
                                s.tau_fail += fails_of(lin, "linearizability-tau");
                                s.brute_fail += fails_of(lin, "linearizability-bruteforce");
                                s.disagree += fails_of(lin, "oracle-agreement");
                                s.inconclusive += lin.count("oracle-agreement", Verdict::inconclusive);
                                s.tau_modes_differ += fails_of(verify::tau_mode_agreement(h), "tau-mode-agreement");
                                auto mon = verify::alpha_monitor_all(h);
                                s.alpha_fail += fails_of(mon, "alpha-monotonicity") + fails_of(mon, "alpha-at-tau");
                                s.persistence_fail += fails_of(mon, "persistence");
                                s.view_fail += fails_of(verify::view_monotonicity(h), "view-monotonicity");
                                return std::nullopt;
                              });
      s.complete += rep.complete_histories;
      s.bounded += rep.bounded_histories;
      s.nodes += rep.nodes;
      s.truncated = s.truncated || rep.truncated;
    }
  }
  return s;
}

Outcome criterion_1(const WeakSetSweep& s) {
  std::ostringstream d;
  d << s.complete << " complete histories (" << s.bounded << " cut at the bound), tau failures " << s.tau_fail
    << ", search failures " << s.brute_fail << ", verdict mismatches " << s.disagree << ", inconclusive "
    << s.inconclusive << ", tau readings differ " << s.tau_modes_differ;
  const bool ok = s.complete > 0 && !s.truncated && s.tau_fail == 0 && s.brute_fail == 0 && s.disagree == 0 &&
                  s.inconclusive == 0;
  return {ok, d.str()};
}

Outcome criterion_2(const WeakSetSweep& s) {
  std::ostringstream d;
  d << s.complete << " histories, alpha violations " << s.alpha_fail << ", persistence violations "
    << s.persistence_fail << ", view regressions " << s.view_fail;
  return {s.complete > 0 && s.alpha_fail == 0 && s.persistence_fail == 0 && s.view_fail == 0, d.str()};
}

Outcome criterion_3() {
  Outcome out;
  std::ostringstream d;
  for (auto m : {weakset::Mutation::add_skips_final_scan, weakset::Mutation::get_guard_n_minus_1,
                 weakset::Mutation::no_view_absorption}) {
    std::optional<std::string> caught;
    for (const auto& [name, scripts] : weak_set_workloads()) {
      for (int t : {0, 1}) {
        if (caught) break;
        auto rep = sim::explore(weakset::weak_set_program(2, scripts, m), {2, t, 1000, 0},
                                {40, t == 1, 20'000'000, true}, [](const sim::Trace& tr) -> std::optional<std::string> {
                                  HistoryView h(tr);
                                  CheckReport r;
                                  if (!tr.truncated) r.merge(verify::check_linearizability(h));
                                  r.merge(verify::alpha_monitor_all(h));
                                  r.merge(verify::view_monotonicity(h));
                                  if (const auto* f = r.first_failure()) return f->check;
                                  return std::nullopt;
                                });
        if (rep.first_violation) caught = name + " t=" + std::to_string(t) + " by " + *rep.first_violation;
      }
    }
    d << weakset::to_string(m) << ": " << (caught ? *caught : "not detected") << "; ";
    out.pass = out.pass && caught.has_value();
  }
  out.detail = d.str();
  return out;
}

Outcome criterion_4() {
  Outcome out;
  std::ostringstream d;
  for (auto [n, t] : std::vector<std::pair<int, int>>{{2, 1}, {3, 1}, {3, 2}}) {
    std::mt19937_64 rng(0xa11ce + static_cast<std::uint64_t>(n * 10 + t));
    std::uint64_t bad_validity = 0, bad_agreement = 0, bad_nontriviality = 0, nontrivial_checked = 0, chains_ok = 0;
    constexpr int kRuns = 10'000;
    for (int run = 0; run < kRuns; ++run) {
      std::vector<Value> inputs;
      for (int i = 0; i < n; ++i) {
        const bool proposes = n == 2 || rng() % 4 != 0;
        inputs.push_back(agreement::safe_agreement_input(proposes ? Value(static_cast<std::int64_t>(rng() % 3))
                                                                  : Value::nil(),
                                                         8));
      }
      auto plan = random_plan(rng, n, t, 120);
      sim::ModelConfig cfg{n, t, 100000, rng()};
      auto r = sim::run(agreement::safe_agreement_program(n, inputs), cfg, plan, sim::SchedulerPolicy::seeded_random());
      HistoryView h(r.trace);
      space.check("safeagreement", h, n);
      for (const auto& obj : verify::safe_agreement_objects(h)) {
        auto a = verify::safe_agreement_report(h, obj);
        bad_validity += a.validity == Verdict::fail;
        bad_agreement += a.agreement == Verdict::fail;
        bad_nontriviality += a.nontriviality == Verdict::fail;
        nontrivial_checked += a.nontriviality == Verdict::pass;
      }
      chains_ok += verify::check_chain_invariants(h).ok();
    }
    d << "(" << n << "," << t << "): validity " << bad_validity << ", agreement " << bad_agreement
      << ", nontriviality " << bad_nontriviality << "/" << nontrivial_checked << " checked, chains " << chains_ok
      << "/" << kRuns << "; ";
    out.pass = out.pass && bad_validity == 0 && bad_agreement == 0 && bad_nontriviality == 0 &&
               nontrivial_checked > 0 && chains_ok == kRuns;
  }
  out.detail = d.str();
  return out;
}

std::set<Value> decisions_of(const HistoryView& h, std::string_view object) {
  std::set<Value> out;
  for (const auto* op : h.ops_on(object))
    if (op->ret) out.insert(*op->ret);
  return out;
}

Outcome criterion_5() {
  constexpr int n = 3, t = 1;
  const std::vector<Value> inputs{1, 2, 3};
  std::uint64_t failures = 0;
  std::size_t max_distinct = 0;
  auto check = [&](const sim::Trace& tr) -> std::optional<std::string> {
    HistoryView h(tr);
    space.check("setagreement", h, n);
    auto r = verify::check_agreement_conditions(h, verify::AgreementKind::set_agreement, t);
    r.merge(verify::check_chain_invariants(h));
    max_distinct = std::max(max_distinct, decisions_of(h, agreement::kSetAgreementObject).size());
    if (const auto* f = r.first_failure()) {
      ++failures;
      return f->check;
    }
    return std::nullopt;
  };
  auto rep = sim::explore(agreement::set_agreement_program(n, t, inputs), {n, t, 100000, 0},
                          {8, true, 200'000'000, false, true}, check);
  std::mt19937_64 rng(0x5e7a);
  constexpr int kRuns = 10'000;
  for (int run = 0; run < kRuns; ++run) {
    sim::ModelConfig cfg{n, t, 100000, rng()};
    auto r = sim::run(agreement::set_agreement_program(n, t, inputs), cfg, random_plan(rng, n, t, 300),
                      sim::SchedulerPolicy::seeded_random());
    check(r.trace);
  }
  std::ostringstream d;
  d << "exhaustive: " << rep.complete_histories << " histories (" << rep.completed_after_bound
    << " completed round-robin past depth 8), " << rep.cycles << " cycles; random: " << kRuns
    << " runs; failures " << failures << ", most distinct decisions " << max_distinct;
  return {failures == 0 && rep.cycles == 0 && !rep.truncated && rep.bounded_histories == 0 && max_distinct <= 2,
          d.str()};
}

Outcome criterion_6() {
  const std::vector<Value> inputs{Value::str("a"), Value::str("b")};
  const Value sigma = Value::set(inputs);
  std::uint64_t failures = 0, outputs = 0;
  std::map<int, Value> vertices;
  for (int b : {1, 2}) vertices[b] = topology::bary_iter(topology::Complex::full(sigma), b).vertices();
  auto check = [&](const sim::Trace& tr, int b) {
    HistoryView h(tr);
    space.check("bary", h, 2);
    bool ok = verify::check_bary(h, b).ok();
    for (const auto& v : decisions_of(h, agreement::kBaryObject)) {
      ++outputs;
      ok = ok && vertices[b].contains(v) && topology::is_bary_vertex(v, sigma, b);
    }
    if (!ok) ++failures;
  };
  auto rep = sim::explore(agreement::bary_program(2, 1, inputs), {2, 1, 1000, 0}, {200, true},
                          [&](const sim::Trace& tr) -> std::optional<std::string> {
                            check(tr, 1);
                            return std::nullopt;
                          });
  std::mt19937_64 rng(0xba7);
  constexpr int kRuns = 1000;
  for (int run = 0; run < kRuns; ++run) {
    sim::ModelConfig cfg{2, 1, 100000, rng()};
    auto r = sim::run(agreement::bary_program(2, 2, inputs), cfg, random_plan(rng, 2, 1, 100),
                      sim::SchedulerPolicy::seeded_random());
    check(r.trace, 2);
  }
  std::ostringstream d;
  d << "b=1 exhaustive " << rep.complete_histories << " histories (" << rep.bounded_histories << " cut), b=2 random "
    << kRuns << " runs, " << outputs << " outputs, failures " << failures;
  return {failures == 0 && rep.bounded_histories == 0 && rep.cycles == 0 && !rep.truncated, d.str()};
}

// Independent count of the barycentric subdivision: its simplices are the
// chains of faces under strict inclusion.
std::vector<Value> chains_of(const std::vector<Value>& simplices) {
  std::vector<Value> out;
  std::function<void(std::vector<Value>&, std::size_t)> grow = [&](std::vector<Value>& chain, std::size_t from) {
    if (!chain.empty()) out.push_back(Value::set(chain));
    for (std::size_t j = from; j < simplices.size(); ++j) {
      bool fits = true;
      for (const auto& c : chain)
        fits = fits && c != simplices[j] && (is_subset(c, simplices[j]) || is_subset(simplices[j], c));
      if (!fits) continue;
      chain.push_back(simplices[j]);
      grow(chain, j + 1);
      chain.pop_back();
    }
  };
  std::vector<Value> chain;
  grow(chain, 0);
  return out;
}

std::vector<Value> all_faces(const Value& sigma) {
  std::vector<Value> out;
  const auto items = sigma.items();
  for (std::uint32_t mask = 1; mask < (1U << items.size()); ++mask) {
    std::vector<Value> f;
    for (std::size_t i = 0; i < items.size(); ++i)
      if ((mask >> i) & 1U) f.push_back(items[i]);
    out.push_back(Value::set(std::move(f)));
  }
  return out;
}

std::size_t maximal_count(const std::vector<Value>& simplices) {
  std::size_t count = 0;
  for (const auto& s : simplices) {
    bool maximal = true;
    for (const auto& t : simplices) maximal = maximal && !(t.size() > s.size() && is_subset(s, t));
    count += maximal;
  }
  return count;
}

std::size_t vertex_count(const std::vector<Value>& simplices) {
  return static_cast<std::size_t>(std::count_if(simplices.begin(), simplices.end(), [](const Value& s) { return s.size() == 1; }));
}

Outcome criterion_7() {
  using topology::Complex;
  const Value edge = Value::set({0, 1});
  const Value triangle = Value::set({0, 1, 2});
  const Value tetra = Value::set({0, 1, 2, 3});

  struct Golden {
    std::string what;
    std::size_t stated;
    std::size_t computed;
    std::size_t oracle;
  };
  const auto bary_tri = topology::bary(Complex::full(triangle));
  const auto bary2_edge = topology::bary_iter(Complex::full(edge), 2);
  const auto skel_tetra = topology::skel(Complex::full(tetra), 1);
  const auto oracle_tri = chains_of(all_faces(triangle));
  const auto oracle_edge2 = chains_of(chains_of(all_faces(edge)));
  std::vector<Value> oracle_skel;
  for (const auto& f : all_faces(tetra))
    if (f.size() <= 2) oracle_skel.push_back(f);

  const std::vector<Golden> golden{
      {"bary(triangle) vertices", 7, bary_tri.vertex_count(), vertex_count(oracle_tri)},
      {"bary(triangle) triangles", 6, bary_tri.count_of_dimension(2), maximal_count(oracle_tri)},
      {"bary^2(edge) vertices", 7, bary2_edge.vertex_count(), vertex_count(oracle_edge2)},
      {"bary^2(edge) edges", 4, bary2_edge.count_of_dimension(1), maximal_count(oracle_edge2)},
      {"skel^1(tetrahedron) vertices", 4, skel_tetra.vertex_count(), vertex_count(oracle_skel)},
      {"skel^1(tetrahedron) edges", 6, skel_tetra.count_of_dimension(1), oracle_skel.size() - vertex_count(oracle_skel)},
  };
  Outcome out;
  std::ostringstream d;
  for (const auto& g : golden) {
    const bool ok = g.stated == g.computed && g.computed == g.oracle;
    out.pass = out.pass && ok;
    d << g.what << " expected " << g.stated << " computed " << g.computed << " oracle " << g.oracle
      << (ok ? "" : " MISMATCH") << "; ";
  }
  out.detail = d.str();
  return out;
}

Outcome criterion_8() {
  constexpr int n = 3, t = 1;
  const auto task = topology::make_kset_task(Value::set({1, 2, 3}), t);
  const auto delta = topology::min_of_carrier_map(task.input, 0);
  const auto carried = topology::check_solvable_by(delta, task, t);
  std::mt19937_64 rng(0x501e);
  std::uint64_t bad = 0;
  constexpr int kRuns = 10'000;
  for (int run = 0; run < kRuns; ++run) {
    std::vector<Value> inputs;
    for (int i = 0; i < n; ++i) inputs.push_back(Value(static_cast<std::int64_t>(1 + rng() % 3)));
    sim::ModelConfig cfg{n, t, 100000, rng()};
    auto r = topology::solve_task(task, delta, cfg, inputs, random_plan(rng, n, t, 300));
    HistoryView h(r.run.trace);
    space.check("solve", h, n);
    if (!r.ok || !verify::check_solve(h, task).ok()) ++bad;
  }
  std::ostringstream d;
  d << "carried: " << (carried.pass ? "yes" : "no " + carried.detail) << "; " << kRuns
    << " runs, outputs outside the carrier " << bad;
  return {carried.pass && bad == 0, d.str()};
}

Outcome criterion_9() {
  constexpr int n = 3, t = 1;
  auto spec = std::make_shared<const bgsim::SimulatedProcessSpec>(bgsim::full_information_set_agreement(n, t));
  std::mt19937_64 rng(0xb6);
  std::uint64_t grid = 0, replay = 0, task = 0, blocking = 0, truncated = 0, with_blocked = 0;
  constexpr int kRuns = 10'000;
  for (int run = 0; run < kRuns; ++run) {
    sim::ModelConfig cfg{n, t, 200000, rng()};
    auto r = sim::run(bgsim::bg_program(spec, {1, 2, 3}), cfg, random_plan(rng, n, t, 2000),
                      sim::SchedulerPolicy::seeded_random());
    HistoryView h(r.trace);
    space.check("bgsim", h, n);
    auto rep = verify::check_bgsim(h, *spec, t);
    grid += fails_of(rep, "bg-grid-agreement");
    replay += fails_of(rep, "bg-replay");
    task += fails_of(rep, "bg-task");
    blocking += fails_of(rep, "bg-blocking");
    truncated += r.trace.truncated;
    with_blocked += verify::blocked_simulated_processes(h, *spec) > 0;
  }
  std::ostringstream d;
  d << kRuns << " runs (" << truncated << " truncated, " << with_blocked << " with a blocked process): grid "
    << grid << ", replay " << replay << ", task " << task << ", blocking " << blocking;
  return {grid == 0 && replay == 0 && task == 0 && blocking == 0, d.str()};
}

Outcome criterion_10() {
  Outcome out;
  std::ostringstream d;
  for (const auto& [protocol, tally] : space.by_protocol) {
    d << protocol << " " << tally.first - tally.second << "/" << tally.first << "; ";
    out.pass = out.pass && tally.first > 0 && tally.second == 0;
  }
  out.pass = out.pass && space.by_protocol.size() == 6;
  out.detail = d.str();
  return out;
}

}  // namespace

int main() {
  int failed = 0;
  auto report = [&](int id, const std::string& name, const std::function<Outcome()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = body();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failed += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " [" << id << "] " << name << ": " << o.detail << " (" << secs
              << " s)" << std::endl;
  };

  WeakSetSweep sweep;
  report(1, "weak set linearizability, exhaustive n=2", [&] {
    sweep = weak_set_sweep();
    return criterion_1(sweep);
  });
  report(2, "weak set monitors, exhaustive n=2", [&] { return criterion_2(sweep); });
  report(3, "weak set mutations detected", criterion_3);
  report(4, "safe agreement, random runs with crashes", criterion_4);
  report(5, "set agreement n=3 t=1", criterion_5);
  report(6, "barycentric agreement n=2", criterion_6);
  report(7, "subdivision and skeleton counts", criterion_7);
  report(8, "2-set agreement solved through min-of-carrier", criterion_8);
  report(9, "BG simulation of 2-set agreement", criterion_9);
  report(10, "register usage on every trace", criterion_10);
  return failed == 0 ? 0 : 1;
}
