#include <doctest.h>

#include "anon/agreement/programs.hpp"
#include "anon/bgsim/bg.hpp"
#include "anon/sim/simulator.hpp"
#include "anon/topology/solve.hpp"
#include "anon/verify/agreement_checks.hpp"
#include "anon/verify/linearize.hpp"
#include "anon/verify/monitors.hpp"
#include "anon/verify/protocol_checks.hpp"
#include "anon/weakset/program.hpp"

using namespace anon;
using namespace anon::verify;
using sim::Event;
using sim::EventKind;

namespace {

Value s(std::initializer_list<Value> xs) { return Value::set(xs); }

/// Hand-built traces. Memory events get consecutive steps and scans
/// return the current cells, so replay stays sound unless forged on purpose.
struct Forge {
  explicit Forge(int n) : cells(static_cast<std::size_t>(n), Value::empty_set()) { trace.n = n; }

  sim::Trace trace;
  std::vector<Value> cells;
  std::uint64_t step = 0;

  void invoke(int a, std::string obj, std::string op, std::vector<Value> args = {}) {
    trace.events.push_back({step + 1, a, EventKind::invoke, std::move(obj), std::move(op), std::move(args), {}});
  }
  void respond(int a, std::string obj, std::string op, std::optional<Value> ret = {}) {
    trace.events.push_back({std::max<std::uint64_t>(step, 1), a, EventKind::respond, std::move(obj), std::move(op), {},
                            std::move(ret)});
  }
  void scan(int a) {
    trace.events.push_back({++step, a, EventKind::scan, "R", "scan", {}, Value::tuple(cells)});
  }
  void update(int a, int i, Value v) {
    cells[static_cast<std::size_t>(i)] = v;
    trace.events.push_back({++step, a, EventKind::update, "R", "update", {Value(i), std::move(v)}, {}});
  }
  /// A whole add(v) by actor a against quiet memory, n registers.
  void solo_add(int a, const Value& v) {
    invoke(a, "WS", "add", {v});
    scan(a);
    for (std::size_t i = 0; i < cells.size(); ++i) {
      update(a, static_cast<int>(i), set_insert(cells[i], v));
      scan(a);
    }
    respond(a, "WS", "add");
  }
};

sim::Trace run_trace(const sim::ProcessProgram& p, int n, int t, std::uint64_t seed, sim::CrashPlan plan = {}) {
  sim::ModelConfig cfg{n, t, 100000, seed};
  return sim::run(p, cfg, plan, sim::SchedulerPolicy::seeded_random()).trace;
}

}  // namespace

TEST_CASE("linearization: solo add then get") {
  Forge f(2);
  f.solo_add(0, Value(3));
  f.invoke(0, "WS", "get");
  f.scan(0);
  f.respond(0, "WS", "get", s({3}));
  HistoryView h(f.trace);
  REQUIRE_FALSE(h.replay_error());
  auto lin = linearize_tau(h);
  CHECK(lin.verdict == Verdict::pass);
  REQUIRE(lin.order.size() == 2);
  CHECK(lin.order[0]->op == "add");
  CHECK(lin.order[1]->op == "get");
  CHECK(linearize_bruteforce(h).verdict == Verdict::pass);
}

TEST_CASE("linearization: get after a finished add must see it") {
  Forge f(2);
  f.solo_add(0, Value(1));
  f.invoke(1, "WS", "get");
  f.scan(1);
  f.respond(1, "WS", "get", Value::empty_set());
  HistoryView h(f.trace);
  CHECK(linearize_bruteforce(h).verdict == Verdict::fail);
  CHECK(linearize_tau(h).verdict == Verdict::fail);
  auto rep = check_linearizability(h);
  CHECK(rep.count("oracle-agreement", Verdict::pass) == 1);
  CHECK_FALSE(rep.ok());
}

TEST_CASE("linearization: get concurrent with an add may miss it") {
  Forge f(2);
  f.invoke(0, "WS", "add", {Value(1)});
  f.invoke(1, "WS", "get");
  f.scan(1);
  f.respond(1, "WS", "get", Value::empty_set());
  f.scan(0);
  f.update(0, 0, s({1}));
  f.scan(0);
  f.update(0, 1, s({1}));
  f.scan(0);
  f.respond(0, "WS", "add");
  HistoryView h(f.trace);
  CHECK(linearize_bruteforce(h).verdict == Verdict::pass);
  CHECK(linearize_tau(h).verdict == Verdict::pass);
}

TEST_CASE("linearization: budget exhaustion is inconclusive") {
  auto t = run_trace(weakset::default_weak_set_program(3), 3, 0, 4);
  HistoryView h(t);
  BruteForceOptions opts;
  opts.node_budget = 1;
  CHECK(linearize_bruteforce(h, opts).verdict == Verdict::inconclusive);
}

TEST_CASE("both tau readings agree on real runs") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    auto t = run_trace(weakset::default_weak_set_program(3), 3, 0, seed);
    HistoryView h(t);
    CHECK(tau_mode_agreement(h).ok());
    CHECK(check_linearizability(h).ok());
  }
}

TEST_CASE("alpha monitor") {
  SUBCASE("solo add never loses potential") {
    Forge f(3);
    f.solo_add(0, Value(5));
    HistoryView h(f.trace);
    auto series = alpha_series(h, Value(5));
    CHECK(series.back().alpha() > 3);
    CHECK(alpha_monitor(h, Value(5)).ok());
  }
  SUBCASE("an overwrite by a process not carrying v is flagged") {
    Forge f(2);
    f.scan(1);  // actor 1 reads before v exists
    f.solo_add(0, Value(1));
    f.update(1, 0, s({2}));
    f.update(1, 1, s({2}));
    HistoryView h(f.trace);
    REQUIRE_FALSE(h.replay_error());
    auto rep = alpha_monitor(h, Value(1));
    CHECK(rep.count("alpha-monotonicity", Verdict::fail) == 1);
  }
  SUBCASE("real runs pass") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      auto t = run_trace(weakset::default_weak_set_program(2), 2, 0, seed);
      HistoryView h(t);
      CHECK(alpha_monitor_all(h).ok());
      CHECK(view_monotonicity(h).ok());
    }
  }
}

TEST_CASE("replay and space") {
  SUBCASE("a scan that disagrees with the replayed registers") {
    Forge f(2);
    f.update(0, 0, s({1}));
    f.scan(1);
    f.trace.events.back().ret = Value::tuple({Value::empty_set(), Value::empty_set()});
    HistoryView h(f.trace);
    CHECK_FALSE(replay_soundness(h).ok());
  }
  SUBCASE("a register outside the array") {
    Forge f(2);
    f.trace.events.push_back({1, 0, EventKind::update, "R", "update", {Value(2), s({1})}, {}});
    HistoryView h(f.trace);
    CHECK_FALSE(space_accounting(h, 2).ok());
  }
  SUBCASE("real runs use exactly n cells") {
    auto t = run_trace(agreement::bary_program(3, 2, {1, 2, 3}), 3, 0, 1);
    HistoryView h(t);
    CHECK(replay_soundness(h).ok());
    CHECK(space_accounting(h, 3).ok());
  }
}

TEST_CASE("agreement conditions on forged traces") {
  auto forged = [](Value r0, Value r1) {
    Forge f(2);
    auto op = [&](int a, const char* name, std::vector<Value> args, std::optional<Value> ret) {
      f.invoke(a, "SA[0]", name, std::move(args));
      f.scan(a);
      f.respond(a, "SA[0]", name, std::move(ret));
    };
    op(0, "propose", {Value(3)}, std::nullopt);
    op(1, "propose", {Value(7)}, std::nullopt);
    op(0, "resolve", {}, r0);
    op(1, "resolve", {}, r1);
    return f.trace;
  };
  SUBCASE("disagreement") {
    auto t = forged(Value(3), Value(7));
    HistoryView h(t);
    auto r = safe_agreement_report(h, "SA[0]");
    CHECK(r.agreement == Verdict::fail);
    CHECK(r.validity == Verdict::pass);
  }
  SUBCASE("invented value") {
    auto t = forged(Value(9), Value(9));
    HistoryView h(t);
    auto r = safe_agreement_report(h, "SA[0]");
    CHECK(r.validity == Verdict::fail);
    CHECK(r.agreement == Verdict::pass);
  }
  SUBCASE("bottom after quiescence breaks nontriviality") {
    auto t = forged(Value(3), Value::nil());
    HistoryView h(t);
    CHECK(safe_agreement_report(h, "SA[0]").nontriviality == Verdict::fail);
  }
  SUBCASE("all good") {
    auto t = forged(Value(3), Value(3));
    HistoryView h(t);
    auto r = safe_agreement_report(h, "SA[0]");
    CHECK(r.nontriviality == Verdict::pass);
    CHECK(check_agreement_conditions(h, AgreementKind::safe_agreement, 0).ok());
  }
}

TEST_CASE("agreement conditions on real runs") {
  SUBCASE("crash-free two proposers") {
    auto p = agreement::safe_agreement_program(
        2, {agreement::safe_agreement_input(Value(3), 20), agreement::safe_agreement_input(Value(7), 20)});
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
      auto t = run_trace(p, 2, 0, seed);
      HistoryView h(t);
      auto r = safe_agreement_report(h, agreement::sa_name(0));
      CHECK(r.validity == Verdict::pass);
      CHECK(r.agreement == Verdict::pass);
      CHECK(r.termination == Verdict::pass);
      CHECK(r.nontriviality != Verdict::fail);
    }
  }
  SUBCASE("sole proposer crashes mid-propose") {
    auto p = agreement::safe_agreement_program(
        2, {agreement::safe_agreement_input(Value(5), 0), agreement::safe_agreement_input(Value::nil(), 4)});
    sim::CrashPlan plan;
    plan.rules.push_back({0, 2, ""});
    sim::ModelConfig cfg{2, 1, 10000, 0};
    auto res = sim::run(p, cfg, plan, sim::SchedulerPolicy::round_robin());
    HistoryView h(res.trace);
    auto r = safe_agreement_report(h, agreement::sa_name(0));
    CHECK(r.resolved_non_bot == Value::empty_set());
    CHECK(r.nontriviality == Verdict::vacuous);
    CHECK(r.validity == Verdict::pass);
    CHECK(r.agreement == Verdict::pass);
  }
  SUBCASE("set agreement k-agreement") {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
      auto t = run_trace(agreement::set_agreement_program(3, 1, {1, 2, 3}), 3, 1, seed);
      HistoryView h(t);
      auto rep = check_agreement_conditions(h, AgreementKind::set_agreement, 1);
      CHECK(rep.count("k-agreement", Verdict::pass) == 1);
      CHECK(rep.ok());
    }
  }
}

TEST_CASE("chain invariants") {
  SUBCASE("solo proposer") {
    auto p = agreement::safe_agreement_program(3, {agreement::safe_agreement_input(Value(4), 1),
                                                   agreement::safe_agreement_input(Value::nil(), 1),
                                                   agreement::safe_agreement_input(Value::nil(), 1)});
    auto t = run_trace(p, 3, 0, 2);
    HistoryView h(t);
    auto rep = check_chain_invariants(h);
    CHECK(rep.ok());
    CHECK(rep.count("proposers-decrease", Verdict::vacuous) == 1);
  }
  SUBCASE("a value appearing late breaks the value chain") {
    Forge f(2);
    f.invoke(0, "SA[0].SET[1]", "add", {Value(4)});
    f.respond(0, "SA[0].SET[1]", "add");
    f.invoke(0, "SA[0]", "propose", {Value(4)});
    f.respond(0, "SA[0]", "propose");
    HistoryView h(f.trace);
    CHECK(check_chain_invariants(h).count("chain-values", Verdict::fail) == 1);
  }
}

TEST_CASE("barycentric checks") {
  auto forged = [](Value o0, Value o1) {
    Forge f(2);
    f.invoke(0, "bary", "bary_agree", {Value(1)});
    f.respond(0, "bary", "bary_agree", o0);
    f.invoke(1, "bary", "bary_agree", {Value(2)});
    f.respond(1, "bary", "bary_agree", o1);
    return f.trace;
  };
  {
    auto t = forged(s({1}), s({2}));
    HistoryView h(t);
    CHECK(check_bary(h, 1).count("bary-comparable", Verdict::fail) == 1);
  }
  {
    auto t = forged(s({s({1})}), s({1, 2}));
    HistoryView h(t);
    CHECK(check_bary(h, 1).count("bary-vertex", Verdict::fail) == 1);
  }
  {
    auto t = forged(s({1, 3}), s({1}));
    HistoryView h(t);
    auto rep = check_bary(h, 1);
    CHECK(rep.count("bary-validity", Verdict::fail) == 1);
  }
  {
    auto t = forged(s({1}), s({1, 2}));
    HistoryView h(t);
    CHECK(check_bary(h, 1).ok());
  }
}

TEST_CASE("bg simulation checks catch tampering") {
  auto spec = std::make_shared<const bgsim::SimulatedProcessSpec>(bgsim::full_information_set_agreement(3, 1));
  auto t = run_trace(bgsim::bg_program(spec, {1, 2, 3}), 3, 1, 11);
  {
    HistoryView h(t);
    REQUIRE(check_bgsim(h, *spec, 1).ok());
  }
  SUBCASE("a proposed view not computed from the preceding read") {
    auto bad = t;
    for (auto& e : bad.events) {
      auto rc = bgsim::parse_grid_name(e.object);
      if (rc && rc->first >= 1 && e.kind == EventKind::invoke && e.op == "propose") {
        e.args[0] = bgsim::view_state({Value::nil(), Value::nil(), Value::nil()});
        break;
      }
    }
    HistoryView h(bad);
    CHECK(check_bgsim(h, *spec, 1).count("bg-replay", Verdict::fail) == 1);
  }
  SUBCASE("two states resolved for one grid entry") {
    auto bad = t;
    int seen = 0;
    for (auto& e : bad.events) {
      if (e.kind == EventKind::respond && e.op == "resolve" && e.object == bgsim::grid_name(0, 0) && e.ret &&
          !e.ret->is_nil() && seen++ == 1) {
        e.ret = bgsim::initial_state(99);
        break;
      }
    }
    REQUIRE(seen >= 2);
    HistoryView h(bad);
    CHECK(check_bgsim(h, *spec, 1).count("bg-grid-agreement", Verdict::fail) == 1);
  }
  SUBCASE("a decision no simulated process reached") {
    auto bad = t;
    for (auto& e : bad.events)
      if (e.kind == EventKind::respond && e.object == bgsim::kBgObject) {
        e.ret = Value(77);
        break;
      }
    HistoryView h(bad);
    CHECK(check_bgsim(h, *spec, 1).count("bg-task", Verdict::fail) == 1);
  }
}

TEST_CASE("solve output check") {
  auto task = topology::make_kset_task(s({1, 2, 3}), 1);
  Forge f(3);
  for (int a = 0; a < 3; ++a) {
    f.invoke(a, "solve", "solve_task", {Value(a + 1)});
    f.respond(a, "solve", "solve_task", Value(a + 1));
  }
  HistoryView h(f.trace);
  CHECK_FALSE(check_solve(h, task).ok());
  CHECK(check_solve(h, topology::make_kset_task(s({1, 2, 3}), 2)).ok());
}

TEST_CASE("reports serialize") {
  CheckReport rep;
  rep.add({"x", "o", Verdict::fail, "bad", Window{2, 5}});
  rep.add({"y", "", Verdict::pass, "", std::nullopt});
  auto j = rep.to_json();
  CHECK(j["ok"] == false);
  CHECK(j["failures"] == 1);
  CHECK(j["findings"].size() == 2);
  CHECK(rep.first_failure()->check == "x");
}
