#include <doctest.h>

#include <set>

#include "anon/bgsim/bg.hpp"
#include "anon/sim/simulator.hpp"
#include "anon/verify/agreement_checks.hpp"
#include "anon/verify/protocol_checks.hpp"

using namespace anon;
using namespace anon::bgsim;

namespace {

Value s(std::initializer_list<Value> xs) { return Value::set(xs); }

sim::RunResult simulate(std::shared_ptr<const SimulatedProcessSpec> spec, std::vector<Value> inputs, int t,
                        std::uint64_t seed, sim::CrashPlan plan = {}) {
  sim::ModelConfig cfg{static_cast<int>(inputs.size()), t, 200000, seed};
  return sim::run(bg_program(std::move(spec), std::move(inputs)), cfg, plan, sim::SchedulerPolicy::seeded_random());
}

}  // namespace

TEST_CASE("grid names round-trip") {
  CHECK(grid_name(3, 1) == "BG.SA[3,1]");
  CHECK(parse_grid_name("BG.SA[12,0]") == std::pair{12, 0});
  CHECK_FALSE(parse_grid_name("BG.SA[1]").has_value());
  CHECK_FALSE(parse_grid_name("SA[0]").has_value());
  CHECK_FALSE(parse_grid_name("BG.SA[1,2].SET[0]").has_value());
}

TEST_CASE("latest_views and latest_round") {
  const Value st = initial_state(1);
  const Value st2 = view_state({initial_state(1), Value::nil()});
  SUBCASE("largest round wins") {
    auto snap = s({triple(0, st, 3), triple(0, st2, 5)});
    auto v = latest_views(snap, 2);
    CHECK(v[0] == st2);
    CHECK(v[1].is_nil());
    CHECK(latest_round(snap, 0) == 5);
    CHECK(latest_round(snap, 1) == 0);
  }
  SUBCASE("empty snapshot") {
    auto v = latest_views(Value::empty_set(), 3);
    for (const auto& c : v) CHECK(c.is_nil());
    CHECK(latest_round(Value::empty_set(), 2) == 0);
  }
  SUBCASE("every component present") {
    auto snap = s({triple(0, initial_state(4), 1), triple(1, initial_state(5), 1)});
    auto v = latest_views(snap, 2);
    CHECK(v == std::vector<Value>{initial_state(4), initial_state(5)});
  }
  SUBCASE("malformed entries are ignored") {
    auto snap = s({Value(7), triple(9, st, 1), triple(1, st, 2)});
    auto v = latest_views(snap, 2);
    CHECK(v[0].is_nil());
    CHECK(v[1] == st);
  }
}

TEST_CASE("state queries") {
  const Value a = initial_state(7);
  const Value b = initial_state(3);
  const Value v1 = view_state({a, Value::nil(), b});
  const Value v2 = view_state({v1, initial_state(5), Value::nil()});
  CHECK(is_initial_state(a));
  CHECK(is_view_state(v1));
  CHECK(state_input(a) == Value(7));
  CHECK(known_inputs(v1) == s({3, 7}));
  CHECK(known_processes(v1) == s({0, 2}));
  CHECK(known_inputs(v2) == s({3, 5, 7}));
  CHECK(known_processes(v2) == s({0, 1, 2}));
  CHECK(state_depth(a) == 0);
  CHECK(state_depth(v2) == 2);
  CHECK_THROWS_AS(state_input(v1), std::invalid_argument);
}

TEST_CASE("built-in specs") {
  auto sa = full_information_set_agreement(3, 1);
  CHECK_FALSE(sa.terminal(initial_state(1)));
  CHECK_FALSE(sa.terminal(view_state({initial_state(1), Value::nil(), Value::nil()})));
  auto two = view_state({initial_state(4), Value::nil(), initial_state(2)});
  CHECK(sa.terminal(two));
  CHECK(sa.decide(two) == Value(2));
  auto fl = flooding(2, 1);
  CHECK(fl.terminal(view_state({initial_state(1), Value::nil()})));
  CHECK(fl.decide(view_state({initial_state(1), initial_state(2)})) == s({1, 2}));
  CHECK_THROWS_AS(builtin_spec("nope", 2, 0, 1), std::invalid_argument);
  CHECK_THROWS_AS(flooding(2, 0), std::invalid_argument);
}

TEST_CASE("a lone simulator returns its own input") {
  auto spec = std::make_shared<SimulatedProcessSpec>();
  spec->name = "own-input";
  spec->n = 1;
  spec->terminal = [](const Value& st) { return state_depth(st) >= 1; };
  spec->decide = [](const Value& st) { return set_min(known_inputs(st)); };
  auto r = simulate(spec, {Value(42)}, 0, 0);
  CHECK(r.outcomes[0].output == Value(42));
}

TEST_CASE("simulated 2-set agreement with three anonymous simulators") {
  auto spec = std::make_shared<const SimulatedProcessSpec>(full_information_set_agreement(3, 1));
  for (std::uint64_t seed = 0; seed < 400; ++seed) {
    sim::CrashPlan plan;
    if (seed % 2) plan.rules.push_back({static_cast<int>(seed % 3), seed % 300, ""});
    auto r = simulate(spec, {1, 2, 3}, 1, seed, plan);
    CHECK_FALSE(r.trace.truncated);
    std::set<Value> d;
    for (const auto& o : r.outcomes) {
      if (o.status == sim::ProcessStatus::crashed) continue;
      REQUIRE(o.output);
      d.insert(*o.output);
    }
    CHECK(d.size() <= 2);
    for (const auto& v : d) CHECK(s({1, 2, 3}).contains(v));
    verify::HistoryView h(r.trace);
    auto rep = verify::check_bgsim(h, *spec, 1);
    rep.merge(verify::check_agreement_conditions(h, verify::AgreementKind::safe_agreement, 1));
    CHECK(rep.ok());
  }
}

TEST_CASE("simulators agree on every grid entry") {
  auto spec = std::make_shared<const SimulatedProcessSpec>(flooding(2, 3));
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    auto r = simulate(spec, {1, 2}, 0, seed);
    verify::HistoryView h(r.trace);
    auto rep = verify::check_bgsim(h, *spec, 0);
    CHECK(rep.count("bg-grid-agreement", verify::Verdict::pass) == 1);
    CHECK(rep.ok());
    for (const auto& o : r.outcomes) {
      REQUIRE(o.output);
      CHECK(is_subset(*o.output, s({1, 2})));
    }
  }
}

TEST_CASE("a simulator crashing inside a propose blocks at most one simulated process") {
  auto spec = std::make_shared<const SimulatedProcessSpec>(full_information_set_agreement(3, 1));
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    sim::CrashPlan plan;
    plan.rules.push_back({0, 5 + seed % 200, ""});
    auto r = simulate(spec, {1, 2, 3}, 1, seed, plan);
    verify::HistoryView h(r.trace);
    const int blocked = verify::blocked_simulated_processes(h, *spec);
    CHECK(blocked <= h.crashed_count());
    CHECK(verify::check_bgsim(h, *spec, 1).ok());
  }
}
