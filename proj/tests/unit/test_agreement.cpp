#include <doctest.h>

#include <set>

#include "anon/agreement/programs.hpp"
#include "anon/sim/explore.hpp"
#include "anon/sim/simulator.hpp"
#include "anon/topology/complex.hpp"
#include "anon/verify/agreement_checks.hpp"
#include "anon/verify/protocol_checks.hpp"

using namespace anon;
using namespace anon::agreement;

namespace {

Value s(std::initializer_list<Value> xs) { return Value::set(xs); }

/// Drives one process's safe agreement handle against private memory.
struct Solo {
  explicit Solo(int n) : mem(n), port(n), sa(sa_name(0), n) {}
  sim::SharedMemory mem;
  sim::NullOpLog log;
  weakset::SetPort port;
  SafeAgreementClient sa;

  SafeAgreementClient::Result finish(SafeAgreementClient& h) {
    while (true) {
      auto c = port.deliver(mem.apply(port.request()), log);
      if (!c) continue;
      if (auto r = h.on_completion(*c, port, log)) return *r;
    }
  }
};

sim::RunResult run_sa(int n, std::vector<Value> proposals, std::uint64_t seed, sim::CrashPlan plan = {},
                      int resolves = 8) {
  std::vector<Value> in;
  for (auto& p : proposals) in.push_back(safe_agreement_input(p, resolves));
  sim::ModelConfig cfg{n, static_cast<int>(plan.rules.size()), 100000, seed};
  return sim::run(safe_agreement_program(n, in), cfg, plan, sim::SchedulerPolicy::seeded_random());
}

std::set<Value> non_bottom_outputs(const sim::RunResult& r) {
  std::set<Value> out;
  for (const auto& o : r.outcomes)
    if (o.output && !o.output->is_nil()) out.insert(*o.output);
  return out;
}

}  // namespace

TEST_CASE("resolve before any propose is bottom") {
  Solo d(3);
  d.sa.begin_resolve(d.port, d.log);
  auto r = d.finish(d.sa);
  CHECK(r.op == SafeAgreementClient::Op::resolve);
  CHECK(r.value.is_nil());
}

TEST_CASE("solo propose then resolve returns the proposal") {
  for (int n = 1; n <= 4; ++n) {
    Solo d(n);
    d.sa.begin_propose(Value(5), d.port, d.log);
    CHECK(d.finish(d.sa).op == SafeAgreementClient::Op::propose);
    weakset::SetPort reader(n);
    weakset::LogicalSet last = weakset::multiplex(weakset::sub_set_name(sa_name(0), n - 1));
    reader.get(last, d.log);
    std::optional<weakset::SetPort::Completion> c;
    while (!(c = reader.deliver(d.mem.apply(reader.request()), d.log))) {
    }
    CHECK(c->result == s({5}));
    d.sa.begin_resolve(d.port, d.log);
    CHECK(d.finish(d.sa).value == Value(5));
  }
}

TEST_CASE("propose is one-shot") {
  Solo d(2);
  d.sa.begin_propose(Value(1), d.port, d.log);
  d.finish(d.sa);
  CHECK_THROWS_AS(d.sa.begin_propose(Value(2), d.port, d.log), sim::SimulationFault);
}

TEST_CASE("two proposers agree on one of their values") {
  for (std::uint64_t seed = 0; seed < 2000; ++seed) {
    auto r = run_sa(2, {3, 7}, seed);
    auto outs = non_bottom_outputs(r);
    CHECK(outs.size() <= 1);
    if (!outs.empty()) CHECK((*outs.begin() == Value(3) || *outs.begin() == Value(7)));
    verify::HistoryView h(r.trace);
    CHECK(verify::check_agreement_conditions(h, verify::AgreementKind::safe_agreement, 0).ok());
    CHECK(verify::check_chain_invariants(h).ok());
  }
}

TEST_CASE("crash-free proposers eventually resolve") {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    auto r = run_sa(3, {4, 2, 9}, seed, {}, 50);
    for (const auto& o : r.outcomes) {
      REQUIRE(o.output);
      CHECK_FALSE(o.output->is_nil());
    }
    verify::HistoryView h(r.trace);
    auto rep = verify::check_agreement_conditions(h, verify::AgreementKind::safe_agreement, 0);
    CHECK(rep.ok());
    CHECK(rep.count("nontriviality", verify::Verdict::fail) == 0);
  }
}

TEST_CASE("every propose finishes under crashes") {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    sim::CrashPlan plan;
    plan.rules.push_back({static_cast<int>(seed % 3), seed % 40, ""});
    plan.rules.push_back({static_cast<int>((seed + 1) % 3), seed % 70, ""});
    auto r = run_sa(3, {1, 2, 3}, seed, plan);
    CHECK_FALSE(r.trace.truncated);
    verify::HistoryView h(r.trace);
    CHECK(verify::check_agreement_conditions(h, verify::AgreementKind::safe_agreement, 2).ok());
  }
}

TEST_CASE("set agreement: equal inputs decide that input") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    sim::ModelConfig cfg{3, 1, 100000, seed};
    auto r = sim::run(set_agreement_program(3, 1, {8, 8, 8}), cfg, {}, sim::SchedulerPolicy::seeded_random());
    for (const auto& o : r.outcomes) CHECK(o.output == Value(8));
  }
}

TEST_CASE("set agreement n=3 t=1 decides at most two inputs") {
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    sim::CrashPlan plan;
    if (seed % 2) plan.rules.push_back({static_cast<int>(seed % 3), seed % 90, ""});
    sim::ModelConfig cfg{3, 1, 100000, seed};
    auto r = sim::run(set_agreement_program(3, 1, {1, 2, 3}), cfg, plan, sim::SchedulerPolicy::seeded_random());
    std::set<Value> d;
    for (const auto& o : r.outcomes) {
      if (o.status == sim::ProcessStatus::crashed) continue;
      REQUIRE(o.output);
      d.insert(*o.output);
    }
    CHECK(d.size() <= 2);
    for (const auto& v : d) CHECK(s({1, 2, 3}).contains(v));
    verify::HistoryView h(r.trace);
    CHECK(verify::check_agreement_conditions(h, verify::AgreementKind::set_agreement, 1).ok());
  }
}

TEST_CASE("set agreement n=2 t=1: survivor decides after a crash inside SA[0]") {
  sim::ModelConfig cfg{2, 1, 100000, 0};
  sim::CrashPlan plan;
  plan.rules.push_back({0, 3, ""});
  auto r = sim::run(set_agreement_program(2, 1, {5, 6}), cfg, plan, sim::SchedulerPolicy::round_robin());
  CHECK(r.outcomes[0].status == sim::ProcessStatus::crashed);
  REQUIRE(r.outcomes[1].output);
  CHECK((*r.outcomes[1].output == Value(5) || *r.outcomes[1].output == Value(6)));
}

TEST_CASE("barycentric agreement") {
  SUBCASE("solo process returns its own singleton") {
    sim::ModelConfig cfg{1, 0, 1000, 0};
    auto r = sim::run(bary_program(1, 1, {Value::str("a")}), cfg, {}, sim::SchedulerPolicy::round_robin());
    CHECK(r.outcomes[0].output == s({Value::str("a")}));
  }
  SUBCASE("b=1, n=2, every interleaving") {
    sim::ModelConfig cfg{2, 1, 1000, 0};
    std::set<Value> seen;
    auto rep = sim::explore(bary_program(2, 1, {Value::str("a"), Value::str("b")}), cfg, {}, [&](const sim::Trace& t) {
      verify::HistoryView h(t);
      for (const auto* op : h.ops_on(kBaryObject))
        if (op->ret) seen.insert(*op->ret);
      auto c = verify::check_bary(h, 1);
      return c.ok() ? std::nullopt : std::optional<std::string>(c.first_failure()->detail);
    });
    CHECK(rep.violations == 0);
    CHECK(rep.bounded_histories == 0);
    const Value a = Value::str("a"), b = Value::str("b");
    CHECK(seen == std::set<Value>{s({a}), s({b}), s({a, b})});
  }
  SUBCASE("b=2 outputs flatten into the inputs") {
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
      sim::ModelConfig cfg{3, 0, 10000, seed};
      auto r = sim::run(bary_program(3, 2, {1, 2, 3}), cfg, {}, sim::SchedulerPolicy::seeded_random());
      for (const auto& o : r.outcomes) {
        REQUIRE(o.output);
        CHECK(topology::is_bary_vertex(*o.output, s({1, 2, 3}), 2));
        CHECK(is_subset(topology::flatten(*o.output, 2), s({1, 2, 3})));
      }
      verify::HistoryView h(r.trace);
      CHECK(verify::check_bary(h, 2).ok());
    }
  }
  SUBCASE("bary program needs at least one round") {
    CHECK_THROWS_AS(bary_program(2, 0, {1, 2}), std::invalid_argument);
  }
}

TEST_CASE("every protocol stays within n registers") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    sim::ModelConfig cfg{3, 1, 100000, seed};
    auto r = sim::run(set_agreement_program(3, 1, {1, 2, 3}), cfg, {}, sim::SchedulerPolicy::seeded_random());
    verify::HistoryView h(r.trace);
    CHECK(h.touched_cells() == std::set<int>{0, 1, 2});
  }
}
