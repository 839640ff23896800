#include "anon/cli/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include "anon/agreement/programs.hpp"
#include "anon/bgsim/bg.hpp"
#include "anon/sim/explore.hpp"
#include "anon/sim/simulator.hpp"
#include "anon/sim/trace_io.hpp"
#include "anon/topology/solve.hpp"
#include "anon/verify/agreement_checks.hpp"
#include "anon/verify/linearize.hpp"
#include "anon/verify/monitors.hpp"
#include "anon/verify/protocol_checks.hpp"
#include "anon/weakset/program.hpp"

namespace anon::cli {

namespace {

using json = nlohmann::ordered_json;

/// Bad flag values discovered after parsing.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Options {
  std::string protocol = "weakset";
  int n = 2;
  int t = 0;
  int b = -1;  // per command default: 1 for bary, 0 elsewhere
  int k = -1;
  int rounds = 2;
  int resolves = 3;
  int runs = 1;
  std::uint64_t seed = 0;
  std::uint64_t depth = 40;
  std::uint64_t max_steps = 100'000;
  std::uint64_t node_budget = 200'000'000;
  std::uint64_t crash_horizon = 200;
  std::string inputs;
  std::string scripts;
  std::string mutation = "none";
  std::string scheduler = "random";
  std::string simulated = "setagreement";
  std::vector<std::string> crashes;
  bool random_crashes = false;
  bool crash_branches = false;
  bool cut = false;
  std::string trace_path;
  std::string report_path;
  std::string object;
  std::string mode = "all";
  std::string tau = "equality";
  std::string op = "bary";
  std::string complex_path;
  std::string outputs_path;
  std::string carrier_path;
  std::string map_path;
  std::string delta = "min";
  std::string values;
  std::string out_path;
};

const std::vector<std::string> kProtocols = {"weakset", "safeagreement", "setagreement", "bary", "bgsim"};

// ---- parsing helpers ------------------------------------------------------

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) {
    auto a = cur.find_first_not_of(" \t");
    auto z = cur.find_last_not_of(" \t");
    out.push_back(a == std::string::npos ? "" : cur.substr(a, z - a + 1));
  }
  return out;
}

Value token(const std::string& s) { return s == "nil" ? Value::nil() : topology::parse_token(s); }

std::vector<Value> value_list(const std::string& s) {
  std::vector<Value> out;
  for (const auto& tok : split(s, ','))
    if (!tok.empty()) out.push_back(token(tok));
  return out;
}

std::vector<Value> process_inputs(const Options& o) {
  if (o.inputs.empty()) {
    std::vector<Value> out;
    for (int i = 0; i < o.n; ++i) out.emplace_back(i);
    return out;
  }
  auto v = value_list(o.inputs);
  if (static_cast<int>(v.size()) != o.n)
    throw UsageError("--inputs lists " + std::to_string(v.size()) + " values for n=" + std::to_string(o.n));
  return v;
}

/// "add:1;get|get" -> per-process scripts.
std::vector<std::vector<weakset::ScriptedOp>> parse_scripts(const std::string& s, int n) {
  std::vector<std::vector<weakset::ScriptedOp>> out;
  for (const auto& proc : split(s, '|')) {
    std::vector<weakset::ScriptedOp> ops;
    for (const auto& op : split(proc, ';')) {
      if (op.empty()) continue;
      if (op == "get") {
        ops.push_back(weakset::get_op());
      } else if (op.rfind("add:", 0) == 0) {
        ops.push_back(weakset::add_op(token(op.substr(4))));
      } else {
        throw UsageError("bad script operation '" + op + "' (use add:V or get)");
      }
    }
    out.push_back(std::move(ops));
  }
  if (static_cast<int>(out.size()) != n)
    throw UsageError("--scripts gives " + std::to_string(out.size()) + " processes for n=" + std::to_string(n));
  return out;
}

sim::CrashPlan parse_crashes(const std::vector<std::string>& specs) {
  sim::CrashPlan plan;
  for (const auto& s : specs) {
    auto at = s.find('@');
    if (at == std::string::npos) throw UsageError("bad crash '" + s + "' (use ACTOR@STEP[:OP])");
    sim::CrashRule r;
    auto colon = s.find(':', at);
    try {
      r.actor = std::stoi(s.substr(0, at));
      r.at_step = std::stoull(s.substr(at + 1, colon == std::string::npos ? std::string::npos : colon - at - 1));
    } catch (const std::exception&) {
      throw UsageError("bad crash '" + s + "' (use ACTOR@STEP[:OP])");
    }
    if (colon != std::string::npos) r.outside_op = s.substr(colon + 1);
    plan.rules.push_back(r);
  }
  return plan;
}

/// At most t crashes at random actors and steps, drawn from the seed.
sim::CrashPlan random_crashes(std::uint64_t seed, int n, int t, std::uint64_t horizon) {
  std::mt19937_64 rng(seed ^ 0x5bd1e995ULL);
  sim::CrashPlan plan;
  const int k = static_cast<int>(rng() % static_cast<std::uint64_t>(t + 1));
  std::vector<int> actors(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) actors[static_cast<std::size_t>(i)] = i;
  std::shuffle(actors.begin(), actors.end(), rng);
  for (int i = 0; i < k; ++i) plan.rules.push_back({actors[static_cast<std::size_t>(i)], rng() % horizon, ""});
  return plan;
}

sim::SchedulerPolicy scheduler(const std::string& s) {
  if (s == "random") return sim::SchedulerPolicy::seeded_random();
  if (s == "round-robin") return sim::SchedulerPolicy::round_robin();
  if (s.rfind("script:", 0) == 0) {
    std::vector<int> script;
    for (const auto& a : split(s.substr(7), ','))
      if (!a.empty()) script.push_back(std::stoi(a));
    return sim::SchedulerPolicy::scripted(std::move(script));
  }
  throw UsageError("unknown scheduler '" + s + "' (random, round-robin, script:A,B,...)");
}

sim::ModelConfig model(const Options& o, std::uint64_t seed) {
  sim::ModelConfig cfg{o.n, o.t, o.max_steps, seed};
  cfg.validate();
  return cfg;
}

void check_protocol(const Options& o) {
  if (std::find(kProtocols.begin(), kProtocols.end(), o.protocol) == kProtocols.end())
    throw UsageError("unknown protocol '" + o.protocol + "'");
  if (o.protocol == "bary" && o.b < 1) throw UsageError("bary needs --b >= 1");
  if (o.protocol != "weakset" && o.mutation != "none") throw UsageError("--mutation applies to the weak set only");
}

// ---- protocols and their checks -----------------------------------------

sim::ProcessProgram program(const Options& o) {
  const auto mutation = weakset::mutation_from_string(o.mutation);
  if (o.protocol == "weakset") {
    if (!o.scripts.empty()) return weakset::weak_set_program(o.n, parse_scripts(o.scripts, o.n), mutation);
    std::vector<std::vector<weakset::ScriptedOp>> scripts;
    for (const auto& v : process_inputs(o)) scripts.push_back({weakset::add_op(v), weakset::get_op()});
    return weakset::weak_set_program(o.n, std::move(scripts), mutation);
  }
  auto in = process_inputs(o);
  if (o.protocol == "safeagreement") {
    for (auto& v : in) v = agreement::safe_agreement_input(v, o.resolves);
    return agreement::safe_agreement_program(o.n, std::move(in));
  }
  if (o.protocol == "setagreement") return agreement::set_agreement_program(o.n, o.t, std::move(in));
  if (o.protocol == "bary") return agreement::bary_program(o.n, o.b, std::move(in));
  auto spec = std::make_shared<const bgsim::SimulatedProcessSpec>(bgsim::builtin_spec(o.simulated, o.n, o.t, o.rounds));
  return bgsim::bg_program(std::move(spec), std::move(in));
}

verify::TauMode tau_mode(const std::string& s) {
  if (s == "equality") return verify::TauMode::equality;
  if (s == "subset") return verify::TauMode::subset;
  throw UsageError("unknown --tau '" + s + "' (equality, subset)");
}

verify::CheckReport weakset_checks(const verify::HistoryView& h, const std::string& mode, verify::TauMode tau) {
  verify::CheckReport rep;
  const std::string obj(weakset::kPhysicalObject);
  auto lin = [&](const verify::Linearization& l, const char* name) {
    rep.add({name, obj, l.verdict, l.detail, l.window});
  };
  if (mode == "tau") {
    lin(verify::linearize_tau(h, tau), "linearizability-tau");
  } else if (mode == "bruteforce") {
    lin(verify::linearize_bruteforce(h), "linearizability-bruteforce");
  } else if (mode == "oracle") {
    rep.merge(verify::check_linearizability(h, tau));
  } else if (mode == "monitors") {
    rep.merge(verify::alpha_monitor_all(h));
    rep.merge(verify::view_monotonicity(h));
  } else if (mode == "all") {
    rep.merge(verify::check_linearizability(h, tau));
    rep.merge(verify::tau_mode_agreement(h));
    rep.merge(verify::alpha_monitor_all(h));
    rep.merge(verify::view_monotonicity(h));
  } else {
    throw UsageError("unknown --mode '" + mode + "' (oracle, tau, bruteforce, monitors, all)");
  }
  return rep;
}

verify::CheckReport checks(const std::string& object, const verify::HistoryView& h, const Options& o) {
  verify::CheckReport rep;
  rep.merge(verify::replay_soundness(h));
  rep.merge(verify::space_accounting(h, h.n()));
  if (object == "weakset") {
    rep.merge(weakset_checks(h, o.mode, tau_mode(o.tau)));
  } else if (object == "safeagreement") {
    rep.merge(verify::check_agreement_conditions(h, verify::AgreementKind::safe_agreement, o.t));
    rep.merge(verify::check_chain_invariants(h));
  } else if (object == "setagreement") {
    rep.merge(verify::check_agreement_conditions(h, verify::AgreementKind::set_agreement, o.t));
    rep.merge(verify::check_chain_invariants(h));
  } else if (object == "bary") {
    rep.merge(verify::check_bary(h, o.b));
  } else if (object == "bgsim") {
    rep.merge(verify::check_agreement_conditions(h, verify::AgreementKind::safe_agreement, o.t));
    rep.merge(verify::check_bgsim(h, bgsim::builtin_spec(o.simulated, h.n(), o.t, o.rounds), o.t));
  } else if (object == "solve") {
    const auto ops = h.ops_on(topology::kSolveObject);
    std::vector<Value> in;
    for (const auto* op : ops)
      if (!op->args.empty()) in.push_back(op->args[0]);
    const Value values = o.values.empty() ? Value::set(std::move(in)) : Value::set(value_list(o.values));
    rep.merge(verify::check_solve(h, topology::make_kset_task(values, o.k >= 0 ? o.k : o.t)));
  } else {
    throw UsageError("unknown --object '" + object + "'");
  }
  return rep;
}

/// Drops termination findings on histories the explorer cut off.
verify::CheckReport without_termination(verify::CheckReport rep) {
  std::erase_if(rep.findings, [](const verify::Finding& f) {
    return f.check == "termination" || f.check == "bg-termination";
  });
  return rep;
}

// ---- output --------------------------------------------------------------

void write_trace(const std::string& path, const sim::Trace& trace) {
  if (path.empty()) return;
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  sim::write_jsonl(f, trace);
}

void write_report(const std::string& path, const json& j) {
  if (path.empty()) return;
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << j.dump(2) << '\n';
}

/// Per check, how many findings of each verdict.
json tally(const std::map<std::string, std::map<std::string, std::uint64_t>>& counts) {
  json j = json::object();
  for (const auto& [check, per] : counts) {
    json c = json::object();
    for (const auto& [v, k] : per) c[v] = k;
    j[check] = c;
  }
  return j;
}

void count_into(std::map<std::string, std::map<std::string, std::uint64_t>>& counts, const verify::CheckReport& rep) {
  for (const auto& f : rep.findings) counts[f.check][std::string(verify::to_string(f.verdict))]++;
}

json finding_json(const verify::Finding& f) {
  json j;
  j["check"] = f.check;
  j["object"] = f.object;
  j["verdict"] = verify::to_string(f.verdict);
  j["detail"] = f.detail;
  if (f.window) j["window"] = {f.window->first, f.window->last};
  return j;
}

json outputs_json(const std::vector<sim::ProcessOutcome>& outcomes) {
  json arr = json::array();
  for (const auto& o : outcomes) {
    if (o.status == sim::ProcessStatus::crashed)
      arr.push_back("crashed");
    else
      arr.push_back(o.output ? to_json(*o.output) : json(nullptr));
  }
  return arr;
}

// ---- subcommands ---------------------------------------------------------

int cmd_run(const Options& o, std::ostream& out) {
  check_protocol(o);
  const auto prog = program(o);
  const auto policy = scheduler(o.scheduler);
  const auto fixed = parse_crashes(o.crashes);

  std::map<std::string, std::map<std::string, std::uint64_t>> counts;
  std::uint64_t bad_runs = 0;
  std::optional<sim::Trace> kept;
  std::optional<verify::CheckReport> kept_report;
  json last_outputs;
  for (int r = 0; r < o.runs; ++r) {
    const std::uint64_t seed = o.seed + static_cast<std::uint64_t>(r);
    const auto cfg = model(o, seed);
    const auto plan = o.random_crashes ? random_crashes(seed, o.n, o.t, o.crash_horizon) : fixed;
    plan.validate(cfg);
    auto res = sim::run(prog, cfg, plan, policy);
    verify::HistoryView h(res.trace);
    auto rep = checks(o.protocol, h, o);
    count_into(counts, rep);
    last_outputs = outputs_json(res.outcomes);
    if (!rep.ok()) ++bad_runs;
    if (!kept || (!rep.ok() && kept_report->ok())) {
      kept = std::move(res.trace);
      kept_report = std::move(rep);
    }
  }
  write_trace(o.trace_path, *kept);

  json j;
  j["command"] = "run";
  j["protocol"] = o.protocol;
  j["n"] = o.n;
  j["t"] = o.t;
  j["seed"] = o.seed;
  j["runs"] = o.runs;
  j["violating_runs"] = bad_runs;
  j["ok"] = bad_runs == 0;
  j["checks"] = tally(counts);
  if (o.runs == 1) j["outputs"] = last_outputs;
  if (const auto* f = kept_report->first_failure()) j["first_failure"] = finding_json(*f);
  write_report(o.report_path, j);

  out << o.protocol << ": " << o.runs << " run(s), " << bad_runs << " with violations\n";
  if (o.runs == 1) out << "outputs " << last_outputs.dump() << '\n';
  if (const auto* f = kept_report->first_failure()) out << "FAIL " << f->check << ": " << f->detail << '\n';
  return bad_runs == 0 ? kExitOk : kExitViolation;
}

int cmd_explore(const Options& o, std::ostream& out) {
  check_protocol(o);
  const auto prog = program(o);
  const auto cfg = model(o, o.seed);
  sim::ExploreOptions eo;
  eo.depth = o.depth;
  eo.crash_choices = o.crash_branches;
  eo.node_budget = o.node_budget;
  eo.complete_bounded = !o.cut;
  eo.stop_at_first_violation = true;

  std::map<std::string, std::map<std::string, std::uint64_t>> counts;
  auto check = [&](const sim::Trace& trace) -> std::optional<std::string> {
    verify::HistoryView h(trace);
    auto rep = checks(o.protocol, h, o);
    if (trace.truncated) rep = without_termination(std::move(rep));
    count_into(counts, rep);
    if (const auto* f = rep.first_failure()) return f->check + ": " + f->detail;
    return std::nullopt;
  };
  auto rep = sim::explore(prog, cfg, eo, check);
  if (rep.counterexample) write_trace(o.trace_path, *rep.counterexample);

  const bool exhaustive = !rep.truncated && rep.violations == 0;
  json j;
  j["command"] = "explore";
  j["protocol"] = o.protocol;
  j["n"] = o.n;
  j["t"] = o.t;
  j["depth"] = o.depth;
  j["complete_histories"] = rep.complete_histories;
  j["completed_after_bound"] = rep.completed_after_bound;
  j["bounded_histories"] = rep.bounded_histories;
  j["nodes"] = rep.nodes;
  j["cycles"] = rep.cycles;
  j["violations"] = rep.violations;
  j["exhaustive"] = exhaustive;
  j["ok"] = rep.violations == 0;
  j["checks"] = tally(counts);
  if (rep.first_violation) j["first_violation"] = *rep.first_violation;
  write_report(o.report_path, j);

  out << o.protocol << ": " << rep.histories() << " histories (" << rep.nodes << " nodes), " << rep.violations
      << " violations, " << rep.cycles << " no-progress cycles" << (rep.truncated ? ", node budget exhausted" : "")
      << '\n';
  if (rep.first_violation) out << "FAIL " << *rep.first_violation << '\n';
  return rep.violations == 0 ? kExitOk : kExitViolation;
}

int cmd_check(const Options& o, std::ostream& out) {
  if (o.trace_path.empty()) throw UsageError("check needs --trace");
  std::ifstream f(o.trace_path);
  if (!f) throw UsageError("cannot read " + o.trace_path);
  const auto trace = sim::read_jsonl(f, 0);
  const std::string object = o.object.empty() ? o.protocol : o.object;
  verify::HistoryView h(trace);
  auto rep = checks(object, h, o);
  json j;
  j["command"] = "check";
  j["object"] = object;
  j["mode"] = o.mode;
  j["report"] = rep.to_json();
  write_report(o.report_path, j);
  out << object << ": " << rep.findings.size() << " findings, " << rep.failures() << " failed\n";
  if (const auto* fail = rep.first_failure()) out << "FAIL " << fail->check << ": " << fail->detail << '\n';
  return rep.ok() ? kExitOk : kExitViolation;
}

topology::Complex load_complex(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw UsageError("cannot read " + path);
  return topology::read_complex(f);
}

topology::Complex input_complex(const Options& o) {
  if (!o.complex_path.empty()) return load_complex(o.complex_path);
  if (!o.values.empty()) return topology::Complex::full(Value::set(value_list(o.values)));
  throw UsageError("give --complex FILE or --values V1,V2,...");
}

topology::ColorlessTask task_from(const Options& o, int default_k) {
  if (!o.carrier_path.empty()) {
    if (o.outputs_path.empty()) throw UsageError("--carrier needs --outputs");
    std::ifstream f(o.carrier_path);
    if (!f) throw UsageError("cannot read " + o.carrier_path);
    topology::ColorlessTask task{input_complex(o), load_complex(o.outputs_path), topology::read_carrier_map(f)};
    task.validate();
    return task;
  }
  return topology::make_kset_task(input_complex(o).vertices(), o.k >= 0 ? o.k : default_k);
}

topology::SimplicialMapTable vertex_map(const Options& o, const topology::Complex& domain, int b) {
  if (!o.map_path.empty()) {
    std::ifstream f(o.map_path);
    if (!f) throw UsageError("cannot read " + o.map_path);
    return topology::read_vertex_map(f, b);
  }
  if (o.delta == "min") return topology::min_of_carrier_map(domain, b);
  if (o.delta == "identity") {
    if (b != 0) throw UsageError("--delta identity needs --b 0");
    return topology::identity_map(domain);
  }
  throw UsageError("unknown --delta '" + o.delta + "' (min, identity)");
}

json complex_json(const topology::Complex& k) {
  json j;
  j["vertices"] = k.vertex_count();
  j["simplices"] = k.size();
  j["facets"] = k.facets().size();
  j["dimension"] = k.dimension();
  return j;
}

int cmd_topology(const Options& o, std::ostream& out) {
  json j;
  j["command"] = "topology";
  j["op"] = o.op;
  int code = kExitOk;
  if (o.op == "bary" || o.op == "skel" || o.op == "info") {
    const auto k = input_complex(o);
    topology::Complex res = k;
    if (o.op == "bary") res = topology::bary_iter(k, o.b);
    if (o.op == "skel") {
      if (o.k < 0) throw UsageError("skel needs --k");
      res = topology::skel(k, o.k);
    }
    j["result"] = complex_json(res);
    out << o.op << ": " << res.vertex_count() << " vertices, " << res.size() << " simplices, "
        << res.facets().size() << " facets, dimension " << res.dimension() << '\n';
    if (!o.out_path.empty()) {
      std::ofstream f(o.out_path);
      topology::write_complex(f, res);
    }
  } else if (o.op == "check") {
    const auto task = task_from(o, o.t);
    const int b = std::max(o.b, 0);
    const auto delta = vertex_map(o, task.input, b);
    const auto v = topology::check_carried(delta, task);
    j["pass"] = v.pass;
    j["detail"] = v.detail;
    if (v.witness) j["witness"] = to_json(*v.witness);
    out << "check_carried: " << (v.pass ? "pass" : "fail " + v.detail) << '\n';
    code = v.pass ? kExitOk : kExitViolation;
  } else {
    throw UsageError("unknown --op '" + o.op + "' (bary, skel, info, check)");
  }
  write_report(o.report_path, j);
  return code;
}

int cmd_solve(const Options& o, std::ostream& out) {
  auto in = process_inputs(o);
  Options oo = o;
  if (oo.values.empty() && oo.complex_path.empty()) {
    std::ostringstream vs;
    for (std::size_t i = 0; i < in.size(); ++i) vs << (i ? "," : "") << in[i].text();
    oo.values = vs.str();
  }
  const auto task = task_from(oo, o.t);
  const int b = std::max(o.b, 0);
  const auto delta = vertex_map(oo, topology::skel(task.input, o.t), b);
  const auto policy = scheduler(o.scheduler);
  const auto fixed = parse_crashes(o.crashes);

  json j;
  j["command"] = "solve";
  j["n"] = o.n;
  j["t"] = o.t;
  j["b"] = b;
  std::uint64_t bad = 0;
  std::optional<std::string> first;
  std::optional<sim::Trace> kept;
  try {
    for (int r = 0; r < o.runs; ++r) {
      const std::uint64_t seed = o.seed + static_cast<std::uint64_t>(r);
      const auto cfg = model(o, seed);
      const auto plan = o.random_crashes ? random_crashes(seed, o.n, o.t, o.crash_horizon) : fixed;
      plan.validate(cfg);
      auto res = topology::solve_task(task, delta, cfg, in, plan, policy);
      if (!res.ok) {
        if (bad++ == 0) {
          first = res.detail;
          kept = res.run.trace;
        }
      }
      if (!kept && r == o.runs - 1) kept = std::move(res.run.trace);
    }
  } catch (const topology::CarriageError& e) {
    j["carried"] = false;
    j["detail"] = e.what();
    write_report(o.report_path, j);
    out << "solve: " << e.what() << '\n';
    return kExitViolation;
  }
  if (kept) write_trace(o.trace_path, *kept);
  j["carried"] = true;
  j["runs"] = o.runs;
  j["violating_runs"] = bad;
  j["ok"] = bad == 0;
  if (first) j["first_violation"] = *first;
  write_report(o.report_path, j);
  out << "solve: " << o.runs << " run(s), " << bad << " with outputs outside the carrier\n";
  return bad == 0 ? kExitOk : kExitViolation;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Anonymous shared-memory protocol simulator and checker", "anonsim"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value file with default flag values");

  app.add_option("--protocol", o.protocol, "weakset, safeagreement, setagreement, bary, bgsim");
  app.add_option("--n", o.n, "number of processes");
  app.add_option("--t", o.t, "crash budget");
  app.add_option("--b", o.b, "barycentric rounds / subdivision depth");
  app.add_option("--k", o.k, "skeleton dimension / set agreement parameter");
  app.add_option("--rounds", o.rounds, "rounds of the simulated flooding protocol");
  app.add_option("--resolves", o.resolves, "resolve budget per safe agreement process");
  app.add_option("--runs", o.runs, "number of seeded runs")->check(CLI::PositiveNumber);
  app.add_option("--seed", o.seed, "scheduler seed (first seed with --runs)");
  app.add_option("--depth", o.depth, "exploration depth in memory steps");
  app.add_option("--max-steps", o.max_steps, "step budget per run");
  app.add_option("--node-budget", o.node_budget, "exploration node budget");
  app.add_option("--crash-horizon", o.crash_horizon, "latest step for --random-crashes");
  app.add_option("--inputs", o.inputs, "comma-separated process inputs (default 0..n-1)");
  app.add_option("--scripts", o.scripts, "weak-set scripts, e.g. 'add:1;get|get'");
  app.add_option("--mutation", o.mutation, "weak-set mutation");
  app.add_option("--scheduler", o.scheduler, "random, round-robin, script:A,B,...");
  app.add_option("--simulated", o.simulated, "protocol simulated by bgsim: setagreement, flooding");
  app.add_option("--crash", o.crashes, "crash ACTOR@STEP[:OP]; repeatable");
  app.add_flag("--random-crashes", o.random_crashes, "draw up to t crashes per run from the seed");
  app.add_flag("--crash-branches", o.crash_branches, "explore crash placements too");
  app.add_flag("--cut", o.cut, "cut histories at the depth bound instead of finishing them");
  app.add_option("--trace", o.trace_path, "JSONL trace path");
  app.add_option("--report", o.report_path, "JSON report path");
  app.add_option("--object", o.object, "object kind for check");
  app.add_option("--mode", o.mode, "weak-set checks: oracle, tau, bruteforce, monitors, all");
  app.add_option("--tau", o.tau, "equality or subset reading of tau for gets");
  app.add_option("--op", o.op, "topology operation: bary, skel, info, check");
  app.add_option("--complex", o.complex_path, "complex file (one facet per line)");
  app.add_option("--outputs", o.outputs_path, "output complex file");
  app.add_option("--carrier", o.carrier_path, "carrier map file");
  app.add_option("--map", o.map_path, "vertex map file");
  app.add_option("--delta", o.delta, "built-in vertex map: min, identity");
  app.add_option("--values", o.values, "comma-separated vertices of a full simplex");
  app.add_option("--out", o.out_path, "output complex file");

  auto* run_cmd = app.add_subcommand("run", "run a protocol under a scheduler and check the trace");
  auto* explore_cmd = app.add_subcommand("explore", "enumerate interleavings and check every history");
  auto* check_cmd = app.add_subcommand("check", "check a recorded trace");
  auto* topo_cmd = app.add_subcommand("topology", "complexes, subdivisions and carried maps");
  auto* solve_cmd = app.add_subcommand("solve", "run the colorless task pipeline");
  for (auto* s : {run_cmd, explore_cmd, check_cmd, topo_cmd, solve_cmd}) s->fallthrough();

  const std::string usage = app.help();

  std::vector<std::string> argv_store{"anonsim"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << usage;
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "anonsim: " << e.what() << "\n\n" << usage;
    return kExitUsage;
  }

  try {
    if (o.b < -1) throw UsageError("--b must be >= 0");
    if (o.b == -1) o.b = o.protocol == "bary" || (*topo_cmd && o.op == "bary") ? 1 : 0;
    if (*run_cmd) return cmd_run(o, out);
    if (*explore_cmd) return cmd_explore(o, out);
    if (*check_cmd) return cmd_check(o, out);
    if (*topo_cmd) return cmd_topology(o, out);
    return cmd_solve(o, out);
  } catch (const UsageError& e) {
    err << "anonsim: " << e.what() << "\n\n" << usage;
    return kExitUsage;
  } catch (const sim::ConfigError& e) {
    err << "anonsim: configuration error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const topology::MalformedMap& e) {
    err << "anonsim: malformed input: " << e.what() << '\n';
    return kExitUsage;
  } catch (const topology::SizeLimitError& e) {
    err << "anonsim: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "anonsim: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "anonsim: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace anon::cli
