#include "anon/sim/simulator.hpp"

#include <algorithm>
#include <random>

namespace anon::sim {

struct OpenOp {
  std::string object;
  std::string op;
  bool operator==(const OpenOp&) const = default;
};

struct System::Proc {
  std::unique_ptr<Automaton> automaton;
  ProcessStatus status = ProcessStatus::runnable;
  // Invocations logged since the last step; stamped with the step that
  // actually starts them.
  std::vector<Event> deferred;
  std::vector<OpenOp> open;

  Proc() = default;
  Proc(const Proc& o)
      : automaton(o.automaton ? o.automaton->clone() : nullptr),
        status(o.status),
        deferred(o.deferred),
        open(o.open) {}
};

class System::Recorder final : public OpLog {
 public:
  Recorder(System& sys, int actor, std::vector<Event>* out) : sys_(sys), actor_(actor), out_(out) {}

  void invoke(std::string_view object, std::string_view op, std::vector<Value> args) override {
    Event e;
    e.actor = actor_;
    e.kind = EventKind::invoke;
    e.object = object;
    e.op = op;
    e.args = std::move(args);
    proc().deferred.push_back(std::move(e));
  }

  void respond(std::string_view object, std::string_view op, std::optional<Value> ret) override {
    flush();
    auto& open = proc().open;
    for (auto it = open.rbegin(); it != open.rend(); ++it) {
      if (it->object == object && it->op == op) {
        open.erase(std::next(it).base());
        break;
      }
    }
    ++sys_.completions_;
    if (out_ == nullptr) return;
    Event e;
    e.step = sys_.steps_;
    e.actor = actor_;
    e.kind = EventKind::respond;
    e.object = object;
    e.op = op;
    e.ret = std::move(ret);
    out_->push_back(std::move(e));
  }

  /// Emits deferred invocations stamped with the current step.
  void flush() {
    auto& p = proc();
    for (auto& e : p.deferred) {
      p.open.push_back({e.object, e.op});
      e.step = sys_.steps_;
      if (out_ != nullptr) out_->push_back(std::move(e));
    }
    p.deferred.clear();
  }

 private:
  Proc& proc() { return *sys_.procs_[static_cast<std::size_t>(actor_)]; }

  System& sys_;
  int actor_;
  std::vector<Event>* out_;
};

System::System(const ProcessProgram& program, const ModelConfig& cfg) : memory_(cfg.n) {
  cfg.validate();
  if (static_cast<int>(program.inputs.size()) != cfg.n)
    throw ConfigError("program '" + program.name + "' has " + std::to_string(program.inputs.size()) +
                      " inputs for n = " + std::to_string(cfg.n));
  for (int a = 0; a < cfg.n; ++a) {
    auto p = std::make_unique<Proc>();
    p->automaton = program.make(program.inputs[static_cast<std::size_t>(a)]);
    procs_.push_back(std::move(p));
  }
  for (int a = 0; a < cfg.n; ++a) {
    Recorder log(*this, a, nullptr);
    auto& p = *procs_[static_cast<std::size_t>(a)];
    p.automaton->start(log);
    if (!p.automaton->next_request()) p.status = ProcessStatus::returned;
  }
}

System::System(const System& other)
    : memory_(other.memory_), steps_(other.steps_), completions_(other.completions_) {
  procs_.reserve(other.procs_.size());
  for (const auto& p : other.procs_) procs_.push_back(std::make_unique<Proc>(*p));
}

System& System::operator=(const System& other) {
  if (this != &other) {
    System copy(other);
    *this = std::move(copy);
  }
  return *this;
}

System::~System() = default;

int System::crashed_count() const {
  return static_cast<int>(std::count_if(procs_.begin(), procs_.end(), [](const auto& p) {
    return p->status == ProcessStatus::crashed;
  }));
}

bool System::runnable(int actor) const {
  return actor >= 0 && actor < n() &&
         procs_[static_cast<std::size_t>(actor)]->status == ProcessStatus::runnable;
}

std::vector<int> System::runnable_actors() const {
  std::vector<int> out;
  for (int a = 0; a < n(); ++a)
    if (runnable(a)) out.push_back(a);
  return out;
}

bool System::has_pending_operations() const {
  return std::any_of(procs_.begin(), procs_.end(), [](const auto& p) {
    return p->status == ProcessStatus::runnable && (!p->open.empty() || !p->deferred.empty());
  });
}

bool System::inside(int actor, std::string_view op) const {
  const auto& open = procs_.at(static_cast<std::size_t>(actor))->open;
  return std::any_of(open.begin(), open.end(), [&](const OpenOp& o) { return o.op == op; });
}

void System::step(int actor, std::vector<Event>& out) {
  if (!runnable(actor))
    throw SimulationFault("actor " + std::to_string(actor) + " cannot take a step");
  auto& p = *procs_[static_cast<std::size_t>(actor)];
  auto req = p.automaton->next_request();
  if (!req) throw SimulationFault("runnable actor without a pending request");

  ++steps_;
  Recorder log(*this, actor, &out);
  log.flush();

  Value observed = memory_.apply(*req);

  Event e;
  e.step = steps_;
  e.actor = actor;
  e.kind = req->kind;
  e.object = std::string(kMemoryObject);
  e.op = std::string(to_string(req->kind));
  switch (req->kind) {
    case EventKind::read:
      e.args = {Value(req->index)};
      e.ret = observed;
      break;
    case EventKind::scan:
      e.ret = observed;
      break;
    default:
      e.args = {Value(req->index), req->value};
      break;
  }
  out.push_back(std::move(e));

  p.automaton->deliver(observed, log);
  if (!p.automaton->next_request()) p.status = ProcessStatus::returned;
}

void System::crash(int actor, std::vector<Event>& out) {
  if (!runnable(actor))
    throw SimulationFault("actor " + std::to_string(actor) + " cannot crash: not running");
  auto& p = *procs_[static_cast<std::size_t>(actor)];
  p.status = ProcessStatus::crashed;
  p.deferred.clear();
  Event e;
  e.step = steps_;
  e.actor = actor;
  e.kind = EventKind::crash;
  out.push_back(std::move(e));
}

ProcessOutcome System::outcome(int actor) const {
  const auto& p = *procs_.at(static_cast<std::size_t>(actor));
  return {p.status, p.status == ProcessStatus::returned ? p.automaton->output() : std::nullopt};
}

const Automaton& System::automaton(int actor) const {
  return *procs_.at(static_cast<std::size_t>(actor))->automaton;
}

std::size_t System::hash() const {
  std::size_t h = memory_.hash();
  for (const auto& p : procs_) {
    h = hash_combine(h, static_cast<std::size_t>(p->status));
    if (p->status == ProcessStatus::runnable) h = hash_combine(h, p->automaton->hash());
  }
  return h;
}

bool System::same_state(const System& other) const {
  if (!(memory_ == other.memory_) || procs_.size() != other.procs_.size()) return false;
  for (std::size_t i = 0; i < procs_.size(); ++i) {
    const auto& a = *procs_[i];
    const auto& b = *other.procs_[i];
    if (a.status != b.status) return false;
    if (a.status == ProcessStatus::runnable &&
        (!a.automaton->equals(*b.automaton) || !(a.open == b.open)))
      return false;
  }
  return true;
}

std::string_view to_string(SchedulerPolicy::Kind k) {
  switch (k) {
    case SchedulerPolicy::Kind::round_robin: return "round-robin";
    case SchedulerPolicy::Kind::seeded_random: return "seeded-random";
    case SchedulerPolicy::Kind::scripted: return "scripted";
  }
  return "?";
}

namespace {

class Picker {
 public:
  Picker(const SchedulerPolicy& policy, std::uint64_t seed) : policy_(policy), rng_(seed) {}

  int pick(const System& sys) {
    if (policy_.kind == SchedulerPolicy::Kind::scripted) {
      while (cursor_ < policy_.script.size()) {
        int a = policy_.script[cursor_++];
        if (sys.runnable(a)) return remember(a);
      }
    }
    if (policy_.kind == SchedulerPolicy::Kind::seeded_random) {
      auto rs = sys.runnable_actors();
      std::uniform_int_distribution<std::size_t> d(0, rs.size() - 1);
      return remember(rs[d(rng_)]);
    }
    for (int k = 1; k <= sys.n(); ++k) {
      int a = (last_ + k) % sys.n();
      if (sys.runnable(a)) return remember(a);
    }
    throw SimulationFault("no runnable actor");
  }

 private:
  int remember(int a) {
    last_ = a;
    return a;
  }

  const SchedulerPolicy& policy_;
  std::mt19937_64 rng_;
  std::size_t cursor_ = 0;
  int last_ = -1;
};

}  // namespace

RunResult run(const ProcessProgram& program, const ModelConfig& cfg, const CrashPlan& plan,
              const SchedulerPolicy& policy) {
  cfg.validate();
  plan.validate(cfg);
  System sys(program, cfg);
  RunResult result;
  result.trace.n = cfg.n;
  auto& events = result.trace.events;
  std::vector<bool> fired(plan.rules.size(), false);
  Picker picker(policy, cfg.seed);

  auto apply_crashes = [&] {
    for (std::size_t r = 0; r < plan.rules.size(); ++r) {
      const auto& rule = plan.rules[r];
      if (fired[r] || sys.steps() < rule.at_step || !sys.runnable(rule.actor)) continue;
      if (!rule.outside_op.empty() && sys.inside(rule.actor, rule.outside_op)) continue;
      sys.crash(rule.actor, events);
      fired[r] = true;
    }
  };

  while (true) {
    apply_crashes();
    if (sys.quiescent()) break;
    if (sys.steps() >= cfg.max_steps) {
      result.trace.truncated = true;
      Event e;
      e.step = sys.steps();
      e.kind = EventKind::truncated;
      events.push_back(std::move(e));
      break;
    }
    sys.step(picker.pick(sys), events);
  }
  for (int a = 0; a < sys.n(); ++a) result.outcomes.push_back(sys.outcome(a));
  return result;
}

}  // namespace anon::sim
