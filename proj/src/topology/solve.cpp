#include "anon/topology/solve.hpp"

namespace anon::topology {

SolveProgram::SolveProgram(int n, int t, std::shared_ptr<const SimplicialMapTable> delta, Value input)
    : port_(n), set_agree_(n, t), bary_(delta->b), delta_(std::move(delta)), input_(std::move(input)) {}

void SolveProgram::start(sim::OpLog& log) {
  log.invoke(kSolveObject, "solve_task", {input_});
  set_agree_.begin(input_, port_, log);
}

std::optional<sim::MemRequest> SolveProgram::next_request() const {
  if (!port_.busy()) return std::nullopt;
  return port_.request();
}

void SolveProgram::finish(const Value& vertex, sim::OpLog& log) {
  out_ = delta_->at(vertex);
  log.respond(kSolveObject, "solve_task", *out_);
}

void SolveProgram::deliver(const Value& observed, sim::OpLog& log) {
  auto c = port_.deliver(observed, log);
  if (!c) return;
  if (!in_bary_) {
    auto d = set_agree_.on_completion(*c, port_, log);
    if (!d) return;
    in_bary_ = true;
    if (auto v = bary_.begin(*d, port_, log)) finish(*v, log);
    return;
  }
  if (auto v = bary_.on_completion(*c, port_, log)) finish(*v, log);
}

std::size_t SolveProgram::hash() const {
  std::size_t h = hash_combine(port_.hash(), set_agree_.hash());
  h = hash_combine(h, bary_.hash() * 2 + (in_bary_ ? 1 : 0));
  return hash_combine(h, out_ ? out_->hash() + 1 : 0);
}

sim::ProcessProgram solve_program(int n, int t, std::shared_ptr<const SimplicialMapTable> delta,
                                  std::vector<Value> inputs) {
  sim::ProcessProgram p{"solve", {}, std::move(inputs)};
  p.make = [n, t, delta = std::move(delta)](const Value& in) {
    return std::make_unique<SolveProgram>(n, t, delta, in);
  };
  return p;
}

CarriedVerdict check_solvable_by(const SimplicialMapTable& delta, const ColorlessTask& task, int t) {
  return check_carried(delta, task.restricted_to(skel(task.input, t)));
}

bool outputs_in_carrier(const ColorlessTask& task, const Simplex& sigma, const Simplex& output,
                        std::string* detail) {
  if (output.size() == 0) return true;
  if (task.delta(sigma).contains(output)) return true;
  if (detail) *detail = "outputs " + output.text() + " do not span a simplex of the carrier of " + sigma.text();
  return false;
}

SolveRun solve_task(const ColorlessTask& task, const SimplicialMapTable& delta, const sim::ModelConfig& cfg,
                    const std::vector<Value>& inputs, const sim::CrashPlan& plan,
                    const sim::SchedulerPolicy& policy) {
  auto verdict = check_solvable_by(delta, task, cfg.t);
  if (!verdict.pass) throw CarriageError("vertex map not carried by the task: " + verdict.detail, verdict);

  SolveRun r;
  r.sigma = Value::set(inputs);
  if (!task.input.contains(r.sigma))
    throw std::invalid_argument("inputs " + r.sigma.text() + " do not span a simplex of the input complex");

  auto table = std::make_shared<const SimplicialMapTable>(delta);
  r.run = sim::run(solve_program(cfg.n, cfg.t, table, inputs), cfg, plan, policy);

  std::vector<Value> outs;
  for (const auto& o : r.run.outcomes)
    if (o.status == sim::ProcessStatus::returned && o.output) outs.push_back(*o.output);
  r.output = Value::set(std::move(outs));
  r.ok = outputs_in_carrier(task, r.sigma, r.output, &r.detail);
  return r;
}

}  // namespace anon::topology
