#pragma once

#include <memory>
#include <stdexcept>

#include "anon/agreement/programs.hpp"
#include "anon/sim/simulator.hpp"
#include "anon/topology/task.hpp"

namespace anon::topology {

inline constexpr std::string_view kSolveObject = "solve";

/// Thrown by solve_task when the vertex map is not carried by the task.
class CarriageError : public std::invalid_argument {
 public:
  CarriageError(const std::string& what, CarriedVerdict v) : std::invalid_argument(what), verdict(std::move(v)) {}
  CarriedVerdict verdict;
};

/// set_agree, then bary_agree for delta->b rounds, then apply delta.
class SolveProgram final : public sim::AutomatonBase<SolveProgram> {
 public:
  SolveProgram(int n, int t, std::shared_ptr<const SimplicialMapTable> delta, Value input);

  void start(sim::OpLog& log) override;
  std::optional<sim::MemRequest> next_request() const override;
  void deliver(const Value& observed, sim::OpLog& log) override;
  std::optional<Value> output() const override { return out_; }
  std::size_t hash() const override;
  friend bool operator==(const SolveProgram&, const SolveProgram&) = default;

 private:
  void finish(const Value& vertex, sim::OpLog& log);

  weakset::SetPort port_;
  agreement::SetAgreementMachine set_agree_;
  agreement::BaryMachine bary_;
  std::shared_ptr<const SimplicialMapTable> delta_;
  Value input_;
  bool in_bary_ = false;
  std::optional<Value> out_;
};

sim::ProcessProgram solve_program(int n, int t, std::shared_ptr<const SimplicialMapTable> delta,
                                  std::vector<Value> inputs);

struct SolveRun {
  sim::RunResult run;
  Simplex sigma;   // simplex spanned by the inputs
  Simplex output;  // values output by the processes that returned
  bool ok = true;  // output lies in Delta(sigma)
  std::string detail;
};

/// Vertex map check against the task restricted to its t-skeleton.
CarriedVerdict check_solvable_by(const SimplicialMapTable& delta, const ColorlessTask& task, int t);

/**
 * Runs the pipeline once. Throws CarriageError before simulating if delta
 * is not carried by the task on skel^t of the inputs, and
 * std::invalid_argument if the inputs do not span a simplex of I.
 */
SolveRun solve_task(const ColorlessTask& task, const SimplicialMapTable& delta, const sim::ModelConfig& cfg,
                    const std::vector<Value>& inputs, const sim::CrashPlan& plan = {},
                    const sim::SchedulerPolicy& policy = sim::SchedulerPolicy::seeded_random());

/// Output check shared by solve_task and trace checking: the returned
/// outputs must span a simplex of Delta(sigma).
bool outputs_in_carrier(const ColorlessTask& task, const Simplex& sigma, const Simplex& output,
                        std::string* detail = nullptr);

}  // namespace anon::topology
