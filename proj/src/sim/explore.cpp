#include "anon/sim/explore.hpp"

#include <unordered_map>
#include <vector>

namespace anon::sim {

namespace {

class Explorer {
 public:
  Explorer(const ModelConfig& cfg, const ExploreOptions& opts, const HistoryCheck& check)
      : cfg_(cfg), opts_(opts), check_(check) {}

  ExplorationReport run(const ProcessProgram& program) {
    System root(program, cfg_);
    visit(root);
    return std::move(report_);
  }

 private:
  struct PathEntry {
    const System* state;
    std::uint64_t completions;
  };

  bool done() const {
    return report_.truncated || (opts_.stop_at_first_violation && report_.violations > 0);
  }

  void leaf(bool complete) {
    (complete ? report_.complete_histories : report_.bounded_histories)++;
    Trace trace{cfg_.n, events_, !complete};
    if (auto problem = check_(trace)) {
      if (report_.violations++ == 0) {
        report_.first_violation = std::move(problem);
        report_.counterexample = std::move(trace);
      }
    }
  }

  void finish(const System& sys) {
    System rest(sys);
    const auto mark = events_.size();
    const std::uint64_t limit = sys.steps() + opts_.completion_steps;
    while (!rest.quiescent() && rest.steps() < limit)
      for (int a : rest.runnable_actors()) rest.step(a, events_);
    if (rest.quiescent()) report_.completed_after_bound++;
    leaf(rest.quiescent());
    events_.resize(mark);
  }

  bool closes_cycle(const System& sys, std::size_t h) {
    auto it = path_.find(h);
    if (it == path_.end()) return false;
    for (const auto& entry : it->second) {
      if (entry.completions == sys.completions() && sys.has_pending_operations() &&
          sys.same_state(*entry.state))
        return true;
    }
    return false;
  }

  void visit(const System& sys) {
    if (done()) return;
    if (++report_.nodes > opts_.node_budget) {
      report_.truncated = true;
      return;
    }
    if (sys.quiescent()) return leaf(true);

    const std::size_t h = sys.hash();
    if (closes_cycle(sys, h)) {
      if (report_.cycles++ == 0) report_.cycle_witness = Trace{cfg_.n, events_, true};
      return;
    }
    if (sys.steps() >= opts_.depth) return opts_.complete_bounded ? finish(sys) : leaf(false);

    auto& bucket = path_[h];
    bucket.push_back({&sys, sys.completions()});

    const auto actors = sys.runnable_actors();
    for (int a : actors) {
      if (done()) break;
      System next(sys);
      const auto mark = events_.size();
      next.step(a, events_);
      visit(next);
      events_.resize(mark);
    }
    if (opts_.crash_choices && sys.crashed_count() < cfg_.t) {
      for (int a : actors) {
        if (done()) break;
        System next(sys);
        const auto mark = events_.size();
        next.crash(a, events_);
        visit(next);
        events_.resize(mark);
      }
    }

    auto& again = path_[h];
    again.pop_back();
    if (again.empty()) path_.erase(h);
  }

  const ModelConfig& cfg_;
  const ExploreOptions& opts_;
  const HistoryCheck& check_;
  ExplorationReport report_;
  std::vector<Event> events_;
  std::unordered_map<std::size_t, std::vector<PathEntry>> path_;
};

}  // namespace

ExplorationReport explore(const ProcessProgram& program, const ModelConfig& cfg,
                          const ExploreOptions& opts, const HistoryCheck& check) {
  cfg.validate();
  Explorer ex(cfg, opts, check);
  return ex.run(program);
}

}  // namespace anon::sim
