#pragma once

#include "anon/bgsim/bg.hpp"
#include "anon/topology/task.hpp"
#include "anon/verify/history.hpp"
#include "anon/verify/report.hpp"

namespace anon::verify {

/**
 * Barycentric agreement with b rounds, with sigma the set of inputs:
 * every output is a vertex of bary^b(sigma), outputs are pairwise
 * comparable under inclusion, and each output is built only from inputs.
 */
CheckReport check_bary(const HistoryView& h, int b);

/**
 * BG simulation run of `spec` with crash budget t:
 *  - bg-grid-agreement: one agreed state per grid object;
 *  - bg-replay: agreed states form a legal execution of the simulated
 *    protocol (round 0 states are inputs, P_i's own component is its
 *    previous state, components are agreed states, views are ordered like
 *    snapshots, and every proposed view is recomputed from the proposer's
 *    preceding read of BG.SET);
 *  - bg-task: decisions come from terminal agreed states and satisfy the
 *    simulated task;
 *  - bg-blocking: simulated processes stuck behind a crashed simulator do
 *    not outnumber crashed simulators.
 */
CheckReport check_bgsim(const HistoryView& h, const bgsim::SimulatedProcessSpec& spec, int t);

/// Simulated processes that never reached a terminal state and whose
/// latest grid object is held open by a simulator that crashed inside its
/// propose.
int blocked_simulated_processes(const HistoryView& h, const bgsim::SimulatedProcessSpec& spec);

/// Outputs of the "solve" object span a simplex of Delta(sigma), sigma the
/// simplex spanned by the inputs.
CheckReport check_solve(const HistoryView& h, const topology::ColorlessTask& task);

}  // namespace anon::verify
