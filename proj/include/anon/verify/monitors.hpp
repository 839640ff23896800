#pragma once

#include <vector>

#include "anon/verify/history.hpp"
#include "anon/verify/report.hpp"

namespace anon::verify {

/// Potential of a value v at one step: processes about to scan (r), processes
/// about to write a view holding v or taking no further step (w), and
/// registers holding v (c).
struct AlphaPoint {
  int r = 0;
  int w = 0;
  int c = 0;
  int alpha() const { return r + w + c; }
};

/// The series for steps 0..last_step. Each process's next memory event is
/// read off the trace itself.
std::vector<AlphaPoint> alpha_series(const HistoryView& h, const Value& v);

/// For one value: once alpha exceeds n it never decreases; from tau_v on at
/// least one register holds v; alpha(tau_v) > n.
CheckReport alpha_monitor(const HistoryView& h, const Value& v);

/// alpha_monitor over every value written to a register, summarized as one
/// finding per property.
CheckReport alpha_monitor_all(const HistoryView& h);

/// Each process's view (what it writes and what its gets return) only grows.
CheckReport view_monotonicity(const HistoryView& h);

/// Recorded reads and scans match the replayed registers.
CheckReport replay_soundness(const HistoryView& h);

/// Every memory event stays within the n registers, and the register array
/// has exactly n cells.
CheckReport space_accounting(const HistoryView& h, int n);

}  // namespace anon::verify
