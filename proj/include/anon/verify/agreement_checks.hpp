#pragma once

#include <string>
#include <vector>

#include "anon/verify/history.hpp"
#include "anon/verify/report.hpp"

namespace anon::verify {

/// Verdicts for one safe agreement object.
struct AgreementReport {
  std::string object;
  Value proposed;          // set of proposed values
  Value resolved_non_bot;  // set of non-bottom resolve results
  Verdict validity = Verdict::pass;
  Verdict agreement = Verdict::pass;
  Verdict termination = Verdict::pass;
  Verdict nontriviality = Verdict::vacuous;
  std::string detail;
};

/// Objects that received propose or resolve calls, in order of appearance.
std::vector<std::string> safe_agreement_objects(const HistoryView& h);

AgreementReport safe_agreement_report(const HistoryView& h, const std::string& object);

enum class AgreementKind : std::uint8_t { safe_agreement, set_agreement };

/**
 * Safe agreement conditions on every safe agreement object in the trace.
 * For set agreement, additionally: decisions are inputs, at most t+1
 * distinct decisions, and every process that did not crash decided.
 */
CheckReport check_agreement_conditions(const HistoryView& h, AgreementKind kind, int t);

/**
 * For every safe agreement object X with V_i the values added to X.SET[i]
 * and P_i the processes adding something other than min V_i to X.SET[i]:
 * V_i contains V_{i+1}, P_i contains P_{i+1}, V_{n-1} has at most one
 * value, and if every V_i has two or more values, P_i strictly shrinks.
 */
CheckReport check_chain_invariants(const HistoryView& h);

}  // namespace anon::verify
