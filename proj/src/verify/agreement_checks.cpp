#include "anon/verify/agreement_checks.hpp"

#include <algorithm>
#include <set>

#include "anon/agreement/programs.hpp"
#include "anon/weakset/multiplex.hpp"

namespace anon::verify {

namespace {

bool is_bottom(const std::optional<Value>& r) { return !r || r->is_nil(); }

/// Did `actor` crash while one of the given operations was open?
bool crashed_inside(const HistoryView& h, const OpRecord& op) {
  auto c = h.crash_step(op.actor);
  return c && !op.complete() && *c >= op.invoc;
}

}  // namespace

std::vector<std::string> safe_agreement_objects(const HistoryView& h) {
  std::vector<std::string> out;
  for (const auto& op : h.ops())
    if ((op.op == "propose" || op.op == "resolve") &&
        std::find(out.begin(), out.end(), op.object) == out.end())
      out.push_back(op.object);
  return out;
}

AgreementReport safe_agreement_report(const HistoryView& h, const std::string& object) {
  AgreementReport rep;
  rep.object = object;
  const auto ops = h.ops_on(object);
  std::vector<Value> proposed;
  std::vector<Value> resolved;
  std::vector<const OpRecord*> proposes;
  bool pending = false;
  for (const auto* op : ops) {
    if (op->op == "propose") {
      proposes.push_back(op);
      if (!op->args.empty()) proposed.push_back(op->args[0]);
    } else if (op->op == "resolve" && op->complete() && !is_bottom(op->ret)) {
      resolved.push_back(*op->ret);
    }
    if (!op->complete() && !h.crashed(op->actor)) pending = true;
  }
  rep.proposed = Value::set(std::move(proposed));
  rep.resolved_non_bot = Value::set(std::move(resolved));

  if (!is_subset(rep.resolved_non_bot, rep.proposed)) {
    rep.validity = Verdict::fail;
    rep.detail = "resolved " + rep.resolved_non_bot.text() + " outside proposed " + rep.proposed.text();
  }
  if (rep.resolved_non_bot.size() >= 2) {
    rep.agreement = Verdict::fail;
    rep.detail = "distinct resolutions " + rep.resolved_non_bot.text();
  }
  if (pending) {
    rep.termination = h.truncated() ? Verdict::fail : Verdict::pass;
    if (h.truncated()) rep.detail = "operations of live processes still pending when the run was cut off";
  }

  // Nontriviality: only meaningful with two or more proposes, none of them
  // interrupted by a crash.
  const bool crash_inside = std::any_of(proposes.begin(), proposes.end(),
                                        [&](const OpRecord* p) { return crashed_inside(h, *p); });
  const bool all_done = std::all_of(proposes.begin(), proposes.end(), [](const OpRecord* p) { return p->complete(); });
  if (proposes.size() >= 2 && !crash_inside && all_done) {
    std::uint64_t last = 0;
    for (const auto* p : proposes) last = std::max(last, *p->resp);
    rep.nontriviality = Verdict::vacuous;
    for (const auto* op : ops) {
      if (op->op != "resolve" || op->invoc <= last || !op->complete()) continue;
      if (is_bottom(op->ret)) {
        rep.nontriviality = Verdict::fail;
        rep.detail = "resolve by actor " + std::to_string(op->actor) + " at step " + std::to_string(op->invoc) +
                     " returned bottom after every propose finished";
        break;
      }
      rep.nontriviality = Verdict::pass;
    }
  }
  return rep;
}

CheckReport check_agreement_conditions(const HistoryView& h, AgreementKind kind, int t) {
  CheckReport out;
  if (h.replay_error()) {
    out.add({"replay", "", Verdict::fail, *h.replay_error(), std::nullopt});
    return out;
  }
  for (const auto& obj : safe_agreement_objects(h)) {
    auto r = safe_agreement_report(h, obj);
    auto detail = [&](Verdict v) { return v == Verdict::fail ? r.detail : std::string{}; };
    out.add({"validity", obj, r.validity, detail(r.validity), std::nullopt});
    out.add({"agreement", obj, r.agreement, detail(r.agreement), std::nullopt});
    out.add({"termination", obj, r.termination, detail(r.termination), std::nullopt});
    out.add({"nontriviality", obj, r.nontriviality, detail(r.nontriviality), std::nullopt});
  }
  if (kind != AgreementKind::set_agreement) return out;

  const std::string top(agreement::kSetAgreementObject);
  std::vector<Value> inputs;
  std::vector<Value> decisions;
  Finding term{"termination", top, Verdict::pass, "", std::nullopt};
  for (const auto* op : h.ops_on(top)) {
    if (!op->args.empty()) inputs.push_back(op->args[0]);
    if (op->complete() && op->ret) decisions.push_back(*op->ret);
    else if (!h.crashed(op->actor) && term.verdict == Verdict::pass) {
      term.verdict = Verdict::fail;
      term.detail = "actor " + std::to_string(op->actor) + " never decided";
    }
  }
  const Value in = Value::set(std::move(inputs));
  const Value dec = Value::set(std::move(decisions));
  const bool valid = is_subset(dec, in);
  out.add({"decision-validity", top, valid ? Verdict::pass : Verdict::fail,
           valid ? "" : "decisions " + dec.text() + " not all inputs " + in.text(), std::nullopt});
  const bool k_ok = dec.size() <= static_cast<std::size_t>(t + 1);
  out.add({"k-agreement", top, k_ok ? Verdict::pass : Verdict::fail,
           std::to_string(dec.size()) + " distinct decisions " + dec.text() + ", bound " + std::to_string(t + 1),
           std::nullopt});
  out.add(std::move(term));
  return out;
}

CheckReport check_chain_invariants(const HistoryView& h) {
  CheckReport out;
  const int n = h.n();
  for (const auto& obj : safe_agreement_objects(h)) {
    std::vector<Value> V;
    std::vector<std::set<int>> P;
    for (int i = 0; i < n; ++i) {
      const auto ops = h.ops_on(weakset::sub_set_name(obj, i));
      std::vector<Value> vals;
      for (const auto* op : ops)
        if (op->op == "add" && !op->args.empty()) vals.push_back(op->args[0]);
      Value vi = Value::set(std::move(vals));
      std::set<int> pi;
      for (const auto* op : ops)
        if (op->op == "add" && !op->args.empty() && !(op->args[0] == set_min(vi))) pi.insert(op->actor);
      V.push_back(std::move(vi));
      P.push_back(std::move(pi));
    }

    Finding values{"chain-values", obj, Verdict::pass, "", std::nullopt};
    Finding procs{"chain-proposers", obj, Verdict::pass, "", std::nullopt};
    for (int i = 0; i + 1 < n; ++i) {
      const auto k = static_cast<std::size_t>(i);
      if (values.verdict == Verdict::pass && !is_subset(V[k + 1], V[k])) {
        values.verdict = Verdict::fail;
        values.detail = "V_" + std::to_string(i + 1) + " = " + V[k + 1].text() + " not inside V_" +
                        std::to_string(i) + " = " + V[k].text();
      }
      if (procs.verdict == Verdict::pass &&
          !std::includes(P[k].begin(), P[k].end(), P[k + 1].begin(), P[k + 1].end())) {
        procs.verdict = Verdict::fail;
        procs.detail = "a process adds a non-minimum to SET[" + std::to_string(i + 1) + "] but not to SET[" +
                       std::to_string(i) + "]";
      }
    }
    const auto& last = V[static_cast<std::size_t>(n - 1)];
    Finding single{"last-set-singleton", obj, last.size() <= 1 ? Verdict::pass : Verdict::fail,
                   last.size() <= 1 ? "" : "SET[n-1] holds " + last.text(), std::nullopt};

    Finding strict{"proposers-decrease", obj, Verdict::vacuous, "", std::nullopt};
    if (std::all_of(V.begin(), V.end(), [](const Value& v) { return v.size() >= 2; })) {
      strict.verdict = Verdict::pass;
      for (std::size_t i = 0; i + 1 < P.size(); ++i) {
        if (!(P[i].size() > P[i + 1].size() && std::includes(P[i].begin(), P[i].end(), P[i + 1].begin(), P[i + 1].end()))) {
          strict.verdict = Verdict::fail;
          strict.detail = "P_" + std::to_string(i + 1) + " does not shrink";
          break;
        }
      }
    }
    out.add(std::move(values));
    out.add(std::move(procs));
    out.add(std::move(single));
    out.add(std::move(strict));
  }
  return out;
}

}  // namespace anon::verify
