#include "anon/verify/report.hpp"

#include <algorithm>

namespace anon::verify {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::vacuous: return "vacuous";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "?";
}

void CheckReport::merge(const CheckReport& other) {
  findings.insert(findings.end(), other.findings.begin(), other.findings.end());
}

bool CheckReport::ok() const { return failures() == 0; }

std::size_t CheckReport::count(std::string_view check, Verdict v) const {
  return static_cast<std::size_t>(std::count_if(findings.begin(), findings.end(), [&](const Finding& f) {
    return f.check == check && f.verdict == v;
  }));
}

std::size_t CheckReport::failures() const {
  return static_cast<std::size_t>(
      std::count_if(findings.begin(), findings.end(), [](const Finding& f) { return f.verdict == Verdict::fail; }));
}

const Finding* CheckReport::first_failure() const {
  for (const auto& f : findings)
    if (f.verdict == Verdict::fail) return &f;
  return nullptr;
}

nlohmann::ordered_json CheckReport::to_json() const {
  using nlohmann::ordered_json;
  ordered_json out;
  out["ok"] = ok();
  out["failures"] = failures();
  ordered_json list = ordered_json::array();
  for (const auto& f : findings) {
    ordered_json j;
    j["check"] = f.check;
    j["object"] = f.object;
    j["verdict"] = std::string(to_string(f.verdict));
    j["detail"] = f.detail;
    if (f.window) j["window"] = {f.window->first, f.window->last};
    else j["window"] = nullptr;
    list.push_back(std::move(j));
  }
  out["findings"] = std::move(list);
  return out;
}

}  // namespace anon::verify
