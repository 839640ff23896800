#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace anon::verify {

enum class Verdict : std::uint8_t { pass, fail, vacuous, inconclusive };

std::string_view to_string(Verdict v);

/// Inclusive range of trace steps a finding refers to.
struct Window {
  std::uint64_t first = 0;
  std::uint64_t last = 0;
  friend bool operator==(const Window&, const Window&) = default;
};

struct Finding {
  std::string check;   // e.g. "linearizability", "agreement"
  std::string object;  // object the finding is about, may be empty
  Verdict verdict = Verdict::pass;
  std::string detail;
  std::optional<Window> window;
};

struct CheckReport {
  std::vector<Finding> findings;

  void add(Finding f) { findings.push_back(std::move(f)); }
  void merge(const CheckReport& other);
  bool ok() const;  // no failures
  std::size_t count(std::string_view check, Verdict v) const;
  std::size_t failures() const;
  /// First failing finding, if any.
  const Finding* first_failure() const;

  nlohmann::ordered_json to_json() const;
};

}  // namespace anon::verify
