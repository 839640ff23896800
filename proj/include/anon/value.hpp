#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace anon {

/**
 * Immutable, totally ordered, hashable token used for everything the
 * protocols store in shared memory: plain inputs (integers), register
 * views (sets), tagged values and simulated states (tuples).
 *
 * Compound payloads are shared, so copies are cheap and a Value can be
 * freely stored in process-local state that the explorer clones.
 *
 * The order is structural: first by kind (nil < int < string < tuple < set),
 * then by content, lexicographically for tuples and sets. It is the same
 * for every process, so min() over a set is schedule independent.
 */
class Value {
 public:
  enum class Kind : std::uint8_t { nil, integer, string, tuple, set };

  Value() = default;  // nil
  Value(std::int64_t i);  // NOLINT(google-explicit-constructor)
  Value(int i) : Value(static_cast<std::int64_t>(i)) {}  // NOLINT

  static Value nil() { return Value{}; }
  static Value str(std::string s);
  static Value tuple(std::vector<Value> items);
  static Value tuple(std::initializer_list<Value> items) {
    return tuple(std::vector<Value>(items));
  }
  /// Sorts and removes duplicates.
  static Value set(std::vector<Value> items);
  static Value set(std::initializer_list<Value> items) {
    return set(std::vector<Value>(items));
  }
  static Value empty_set();

  Kind kind() const { return kind_; }
  bool is_nil() const { return kind_ == Kind::nil; }
  bool is_int() const { return kind_ == Kind::integer; }
  bool is_str() const { return kind_ == Kind::string; }
  bool is_tuple() const { return kind_ == Kind::tuple; }
  bool is_set() const { return kind_ == Kind::set; }

  std::int64_t as_int() const;
  const std::string& as_str() const;
  /// Elements of a tuple or set (sets are sorted ascending).
  std::span<const Value> items() const;
  std::size_t size() const { return items().size(); }
  const Value& operator[](std::size_t i) const { return items()[i]; }

  std::size_t hash() const { return hash_; }

  /// Set membership (binary search).
  bool contains(const Value& v) const;

  friend bool operator==(const Value& a, const Value& b);
  friend std::strong_ordering operator<=>(const Value& a, const Value& b);

  /// Compact human-readable form, e.g. `{1,2}`, `(3,{1})`, `nil`.
  std::string text() const;

 private:
  struct Payload;

  Kind kind_ = Kind::nil;
  std::int64_t int_ = 0;
  std::size_t hash_ = 0x9e3779b97f4a7c15ULL;
  std::shared_ptr<const Payload> payload_;
};

std::ostream& operator<<(std::ostream& os, const Value& v);

// ---- set algebra on Set-kind values ---------------------------------------

Value set_union(const Value& a, const Value& b);
Value set_insert(const Value& s, const Value& v);
bool is_subset(const Value& a, const Value& b);
/// Smallest element of a non-empty set.
const Value& set_min(const Value& s);
/// Elements of `s` shared by both.
Value set_intersection(const Value& a, const Value& b);

/// Union of the cells of an array of sets (the vals(Snap) macro).
Value union_of(std::span<const Value> cells);

// ---- JSON -----------------------------------------------------------------
// nil -> null, int -> number, string -> string, set -> sorted array,
// tuple -> {"tuple": [...]}.

nlohmann::ordered_json to_json(const Value& v);
Value value_from_json(const nlohmann::ordered_json& j);

struct ValueHash {
  std::size_t operator()(const Value& v) const { return v.hash(); }
};

inline std::size_t hash_combine(std::size_t seed, std::size_t h) {
  return seed ^ (h + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

}  // namespace anon
