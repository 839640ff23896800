#include "anon/value.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace anon {

struct Value::Payload {
  std::string text;
  std::vector<Value> items;
};

namespace {

std::size_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return static_cast<std::size_t>(x ^ (x >> 31));
}

std::size_t hash_items(Value::Kind kind, const std::vector<Value>& items) {
  std::size_t h = mix(static_cast<std::uint64_t>(kind) * 7919 + items.size());
  for (const auto& it : items) h = hash_combine(h, it.hash());
  return h;
}

}  // namespace

Value::Value(std::int64_t i) : kind_(Kind::integer), int_(i), hash_(mix(static_cast<std::uint64_t>(i))) {}

Value Value::str(std::string s) {
  Value v;
  v.kind_ = Kind::string;
  v.hash_ = hash_combine(mix(2), std::hash<std::string>{}(s));
  v.payload_ = std::make_shared<const Payload>(Payload{std::move(s), {}});
  return v;
}

Value Value::tuple(std::vector<Value> items) {
  Value v;
  v.kind_ = Kind::tuple;
  v.hash_ = hash_items(Kind::tuple, items);
  v.payload_ = std::make_shared<const Payload>(Payload{{}, std::move(items)});
  return v;
}

Value Value::set(std::vector<Value> items) {
  std::sort(items.begin(), items.end());
  items.erase(std::unique(items.begin(), items.end()), items.end());
  Value v;
  v.kind_ = Kind::set;
  v.hash_ = hash_items(Kind::set, items);
  v.payload_ = std::make_shared<const Payload>(Payload{{}, std::move(items)});
  return v;
}

Value Value::empty_set() {
  static const Value empty = set(std::vector<Value>{});
  return empty;
}

std::int64_t Value::as_int() const {
  if (kind_ != Kind::integer) throw std::logic_error("Value is not an integer: " + text());
  return int_;
}

const std::string& Value::as_str() const {
  if (kind_ != Kind::string) throw std::logic_error("Value is not a string: " + text());
  return payload_->text;
}

std::span<const Value> Value::items() const {
  if (kind_ != Kind::tuple && kind_ != Kind::set) return {};
  return payload_->items;
}

bool Value::contains(const Value& v) const {
  if (kind_ != Kind::set) return false;
  const auto& xs = payload_->items;
  return std::binary_search(xs.begin(), xs.end(), v);
}

bool operator==(const Value& a, const Value& b) {
  if (a.hash_ != b.hash_ || a.kind_ != b.kind_) return false;
  switch (a.kind_) {
    case Value::Kind::nil:
      return true;
    case Value::Kind::integer:
      return a.int_ == b.int_;
    case Value::Kind::string:
      return a.payload_->text == b.payload_->text;
    case Value::Kind::tuple:
    case Value::Kind::set:
      return a.payload_ == b.payload_ || a.payload_->items == b.payload_->items;
  }
  return false;
}

std::strong_ordering operator<=>(const Value& a, const Value& b) {
  if (a.kind_ != b.kind_) return a.kind_ <=> b.kind_;
  switch (a.kind_) {
    case Value::Kind::nil:
      return std::strong_ordering::equal;
    case Value::Kind::integer:
      return a.int_ <=> b.int_;
    case Value::Kind::string:
      return a.payload_->text.compare(b.payload_->text) <=> 0;
    case Value::Kind::tuple:
    case Value::Kind::set: {
      if (a.payload_ == b.payload_) return std::strong_ordering::equal;
      const auto& x = a.payload_->items;
      const auto& y = b.payload_->items;
      return std::lexicographical_compare_three_way(x.begin(), x.end(), y.begin(), y.end());
    }
  }
  return std::strong_ordering::equal;
}

std::string Value::text() const {
  switch (kind_) {
    case Kind::nil:
      return "nil";
    case Kind::integer:
      return std::to_string(int_);
    case Kind::string:
      return "\"" + payload_->text + "\"";
    case Kind::tuple:
    case Kind::set: {
      std::string out = kind_ == Kind::set ? "{" : "(";
      bool first = true;
      for (const auto& it : payload_->items) {
        if (!first) out += ",";
        first = false;
        out += it.text();
      }
      out += kind_ == Kind::set ? "}" : ")";
      return out;
    }
  }
  return {};
}

std::ostream& operator<<(std::ostream& os, const Value& v) { return os << v.text(); }

Value set_union(const Value& a, const Value& b) {
  if (a.size() == 0) return b.is_set() ? b : Value::empty_set();
  if (b.size() == 0 || a == b) return a;
  auto xs = a.items();
  auto ys = b.items();
  std::vector<Value> out;
  out.reserve(xs.size() + ys.size());
  std::set_union(xs.begin(), xs.end(), ys.begin(), ys.end(), std::back_inserter(out));
  if (out.size() == xs.size()) return a;
  if (out.size() == ys.size()) return b;
  return Value::set(std::move(out));
}

Value set_insert(const Value& s, const Value& v) {
  if (s.contains(v)) return s;
  return set_union(s, Value::set({v}));
}

bool is_subset(const Value& a, const Value& b) {
  auto xs = a.items();
  auto ys = b.items();
  if (xs.size() > ys.size()) return false;
  return std::includes(ys.begin(), ys.end(), xs.begin(), xs.end());
}

const Value& set_min(const Value& s) {
  if (!s.is_set() || s.size() == 0) throw std::logic_error("set_min of empty or non-set value");
  return s.items().front();
}

Value set_intersection(const Value& a, const Value& b) {
  auto xs = a.items();
  auto ys = b.items();
  std::vector<Value> out;
  std::set_intersection(xs.begin(), xs.end(), ys.begin(), ys.end(), std::back_inserter(out));
  return Value::set(std::move(out));
}

Value union_of(std::span<const Value> cells) {
  Value acc = Value::empty_set();
  for (const auto& c : cells) acc = set_union(acc, c);
  return acc;
}

nlohmann::ordered_json to_json(const Value& v) {
  using J = nlohmann::ordered_json;
  switch (v.kind()) {
    case Value::Kind::nil:
      return nullptr;
    case Value::Kind::integer:
      return v.as_int();
    case Value::Kind::string:
      return v.as_str();
    case Value::Kind::set: {
      J arr = J::array();
      for (const auto& it : v.items()) arr.push_back(to_json(it));
      return arr;
    }
    case Value::Kind::tuple: {
      J arr = J::array();
      for (const auto& it : v.items()) arr.push_back(to_json(it));
      J obj = J::object();
      obj["tuple"] = std::move(arr);
      return obj;
    }
  }
  return nullptr;
}

Value value_from_json(const nlohmann::ordered_json& j) {
  if (j.is_null()) return Value::nil();
  if (j.is_number_integer()) return Value(j.get<std::int64_t>());
  if (j.is_string()) return Value::str(j.get<std::string>());
  if (j.is_array()) {
    std::vector<Value> items;
    for (const auto& e : j) items.push_back(value_from_json(e));
    return Value::set(std::move(items));
  }
  if (j.is_object() && j.contains("tuple") && j.size() == 1 && j["tuple"].is_array()) {
    std::vector<Value> items;
    for (const auto& e : j["tuple"]) items.push_back(value_from_json(e));
    return Value::tuple(std::move(items));
  }
  throw std::invalid_argument("not a value encoding: " + j.dump());
}

}  // namespace anon
