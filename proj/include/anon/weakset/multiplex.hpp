#pragma once

#include <optional>
#include <string>

#include "anon/weakset/weak_set.hpp"

namespace anon::weakset {

/// A logical weak set living inside the single physical one. Its values
/// are stored as (name, value) pairs, so distinct names never share
/// elements.
struct LogicalSet {
  std::string name;

  Value tag(const Value& v) const;
  /// Elements of a physical view that belong to this set, tags stripped.
  Value project(const Value& physical_view) const;

  friend bool operator==(const LogicalSet&, const LogicalSet&) = default;
};

inline LogicalSet multiplex(std::string name) { return LogicalSet{std::move(name)}; }

/// Name under which a safe agreement object's i-th set is multiplexed.
std::string sub_set_name(std::string_view owner, int index);

/**
 * A process's access point to weak sets: the physical client plus the
 * logical call in flight. Every logical operation is one physical add or
 * get; logical invoke/respond events bracket the physical ones.
 */
class SetPort {
 public:
  explicit SetPort(int n, Mutation mutation = Mutation::none) : client_(n, mutation) {}

  void add(const LogicalSet& set, Value v, sim::OpLog& log);
  void get(const LogicalSet& set, sim::OpLog& log);
  /// Un-multiplexed access to the physical set.
  void add_physical(Value v, sim::OpLog& log);
  void get_physical(sim::OpLog& log);

  bool busy() const { return client_.busy(); }
  sim::MemRequest request() const { return client_.request(); }

  struct Completion {
    std::string object;  // logical name, empty for physical calls
    OpKind kind;
    Value result;  // projected view for get, nil for add
  };
  std::optional<Completion> deliver(const Value& observed, sim::OpLog& log);

  const WeakSetClient& client() const { return client_; }
  int n() const { return client_.n(); }

  std::size_t hash() const;
  friend bool operator==(const SetPort&, const SetPort&) = default;

 private:
  WeakSetClient client_;
  std::optional<LogicalSet> current_;
};

}  // namespace anon::weakset
