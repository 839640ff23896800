#pragma once

#include <cstddef>
#include <vector>

#include "anon/sim/model.hpp"
#include "anon/value.hpp"

namespace anon::sim {

/// What a process asks the shared memory to do in its next atomic step.
struct MemRequest {
  EventKind kind = EventKind::scan;  // read, write, scan or update
  int index = 0;                     // ignored for scan
  Value value;                       // payload of write / update

  static MemRequest read(int i) { return {EventKind::read, i, {}}; }
  static MemRequest write(int i, Value v) { return {EventKind::write, i, std::move(v)}; }
  static MemRequest scan() { return {EventKind::scan, 0, {}}; }
  static MemRequest update(int i, Value v) { return {EventKind::update, i, std::move(v)}; }

  friend bool operator==(const MemRequest&, const MemRequest&) = default;
};

/// How scan/update are realized. Only the atomic oracle exists: a scan
/// returns the whole array as it is at the step it occupies.
enum class SnapshotImpl { atomic_oracle };

/**
 * The n MWMR registers R[0..n-1], each holding a value-set (initially the
 * empty set), together with the snapshot interface over the same array.
 *
 * read/write touch one cell; update replaces one component and scan returns
 * all n components, each in one atomic step.
 */
class SharedMemory {
 public:
  explicit SharedMemory(int n, SnapshotImpl impl = SnapshotImpl::atomic_oracle);

  int size() const { return static_cast<int>(cells_.size()); }
  SnapshotImpl impl() const { return impl_; }

  const Value& read(int i) const;
  void write(int i, Value v);
  void update(int i, Value v) { write(i, std::move(v)); }
  /// Tuple of the n cells.
  Value scan() const;

  const std::vector<Value>& cells() const { return cells_; }

  /// Performs `req` and returns what the process observes (nil for writes).
  Value apply(const MemRequest& req);

  std::size_t hash() const;
  friend bool operator==(const SharedMemory&, const SharedMemory&) = default;

 private:
  void check_index(int i) const;

  std::vector<Value> cells_;
  SnapshotImpl impl_;
};

}  // namespace anon::sim
