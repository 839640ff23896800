#include "anon/sim/memory.hpp"

namespace anon::sim {

SharedMemory::SharedMemory(int n, SnapshotImpl impl)
    : cells_(static_cast<std::size_t>(n), Value::empty_set()), impl_(impl) {
  if (n < 1) throw ConfigError("shared memory needs at least one register");
}

void SharedMemory::check_index(int i) const {
  if (i < 0 || i >= size())
    throw SimulationFault("register index " + std::to_string(i) + " out of range 0.." +
                          std::to_string(size() - 1));
}

const Value& SharedMemory::read(int i) const {
  check_index(i);
  return cells_[static_cast<std::size_t>(i)];
}

void SharedMemory::write(int i, Value v) {
  check_index(i);
  if (!v.is_set()) throw SimulationFault("registers hold value-sets, got " + v.text());
  cells_[static_cast<std::size_t>(i)] = std::move(v);
}

Value SharedMemory::scan() const { return Value::tuple(cells_); }

Value SharedMemory::apply(const MemRequest& req) {
  switch (req.kind) {
    case EventKind::read:
      return read(req.index);
    case EventKind::write:
    case EventKind::update:
      write(req.index, req.value);
      return Value::nil();
    case EventKind::scan:
      return scan();
    default:
      throw SimulationFault("not a memory request: " + std::string(to_string(req.kind)));
  }
}

std::size_t SharedMemory::hash() const {
  std::size_t h = cells_.size();
  for (const auto& c : cells_) h = hash_combine(h, c.hash());
  return h;
}

}  // namespace anon::sim
