#pragma once

#include <iosfwd>
#include <string>

#include <nlohmann/json.hpp>

#include "anon/sim/model.hpp"

namespace anon::sim {

/// Fixed field order: step, actor, kind, object, op, args, ret.
nlohmann::ordered_json event_to_json(const Event& e);
Event event_from_json(const nlohmann::ordered_json& j);

/// One event per line. Identical traces serialize to identical bytes.
void write_jsonl(std::ostream& os, const Trace& trace);
std::string to_jsonl(const Trace& trace);

/// Parses a JSONL trace. `n` is taken from the first scan's width when
/// `n_hint` is 0, falling back to the largest actor or register index + 1.
/// Throws std::invalid_argument on malformed input.
Trace read_jsonl(std::istream& is, int n_hint = 0);

}  // namespace anon::sim
