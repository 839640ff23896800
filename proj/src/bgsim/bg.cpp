#include "anon/bgsim/bg.hpp"

#include <algorithm>
#include <charconv>
#include <stdexcept>

namespace anon::bgsim {

std::string grid_name(int round, int i) {
  return "BG.SA[" + std::to_string(round) + "," + std::to_string(i) + "]";
}

std::optional<std::pair<int, int>> parse_grid_name(std::string_view object) {
  constexpr std::string_view prefix = "BG.SA[";
  if (!object.starts_with(prefix) || !object.ends_with("]")) return std::nullopt;
  auto body = object.substr(prefix.size(), object.size() - prefix.size() - 1);
  auto comma = body.find(',');
  if (comma == std::string_view::npos) return std::nullopt;
  int r = 0;
  int i = 0;
  auto a = std::from_chars(body.data(), body.data() + comma, r);
  auto b = std::from_chars(body.data() + comma + 1, body.data() + body.size(), i);
  if (a.ec != std::errc{} || a.ptr != body.data() + comma || b.ec != std::errc{} ||
      b.ptr != body.data() + body.size())
    return std::nullopt;
  return std::pair{r, i};
}

Value initial_state(const Value& input) { return Value::tuple({Value::str("in"), input}); }

Value view_state(std::vector<Value> components) {
  return Value::tuple({Value::str("view"), Value::tuple(std::move(components))});
}

bool is_initial_state(const Value& s) {
  return s.is_tuple() && s.size() == 2 && s[0].is_str() && s[0].as_str() == "in";
}

bool is_view_state(const Value& s) {
  return s.is_tuple() && s.size() == 2 && s[0].is_str() && s[0].as_str() == "view" && s[1].is_tuple();
}

const Value& state_input(const Value& s) {
  if (!is_initial_state(s)) throw std::invalid_argument("not an initial state: " + s.text());
  return s[1];
}

std::span<const Value> state_components(const Value& s) {
  if (!is_view_state(s)) throw std::invalid_argument("not a view state: " + s.text());
  return s[1].items();
}

Value triple(int i, const Value& state, int round) { return Value::tuple({Value(i), state, Value(round)}); }

std::optional<Triple> parse_triple(const Value& v) {
  if (!v.is_tuple() || v.size() != 3 || !v[0].is_int() || !v[2].is_int()) return std::nullopt;
  return Triple{static_cast<int>(v[0].as_int()), v[1], static_cast<int>(v[2].as_int())};
}

std::vector<Value> latest_views(const Value& snap, int n) {
  std::vector<Value> out(static_cast<std::size_t>(n));
  std::vector<int> best(static_cast<std::size_t>(n), -1);
  for (const auto& e : snap.items()) {
    auto t = parse_triple(e);
    if (!t || t->i < 0 || t->i >= n) continue;
    auto k = static_cast<std::size_t>(t->i);
    if (t->round > best[k] || (t->round == best[k] && out[k] < t->state)) {
      best[k] = t->round;
      out[k] = t->state;
    }
  }
  return out;
}

int latest_round(const Value& snap, int i) {
  int r = 0;
  for (const auto& e : snap.items()) {
    auto t = parse_triple(e);
    if (t && t->i == i) r = std::max(r, t->round);
  }
  return r;
}

namespace {

void collect(const Value& s, std::vector<Value>& inputs, std::vector<Value>& procs) {
  if (is_initial_state(s)) {
    inputs.push_back(s[1]);
    return;
  }
  if (!is_view_state(s)) return;
  const auto comps = state_components(s);
  for (std::size_t j = 0; j < comps.size(); ++j) {
    if (comps[j].is_nil()) continue;
    procs.emplace_back(static_cast<std::int64_t>(j));
    collect(comps[j], inputs, procs);
  }
}

}  // namespace

Value known_inputs(const Value& s) {
  std::vector<Value> in;
  std::vector<Value> pr;
  collect(s, in, pr);
  return Value::set(std::move(in));
}

Value known_processes(const Value& s) {
  std::vector<Value> in;
  std::vector<Value> pr;
  collect(s, in, pr);
  return Value::set(std::move(pr));
}

int state_depth(const Value& s) {
  if (!is_view_state(s)) return 0;
  int d = 0;
  for (const auto& c : state_components(s)) d = std::max(d, state_depth(c));
  return d + 1;
}

SimulatedProcessSpec full_information_set_agreement(int n, int t) {
  SimulatedProcessSpec spec;
  spec.name = "setagreement";
  spec.n = n;
  const auto need = static_cast<std::size_t>(n - t);
  spec.terminal = [need](const Value& s) { return is_view_state(s) && known_processes(s).size() >= need; };
  spec.decide = [](const Value& s) { return set_min(known_inputs(s)); };
  return spec;
}

SimulatedProcessSpec flooding(int n, int rounds) {
  if (rounds < 1) throw std::invalid_argument("flooding needs at least one round");
  SimulatedProcessSpec spec;
  spec.name = "flooding";
  spec.n = n;
  spec.terminal = [rounds](const Value& s) { return state_depth(s) >= rounds; };
  spec.decide = [](const Value& s) { return known_inputs(s); };
  return spec;
}

SimulatedProcessSpec builtin_spec(std::string_view name, int n, int t, int rounds) {
  if (name == "setagreement") return full_information_set_agreement(n, t);
  if (name == "flooding") return flooding(n, rounds);
  throw std::invalid_argument("unknown simulated protocol: " + std::string(name));
}

// ---- simulator ------------------------------------------------------------

BgSimulator::BgSimulator(std::shared_ptr<const SimulatedProcessSpec> spec, Value input)
    : spec_(std::move(spec)),
      port_(spec_->n),
      sa_(static_cast<std::size_t>(spec_->n)),
      round_(static_cast<std::size_t>(spec_->n), 0),
      input_(std::move(input)) {}

void BgSimulator::start(sim::OpLog& log) {
  log.invoke(kBgObject, "simulate", {input_});
  cursor_ = 0;
  phase_ = Phase::proposing;
  sa_[0] = agreement::SafeAgreementClient(grid_name(0, 0), n());
  sa_[0].begin_propose(initial_state(input_), port_, log);
}

std::optional<sim::MemRequest> BgSimulator::next_request() const {
  if (!port_.busy()) return std::nullopt;
  return port_.request();
}

void BgSimulator::resolve_current(sim::OpLog& log) {
  phase_ = Phase::resolving;
  sa_[static_cast<std::size_t>(cursor_)].begin_resolve(port_, log);
}

void BgSimulator::move_on(sim::OpLog& log) {
  cursor_ = (cursor_ + 1) % n();
  resolve_current(log);
}

void BgSimulator::deliver(const Value& observed, sim::OpLog& log) {
  auto c = port_.deliver(observed, log);
  if (!c) return;
  const auto k = static_cast<std::size_t>(cursor_);
  switch (phase_) {
    case Phase::proposing:
      if (!sa_[k].on_completion(*c, port_, log)) return;
      if (++cursor_ < n()) {
        const auto next = static_cast<std::size_t>(cursor_);
        sa_[next] = agreement::SafeAgreementClient(grid_name(0, cursor_), n());
        sa_[next].begin_propose(initial_state(input_), port_, log);
        return;
      }
      cursor_ = 0;
      return resolve_current(log);
    case Phase::resolving: {
      auto res = sa_[k].on_completion(*c, port_, log);
      if (!res) return;
      if (res->value.is_nil()) return move_on(log);
      if (spec_->terminal(res->value)) {
        decision_ = spec_->decide(res->value);
        phase_ = Phase::done;
        log.respond(kBgObject, "simulate", *decision_);
        return;
      }
      pending_ = res->value;
      phase_ = Phase::publishing;
      port_.add(weakset::multiplex(std::string(kBgSet)), triple(cursor_, pending_, round_[k]), log);
      return;
    }
    case Phase::publishing:
      phase_ = Phase::reading;
      port_.get(weakset::multiplex(std::string(kBgSet)), log);
      return;
    case Phase::reading: {
      const Value& snap = c->result;
      Value next = view_state(latest_views(snap, n()));
      round_[k] = latest_round(snap, cursor_) + 1;
      sa_[k] = agreement::SafeAgreementClient(grid_name(round_[k], cursor_), n());
      phase_ = Phase::advancing;
      pending_ = Value::nil();
      sa_[k].begin_propose(std::move(next), port_, log);
      return;
    }
    case Phase::advancing:
      if (!sa_[k].on_completion(*c, port_, log)) return;
      return move_on(log);
    case Phase::done:
      break;
  }
  throw sim::SimulationFault("bg simulator received a result after deciding");
}

std::size_t BgSimulator::hash() const {
  std::size_t h = hash_combine(port_.hash(), static_cast<std::size_t>(phase_));
  h = hash_combine(h, static_cast<std::size_t>(cursor_));
  for (const auto& s : sa_) h = hash_combine(h, s.hash());
  for (int r : round_) h = hash_combine(h, static_cast<std::size_t>(r));
  h = hash_combine(h, pending_.hash());
  return hash_combine(h, decision_ ? decision_->hash() + 1 : 0);
}

sim::ProcessProgram bg_program(std::shared_ptr<const SimulatedProcessSpec> spec, std::vector<Value> inputs) {
  sim::ProcessProgram p{"bgsim", {}, std::move(inputs)};
  p.make = [spec](const Value& in) { return std::make_unique<BgSimulator>(spec, in); };
  return p;
}

}  // namespace anon::bgsim
