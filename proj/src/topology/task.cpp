#include "anon/topology/task.hpp"

#include <istream>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace anon::topology {

CarrierMap CarrierMap::from_function(const Complex& input, const std::function<Complex(const Simplex&)>& f) {
  CarrierMap m;
  for (const auto& s : input.simplices()) m.set(s, f(s));
  return m;
}

const Complex& CarrierMap::operator()(const Simplex& s) const {
  auto it = table_.find(s);
  if (it == table_.end()) throw MalformedMap("carrier map undefined on " + s.text());
  return it->second;
}

void CarrierMap::validate(const Complex& input) const {
  for (const auto& s : input.simplices()) {
    const auto& img = (*this)(s);
    for (const auto& f : faces(s))
      if (!(*this)(f).is_subcomplex_of(img))
        throw MalformedMap("carrier map not monotone: image of " + f.text() + " not inside image of " + s.text());
  }
}

void ColorlessTask::validate() const {
  delta.validate(input);
  for (const auto& s : input.simplices())
    if (!delta(s).is_subcomplex_of(output))
      throw MalformedMap("image of " + s.text() + " leaves the output complex");
}

ColorlessTask ColorlessTask::restricted_to(const Complex& sub) const {
  if (!sub.is_subcomplex_of(input)) throw std::invalid_argument("restriction is not a subcomplex of the inputs");
  ColorlessTask t;
  t.input = sub;
  t.output = output;
  for (const auto& s : sub.simplices()) t.delta.set(s, delta(s));
  return t;
}

ColorlessTask make_kset_task(const Value& values, int k) {
  if (!values.is_set() || values.size() == 0) throw std::invalid_argument("k-set agreement needs at least one value");
  if (k < 0) throw std::invalid_argument("k must be >= 0");
  ColorlessTask t;
  t.input = Complex::full(values);
  t.output = skel(t.input, k);
  t.delta = CarrierMap::from_function(t.input, [k](const Simplex& s) { return skel(Complex::full(s), k); });
  return t;
}

const Value& SimplicialMapTable::at(const Value& vertex) const {
  auto it = vertex_map.find(vertex);
  if (it == vertex_map.end()) throw MalformedMap("vertex map undefined on " + vertex.text());
  return it->second;
}

Simplex SimplicialMapTable::image(const Simplex& s) const {
  std::vector<Value> out;
  for (const auto& v : s.items()) out.push_back(at(v));
  return Value::set(std::move(out));
}

SimplicialMapTable min_of_carrier_map(const Complex& input, int b) {
  SimplicialMapTable m;
  m.b = b;
  const Complex sub = bary_iter(input, b);
  const Value vs = sub.vertices();
  for (const auto& v : vs.items()) m.vertex_map[v] = set_min(flatten(v, b));
  return m;
}

SimplicialMapTable identity_map(const Complex& input) {
  SimplicialMapTable m;
  const Value vs = input.vertices();
  for (const auto& v : vs.items()) m.vertex_map[v] = v;
  return m;
}

CarriedVerdict check_carried(const SimplicialMapTable& delta, const ColorlessTask& task) {
  const Complex sub = bary_iter(task.input, delta.b);
  const Value vs = sub.vertices();
  for (const auto& v : vs.items()) delta.at(v);  // totality

  for (const auto& s : sub.simplices()) {
    const Simplex img = delta.image(s);
    if (!task.output.contains(img))
      return {false, "image " + img.text() + " of " + s.text() + " is not a simplex of the outputs", s};
    const Simplex sigma = carrier(s, delta.b);
    if (!task.delta(sigma).contains(img))
      return {false, "image " + img.text() + " of " + s.text() + " leaves the carrier of " + sigma.text(), s};
  }
  return {};
}

// ---- text formats -----------------------------------------------------------

Value parse_token(const std::string& tok) {
  if (tok.empty()) throw std::invalid_argument("empty vertex token");
  std::size_t pos = 0;
  try {
    long long v = std::stoll(tok, &pos);
    if (pos == tok.size()) return Value(static_cast<std::int64_t>(v));
  } catch (const std::exception&) {
  }
  return Value::str(tok);
}

namespace {

std::string strip_comment(const std::string& line) {
  auto h = line.find('#');
  return h == std::string::npos ? line : line.substr(0, h);
}

Simplex parse_simplex(const std::string& text) {
  std::istringstream in(text);
  std::vector<Value> vs;
  std::string tok;
  while (in >> tok) vs.push_back(parse_token(tok));
  if (vs.empty()) throw std::invalid_argument("empty simplex");
  return Value::set(std::move(vs));
}

std::string token_text(const Value& v) { return v.is_str() ? v.as_str() : v.text(); }

}  // namespace

Complex read_complex(std::istream& is) {
  std::vector<Simplex> facets;
  std::string line;
  while (std::getline(is, line)) {
    line = strip_comment(line);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    facets.push_back(parse_simplex(line));
  }
  return Complex::from_facets(facets);
}

void write_complex(std::ostream& os, const Complex& k) {
  for (const auto& f : k.facets()) {
    bool first = true;
    for (const auto& v : f.items()) {
      os << (first ? "" : " ") << token_text(v);
      first = false;
    }
    os << '\n';
  }
}

CarrierMap read_carrier_map(std::istream& is) {
  CarrierMap m;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    line = strip_comment(line);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto arrow = line.find("->");
    if (arrow == std::string::npos) throw MalformedMap("carrier line " + std::to_string(lineno) + ": missing '->'");
    const Simplex s = parse_simplex(line.substr(0, arrow));
    std::vector<Simplex> facets;
    std::istringstream rest(line.substr(arrow + 2));
    std::string part;
    while (std::getline(rest, part, ';'))
      if (part.find_first_not_of(" \t\r") != std::string::npos) facets.push_back(parse_simplex(part));
    m.set(s, Complex::from_facets(facets));
  }
  return m;
}

SimplicialMapTable read_vertex_map(std::istream& is, int b) {
  SimplicialMapTable m;
  m.b = b;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos || line[line.find_first_not_of(" \t")] == '#') continue;
    auto arrow = line.find("->");
    if (arrow == std::string::npos) throw MalformedMap("map line " + std::to_string(lineno) + ": missing '->'");
    try {
      auto from = value_from_json(nlohmann::ordered_json::parse(line.substr(0, arrow)));
      auto to = value_from_json(nlohmann::ordered_json::parse(line.substr(arrow + 2)));
      m.vertex_map[from] = to;
    } catch (const nlohmann::json::exception& ex) {
      throw MalformedMap("map line " + std::to_string(lineno) + ": " + ex.what());
    }
  }
  return m;
}

void write_vertex_map(std::ostream& os, const SimplicialMapTable& m) {
  for (const auto& [from, to] : m.vertex_map) os << to_json(from).dump() << " -> " << to_json(to).dump() << '\n';
}

}  // namespace anon::topology
