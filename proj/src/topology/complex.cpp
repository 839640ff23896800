#include "anon/topology/complex.hpp"

#include <algorithm>

namespace anon::topology {

std::vector<Simplex> faces(const Simplex& s) {
  if (!s.is_set() || s.size() == 0) throw std::invalid_argument("a simplex is a non-empty set: " + s.text());
  const auto items = s.items();
  if (items.size() > 24) throw SizeLimitError("simplex too large to enumerate faces");
  std::vector<Simplex> out;
  const std::uint32_t total = 1U << items.size();
  for (std::uint32_t mask = 1; mask < total; ++mask) {
    std::vector<Value> f;
    for (std::size_t i = 0; i < items.size(); ++i)
      if ((mask >> i) & 1U) f.push_back(items[i]);
    out.push_back(Value::set(std::move(f)));
  }
  return out;
}

void Complex::insert_closed(const Simplex& s) {
  if (contains(s)) return;
  for (auto& f : faces(s)) simplices_.insert(std::move(f));
}

Complex Complex::from_facets(const std::vector<Simplex>& facets) {
  Complex c;
  for (const auto& f : facets) c.insert_closed(f);
  return c;
}

Complex Complex::full(const Value& vertices) { return from_facets({vertices}); }

Value Complex::vertices() const {
  std::vector<Value> out;
  for (const auto& s : simplices_)
    if (s.size() == 1) out.push_back(s[0]);
  return Value::set(std::move(out));
}

std::size_t Complex::vertex_count() const { return count_of_dimension(0); }

std::vector<Simplex> Complex::facets() const {
  std::vector<Simplex> out;
  for (const auto& s : simplices_) {
    bool maximal = true;
    for (const auto& t : simplices_) {
      if (t.size() > s.size() && is_subset(s, t)) {
        maximal = false;
        break;
      }
    }
    if (maximal) out.push_back(s);
  }
  return out;
}

int Complex::dimension() const {
  int d = -1;
  for (const auto& s : simplices_) d = std::max(d, static_cast<int>(s.size()) - 1);
  return d;
}

std::size_t Complex::count_of_dimension(int d) const {
  return static_cast<std::size_t>(std::count_if(simplices_.begin(), simplices_.end(), [d](const Simplex& s) {
    return static_cast<int>(s.size()) == d + 1;
  }));
}

bool Complex::is_subcomplex_of(const Complex& other) const {
  return std::all_of(simplices_.begin(), simplices_.end(), [&](const Simplex& s) { return other.contains(s); });
}

namespace {

/// Number of chains of the face poset, for the size guard.
std::size_t chain_count(const Complex& k) {
  std::vector<Simplex> order(k.simplices().begin(), k.simplices().end());
  std::stable_sort(order.begin(), order.end(), [](const Value& a, const Value& b) { return a.size() < b.size(); });
  std::vector<std::size_t> ending(order.size(), 1);
  std::size_t total = 0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j)
      if (order[j].size() < order[i].size() && is_subset(order[j], order[i])) ending[i] += ending[j];
    total += ending[i];
  }
  return total;
}

void extend(const std::vector<Simplex>& order, std::size_t from, std::vector<Value>& chain, Complex& out) {
  for (std::size_t j = from; j < order.size(); ++j) {
    if (order[j].size() <= chain.back().size() || !is_subset(chain.back(), order[j])) continue;
    chain.push_back(order[j]);
    extend(order, j + 1, chain, out);
    chain.pop_back();
  }
  out.insert_closed(Value::set(chain));
}

}  // namespace

Complex bary(const Complex& k) {
  std::vector<Simplex> order(k.simplices().begin(), k.simplices().end());
  std::stable_sort(order.begin(), order.end(), [](const Value& a, const Value& b) { return a.size() < b.size(); });
  Complex out;
  for (std::size_t i = 0; i < order.size(); ++i) {
    std::vector<Value> chain{order[i]};
    extend(order, i + 1, chain, out);
  }
  return out;
}

Complex bary_iter(const Complex& k, int b, std::size_t max_simplices) {
  if (b < 0) throw std::invalid_argument("bary_iter needs b >= 0");
  Complex cur = k;
  for (int i = 0; i < b; ++i) {
    const auto next = chain_count(cur);
    if (next > max_simplices)
      throw SizeLimitError("bary^" + std::to_string(i + 1) + " would have " + std::to_string(next) +
                           " simplices, limit " + std::to_string(max_simplices));
    cur = bary(cur);
  }
  return cur;
}

Complex skel(const Complex& k, int dim) {
  if (dim < 0) throw std::invalid_argument("skeleton dimension must be >= 0");
  Complex out;
  for (const auto& s : k.simplices())
    if (static_cast<int>(s.size()) <= dim + 1) out.insert_closed(s);
  return out;
}

Value flatten(const Value& vertex, int b) {
  Value cur = Value::set({vertex});
  for (int i = 0; i < b; ++i) cur = union_of(cur.items());
  return cur;
}

Simplex carrier(const Simplex& s, int b) {
  std::vector<Value> all;
  for (const auto& v : s.items()) {
    const Value f = flatten(v, b);
    for (const auto& x : f.items()) all.push_back(x);
  }
  return Value::set(std::move(all));
}

bool comparable(const Value& a, const Value& b) { return is_subset(a, b) || is_subset(b, a); }

bool is_bary_vertex(const Value& v, const Simplex& sigma, int b) {
  if (b == 0) return sigma.contains(v);
  return is_bary_simplex(v, sigma, b - 1);
}

bool is_bary_simplex(const Value& s, const Simplex& sigma, int b) {
  if (!s.is_set() || s.size() == 0) return false;
  for (const auto& v : s.items())
    if (!is_bary_vertex(v, sigma, b)) return false;
  if (b == 0) return true;
  const auto items = s.items();
  for (std::size_t i = 0; i < items.size(); ++i)
    for (std::size_t j = i + 1; j < items.size(); ++j)
      if (!comparable(items[i], items[j])) return false;
  return true;
}

}  // namespace anon::topology
