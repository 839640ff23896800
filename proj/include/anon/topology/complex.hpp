#pragma once

#include <cstddef>
#include <set>
#include <stdexcept>
#include <vector>

#include "anon/value.hpp"

namespace anon::topology {

/// A simplex is a non-empty set of vertices; vertices are arbitrary values,
/// so a simplex of K is itself a vertex of bary(K).
using Simplex = Value;

/// Raised when an operation would build a complex larger than allowed.
class SizeLimitError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/**
 * Finite abstract simplicial complex, stored as the full set of its
 * simplices (closed under non-empty subsets).
 */
class Complex {
 public:
  Complex() = default;

  /// Closure of the given facets.
  static Complex from_facets(const std::vector<Simplex>& facets);
  /// The simplex on `vertices` with all its faces.
  static Complex full(const Value& vertices);

  const std::set<Simplex>& simplices() const { return simplices_; }
  std::size_t size() const { return simplices_.size(); }
  bool empty() const { return simplices_.empty(); }
  bool contains(const Simplex& s) const { return simplices_.count(s) != 0; }

  Value vertices() const;
  std::size_t vertex_count() const;
  /// Simplices not contained in a larger one.
  std::vector<Simplex> facets() const;
  /// -1 for the empty complex.
  int dimension() const;
  std::size_t count_of_dimension(int d) const;
  bool is_subcomplex_of(const Complex& other) const;

  void insert_closed(const Simplex& s);

  friend bool operator==(const Complex&, const Complex&) = default;

 private:
  std::set<Simplex> simplices_;
};

/// All non-empty subsets of a simplex.
std::vector<Simplex> faces(const Simplex& s);

/// Vertices are the simplices of K, simplices are chains under inclusion.
Complex bary(const Complex& k);

/// bary applied b times. Refuses (SizeLimitError) once an intermediate
/// complex would have more than `max_simplices` simplices.
Complex bary_iter(const Complex& k, int b, std::size_t max_simplices = 2'000'000);

/// Simplices with at most k+1 vertices.
Complex skel(const Complex& k, int dim);

/// Union of a vertex of bary^b b times: the set of original vertices it
/// is built from.
Value flatten(const Value& vertex, int b);
/// Smallest simplex of the original complex whose subdivision contains the
/// given simplex of bary^b.
Simplex carrier(const Simplex& s, int b);

/// Two sets comparable under inclusion.
bool comparable(const Value& a, const Value& b);

/// Membership tests against bary^b(sigma) that do not build the complex.
bool is_bary_vertex(const Value& v, const Simplex& sigma, int b);
bool is_bary_simplex(const Value& s, const Simplex& sigma, int b);

}  // namespace anon::topology
