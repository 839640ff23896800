#pragma once

#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>

#include "anon/topology/complex.hpp"

namespace anon::topology {

/// Raised for tables that do not describe a map (missing vertices, etc.).
class MalformedMap : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Assigns to each simplex of an input complex a subcomplex of the outputs.
class CarrierMap {
 public:
  CarrierMap() = default;
  static CarrierMap from_function(const Complex& input, const std::function<Complex(const Simplex&)>& f);

  void set(const Simplex& s, Complex image) { table_[s] = std::move(image); }
  const Complex& operator()(const Simplex& s) const;
  bool defined_on(const Simplex& s) const { return table_.count(s) != 0; }
  const std::map<Simplex, Complex>& table() const { return table_; }

  /// Throws MalformedMap unless defined on every simplex of `input` and
  /// monotone: s' inside s implies image(s') inside image(s).
  void validate(const Complex& input) const;

 private:
  std::map<Simplex, Complex> table_;
};

struct ColorlessTask {
  Complex input;
  Complex output;
  CarrierMap delta;

  /// Carrier total and monotone on the inputs, images inside the outputs.
  void validate() const;
  /// The same task with inputs cut down to `sub`.
  ColorlessTask restricted_to(const Complex& sub) const;
};

/// Inputs: every non-empty subset of `values`. Outputs and carrier: the
/// k-skeleton, i.e. at most k+1 distinct values, all from the input simplex.
ColorlessTask make_kset_task(const Value& values, int k);

/// Vertex map from bary^b of the inputs to the outputs.
struct SimplicialMapTable {
  int b = 0;
  std::map<Value, Value> vertex_map;

  const Value& at(const Value& vertex) const;
  /// Image of a simplex (set of vertex images).
  Simplex image(const Simplex& s) const;
};

/// Sends a vertex of bary^b(I) to the smallest original value it carries.
SimplicialMapTable min_of_carrier_map(const Complex& input, int b);
SimplicialMapTable identity_map(const Complex& input);

struct CarriedVerdict {
  bool pass = true;
  std::string detail;
  std::optional<Simplex> witness;  // offending simplex of bary^b(I)
};

/**
 * Checks that delta is simplicial into the outputs and that every simplex
 * of bary^b(sigma) lands in Delta(sigma). Throws MalformedMap if delta is
 * undefined on some vertex of bary^b(I).
 */
CarriedVerdict check_carried(const SimplicialMapTable& delta, const ColorlessTask& task);

// ---- text formats -----------------------------------------------------------
// Complex: one facet per line, vertices as whitespace-separated tokens
// (integers or bare words); '#' starts a comment.
// Carrier map: "v1 v2 -> f1 ; f2", image given by its facets.
// Vertex map: "<json vertex> -> <json vertex>" per line.

Value parse_token(const std::string& tok);
Complex read_complex(std::istream& is);
void write_complex(std::ostream& os, const Complex& k);
CarrierMap read_carrier_map(std::istream& is);
SimplicialMapTable read_vertex_map(std::istream& is, int b);
void write_vertex_map(std::ostream& os, const SimplicialMapTable& m);

}  // namespace anon::topology
