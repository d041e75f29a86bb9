#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mlelim/rational.hpp"

namespace mlelim {

// Ordered variable list. Position 0 ranks highest for grevlex printing.
using Universe = std::vector<std::string>;

// Dense exponent vector over a polynomial's universe.
using Exponents = std::vector<std::uint32_t>;

// Sparse multivariate polynomial over Q with named variables.
//
// Terms are keyed by dense exponent vectors aligned with the universe, and
// never hold a zero coefficient. Binary operations on polynomials with
// different universes first extend both to the union (left operand's
// variables first). Equality aligns universes before comparing terms.
class MultiPoly {
 public:
  using TermMap = std::map<Exponents, BigRational>;

  MultiPoly();
  explicit MultiPoly(Universe universe);
  MultiPoly(std::shared_ptr<const Universe> universe, TermMap terms);

  static MultiPoly constant(const BigRational& c, Universe universe = {});
  static MultiPoly variable(const std::string& name, Universe universe = {});

  const Universe& universe() const { return *universe_; }
  const std::shared_ptr<const Universe>& universe_ptr() const { return universe_; }
  const TermMap& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  // Constant term (zero if absent).
  BigRational constant_term() const;
  std::optional<std::size_t> index_of(std::string_view var) const;

  // Variables with a nonzero exponent in some term, in universe order.
  std::vector<std::string> used_variables() const;

  // Re-embeds into `target`. Throws UnknownVariable if a used variable is
  // missing from `target`.
  MultiPoly with_universe(const Universe& target) const;
  MultiPoly with_universe(const std::shared_ptr<const Universe>& target) const;

  MultiPoly operator-() const;
  MultiPoly& operator+=(const MultiPoly& o);
  MultiPoly& operator-=(const MultiPoly& o);
  MultiPoly& operator*=(const MultiPoly& o);
  MultiPoly& operator*=(const BigRational& c);
  friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
  friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }
  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b);
  friend MultiPoly operator*(MultiPoly a, const BigRational& c) { return a *= c; }
  friend MultiPoly operator*(const BigRational& c, MultiPoly a) { return a *= c; }

  friend bool operator==(const MultiPoly& a, const MultiPoly& b);

  MultiPoly pow(unsigned k) const;

  // Degree in `var`; -1 for the zero polynomial.
  int degree(std::string_view var) const;
  // Total degree; -1 for the zero polynomial.
  int total_degree() const;
  bool is_homogeneous(std::span<const std::string> vars) const;
  // Coefficient of var^k as a polynomial in the remaining variables.
  MultiPoly coeff_of(std::string_view var, unsigned k) const;
  MultiPoly lcoeff(std::string_view var) const;
  MultiPoly derivative(std::string_view var) const;

  // Leading term under grevlex on this polynomial's universe.
  const Exponents& leading_exponents() const;
  const BigRational& leading_coefficient() const;

  // Simultaneous substitution. Unbound variables are untouched.
  MultiPoly substitute(const std::map<std::string, MultiPoly>& bindings) const;
  MultiPoly substitute(const std::map<std::string, BigRational>& bindings) const;
  BigRational eval(const std::map<std::string, BigRational>& point) const;

  // Primitive over Z with positive leading coefficient (grevlex).
  MultiPoly normalized() const;
  // Divides by the grevlex leading coefficient.
  MultiPoly monic() const;

  // Canonical text form in the polynomial grammar, terms in descending grevlex.
  std::string to_string() const;

 private:
  std::shared_ptr<const Universe> universe_;
  TermMap terms_;

  void add_scaled(const MultiPoly& o, const BigRational& scale);
  friend std::pair<MultiPoly, MultiPoly> align(const MultiPoly& a, const MultiPoly& b);
};

std::ostream& operator<<(std::ostream& os, const MultiPoly& p);

// Extends both operands to a common universe.
std::pair<MultiPoly, MultiPoly> align(const MultiPoly& a, const MultiPoly& b);

// Universe union preserving first-seen order.
Universe merge_universes(const Universe& a, const Universe& b);

// Grevlex comparison: true iff a > b. Lower index ranks higher.
bool grevlex_greater(const Exponents& a, const Exponents& b);

// Parses text in the polynomial grammar. Every identifier must be in
// `universe`; the result uses `universe` as its universe.
MultiPoly parse_poly(std::string_view text, const Universe& universe);

// Parses and collects identifiers in order of first appearance.
MultiPoly parse_poly(std::string_view text);

// Sum of the given variables.
MultiPoly sum_of(const Universe& vars);

}  // namespace mlelim
