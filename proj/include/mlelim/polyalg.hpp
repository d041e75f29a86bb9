#pragma once

#include <optional>
#include <string_view>
#include <utility>

#include "mlelim/poly.hpp"

namespace mlelim {

struct DivisionResult {
  MultiPoly quotient;
  MultiPoly remainder;
};

// Multivariate division with remainder by the grevlex leading term of `b`.
DivisionResult divide(const MultiPoly& a, const MultiPoly& b);

// Quotient if `b` divides `a` exactly, otherwise nullopt.
std::optional<MultiPoly> try_exact_divide(const MultiPoly& a, const MultiPoly& b);

// Throws DivisionFailure when the remainder is nonzero.
MultiPoly exact_divide(const MultiPoly& a, const MultiPoly& b);

// Pseudo-remainder of a by b viewed as polynomials in `var`.
MultiPoly pseudo_remainder(const MultiPoly& a, const MultiPoly& b, std::string_view var);

// Normalized greatest common divisor (primitive over Z, positive grevlex
// leading coefficient). gcd(a, 0) = normalized a; gcd(0, 0) = 0.
MultiPoly gcd_poly(const MultiPoly& a, const MultiPoly& b);

// GCD of the coefficients of `p` viewed as a polynomial in `var`.
MultiPoly content_in(const MultiPoly& p, std::string_view var);

// p / gcd(p, dp/dv for every v), normalized. Requires p nonzero.
MultiPoly squarefree_part(const MultiPoly& p);

struct Multiplicity {
  int k;
  MultiPoly cofactor;
};

// Largest k with f^k | p, and p / f^k. Requires f nonconstant, p nonzero.
Multiplicity factor_multiplicity(const MultiPoly& p, const MultiPoly& f);

}  // namespace mlelim
