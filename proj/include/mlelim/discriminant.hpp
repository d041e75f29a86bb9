#pragma once

#include <string>
#include <vector>

#include "mlelim/interpolate.hpp"
#include "mlelim/models.hpp"
#include "mlelim/poly.hpp"

namespace mlelim {

// D_N in the symbols c0..cN, the coefficients of c0 + c1 v + ... + cN v^N.
struct GenericDiscriminant {
  int N = 0;
  MultiPoly poly;
};

// ~B_0..~B_N with ~B_k * S^(k - e) = coeff(E_f, p0^k), e = t - l - delta.
struct TildeCoefficients {
  std::vector<MultiPoly> B;
};

// Sylvester resultant of a and b with respect to v.
MultiPoly resultant(const MultiPoly& a, const MultiPoly& b, const std::string& v);

// (-1)^(N(N-1)/2) Res_v(p, dp/dv) / lcoeff(p, v). Degree 1 gives 1.
MultiPoly discr_resultant(const MultiPoly& p, const std::string& v);

// Name of the k-th generic coefficient symbol.
std::string generic_coefficient_name(int k);

// Computed once per N and checked against both weight identities.
const GenericDiscriminant& generic_discriminant(int N);

TildeCoefficients tilde_coefficients(const MultiPoly& E_f, const StructureConstants& sc,
                                     const LagrangeSystem& sys);

// S^((N - 2e)(N - 1)) * D_N(~B_0, ..., ~B_N).
MultiPoly structured_discriminant(const MultiPoly& E_f, const StructureConstants& sc,
                                  const LagrangeSystem& sys);

}  // namespace mlelim
