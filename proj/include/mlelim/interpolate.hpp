#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mlelim/groebner.hpp"
#include "mlelim/models.hpp"
#include "mlelim/poly.hpp"
#include "mlelim/rng.hpp"

namespace mlelim {

struct PipelineOptions {
  GbOptions gb;
  // Resamples allowed per stage after a degenerate sample.
  int retries = 5;
};

// Degree data of the eliminant gathered from bivariate specializations.
struct DegreeProfile {
  int N = 0;
  std::vector<int> alpha;               // alpha_0..alpha_N
  std::vector<int> L;                   // degree of lcoeff(E_f, p0) in each parameter
  std::vector<std::vector<int>> Omega;  // Omega[i][j] = deg(coeff(E_f, p0^i), u_j); -1 if zero

  friend bool operator==(const DegreeProfile&, const DegreeProfile&) = default;
};

struct StructureConstants {
  int N = 0;
  int t = 0;
  int l = 0;
  int delta = 0;
  MultiPoly C_spec;  // cofactor observed at the specialization, univariate in u0

  // Exponent of S(u) in the structured discriminant formula.
  int s_exponent() const { return (N - 2 * (t - l - delta)) * (N - 1); }
};

struct EliminationResult {
  MultiPoly E_f;
  DegreeProfile profile;
  std::uint64_t seed = 0;
  std::size_t samples_used = 0;
  bool verified = false;
  bool reparameterized = false;
};

// An invertible linear change of parameters and the maps in both directions.
struct Reparameterization {
  LagrangeSystem system;
  std::map<std::string, MultiPoly> to_new;   // applied to the original system
  std::map<std::string, MultiPoly> to_old;   // applied to results in the new coordinates
};

// Substitutes parameters[k] -> b[k] into every equation.
LagrangeSystem specialize(const LagrangeSystem& sys, const std::vector<std::string>& names,
                          const std::vector<BigRational>& values);

DegreeProfile degrees(const LagrangeSystem& sys, SampleStream& rng, const PipelineOptions& opts = {});

// b binds parameters u_1..u_n. Returns the monic quotient of lcoeff(g, p0)
// by the alphaN-th power of the specialized sum form.
MultiPoly intersect_for_lc(const LagrangeSystem& sys, const std::vector<BigRational>& b, int alphaN,
                           const PipelineOptions& opts = {});

MultiPoly leading_coefficient(const LagrangeSystem& sys, int alphaN, const std::vector<int>& L,
                              SampleStream& rng, const PipelineOptions& opts = {},
                              std::size_t* samples = nullptr);

// b binds every parameter. Returns the monic eliminant in the first unknown;
// DegreeDrop if its degree is below `expected_degree`.
MultiPoly intersect(const LagrangeSystem& sys, const std::vector<BigRational>& b, int expected_degree = -1,
                    const PipelineOptions& opts = {});

// A_0..A_{N-1}.
std::vector<MultiPoly> coefficients(const LagrangeSystem& sys, const MultiPoly& A_N, const DegreeProfile& profile,
                                    SampleStream& rng, const PipelineOptions& opts = {},
                                    std::size_t* samples = nullptr);

// Total degree of lcoeff(E_f, p0), read off a random line through parameter space.
int leading_total_degree(const LagrangeSystem& sys, SampleStream& rng, const PipelineOptions& opts = {});

// True iff lcoeff(E_f, p0) contains a pure power of u_0 of full degree.
bool ensure_assumption_a1(const LagrangeSystem& sys, const DegreeProfile& profile, SampleStream& rng,
                          const PipelineOptions& opts = {});

// v_0 = u_0, v_j = b_j u_j + u_0 for the given (or freshly drawn) b_1..b_n.
Reparameterization reparameterize(const LagrangeSystem& sys, const std::vector<BigRational>& b);
Reparameterization reparameterize(const LagrangeSystem& sys, SampleStream& rng);

// Scales E_f so that the coefficient of u_0^deg(A_N) p_0^N is 1. Falls back to
// a monic grevlex leading term when that coefficient is absent.
MultiPoly normalize_a2(const MultiPoly& E_f, const LagrangeSystem& sys);

EliminationResult eliminate_interpolate(const LagrangeSystem& sys, std::uint64_t seed,
                                        const PipelineOptions& opts = {});

// Direct route: radical eliminant of the full symbolic system, normalized as above.
MultiPoly eliminate_groebner(const LagrangeSystem& sys, const PipelineOptions& opts = {});

StructureConstants structure_constants(const ModelSpec& m, SampleStream& rng, const PipelineOptions& opts = {});
// Same procedure at the given b (binding u_1..u_n) only.
StructureConstants structure_constants_at(const ModelSpec& m, const std::vector<BigRational>& b,
                                          const PipelineOptions& opts = {});

// Monomials in `vars` of total degree `total` with per-variable caps, in
// descending grevlex order.
std::vector<Exponents> bounded_monomials(std::size_t nvars, int total, const std::vector<int>& caps);

}  // namespace mlelim
