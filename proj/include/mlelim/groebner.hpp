#pragma once

#include <chrono>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "mlelim/poly.hpp"

namespace mlelim {

// Monomial order over an explicit variable ranking (earlier = larger).
//
// Block orders compare the high block by grevlex first and break ties by
// grevlex on the low block, so any term containing a high variable is larger
// than every term in the low variables alone.
struct MonomialOrder {
  enum class Kind { kLex, kGrevlex, kBlock };

  Kind kind = Kind::kGrevlex;
  std::vector<std::string> high;  // full ranking for lex/grevlex
  std::vector<std::string> low;   // block orders only

  static MonomialOrder lex(std::vector<std::string> ranking);
  static MonomialOrder grevlex(std::vector<std::string> ranking);
  static MonomialOrder block(std::vector<std::string> high_block, std::vector<std::string> low_block);

  std::vector<std::string> variables() const;
  bool operator==(const MonomialOrder&) const = default;
};

struct GbOptions {
  // Maximum number of S-pair reductions per call.
  std::size_t pair_budget = 200000;
  // Optional wall-clock cap, also reported as ResourceLimit.
  std::optional<std::chrono::milliseconds> time_limit;
  // Elimination over Q by reduction modulo word-size primes, Chinese
  // remaindering and rational reconstruction. The reconstruction is accepted
  // once an independent prime confirms it. When false, elimination runs the
  // fraction-free engine over Q directly.
  bool modular = true;
};

struct GroebnerBasis {
  std::vector<MultiPoly> generators;  // monic, sorted by leading term descending
  MonomialOrder order;
  bool reduced = false;
};

// Reduced Groebner basis of <gens>. Throws ResourceLimit past the budget.
GroebnerBasis buchberger(const std::vector<MultiPoly>& gens, const MonomialOrder& order,
                         const GbOptions& options = {});

// Full normal form of p modulo the basis over Q, in the order's variables.
MultiPoly normal_form(const MultiPoly& p, const GroebnerBasis& basis);

// Leading monomial of p under `order` (as a MultiPoly term with coefficient 1).
MultiPoly leading_monomial(const MultiPoly& p, const MonomialOrder& order);

// True iff every S-polynomial of generator pairs reduces to zero.
bool satisfies_buchberger_criterion(const GroebnerBasis& basis);

// Groebner basis of <gens> ∩ Q[keep] under a block order placing `keep`
// lowest. Returned polynomials are monic and use `keep` as their universe.
std::vector<MultiPoly> eliminate_vars(const std::vector<MultiPoly>& gens,
                                      const std::vector<std::string>& keep,
                                      const GbOptions& options = {});

// Squarefree generator of the radical of the (principal) elimination ideal.
// Univariate results are monic; otherwise primitive with positive leading
// coefficient. Throws ZeroIdeal or NonPrincipal.
MultiPoly radical_elim_generator(const std::vector<MultiPoly>& gens,
                                 const std::vector<std::string>& keep,
                                 const GbOptions& options = {});

// Radical generator of the elimination ideal onto Q[param, var]. Instead of a
// block-order basis it eliminates down to `var` at param = 1, 2, 3, ... and
// recovers the coefficients as rational functions of `param`, accepting the
// reconstruction once it predicts two further points. Primitive with positive
// leading coefficient, universe {param, var}. Throws ZeroIdeal, or
// DegreeDrop if the reconstruction never stabilizes.
MultiPoly radical_elim_bivariate(const std::vector<MultiPoly>& gens, const std::string& param,
                                 const std::string& var, const GbOptions& options = {});

}  // namespace mlelim
