#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mlelim/poly.hpp"

namespace mlelim {

// An algebraic statistical model given by homogeneous invariants in the
// unknowns p_0..p_n. The first unknown is the one kept by elimination.
struct ModelSpec {
  std::string name;
  std::vector<std::string> unknowns;
  std::vector<MultiPoly> invariants;
  bool heavy = false;

  std::size_t n() const { return unknowns.size() - 1; }
  std::size_t s() const { return invariants.size(); }

  // Throws ModelError on an empty model or a name clash with reserved
  // parameter/multiplier names, NonHomogeneousInvariant on a bad invariant.
  void validate() const;

  friend bool operator==(const ModelSpec&, const ModelSpec&) = default;
};

// Parameter, multiplier and scaled-unknown names used by the builders.
std::string param_name(std::size_t i);       // u<i>
std::string multiplier_name(std::size_t j);  // l<j>, j >= 1
std::string scaled_name(std::size_t i);      // x<i>

// A parametric polynomial system whose eliminant in (parameters, unknowns[0])
// is wanted. `sum_form` is the linear form S(u) whose powers divide the
// eliminant's coefficients; for likelihood systems it is u_0 + ... + u_n.
struct LagrangeSystem {
  std::vector<MultiPoly> equations;
  std::vector<std::string> parameters;
  std::vector<std::string> unknowns;
  MultiPoly sum_form;
  std::optional<ModelSpec> source;

  const std::string& first_unknown() const { return unknowns.front(); }
  // Parameters followed by the first unknown.
  std::vector<std::string> kept_variables() const;
};

struct ScaledSystem {
  std::vector<MultiPoly> equations;
  std::vector<std::string> parameters;
  std::vector<std::string> unknowns;  // x_0..x_n then the multipliers
  MultiPoly sum_form;
  int d = 0;
  std::optional<ModelSpec> source;

  // Scaled systems share the elimination interface of likelihood systems.
  LagrangeSystem as_system() const;
};

LagrangeSystem likelihood_system(const ModelSpec& m);
ScaledSystem scaled_system(const ModelSpec& m);

// Determinant of the Jacobian of the equations with respect to the unknowns.
MultiPoly jacobian_det(const LagrangeSystem& sys);

// The die, the fair coin, three small models and six heavy ones.
const std::vector<ModelSpec>& builtin_models();
// Throws ModelError for an unknown name.
const ModelSpec& builtin_model(std::string_view name);

// Line-oriented model text format.
ModelSpec parse_model(std::string_view text);
std::string serialize_model(const ModelSpec& m);
ModelSpec load_model_file(const std::string& path);

}  // namespace mlelim
