#include "mlelim/discriminant.hpp"

#include <bit>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <unordered_map>

#include "mlelim/errors.hpp"
#include "mlelim/linalg.hpp"
#include "mlelim/polyalg.hpp"

namespace mlelim {

namespace {

// Division-free determinant by expansion along columns, memoized over row
// subsets. Every product is a matrix entry times a minor, which stays cheap
// when the entries are much smaller than the determinant.
MultiPoly det_by_minors(const PolyMatrix& m) {
  const std::size_t n = m.size();
  std::unordered_map<std::uint32_t, MultiPoly> prev{{0U, MultiPoly::constant(1)}};
  for (std::size_t col = 0; col < n; ++col) {
    std::unordered_map<std::uint32_t, MultiPoly> next;
    for (const auto& [rows, minor] : prev) {
      if (minor.is_zero()) continue;
      for (std::size_t r = 0; r < n; ++r) {
        if ((rows >> r) & 1U || m[r][col].is_zero()) continue;
        // Sign of placing row r after the rows already used above it.
        const int above = std::popcount(rows >> r);
        MultiPoly term = m[r][col] * minor;
        if (above % 2) term = -term;
        auto [it, inserted] = next.try_emplace(rows | (1U << r), std::move(term));
        if (!inserted) it->second += term;
      }
    }
    prev = std::move(next);
  }
  auto it = prev.find((n == 32 ? 0U : (1U << n)) - 1U);
  return it == prev.end() ? MultiPoly() : it->second;
}

PolyMatrix sylvester_matrix(const MultiPoly& a, const MultiPoly& b, const std::string& v) {
  const int m = a.degree(v);
  const int n = b.degree(v);
  const auto size = static_cast<std::size_t>(m + n);
  PolyMatrix sylvester(size, std::vector<MultiPoly>(size));
  // Row r holds the coefficients of v^(n-1-r) * a, highest power first.
  for (int r = 0; r < n; ++r) {
    for (int k = 0; k <= m; ++k) sylvester[r][r + (m - k)] = a.coeff_of(v, static_cast<unsigned>(k));
  }
  for (int r = 0; r < m; ++r) {
    for (int k = 0; k <= n; ++k) sylvester[n + r][r + (n - k)] = b.coeff_of(v, static_cast<unsigned>(k));
  }
  return sylvester;
}

MultiPoly determinant(const PolyMatrix& m) {
  if (m.empty()) return MultiPoly::constant(1);
  if (m.size() <= 16) return det_by_minors(m);
  return det_exact(m);
}

}  // namespace

MultiPoly resultant(const MultiPoly& a, const MultiPoly& b, const std::string& v) {
  const int m = a.degree(v);
  const int n = b.degree(v);
  if (m < 0 || n < 0) return MultiPoly();
  if (m == 0 && n == 0) return MultiPoly::constant(1);
  return determinant(sylvester_matrix(a, b, v));
}

MultiPoly discr_resultant(const MultiPoly& p, const std::string& v) {
  const int N = p.degree(v);
  if (N < 1) throw Error("discriminant needs positive degree in " + v);
  if (N == 1) return MultiPoly::constant(1);
  PolyMatrix syl = sylvester_matrix(p, p.derivative(v), v);
  // Subtracting N times row 0 from the first derivative row leaves lcoeff(p)
  // alone in column 0, so Res(p, p') / lcoeff(p) is the complementary minor.
  const auto first = static_cast<std::size_t>(N - 1);
  for (std::size_t j = 0; j < syl.size(); ++j) syl[first][j] -= BigRational(N) * syl[0][j];
  PolyMatrix minor;
  for (std::size_t i = 1; i < syl.size(); ++i) minor.emplace_back(syl[i].begin() + 1, syl[i].end());
  MultiPoly d = determinant(minor);
  if ((N * (N - 1) / 2) % 2 != 0) return -d;
  return d;
}

std::string generic_coefficient_name(int k) { return "c" + std::to_string(k); }

namespace {

GenericDiscriminant build_generic(int N) {
  MultiPoly v = MultiPoly::variable("v");
  MultiPoly p;
  for (int k = N; k >= 0; --k) p = p * v + MultiPoly::variable(generic_coefficient_name(k));
  GenericDiscriminant g;
  g.N = N;
  Universe names;
  for (int k = 0; k <= N; ++k) names.push_back(generic_coefficient_name(k));
  g.poly = discr_resultant(p, "v").with_universe(names);
  for (const auto& [e, c] : g.poly.terms()) {
    long total = 0, weighted = 0;
    for (int k = 0; k <= N; ++k) {
      total += e[k];
      weighted += static_cast<long>(N - k) * e[k];
    }
    if (total != 2L * N - 2 || weighted != static_cast<long>(N) * (N - 1)) {
      throw Error("generic discriminant D_" + std::to_string(N) + " fails a weight identity");
    }
  }
  return g;
}

}  // namespace

const GenericDiscriminant& generic_discriminant(int N) {
  if (N < 1) throw Error("generic discriminant needs N >= 1");
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<GenericDiscriminant>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[N];
  if (!slot) slot = std::make_unique<GenericDiscriminant>(build_generic(N));
  return *slot;
}

TildeCoefficients tilde_coefficients(const MultiPoly& E_f, const StructureConstants& sc,
                                     const LagrangeSystem& sys) {
  const std::string& p0 = sys.first_unknown();
  if (E_f.degree(p0) != sc.N) {
    throw StructureViolation("degree of E_f in " + p0 + " differs from N = " + std::to_string(sc.N));
  }
  const int e = sc.t - sc.l - sc.delta;
  TildeCoefficients out;
  for (int k = 0; k <= sc.N; ++k) {
    MultiPoly c = E_f.coeff_of(p0, static_cast<unsigned>(k));
    if (k <= e) {
      out.B.push_back(c * sys.sum_form.pow(static_cast<unsigned>(e - k)));
      continue;
    }
    for (int r = 0; r < k - e; ++r) {
      auto q = try_exact_divide(c, sys.sum_form);
      if (!q) {
        throw StructureViolation("S(u)^" + std::to_string(k - e) + " does not divide the coefficient of " + p0 +
                                 "^" + std::to_string(k));
      }
      c = std::move(*q);
    }
    out.B.push_back(std::move(c));
  }
  return out;
}

MultiPoly structured_discriminant(const MultiPoly& E_f, const StructureConstants& sc,
                                  const LagrangeSystem& sys) {
  if (sc.N < 2) throw Error("structured discriminant needs N >= 2");
  const TildeCoefficients tilde = tilde_coefficients(E_f, sc, sys);
  const GenericDiscriminant& D = generic_discriminant(sc.N);

  // Powers of each ~B_k, filled on demand.
  std::vector<std::vector<MultiPoly>> powers(tilde.B.size());
  auto power = [&](std::size_t k, unsigned j) -> const MultiPoly& {
    auto& table = powers[k];
    if (table.empty()) table.push_back(MultiPoly::constant(1));
    while (table.size() <= j) table.push_back(table.back() * tilde.B[k]);
    return table[j];
  };
  MultiPoly sum;
  for (const auto& [e, c] : D.poly.terms()) {
    MultiPoly term = MultiPoly::constant(c);
    for (std::size_t k = 0; k < e.size(); ++k) {
      if (e[k]) term *= power(k, e[k]);
    }
    sum += term;
  }
  const int exponent = sc.s_exponent();
  if (exponent >= 0) return sum * sys.sum_form.pow(static_cast<unsigned>(exponent));
  for (int r = 0; r < -exponent; ++r) {
    auto q = try_exact_divide(sum, sys.sum_form);
    if (!q) throw StructureViolation("D_N of the tilde coefficients is not divisible by S(u)");
    sum = std::move(*q);
  }
  return sum;
}

}  // namespace mlelim
