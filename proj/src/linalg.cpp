#include "mlelim/linalg.hpp"

#include <utility>

#include "mlelim/errors.hpp"
#include "mlelim/polyalg.hpp"

namespace mlelim {

RatMatrix::RatMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {}

RatMatrix RatMatrix::identity(std::size_t n) {
  RatMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

std::vector<BigRational> RatMatrix::operator*(const std::vector<BigRational>& x) const {
  if (x.size() != cols_) throw Error("matrix-vector size mismatch");
  std::vector<BigRational> y(rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) y[r] += (*this)(r, c) * x[c];
  }
  return y;
}

std::vector<BigRational> solve_exact(const RatMatrix& m, const std::vector<BigRational>& rhs) {
  const std::size_t n = m.rows();
  if (m.cols() != n) throw Error("solve_exact: matrix is not square");
  if (rhs.size() != n) throw Error("solve_exact: right-hand side size mismatch");
  if (n == 0) return {};

  // Clear denominators row by row, then run Bareiss on the augmented integer matrix.
  std::vector<std::vector<BigInt>> a(n, std::vector<BigInt>(n + 1));
  for (std::size_t r = 0; r < n; ++r) {
    BigInt den = rhs[r].den();
    for (std::size_t c = 0; c < n; ++c) den = lcm(den, m(r, c).den());
    for (std::size_t c = 0; c < n; ++c) a[r][c] = (m(r, c) * BigRational(den)).num();
    a[r][n] = (rhs[r] * BigRational(den)).num();
  }

  BigInt prev = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    while (piv < n && a[piv][k] == 0) ++piv;
    if (piv == n) throw SingularMatrix("singular interpolation matrix");
    if (piv != k) std::swap(a[piv], a[k]);
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j <= n; ++j) {
        BigInt v = a[k][k] * a[i][j] - a[i][k] * a[k][j];
        mpz_divexact(a[i][j].get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
      }
      a[i][k] = 0;
    }
    prev = a[k][k];
  }

  std::vector<BigRational> x(n);
  for (std::size_t i = n; i-- > 0;) {
    BigRational acc(a[i][n]);
    for (std::size_t j = i + 1; j < n; ++j) acc -= BigRational(a[i][j]) * x[j];
    x[i] = acc / BigRational(a[i][i]);
  }
  return x;
}

MultiPoly det_exact(const PolyMatrix& m0) {
  const std::size_t n = m0.size();
  for (const auto& row : m0) {
    if (row.size() != n) throw Error("det_exact: matrix is not square");
  }
  if (n == 0) return MultiPoly::constant(1);

  PolyMatrix a = m0;
  MultiPoly prev = MultiPoly::constant(1);
  bool negate = false;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k].is_zero()) {
      std::size_t col = k + 1;
      while (col < n && a[k][col].is_zero()) ++col;
      if (col == n) return MultiPoly();
      for (auto& row : a) std::swap(row[k], row[col]);
      negate = !negate;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        MultiPoly v = a[k][k] * a[i][j] - a[i][k] * a[k][j];
        // Sylvester's identity guarantees exactness; a failure here is a bug.
        a[i][j] = exact_divide(v, prev);
      }
      a[i][k] = MultiPoly();
    }
    prev = a[k][k];
  }
  MultiPoly det = a[n - 1][n - 1];
  return negate ? -det : det;
}

}  // namespace mlelim
