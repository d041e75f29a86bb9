#pragma once

#include <cstddef>
#include <vector>

#include "mlelim/poly.hpp"
#include "mlelim/rational.hpp"

namespace mlelim {

// Dense row-major matrix over Q.
class RatMatrix {
 public:
  RatMatrix(std::size_t rows, std::size_t cols);
  static RatMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  BigRational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const BigRational& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::vector<BigRational> operator*(const std::vector<BigRational>& x) const;

 private:
  std::size_t rows_, cols_;
  std::vector<BigRational> data_;
};

// Solves M x = rhs exactly. Throws SingularMatrix.
std::vector<BigRational> solve_exact(const RatMatrix& m, const std::vector<BigRational>& rhs);

using PolyMatrix = std::vector<std::vector<MultiPoly>>;

// Determinant by fraction-free elimination over the polynomial ring.
MultiPoly det_exact(const PolyMatrix& m);

}  // namespace mlelim
