#pragma once

// Fixed-size integer matrices over Z/nZ. Storage is Eigen; every product,
// determinant and inverse is reduced through mul_mod so entries stay in [0, n).

#include <Eigen/Core>
#include <optional>

#include "gqr/modular.hpp"

namespace gqr {

template <int Rows, int Cols>
using MatrixMod = Eigen::Matrix<Int, Rows, Cols>;

using Mat2 = MatrixMod<2, 2>;
using Mat4 = MatrixMod<4, 4>;
using Vec4 = MatrixMod<4, 1>;

/// Entry-wise canonical reduction.
template <typename Derived>
typename Derived::PlainObject reduce_mod(const Eigen::MatrixBase<Derived>& m, Int n) {
  return m.unaryExpr([n](Int x) { return reduce(x, n); });
}

/// (lhs * rhs) mod n for reduced operands.
template <typename A, typename B>
Eigen::Matrix<Int, A::RowsAtCompileTime, B::ColsAtCompileTime> mul_mod(
    const Eigen::MatrixBase<A>& lhs, const Eigen::MatrixBase<B>& rhs, Int n) {
  Eigen::Matrix<Int, A::RowsAtCompileTime, B::ColsAtCompileTime> out(lhs.rows(), rhs.cols());
  for (Eigen::Index r = 0; r < lhs.rows(); ++r) {
    for (Eigen::Index c = 0; c < rhs.cols(); ++c) {
      Int acc = 0;
      for (Eigen::Index t = 0; t < lhs.cols(); ++t)
        acc = add_mod(acc, mul_mod(lhs(r, t), rhs(t, c), n), n);
      out(r, c) = acc;
    }
  }
  return out;
}

/// Determinant mod n by cofactor expansion (square matrices up to 4x4).
template <typename Derived>
Int det_mod(const Eigen::MatrixBase<Derived>& m, Int n) {
  const Eigen::Index size = m.rows();
  if (size == 1) return reduce(m(0, 0), n);
  if (size == 2)
    return sub_mod(mul_mod(reduce(m(0, 0), n), reduce(m(1, 1), n), n),
                   mul_mod(reduce(m(0, 1), n), reduce(m(1, 0), n), n), n);
  Int det = 0;
  Eigen::Matrix<Int, Eigen::Dynamic, Eigen::Dynamic> minor(size - 1, size - 1);
  for (Eigen::Index col = 0; col < size; ++col) {
    const Int entry = reduce(m(0, col), n);
    if (entry == 0) continue;
    for (Eigen::Index r = 1; r < size; ++r) {
      Eigen::Index mc = 0;
      for (Eigen::Index c = 0; c < size; ++c)
        if (c != col) minor(r - 1, mc++) = m(r, c);
    }
    const Int term = mul_mod(entry, det_mod(minor, n), n);
    det = (col % 2 == 0) ? add_mod(det, term, n) : sub_mod(det, term, n);
  }
  return det;
}

/// Inverse mod n via the adjugate; empty when det is not a unit.
template <int N>
std::optional<MatrixMod<N, N>> inverse_mod(const MatrixMod<N, N>& m, Int n) {
  const auto det_inv = inv_mod(det_mod(m, n), n);
  if (!det_inv) return std::nullopt;
  MatrixMod<N, N> inv;
  Eigen::Matrix<Int, Eigen::Dynamic, Eigen::Dynamic> minor(N - 1, N - 1);
  for (int r = 0; r < N; ++r) {
    for (int c = 0; c < N; ++c) {
      // cofactor of (r, c) lands at (c, r)
      for (int i = 0, mi = 0; i < N; ++i) {
        if (i == r) continue;
        for (int j = 0, mj = 0; j < N; ++j) {
          if (j == c) continue;
          minor(mi, mj++) = m(i, j);
        }
        ++mi;
      }
      Int cof = N == 1 ? 1 : det_mod(minor, n);
      if ((r + c) % 2 == 1) cof = sub_mod(0, cof, n);
      inv(c, r) = mul_mod(cof, *det_inv, n);
    }
  }
  return inv;
}

}  // namespace gqr
