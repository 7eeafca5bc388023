#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

namespace hitchin {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Mat2 = Eigen::Matrix2d;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;
using MatX = Eigen::MatrixXd;
using VecX = Eigen::VectorXd;

template <typename Scalar, int N>
using SquareMat = Eigen::Matrix<Scalar, N, N>;

/// Result of a pivoted-elimination nullspace solve. `pivot_margin` is the
/// magnitude of the last (rejected) pivot relative to the first one; it is
/// close to zero when the matrix really is rank deficient by one.
template <typename Scalar>
struct NullVector {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> vector;
  Scalar pivot_margin;
};

/// One-dimensional nullspace of a square (or wide) matrix by Gaussian
/// elimination with full pivoting. The column left without a pivot is the
/// free variable; it is set to one and the rest is back-substituted.
template <typename Derived>
NullVector<typename Derived::Scalar> null_vector(const Eigen::MatrixBase<Derived>& input) {
  using Scalar = typename Derived::Scalar;
  using std::abs;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> a = input;
  const Eigen::Index rows = a.rows();
  const Eigen::Index cols = a.cols();
  const Eigen::Index steps = std::min(rows, cols - 1);

  std::vector<Eigen::Index> col_perm(static_cast<std::size_t>(cols));
  std::iota(col_perm.begin(), col_perm.end(), Eigen::Index{0});

  Scalar first_pivot = 0;
  for (Eigen::Index k = 0; k < steps; ++k) {
    Eigen::Index pr = k;
    Eigen::Index pc = k;
    a.bottomRightCorner(rows - k, cols - k).cwiseAbs().maxCoeff(&pr, &pc);
    pr += k;
    pc += k;
    a.row(k).swap(a.row(pr));
    a.col(k).swap(a.col(pc));
    std::swap(col_perm[static_cast<std::size_t>(k)], col_perm[static_cast<std::size_t>(pc)]);
    const Scalar piv = a(k, k);
    if (k == 0) first_pivot = abs(piv);
    if (piv == Scalar(0)) break;
    for (Eigen::Index r = k + 1; r < rows; ++r) {
      const Scalar f = a(r, k) / piv;
      a.row(r).tail(cols - k) -= f * a.row(k).tail(cols - k);
      a(r, k) = 0;
    }
  }

  Scalar rest = 0;
  if (steps < rows) rest = a.bottomRightCorner(rows - steps, cols - steps).cwiseAbs().maxCoeff();

  // Solve the upper-triangular block for the pivoted unknowns with the last
  // unpivoted unknown fixed to one.
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> y = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Zero(cols);
  y(steps) = 1;
  for (Eigen::Index k = steps - 1; k >= 0; --k) {
    Scalar s = 0;
    for (Eigen::Index j = k + 1; j <= steps; ++j) s += a(k, j) * y(j);
    y(k) = a(k, k) == Scalar(0) ? Scalar(0) : -s / a(k, k);
  }

  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> x = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Zero(cols);
  for (Eigen::Index k = 0; k < cols; ++k) x(col_perm[static_cast<std::size_t>(k)]) = y(k);
  x /= x.norm();
  const Scalar margin = first_pivot > Scalar(0) ? rest / first_pivot : Scalar(0);
  return {x, margin};
}

/// Orthonormal basis (as columns) of the orthogonal complement of the column
/// span of `a`, computed from a full SVD.
inline MatX orthogonal_complement(const MatX& a) {
  Eigen::JacobiSVD<MatX> svd(a.transpose(), Eigen::ComputeFullV);
  const Eigen::Index n = a.rows();
  const Eigen::Index k = a.cols();
  return svd.matrixV().rightCols(n - k);
}

/// Smallest singular value divided by the largest.
inline double relative_min_singular(const MatX& a) {
  Eigen::JacobiSVD<MatX> svd(a);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0.0;
  return s(s.size() - 1) / s(0);
}

/// Smallest singular value.
inline double min_singular(const MatX& a) {
  Eigen::JacobiSVD<MatX> svd(a);
  const auto& s = svd.singularValues();
  return s.size() == 0 ? 0.0 : s(s.size() - 1);
}

/// Inverse computed in long double with partial pivoting, rounded back.
template <int N>
SquareMat<double, N> accurate_inverse(const SquareMat<double, N>& m) {
  const SquareMat<long double, N> ml = m.template cast<long double>();
  const SquareMat<long double, N> inv = ml.partialPivLu().inverse();
  return inv.template cast<double>();
}

}  // namespace hitchin
