#pragma once

#include "hitchin/error.hpp"
#include "hitchin/linalg.hpp"
#include "hitchin/planar.hpp"
#include "hitchin/poly.hpp"
#include "hitchin/tolerances.hpp"

#include <array>
#include <cmath>
#include <string>
#include <vector>

namespace hitchin {

namespace detail {

template <int N>
Eigen::Matrix<double, N, 1> sign_normalized(const Eigen::Matrix<double, N, 1>& v, const char* what) {
  const double n = v.norm();
  if (!(n > 0.0) || !std::isfinite(n)) fail(ErrorCode::InvalidInput, std::string(what) + " must be a nonzero finite vector");
  Eigen::Matrix<double, N, 1> u = v / n;
  for (int k = 0; k < N; ++k) {
    if (std::abs(u(k)) > 1e-12) {
      if (u(k) < 0) u = -u;
      break;
    }
  }
  return u;
}

/// Sine of the angle between two lines through the origin.
template <int N>
double line_distance(const Eigen::Matrix<double, N, 1>& a, const Eigen::Matrix<double, N, 1>& b) {
  return (a - a.dot(b) * b).norm();
}

}  // namespace detail

/// Point of RP^(N-1) in homogeneous coordinates, stored with unit norm and
/// first nonzero entry positive.
template <int N>
class HomPoint {
 public:
  using Vector = Eigen::Matrix<double, N, 1>;
  static constexpr int dim = N - 1;

  HomPoint() : v_(Vector::Unit(0)) {}
  explicit HomPoint(const Vector& v) : v_(detail::sign_normalized<N>(v, "point")) {}

  const Vector& coords() const { return v_; }
  double operator[](int k) const { return v_(k); }

  /// Projective distance: sine of the angle between representatives.
  double distance(const HomPoint& o) const { return detail::line_distance<N>(v_, o.v_); }

 private:
  Vector v_;
};

/// Hyperplane of RP^(N-1) given by its annihilating linear form.
template <int N>
class Covector {
 public:
  using Vector = Eigen::Matrix<double, N, 1>;
  static constexpr int dim = N - 1;

  Covector() : v_(Vector::Unit(N - 1)) {}
  explicit Covector(const Vector& v) : v_(detail::sign_normalized<N>(v, "covector")) {}

  const Vector& coeffs() const { return v_; }
  double operator[](int k) const { return v_(k); }
  double pair(const HomPoint<N>& p) const { return v_.dot(p.coords()); }
  double distance(const Covector& o) const { return detail::line_distance<N>(v_, o.v_); }

 private:
  Vector v_;
};

using Point1 = HomPoint<2>;
using Point2 = HomPoint<3>;
using Point3 = HomPoint<4>;
using Plane3 = Covector<4>;
using Line2 = Covector<3>;

/// Projective line of RP^3, stored as an orthonormal 4x2 basis.
class LineRP3 {
 public:
  using Basis = Eigen::Matrix<double, 4, 2>;

  LineRP3() : b_(Basis::Identity()) {}

  /// Throws DegenerateIncidence when the columns are numerically dependent.
  explicit LineRP3(const Basis& b, double tol = default_tolerances().incidence) {
    Eigen::JacobiSVD<Basis> svd(b, Eigen::ComputeFullU);
    const auto& s = svd.singularValues();
    if (!(s(0) > 0.0) || s(1) / s(0) < tol) fail(ErrorCode::DegenerateIncidence, "line basis has rank < 2");
    b_ = svd.matrixU().leftCols<2>();
  }

  const Basis& basis() const { return b_; }

  /// Distance of a point from the line: norm of the component orthogonal to it.
  double residual(const HomPoint<4>& p) const {
    return (p.coords() - b_ * (b_.transpose() * p.coords())).norm();
  }

  /// Gap between two lines as subspaces (spectral norm of projector difference).
  double distance(const LineRP3& o) const {
    const Mat4 d = b_ * b_.transpose() - o.b_ * o.b_.transpose();
    return Eigen::JacobiSVD<Mat4>(d).singularValues()(0);
  }

 private:
  Basis b_;
};

/// Four points of RP^2 in general position.
class FrameRP2 {
 public:
  FrameRP2(const std::array<HomPoint<3>, 4>& pts, double tol = default_tolerances().general_position) : pts_(pts) {
    if (general_position_margin() < tol) fail(ErrorCode::DegenerateFrame, "frame points not in general position");
  }

  /// The standard frame e1, e2, e3, e1+e2+e3.
  static FrameRP2 standard() {
    return FrameRP2({HomPoint<3>(Vec3(1, 0, 0)), HomPoint<3>(Vec3(0, 1, 0)), HomPoint<3>(Vec3(0, 0, 1)),
                     HomPoint<3>(Vec3(1, 1, 1))});
  }

  const std::array<HomPoint<3>, 4>& points() const { return pts_; }
  const HomPoint<3>& operator[](std::size_t k) const { return pts_[k]; }

  /// Smallest |det| over the four triples of unit representatives.
  double general_position_margin() const {
    double m = 1.0;
    for (std::size_t skip = 0; skip < 4; ++skip) {
      Mat3 t;
      int col = 0;
      for (std::size_t k = 0; k < 4; ++k) {
        if (k != skip) t.col(col++) = pts_[k].coords();
      }
      m = std::min(m, std::abs(t.determinant()));
    }
    return m;
  }

 private:
  std::array<HomPoint<3>, 4> pts_;
};

/// Intersection of a plane and a line in RP^3.
inline HomPoint<4> meet_plane_line(const Covector<4>& plane, const LineRP3& line,
                                   double tol = default_tolerances().incidence) {
  const Eigen::RowVector2d a = plane.coeffs().transpose() * line.basis();
  if (a.norm() < tol) fail(ErrorCode::DegenerateIncidence, "line lies in plane");
  return HomPoint<4>(line.basis() * Vec2(-a(1), a(0)));
}

/// Intersection line of two planes in RP^3.
inline LineRP3 meet_planes(const Covector<4>& p1, const Covector<4>& p2, double tol = default_tolerances().incidence) {
  Eigen::Matrix<double, 2, 4> m;
  m.row(0) = p1.coeffs().transpose();
  m.row(1) = p2.coeffs().transpose();
  Eigen::JacobiSVD<Eigen::Matrix<double, 2, 4>> svd(m, Eigen::ComputeFullV);
  if (svd.singularValues()(1) < tol) fail(ErrorCode::DegenerateIncidence, "planes are proportional");
  return LineRP3(svd.matrixV().rightCols<2>());
}

/// Line through two points of RP^3.
inline LineRP3 join_points(const HomPoint<4>& a, const HomPoint<4>& b, double tol = default_tolerances().incidence) {
  if (a.distance(b) < tol) fail(ErrorCode::DegenerateIncidence, "points coincide");
  LineRP3::Basis m;
  m.col(0) = a.coords();
  m.col(1) = b.coords();
  return LineRP3(m, tol);
}

/// Plane spanned by a line and a point off it.
inline Covector<4> join_line_point(const LineRP3& l, const HomPoint<4>& p, double tol = default_tolerances().incidence) {
  if (l.residual(p) < tol) fail(ErrorCode::DegenerateIncidence, "point lies on line");
  Eigen::Matrix<double, 4, 3> m;
  m.leftCols<2>() = l.basis();
  m.col(2) = p.coords();
  Eigen::JacobiSVD<Eigen::Matrix<double, 4, 3>> svd(m, Eigen::ComputeFullU);
  return Covector<4>(svd.matrixU().col(3));
}

/// Intersection point of two coplanar lines of RP^3.
inline HomPoint<4> meet_lines(const LineRP3& l1, const LineRP3& l2, double tol = default_tolerances().incidence) {
  Mat4 m;
  m.leftCols<2>() = l1.basis();
  m.rightCols<2>() = -l2.basis();
  Eigen::JacobiSVD<Mat4> svd(m, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  if (s(2) < tol) fail(ErrorCode::DegenerateIncidence, "lines coincide");
  if (s(3) > std::sqrt(tol)) fail(ErrorCode::DegenerateIncidence, "lines are skew");
  const Vec4 c = svd.matrixV().col(3);
  return HomPoint<4>(l1.basis() * c.head<2>());
}

/// Line of RP^2 through two points.
inline Covector<3> join_points(const HomPoint<3>& a, const HomPoint<3>& b, double tol = default_tolerances().incidence) {
  const Vec3 c = a.coords().cross(b.coords());
  if (c.norm() < tol) fail(ErrorCode::DegenerateIncidence, "points coincide");
  return Covector<3>(c);
}

/// Intersection of two lines of RP^2.
inline HomPoint<3> meet_lines(const Covector<3>& a, const Covector<3>& b, double tol = default_tolerances().incidence) {
  const Vec3 c = a.coeffs().cross(b.coeffs());
  if (c.norm() < tol) fail(ErrorCode::DegenerateIncidence, "lines coincide");
  return HomPoint<3>(c);
}

/// Unit-determinant projective map sending `src` to `dst` pointwise.
inline Mat3 frame_map(const FrameRP2& src, const FrameRP2& dst) {
  auto adapted = [](const FrameRP2& f) {
    Mat3 p;
    for (int k = 0; k < 3; ++k) p.col(k) = f[static_cast<std::size_t>(k)].coords();
    const Vec3 c = p.partialPivLu().solve(f[3].coords());
    return Mat3(p * c.asDiagonal());
  };
  const Mat3 ms = adapted(src);
  const Mat3 md = adapted(dst);
  Mat3 m = md * ms.inverse();
  const double det = m.determinant();
  if (!(std::abs(det) > 0.0)) fail(ErrorCode::DegenerateFrame, "frame map is singular");
  m /= std::cbrt(det);
  return m;
}

/// Symmetric power of A in the monomial basis x^d, x^(d-1) y, ..., y^d, normalized
/// so that the Veronese map is equivariant: row i holds the coefficients of
/// (a x + b y)^(d-i) (c x + d y)^i.
inline MatX sym_power(const Mat2& a, int degree) {
  const int n = degree + 1;
  MatX s = MatX::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    std::vector<double> poly{1.0};
    auto multiply = [&poly](double u, double v) {
      std::vector<double> out(poly.size() + 1, 0.0);
      for (std::size_t k = 0; k < poly.size(); ++k) {
        out[k] += u * poly[k];
        out[k + 1] += v * poly[k];
      }
      poly = std::move(out);
    };
    for (int k = 0; k < degree - i; ++k) multiply(a(0, 0), a(0, 1));
    for (int k = 0; k < i; ++k) multiply(a(1, 0), a(1, 1));
    for (int j = 0; j < n; ++j) s(i, j) = poly[static_cast<std::size_t>(j)];
  }
  return s;
}

namespace detail {
inline void require_unimodular(const Mat2& a, double tol) {
  if (std::abs(a.determinant() - 1.0) > tol) fail(ErrorCode::InvalidInput, "matrix must have determinant 1");
}
}  // namespace detail

inline Mat4 sym_cube(const Mat2& a, double tol = default_tolerances().det) {
  detail::require_unimodular(a, tol);
  return sym_power(a, 3);
}

inline Mat3 sym_square(const Mat2& a, double tol = default_tolerances().det) {
  detail::require_unimodular(a, tol);
  return sym_power(a, 2);
}

/// [x : y] -> [x^3 : x^2 y : x y^2 : y^3].
inline HomPoint<4> veronese_point(const HomPoint<2>& p) {
  const double x = p[0];
  const double y = p[1];
  return HomPoint<4>(Vec4(x * x * x, x * x * y, x * y * y, y * y * y));
}

/// Real eigen-decomposition of a loxodromic matrix, sorted by decreasing modulus.
template <int N>
struct EigenSplit {
  Eigen::Matrix<double, N, 1> eigenvalues;
  Eigen::Matrix<double, N, N> eigenvectors;
  Eigen::Matrix<double, N, 1> residuals;
};

namespace detail {

template <int N>
using LMat = Eigen::Matrix<long double, N, N>;
template <int N>
using LVec = Eigen::Matrix<long double, N, 1>;

/// Eigenpair for a simple real eigenvalue. The characteristic-polynomial root
/// is only a starting shift: shifted inverse iteration with the update
/// lambda = sigma + <v,v>/<v,w> converges to the nearest eigenvalue even when
/// the polynomial coefficients suffer cancellation.
template <int N>
LVec<N> eigenvector_for(const LMat<N>& a, long double& lambda) {
  const LMat<N> id = LMat<N>::Identity();
  LVec<N> v = null_vector(a - lambda * id).vector;
  long double sigma = lambda;
  for (int it = 0; it < 12; ++it) {
    const LVec<N> w = (a - sigma * id).partialPivLu().solve(v);
    const long double vw = v.dot(w);
    if (!w.allFinite() || vw == 0.0L) break;
    const long double next = sigma + v.squaredNorm() / vw;
    v = w / w.norm();
    if (next == sigma) break;
    const bool settled = std::abs(next - sigma) <= 1e-17L * std::abs(next);
    sigma = next;
    if (settled) break;
  }
  lambda = sigma;
  return v;
}

template <int N>
void check_gaps(const Eigen::Matrix<double, N, 1>& ev, double gap_tol) {
  for (int k = 0; k + 1 < N; ++k) {
    const double hi = std::abs(ev(k));
    const double lo = std::abs(ev(k + 1));
    if (!(hi > 0.0) || (hi - lo) / hi < gap_tol) fail(ErrorCode::NotLoxodromic, "eigenvalue moduli not separated");
  }
}

template <int N>
Eigen::Matrix<double, N, 1> sign_fixed(const LVec<N>& v) {
  Eigen::Matrix<double, N, 1> d = v.template cast<double>();
  d.normalize();
  Eigen::Index big = 0;
  d.cwiseAbs().maxCoeff(&big);
  if (d(big) < 0) d = -d;
  return d;
}

}  // namespace detail

/// Eigenvalues by characteristic-polynomial root isolation, eigenvectors by
/// pivoted-elimination nullspaces refined with shifted inverse iteration.
/// Throws NotLoxodromic unless the spectrum is real with strictly separated
/// moduli.
template <int N, typename Scalar>
EigenSplit<N> eigen_real(const Eigen::Matrix<Scalar, N, N>& m, const Eigen::Matrix<Scalar, N, N>& m_inv,
                         const Tolerances& tol = default_tolerances());

template <int N, typename Scalar>
EigenSplit<N> eigen_real(const Eigen::Matrix<Scalar, N, N>& m, const Tolerances& tol = default_tolerances()) {
  const detail::LMat<N> a = m.template cast<long double>();
  const Eigen::FullPivLU<detail::LMat<N>> lu(a);
  if (!lu.isInvertible()) fail(ErrorCode::NotLoxodromic, "matrix is singular");
  return eigen_real<N>(a, detail::LMat<N>(lu.inverse()), tol);
}

/// Variant taking the inverse as well, for matrices whose spectrum spans many
/// orders of magnitude (long group words): the characteristic polynomial is
/// assembled from both matrices, and the smaller half of the eigenpairs is
/// refined on `m_inv`, where those eigenvalues are dominant.
template <int N, typename Scalar>
EigenSplit<N> eigen_real(const Eigen::Matrix<Scalar, N, N>& m, const Eigen::Matrix<Scalar, N, N>& m_inv,
                         const Tolerances& tol) {
  const detail::LMat<N> a = m.template cast<long double>();
  const detail::LMat<N> b = m_inv.template cast<long double>();
  constexpr int top = (N + 1) / 2;
  std::vector<long double> roots = real_roots(char_poly_paired<long double, N>(a, b));
  std::sort(roots.begin(), roots.end(), [](long double x, long double y) { return std::abs(x) > std::abs(y); });
  if (static_cast<int>(roots.size()) < N) fail(ErrorCode::NotLoxodromic, "spectrum is not real and simple");
  EigenSplit<N> out;
  for (int k = 0; k < N; ++k) {
    long double lambda = roots[static_cast<std::size_t>(k)];
    if (k < top) {
      out.eigenvectors.col(k) = detail::sign_fixed<N>(detail::eigenvector_for<N>(a, lambda));
      out.eigenvalues(k) = static_cast<double>(lambda);
    } else {
      long double mu = 1.0L / lambda;
      out.eigenvectors.col(k) = detail::sign_fixed<N>(detail::eigenvector_for<N>(b, mu));
      out.eigenvalues(k) = static_cast<double>(1.0L / mu);
    }
  }
  detail::check_gaps<N>(out.eigenvalues, tol.gap);
  const long double scale = std::max(1.0L, a.cwiseAbs().maxCoeff());
  for (int k = 0; k < N; ++k) {
    const detail::LVec<N> v = out.eigenvectors.col(k).template cast<long double>();
    const long double r = (a * v - static_cast<long double>(out.eigenvalues(k)) * v).norm();
    out.residuals(k) = static_cast<double>(r);
    if (r > tol.eigen * scale) fail(ErrorCode::NotLoxodromic, "eigenvector residual above tolerance");
  }
  return out;
}

/// Convex hull of a planar convex polygon and an apex off its plane, in the
/// affine chart {chart = 1} of RP^3 (coordinates in an orthonormal basis of
/// the chart hyperplane).
struct ConeBody {
  std::vector<Vec3> base;
  std::vector<std::size_t> base_indices;
  Vec3 apex;

  std::vector<Vec3> vertices() const {
    std::vector<Vec3> v = base;
    v.push_back(apex);
    return v;
  }
};

/// Affine chart {c = 1} of RP^3 with orthonormal coordinates.
class AffineChart3 {
 public:
  explicit AffineChart3(const Covector<4>& c) : c_(c) {
    Eigen::JacobiSVD<Eigen::Matrix<double, 1, 4>> svd(c.coeffs().transpose(), Eigen::ComputeFullV);
    basis_ = svd.matrixV().rightCols<3>();
  }

  Vec3 operator()(const HomPoint<4>& p, double tol = default_tolerances().incidence) const {
    const double w = c_.pair(p);
    if (std::abs(w) < tol) fail(ErrorCode::UnboundedInChart, "point on the chart's plane at infinity");
    const Vec4 a = p.coords() / w;
    return basis_.transpose() * a;
  }

  HomPoint<4> lift(const Vec3& x) const { return HomPoint<4>(c_.coeffs() + basis_ * x); }

 private:
  Covector<4> c_;
  Eigen::Matrix<double, 4, 3> basis_;
};

/// Affine chart {c = 1} of RP^2. Coordinates use an orthonormal basis of c^perp
/// obtained by projecting e1, e2 (so the chart z = 1 has coordinates x/z, y/z).
class AffineChart2 {
 public:
  explicit AffineChart2(const Covector<3>& c) : c_(c) {
    const Vec3 n = c.coeffs();
    Vec3 u = Vec3::UnitX() - n.x() * n;
    if (u.norm() < 1e-6) u = Vec3::UnitZ() - n.z() * n;
    u.normalize();
    Vec3 v = n.cross(u);
    if (v.dot(Vec3::UnitY()) < 0) v = -v;
    basis_.col(0) = u;
    basis_.col(1) = v;
  }

  const Covector<3>& covector() const { return c_; }

  /// Value of the chart form on a representative (sign matters).
  double weight(const Vec3& q) const { return c_.coeffs().dot(q); }

  Vec2 operator()(const Vec3& q, double tol = default_tolerances().incidence) const {
    const double w = weight(q);
    if (std::abs(w) < tol * q.norm()) fail(ErrorCode::UnboundedInChart, "point on the chart's line at infinity");
    return basis_.transpose() * (q / w);
  }

  Vec3 lift(const Vec2& x) const { return c_.coeffs() + basis_ * x; }

 private:
  Covector<3> c_;
  Eigen::Matrix<double, 3, 2> basis_;
};

/// Convex hull of a planar polygon of RP^3 together with an apex, computed in
/// the affine chart {chart = 1}. The polygon's carrier plane is fitted through
/// its charted vertices; the apex must lie off it.
inline ConeBody cone_lift(const std::vector<HomPoint<4>>& polygon, const HomPoint<4>& apex, const Covector<4>& chart,
                          double tol = default_tolerances().incidence) {
  if (polygon.size() < 3) fail(ErrorCode::InvalidInput, "cone_lift needs at least three polygon points");
  const AffineChart3 affine(chart);
  std::vector<Vec3> pts;
  pts.reserve(polygon.size());
  for (const auto& p : polygon) pts.push_back(affine(p, tol));
  Vec3 centroid = Vec3::Zero();
  for (const auto& p : pts) centroid += p;
  centroid /= static_cast<double>(pts.size());
  Eigen::MatrixXd d(3, static_cast<Eigen::Index>(pts.size()));
  for (std::size_t k = 0; k < pts.size(); ++k) d.col(static_cast<Eigen::Index>(k)) = pts[k] - centroid;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(d, Eigen::ComputeFullU);
  const Mat3 frame = svd.matrixU();
  const Vec3 normal = frame.col(2);
  double diameter = 0.0;
  for (const auto& p : pts) diameter = std::max(diameter, (p - centroid).norm());
  const Vec3 top = affine(apex, tol);
  if (std::abs(normal.dot(top - centroid)) <= tol * std::max(1.0, diameter)) {
    fail(ErrorCode::DegenerateApex, "apex lies on the carrier plane of the polygon");
  }
  Polygon flat;
  flat.reserve(pts.size());
  for (const auto& p : pts) flat.emplace_back(frame.col(0).dot(p - centroid), frame.col(1).dot(p - centroid));
  ConeBody body;
  convex_hull(flat, &body.base_indices);
  for (auto i : body.base_indices) body.base.push_back(pts[i]);
  body.apex = top;
  return body;
}

}  // namespace hitchin
