#pragma once

// Reference computations used to check the library. Each one takes a route
// that shares no code with the routine under test.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// RMS algebraic residual of the best conic through `pts`: the smallest
/// singular value of the row-normalized design matrix over sqrt(rows).
inline double conic_fit_residual(const std::vector<Vec2>& pts) {
  Eigen::MatrixXd d(static_cast<Eigen::Index>(pts.size()), 6);
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const double x = pts[k].x(), y = pts[k].y();
    Eigen::Matrix<double, 1, 6> row;
    row << x * x, x * y, y * y, x, y, 1.0;
    d.row(static_cast<Eigen::Index>(k)) = row / row.norm();
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(d);
  return svd.singularValues()(5) / std::sqrt(static_cast<double>(pts.size()));
}

inline double support(const std::vector<Vec2>& poly, const Vec2& u) {
  double h = -INFINITY;
  for (const auto& p : poly) h = std::max(h, p.dot(u));
  return h;
}

/// Hausdorff distance of the convex hulls of two point sets as the largest
/// gap between their support functions. The gap is piecewise of the form
/// <p - q, u> between normal-fan breakpoints, so its maximum is attained at
/// an edge normal of either set or along some normalized difference p - q.
inline double support_hausdorff(const std::vector<Vec2>& a, const std::vector<Vec2>& b) {
  std::vector<Vec2> dirs;
  auto add_normals = [&](const std::vector<Vec2>& s) {
    for (std::size_t i = 0; i < s.size(); ++i) {
      for (std::size_t j = i + 1; j < s.size(); ++j) {
        const Vec2 e = s[j] - s[i];
        if (e.norm() == 0) continue;
        dirs.emplace_back(Vec2(e.y(), -e.x()).normalized());
      }
    }
  };
  // Edge normals are among the pair normals; restrict to consecutive pairs
  // when the input is already a convex polygon in order.
  auto add_edges = [&](const std::vector<Vec2>& s) {
    for (std::size_t i = 0; i < s.size(); ++i) {
      const Vec2 e = s[(i + 1) % s.size()] - s[i];
      if (e.norm() == 0) continue;
      dirs.emplace_back(Vec2(e.y(), -e.x()).normalized());
      dirs.emplace_back(-dirs.back());
    }
  };
  if (a.size() <= 3 || b.size() <= 3) {
    add_normals(a);
    add_normals(b);
  } else {
    add_edges(a);
    add_edges(b);
  }
  for (const auto& p : a) {
    for (const auto& q : b) {
      const Vec2 d = p - q;
      if (d.norm() > 0) dirs.push_back(d.normalized());
    }
  }
  double best = 0.0;
  for (const auto& u : dirs) {
    best = std::max(best, std::abs(support(a, u) - support(b, u)));
    best = std::max(best, std::abs(support(a, -u) - support(b, -u)));
  }
  return best;
}

/// Membership in the convex hull of `pts` by trying every triangle.
inline bool in_hull_bruteforce(const Vec2& p, const std::vector<Vec2>& pts, double tol = 1e-12) {
  auto cross = [](const Vec2& u, const Vec2& v) { return u.x() * v.y() - u.y() * v.x(); };
  const std::size_t n = pts.size();
  for (std::size_t i = 0; i < n; ++i) {
    if ((pts[i] - p).norm() <= tol) return true;
    for (std::size_t j = i + 1; j < n; ++j) {
      for (std::size_t k = j + 1; k < n; ++k) {
        const double c1 = cross(pts[j] - pts[i], p - pts[i]);
        const double c2 = cross(pts[k] - pts[j], p - pts[j]);
        const double c3 = cross(pts[i] - pts[k], p - pts[k]);
        if ((c1 >= -tol && c2 >= -tol && c3 >= -tol) || (c1 <= tol && c2 <= tol && c3 <= tol)) return true;
      }
    }
  }
  return false;
}

/// prod_j p_A(a_j^3) with p_A the monic polynomial whose roots are the a_i,
/// expanded from elementary symmetric functions.
inline double witness_by_char_poly(const std::array<double, 4>& a) {
  double e1 = 0, e2 = 0, e3 = 0, e4 = a[0] * a[1] * a[2] * a[3];
  for (int i = 0; i < 4; ++i) {
    e1 += a[i];
    for (int j = i + 1; j < 4; ++j) {
      e2 += a[i] * a[j];
      for (int k = j + 1; k < 4; ++k) e3 += a[i] * a[j] * a[k];
    }
  }
  double f = 1.0;
  for (int j = 0; j < 4; ++j) {
    const double x = a[j] * a[j] * a[j];
    f *= (((x - e1) * x + e2) * x - e3) * x + e4;
  }
  return f;
}

/// Projective map of RP^2 sending src[i] to dst[i], from the 8 x 9 linear
/// system dst_i x (M src_i) = 0 solved by SVD; scaled to unit determinant.
inline Mat3 frame_map_dlt(const std::array<Vec3, 4>& src, const std::array<Vec3, 4>& dst) {
  Eigen::Matrix<double, 12, 9> sys = Eigen::Matrix<double, 12, 9>::Zero();
  for (int i = 0; i < 4; ++i) {
    const Vec3& s = src[static_cast<std::size_t>(i)];
    const Vec3& d = dst[static_cast<std::size_t>(i)];
    // Row r of M s is sum_c M(r, c) s(c); unknown index 3 r + c.
    auto put = [&](int row, int r, double coef) {
      for (int c = 0; c < 3; ++c) sys(row, 3 * r + c) += coef * s(c);
    };
    put(3 * i + 0, 2, d(1));
    put(3 * i + 0, 1, -d(2));
    put(3 * i + 1, 0, d(2));
    put(3 * i + 1, 2, -d(0));
    put(3 * i + 2, 1, d(0));
    put(3 * i + 2, 0, -d(1));
  }
  Eigen::JacobiSVD<Eigen::Matrix<double, 12, 9>> svd(sys, Eigen::ComputeFullV);
  const Eigen::Matrix<double, 9, 1> v = svd.matrixV().col(8);
  Mat3 m;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) m(r, c) = v(3 * r + c);
  }
  return m / std::cbrt(m.determinant());
}

/// Unit vector spanning the kernel of a matrix of corank one, by SVD.
template <class M>
Eigen::VectorXd nullspace(const M& m) {
  Eigen::MatrixXd a = m;
  if (a.rows() < a.cols()) {
    Eigen::MatrixXd pad = Eigen::MatrixXd::Zero(a.cols(), a.cols());
    pad.topRows(a.rows()) = a;
    a = pad;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
  return svd.matrixV().col(a.cols() - 1);
}

/// Sine of the angle between two lines through the origin: the norm of the
/// wedge product of unit representatives.
inline double line_sine(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const Eigen::VectorXd u = a.normalized(), v = b.normalized();
  double s = 0.0;
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    for (Eigen::Index j = i + 1; j < u.size(); ++j) s += std::pow(u(i) * v(j) - u(j) * v(i), 2);
  }
  return std::sqrt(s);
}

/// Sorted log-moduli of the eigenvalues of a real square matrix, from a
/// general eigensolver run in long double.
template <class M>
Eigen::VectorXd log_moduli(const M& m) {
  using LMat = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
  Eigen::EigenSolver<LMat> es(m.template cast<long double>());
  std::vector<double> l;
  for (Eigen::Index k = 0; k < m.rows(); ++k) l.push_back(static_cast<double>(std::log(std::abs(es.eigenvalues()(k)))));
  std::sort(l.begin(), l.end(), std::greater<>());
  return Eigen::Map<Eigen::VectorXd>(l.data(), static_cast<Eigen::Index>(l.size()));
}

/// Upper half of the log-moduli from m, lower half from its inverse, where
/// each half is large relative to the matrix norm.
template <class M>
Eigen::VectorXd log_moduli_paired(const M& m, const M& m_inv) {
  const Eigen::VectorXd top = log_moduli(m);
  const Eigen::VectorXd bottom = -log_moduli(m_inv).reverse();
  Eigen::VectorXd out = top;
  const Eigen::Index h = m.rows() / 2;
  out.tail(m.rows() - h) = bottom.tail(m.rows() - h);
  return out;
}

/// Translation length of an SL(2) matrix, acosh(|trace| / 2).
inline double sl2_translation(const Eigen::Matrix2d& m) { return std::acosh(std::abs(m.trace()) / 2.0); }

/// Random convex polygon: sorted angles on a random ellipse, rotated and shifted.
inline std::vector<Vec2> random_convex_polygon(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> t(n);
  for (auto& v : t) v = 2 * std::numbers::pi * u(rng);
  std::sort(t.begin(), t.end());
  t.erase(std::unique(t.begin(), t.end()), t.end());
  const double ax = 0.5 + 2 * u(rng), by = 0.5 + 2 * u(rng), rot = 2 * std::numbers::pi * u(rng);
  const Vec2 c(4 * u(rng) - 2, 4 * u(rng) - 2);
  std::vector<Vec2> out;
  for (double s : t) {
    const Vec2 p(ax * std::cos(s), by * std::sin(s));
    out.emplace_back(c + Vec2(std::cos(rot) * p.x() - std::sin(rot) * p.y(),
                              std::sin(rot) * p.x() + std::cos(rot) * p.y()));
  }
  return out;
}

}  // namespace oracle
