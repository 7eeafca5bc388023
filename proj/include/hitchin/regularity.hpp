#pragma once

#include "hitchin/error.hpp"
#include "hitchin/foliation.hpp"
#include "hitchin/frenet.hpp"
#include "hitchin/group.hpp"
#include "hitchin/projlin.hpp"
#include "hitchin/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

namespace hitchin {

/// Modelling exponent (l1 - l3)/(l1 - l2) at the attracting fixed point of a
/// loxodromic map of RP^2 with log-eigenvalues l1 > l2 > l3.
inline double alpha_exact(double l1, double l2, double l3, double gap_tol = default_tolerances().gap) {
  if (l1 - l2 < gap_tol || l2 - l3 < gap_tol) fail(ErrorCode::DegenerateGap, "log-eigenvalues not separated");
  return (l1 - l3) / (l1 - l2);
}

/// Chart adapted to a loxodromic A of RP^2: in eigen-coordinates (a, b, c)
/// the point goes to (b/a, +-c/a), so the attracting fixed point is the
/// origin, the repelling line is at infinity, the attracting line (top two
/// eigenvectors) is the horizontal axis and the line through the top and
/// bottom eigenvectors is the vertical axis.
struct AdaptedChart {
  Mat3 eigenvectors;
  Mat3 to_eigen;
  Vec3 eigenvalues;
  double y_sign = 1.0;
  std::vector<Vec2> coords;

  Vec2 operator()(const Vec3& q) const {
    const Vec3 e = to_eigen * q;
    if (std::abs(e(0)) < 1e-14 * e.norm()) fail(ErrorCode::UnboundedInChart, "point on the repelling line");
    return {e(1) / e(0), y_sign * e(2) / e(0)};
  }
};

inline AdaptedChart adapted_chart(const Mat3& a, const std::vector<Vec3>& samples, double orient_tol = 1e-9,
                                  const Tolerances& tol = default_tolerances()) {
  const EigenSplit<3> split = eigen_real<3>(a, tol);
  AdaptedChart ch;
  ch.eigenvectors = split.eigenvectors;
  ch.to_eigen = split.eigenvectors.inverse();
  ch.eigenvalues = split.eigenvalues;
  std::vector<Vec2> pts;
  pts.reserve(samples.size());
  double lo = 0.0;
  double hi = 0.0;
  double scale = 0.0;
  for (const auto& q : samples) {
    const Vec3 e = ch.to_eigen * q;
    if (std::abs(e(0)) < 1e-14 * e.norm()) continue;
    pts.emplace_back(e(1) / e(0), e(2) / e(0));
    lo = std::min(lo, pts.back().y());
    hi = std::max(hi, pts.back().y());
    scale = std::max(scale, pts.back().norm());
  }
  if (-lo > hi) {
    ch.y_sign = -1.0;
    for (auto& p : pts) p.y() = -p.y();
    std::swap(lo, hi);
    lo = -lo;
    hi = -hi;
  }
  if (lo < -orient_tol * std::max(1.0, scale)) fail(ErrorCode::OrientationFail, "samples straddle the tangent axis");
  ch.coords = std::move(pts);
  return ch;
}

struct ModelFit {
  Vec3 point = Vec3::Zero();  ///< fixed point in leaf-plane coordinates
  double alpha_hat = 0.0;
  std::optional<double> alpha_exact;
  std::size_t window_count = 0;
  double window_r = 0.0;
  double r_squared = 0.0;
  double asymmetry = 0.0;
};

namespace detail {

struct LineFit {
  double slope;
  double r_squared;
};

inline LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0;
  double my = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    mx += x[k];
    my += y[k];
  }
  mx /= n;
  my /= n;
  double sxx = 0;
  double sxy = 0;
  double syy = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxx += (x[k] - mx) * (x[k] - mx);
    sxy += (x[k] - mx) * (y[k] - my);
    syy += (y[k] - my) * (y[k] - my);
  }
  const double slope = sxx > 0 ? sxy / sxx : 0.0;
  const double r2 = (sxx > 0 && syy > 0) ? (sxy * sxy) / (sxx * syy) : 1.0;
  return {slope, r2};
}

}  // namespace detail

/// Fits log d(y, tangent) = alpha log d(y, origin) + c on chart samples whose
/// distance to the origin lies in [r, 10 r], r being the 5th percentile of
/// the distances. The two branches x < 0 and x > 0 are fitted separately and
/// averaged.
inline ModelFit alpha_fit(const std::vector<Vec2>& samples, std::size_t window = 10) {
  std::vector<double> dist;
  for (const auto& p : samples) {
    const double d = p.norm();
    if (d > 0 && p.y() != 0) dist.push_back(d);
  }
  if (dist.size() < window) fail(ErrorCode::InsufficientSamples, "too few samples near the point");
  std::sort(dist.begin(), dist.end());
  const double r = dist[dist.size() / 20];
  ModelFit fit;
  fit.window_r = r;
  std::vector<double> xs[2];
  std::vector<double> ys[2];
  for (const auto& p : samples) {
    const double d = p.norm();
    if (!(d >= r && d <= 10 * r) || p.y() == 0) continue;
    const int side = p.x() < 0 ? 0 : 1;
    xs[side].push_back(std::log(d));
    ys[side].push_back(std::log(std::abs(p.y())));
  }
  fit.window_count = xs[0].size() + xs[1].size();
  if (fit.window_count < window) fail(ErrorCode::InsufficientSamples, "too few samples in the fit window");
  std::vector<double> slopes;
  std::vector<double> r2s;
  for (int side = 0; side < 2; ++side) {
    if (xs[side].size() < 3) continue;
    const auto lf = detail::least_squares(xs[side], ys[side]);
    slopes.push_back(lf.slope);
    r2s.push_back(lf.r_squared);
  }
  if (slopes.empty()) fail(ErrorCode::InsufficientSamples, "no branch has enough samples");
  double s = 0;
  for (double v : slopes) s += v;
  fit.alpha_hat = s / static_cast<double>(slopes.size());
  fit.r_squared = *std::min_element(r2s.begin(), r2s.end());
  fit.asymmetry = slopes.size() == 2 ? std::abs(slopes[0] - slopes[1]) / std::abs(fit.alpha_hat) : 0.0;
  return fit;
}

/// Orbit samples of an invariant boundary near the attracting fixed point:
/// in adapted coordinates A acts by (x, y) -> (r2 x, r3 y) with r2, r3 the
/// eigenvalue ratios, so each seed's forward orbit is generated in closed form.
inline std::vector<Vec2> orbit_samples(const AdaptedChart& ch, std::size_t steps, double floor = 1e-9) {
  const double r2 = ch.eigenvalues(1) / ch.eigenvalues(0);
  const double r3 = ch.eigenvalues(2) / ch.eigenvalues(0);
  std::vector<Vec2> out;
  for (const auto& seed : ch.coords) {
    Vec2 p = seed;
    for (std::size_t n = 0; n <= steps; ++n) {
      out.push_back(p);
      p = Vec2(r2 * p.x(), std::abs(r3) * p.y());
      if (p.norm() < floor) break;
    }
  }
  return out;
}

/// Exponent fit at the attracting fixed point of g restricted to the leaf
/// plane of `leaf_flag` (which g must preserve). Leaf boundary points
/// xi3(x) meet xi2(y) over the table seed the orbits.
inline ModelFit leaf_model_fit(const Mat4& g, const FlagRP3& leaf_flag, const FlagTable& table,
                               std::size_t seeds = 64, std::size_t steps = 40) {
  Eigen::JacobiSVD<Eigen::Matrix<double, 1, 4>> svd(leaf_flag.p3.coeffs().transpose(), Eigen::ComputeFullV);
  const Eigen::Matrix<double, 4, 3> basis = svd.matrixV().rightCols<3>();
  const Mat3 restricted = basis.transpose() * g * basis;
  std::vector<Vec3> pts;
  for (std::size_t y : grid_samples(table, seeds)) {
    try {
      pts.push_back(basis.transpose() * xi1_two_arg(leaf_flag, table[y].flag).coords());
    } catch (const GeometryError& e) {
      if (e.code() != ErrorCode::DegenerateIncidence) throw;
    }
  }
  // Sign-consistent representatives along the boundary.
  for (std::size_t k = 1; k < pts.size(); ++k) {
    if (pts[k].dot(pts[k - 1]) < 0) pts[k] = -pts[k];
  }
  const AdaptedChart ch = adapted_chart(restricted, pts);
  ModelFit fit = alpha_fit(orbit_samples(ch, steps));
  fit.point = ch.eigenvectors.col(0);
  const Vec3 l = ch.eigenvalues.cwiseAbs().array().log().matrix();
  fit.alpha_exact = alpha_exact(l(0), l(1), l(2));
  return fit;
}

/// Exponent fit at xi1(gamma+) in the leaf of gamma+ for gamma = w.
inline ModelFit fit_at_attracting_point(const Rep4& rep, const FlagTable& table, const Word& w,
                                        std::size_t seeds = 64) {
  return leaf_model_fit(rep.evaluate(w), flag_of_word(rep, w, table.tolerances()), table, seeds);
}

struct ModellingReport {
  Word word;
  Vec4 lambda_vec;
  double alpha_plus_exact = 0.0;   ///< at xi2(gamma-) meet xi3(gamma+) in the leaf of gamma+
  double alpha_minus_exact = 0.0;  ///< at xi1(gamma-) in the leaf of gamma-
  std::optional<ModelFit> fit_plus;
  std::optional<ModelFit> fit_minus;
  double mismatch() const { return std::abs(alpha_plus_exact - alpha_minus_exact); }
};

/// Exact modelling exponents at the two points related by the modelling
/// constraint, from the restricted spectra; with a table, the fitted values
/// from leaf samples as well.
inline ModellingReport modelling_constraint_check(const Rep4& rep, const FlagTable* table, const Word& w,
                                                  std::size_t seeds = 64) {
  if (w.empty()) fail(ErrorCode::InvalidInput, "identity word has no fixed points");
  ModellingReport r;
  r.word = w;
  r.lambda_vec = jordan_projection(rep, w, table ? table->tolerances() : default_tolerances());
  const Vec4& l = r.lambda_vec;
  // g^-1 on the top three eigenlines attracts to e3; on the bottom three to e4.
  r.alpha_plus_exact = alpha_exact(-l(2), -l(1), -l(0));
  r.alpha_minus_exact = alpha_exact(-l(3), -l(2), -l(1));
  if (table) {
    const Mat4 g_inv = rep.evaluate(w.inverse());
    r.fit_plus = leaf_model_fit(g_inv, flag_of_word(rep, w, table->tolerances()), *table, seeds);
    r.fit_minus = leaf_model_fit(g_inv, flag_of_word(rep, w.inverse(), table->tolerances()), *table, seeds);
  }
  return r;
}

}  // namespace hitchin
