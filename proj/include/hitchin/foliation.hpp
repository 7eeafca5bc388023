#pragma once

#include "hitchin/error.hpp"
#include "hitchin/frenet.hpp"
#include "hitchin/planar.hpp"
#include "hitchin/projlin.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <set>
#include <vector>

namespace hitchin {

/// xi1_t(t') = xi3(t) meet xi2(t') for distinct flags.
inline HomPoint<4> xi1_two_arg(const FlagRP3& at, const FlagRP3& of, double tol = default_tolerances().incidence) {
  return meet_plane_line(at.p3, of.p2, tol);
}

/// xi1_t(t') on tabulated indices; the diagonal branch returns xi1(t).
inline HomPoint<4> xi1_two_arg(const FlagTable& table, std::size_t t, std::size_t tp) {
  if (t == tp) return table[t].flag.p1;
  return xi1_two_arg(table[t].flag, table[tp].flag, table.tolerances().incidence);
}

inline HomPoint<4> xi1_two_arg(const FlagTable& table, const BoundaryPoint& t, const BoundaryPoint& tp) {
  return xi1_two_arg(table, table.index_of(t), table.index_of(tp));
}

/// Developing map on a triple (t+, t0, t-) of distinct boundary points: the
/// meet of the lines xi1(t+) xi1_{t+}(t-) and xi1_{t-}(t+) xi1_{t+}(t0), both
/// inside the plane xi3(t+).
inline HomPoint<4> dev_point(const FlagTable& table, std::size_t tp, std::size_t t0, std::size_t tm) {
  if (tp == t0 || t0 == tm || tp == tm) fail(ErrorCode::DegenerateTriple, "triple entries must be distinct");
  const double tol = table.tolerances().incidence;
  const LineRP3 l1 = join_points(table[tp].flag.p1, xi1_two_arg(table, tp, tm), tol);
  const LineRP3 l2 = join_points(xi1_two_arg(table, tm, tp), xi1_two_arg(table, tp, t0), tol);
  return meet_lines(l1, l2, tol);
}

inline HomPoint<4> dev_point(const FlagTable& table, const BoundaryPoint& tp, const BoundaryPoint& t0,
                             const BoundaryPoint& tm) {
  return dev_point(table, table.index_of(tp), table.index_of(t0), table.index_of(tm));
}

struct LeafSample {
  std::size_t index;  ///< table index of y
  double angle;
  HomPoint<4> point;
};

/// Boundary of dev(x) inside the plane xi3(x), sampled at tabulated y.
struct Leaf {
  std::size_t index;
  BoundaryPoint x;
  Covector<4> plane;
  std::vector<LeafSample> boundary;
};

/// Table indices nearest to a uniform grid of `count` angles, deduplicated.
inline std::vector<std::size_t> grid_samples(const FlagTable& table, std::size_t count) {
  std::set<std::size_t> picked;
  for (std::size_t k = 0; k < count; ++k) picked.insert(table.nearest(kTwoPi * static_cast<double>(k) / count));
  return {picked.begin(), picked.end()};
}

/// Leaf of x sampled at the given table indices (x itself is always added,
/// once, with its special point xi1(x)).
inline Leaf extract_leaf(const FlagTable& table, std::size_t x, const std::vector<std::size_t>& samples) {
  std::set<std::size_t> ys(samples.begin(), samples.end());
  ys.insert(x);
  if (ys.size() < 9) fail(ErrorCode::InsufficientSamples, "a leaf needs at least 8 samples besides x");
  Leaf leaf{x, table[x].point, table[x].flag.p3, {}};
  leaf.boundary.reserve(ys.size());
  for (std::size_t y : ys) leaf.boundary.push_back({y, table[y].point.angle, xi1_two_arg(table, x, y)});
  return leaf;
}

inline Leaf extract_leaf(const FlagTable& table, std::size_t x, std::size_t grid = 128) {
  return extract_leaf(table, x, grid_samples(table, grid));
}

/// Xi_{x -> x'}: the boundary point of dev(x) on xi2(y) goes to the one of dev(x').
inline HomPoint<4> xi_identification(const FlagTable& table, std::size_t x, std::size_t xp, std::size_t y) {
  if (x >= table.size() || xp >= table.size() || y >= table.size()) fail(ErrorCode::InvalidInput, "index out of range");
  return xi1_two_arg(table, xp, y);
}

/// Reference square (1,0), (0,1), (-1,0), (0,-1) in the chart z = 1.
inline FrameRP2 square_frame() {
  return FrameRP2({HomPoint<3>(Vec3(1, 0, 1)), HomPoint<3>(Vec3(0, 1, 1)), HomPoint<3>(Vec3(-1, 0, 1)),
                   HomPoint<3>(Vec3(0, -1, 1))});
}

/// Chart forms tried in order for normalized leaves: z = 1 first, then three
/// tilted charts whose lines at infinity still miss the reference square.
inline std::vector<Covector<3>> default_charts() {
  return {Covector<3>(Vec3(0, 0, 1)), Covector<3>(Vec3(0.5, 0.5, 1)), Covector<3>(Vec3(-0.5, -0.5, 1)),
          Covector<3>(Vec3(0.5, -0.5, 1))};
}

/// Frame-normalized image C_t of a leaf in RP^2.
struct NormalizedLeaf {
  Leaf source;
  std::array<std::size_t, 4> base{};
  Eigen::Matrix<double, 4, 3> plane_basis;  ///< orthonormal basis of the leaf plane
  Mat3 norm_map;                            ///< frame map from plane coordinates to the reference
  std::vector<Vec3> homogeneous;            ///< boundary images with consistent signs
  std::array<Vec3, 4> frame_images;
  std::size_t chart = 0;
  Polygon chart_polygon;
};

namespace detail {

/// True when every representative has the same sign under the chart form.
inline bool fits_chart(const std::vector<Vec3>& pts, const AffineChart2& chart, double tol) {
  if (pts.empty()) return true;
  const double s = chart.weight(pts.front()) >= 0 ? 1.0 : -1.0;
  for (const auto& q : pts) {
    if (s * chart.weight(q) < tol * q.norm()) return false;
  }
  return true;
}

inline Polygon in_chart(const std::vector<Vec3>& pts, const AffineChart2& chart) {
  Polygon out;
  out.reserve(pts.size());
  for (const auto& q : pts) out.push_back(chart(q));
  return out;
}

}  // namespace detail

/// Index of the first chart in `charts` that contains every given point set.
inline std::size_t common_chart(const std::vector<const std::vector<Vec3>*>& sets,
                                const std::vector<Covector<3>>& charts = default_charts(), double tol = 1e-9) {
  for (std::size_t c = 0; c < charts.size(); ++c) {
    const AffineChart2 chart(charts[c]);
    bool ok = true;
    for (const auto* s : sets) ok = ok && detail::fits_chart(*s, chart, tol);
    if (ok) return c;
  }
  fail(ErrorCode::UnboundedInChart, "domain meets the line at infinity of every fallback chart");
}

/// Sends the four frame points xi3(t) meet xi2(x_i) of the leaf to `reference`
/// by the unique unit-determinant projective map, and charts the image.
inline NormalizedLeaf normalize_leaf(const Leaf& leaf, const FlagTable& table, std::array<std::size_t, 4> base,
                                     const FrameRP2& reference = square_frame(),
                                     const std::vector<Covector<3>>& charts = default_charts()) {
  std::sort(base.begin(), base.end(), [&](std::size_t a, std::size_t b) {
    return table[a].point.angle < table[b].point.angle;
  });
  for (std::size_t i = 0; i < 4; ++i) {
    if (base[i] == leaf.index) fail(ErrorCode::DegenerateFrame, "base point coincides with the leaf's own point");
    if (i > 0 && base[i] == base[i - 1]) fail(ErrorCode::DegenerateFrame, "base points must be distinct");
  }
  const double tol = table.tolerances().incidence;
  NormalizedLeaf nl;
  nl.source = leaf;
  nl.base = base;
  Eigen::JacobiSVD<Eigen::Matrix<double, 1, 4>> svd(leaf.plane.coeffs().transpose(), Eigen::ComputeFullV);
  nl.plane_basis = svd.matrixV().rightCols<3>();

  std::array<HomPoint<3>, 4> src;
  for (std::size_t i = 0; i < 4; ++i) {
    const HomPoint<4> p = xi1_two_arg(table, leaf.index, base[i]);
    src[i] = HomPoint<3>(nl.plane_basis.transpose() * p.coords());
  }
  const FrameRP2 src_frame(src, table.tolerances().general_position);
  nl.norm_map = frame_map(src_frame, reference);
  for (std::size_t i = 0; i < 4; ++i) nl.frame_images[i] = nl.norm_map * src[i].coords();

  nl.homogeneous.reserve(leaf.boundary.size());
  for (const auto& s : leaf.boundary) {
    Vec3 q = nl.norm_map * (nl.plane_basis.transpose() * s.point.coords());
    q.normalize();
    if (!nl.homogeneous.empty() && q.dot(nl.homogeneous.back()) < 0) q = -q;
    nl.homogeneous.push_back(q);
  }
  nl.chart = common_chart({&nl.homogeneous}, charts, tol);
  nl.chart_polygon = detail::in_chart(nl.homogeneous, AffineChart2(charts[nl.chart]));
  return nl;
}

/// Hausdorff distance of two normalized leaves in the first chart containing both.
inline double leaf_distance(const NormalizedLeaf& a, const NormalizedLeaf& b,
                            const std::vector<Covector<3>>& charts = default_charts()) {
  const std::size_t c = common_chart({&a.homogeneous, &b.homogeneous}, charts);
  const AffineChart2 chart(charts[c]);
  return hausdorff_distance(detail::in_chart(a.homogeneous, chart), detail::in_chart(b.homogeneous, chart));
}

struct LeafComparison {
  std::size_t t;
  std::size_t tp;
  double hausdorff;
  std::vector<double> residual_profile;
};

/// Normalized leaves for the given indices, all sampled on the same y set
/// (grid samples plus every leaf index) so their polygons are comparable.
inline std::vector<NormalizedLeaf> normalized_leaves(const FlagTable& table, const std::vector<std::size_t>& xs,
                                                     const std::array<std::size_t, 4>& base, std::size_t samples,
                                                     const FrameRP2& reference = square_frame()) {
  std::vector<std::size_t> ys = grid_samples(table, samples);
  ys.insert(ys.end(), xs.begin(), xs.end());
  std::vector<NormalizedLeaf> out;
  out.reserve(xs.size());
  for (std::size_t x : xs) out.push_back(normalize_leaf(extract_leaf(table, x, ys), table, base, reference));
  return out;
}

/// Hausdorff distances of consecutive normalized leaves along a grid of table indices.
inline std::vector<LeafComparison> leaf_continuity_scan(const FlagTable& table, const std::vector<std::size_t>& grid,
                                                        const std::array<std::size_t, 4>& base, std::size_t samples,
                                                        const FrameRP2& reference = square_frame()) {
  std::vector<LeafComparison> out;
  if (grid.size() < 2) return out;
  const auto leaves = normalized_leaves(table, grid, base, samples, reference);
  const auto charts = default_charts();
  for (std::size_t k = 0; k + 1 < leaves.size(); ++k) {
    const std::size_t c = common_chart({&leaves[k].homogeneous, &leaves[k + 1].homogeneous}, charts);
    const AffineChart2 chart(charts[c]);
    const Polygon p = detail::in_chart(leaves[k].homogeneous, chart);
    const Polygon q = detail::in_chart(leaves[k + 1].homogeneous, chart);
    out.push_back({grid[k], grid[k + 1], hausdorff_distance(p, q), nearest_profile(p, q)});
  }
  return out;
}

inline ConvexityReport convexity_report(const NormalizedLeaf& nl) {
  if (nl.chart_polygon.size() < 5) fail(ErrorCode::InsufficientSamples, "convexity report needs at least 5 vertices");
  return convexity_of(nl.chart_polygon);
}

/// d_H(A^k Omega', Omega) for k = 0..n, with both domains given by the
/// homogeneous vertices of convex polygons and measured in `chart`.
inline std::vector<double> benzecri_iterate(const std::vector<Vec3>& domain, const std::vector<Vec3>& target,
                                            const Mat3& a, int n, const Covector<3>& chart_form) {
  if (n < 0) fail(ErrorCode::InvalidInput, "iteration count must be nonnegative");
  if (domain.empty() || target.empty()) fail(ErrorCode::EmptyInput, "benzecri_iterate needs nonempty domains");
  const AffineChart2 chart(chart_form);
  auto charted_hull = [&](const std::vector<Vec3>& pts) {
    if (!detail::fits_chart(pts, chart, 1e-12)) fail(ErrorCode::UnboundedInChart, "iterate leaves the affine chart");
    return convex_hull(detail::in_chart(pts, chart));
  };
  const Polygon goal = charted_hull(target);
  std::vector<Vec3> cur = domain;
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) {
    out.push_back(hausdorff_distance(charted_hull(cur), goal));
    for (auto& q : cur) {
      q = a * q;
      q.normalize();
    }
  }
  return out;
}

/// Invariant ellipse Omega = {y^2 < x z} of A = diag(e^s, 1, e^-s) and the
/// half Omega' = Omega meet {z > x}, as inscribed polygons in the chart
/// x + y + z = 1. The conic is parametrized by (u^2, u, 1) on which A acts
/// by u -> e^s u; vertices sit at u = +-e^(j h) so that every iterate's
/// vertices are vertices of the target (plus vanishing ones near u = 0).
struct BenzecriSetup {
  std::vector<Vec3> half;
  std::vector<Vec3> ellipse;
  Mat3 a;
  Covector<3> chart;
};

inline BenzecriSetup benzecri_default_setup(int n, double step = 0.25, double reach = 25.0, double s = 0.5) {
  auto conic = [](double u) {
    Vec3 q(u * u, u, 1.0);
    return Vec3(q / q.norm());
  };
  const int levels = static_cast<int>(std::lround(reach / step));
  const int extra = static_cast<int>(std::ceil(n * s / step));
  BenzecriSetup out;
  out.a = Vec3(std::exp(s), 1.0, std::exp(-s)).asDiagonal();
  out.chart = Covector<3>(Vec3(1, 1, 1));
  out.ellipse.push_back(conic(0.0));
  out.ellipse.push_back(Vec3(1, 0, 0));
  for (int j = -levels; j <= levels; ++j) {
    out.ellipse.push_back(conic(std::exp(j * step)));
    out.ellipse.push_back(conic(-std::exp(j * step)));
  }
  out.half.push_back(conic(0.0));
  for (int j = -levels - extra; j <= 0; ++j) {
    out.half.push_back(conic(std::exp(j * step)));
    out.half.push_back(conic(-std::exp(j * step)));
  }
  return out;
}

}  // namespace hitchin
