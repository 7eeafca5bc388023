#pragma once

#include "hitchin/error.hpp"
#include "hitchin/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace hitchin {

using Polygon = std::vector<Vec2>;

inline double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

inline double orient(const Vec2& a, const Vec2& b, const Vec2& c) { return cross2(b - a, c - a); }

/// Twice the signed area (positive for counterclockwise order).
inline double signed_area2(const Polygon& p) {
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += cross2(p[i], p[(i + 1) % p.size()]);
  return s;
}

/// Counterclockwise convex hull (Andrew's monotone chain), collinear points dropped.
/// `indices` receives the input index of each hull vertex when non-null.
inline Polygon convex_hull(const Polygon& pts, std::vector<std::size_t>* indices = nullptr) {
  std::vector<std::size_t> order(pts.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return pts[i].x() < pts[j].x() || (pts[i].x() == pts[j].x() && pts[i].y() < pts[j].y());
  });
  order.erase(std::unique(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return pts[i] == pts[j]; }),
              order.end());
  if (order.size() < 3) {
    if (indices) *indices = order;
    Polygon out;
    for (auto i : order) out.push_back(pts[i]);
    return out;
  }
  std::vector<std::size_t> h(2 * order.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    while (k >= 2 && orient(pts[h[k - 2]], pts[h[k - 1]], pts[order[i]]) <= 0) --k;
    h[k++] = order[i];
  }
  for (std::size_t i = order.size() - 1, t = k + 1; i > 0; --i) {
    while (k >= t && orient(pts[h[k - 2]], pts[h[k - 1]], pts[order[i - 1]]) <= 0) --k;
    h[k++] = order[i - 1];
  }
  h.resize(k - 1);
  if (indices) *indices = h;
  Polygon out;
  for (auto i : h) out.push_back(pts[i]);
  return out;
}

inline Polygon make_ccw(Polygon p) {
  if (signed_area2(p) < 0) std::reverse(p.begin(), p.end());
  return p;
}

inline double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 d = b - a;
  const double len2 = d.squaredNorm();
  double t = len2 > 0 ? (p - a).dot(d) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return (p - (a + t * d)).norm();
}

/// Closed-set containment for a counterclockwise convex polygon.
inline bool point_in_convex_polygon(const Vec2& p, const Polygon& ccw, double tol = 0.0) {
  const std::size_t n = ccw.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& a = ccw[i];
    const Vec2& b = ccw[(i + 1) % n];
    const double len = (b - a).norm();
    if (len == 0.0) continue;
    if (orient(a, b, p) / len < -tol) return false;
  }
  return true;
}

/// Distance from a point to the filled convex polygon (zero inside).
inline double distance_to_convex_set(const Vec2& p, const Polygon& ccw) {
  if (ccw.size() == 1) return (p - ccw[0]).norm();
  if (ccw.size() >= 3 && point_in_convex_polygon(p, ccw)) return 0.0;
  double best = INFINITY;
  for (std::size_t i = 0; i < ccw.size(); ++i) {
    best = std::min(best, point_segment_distance(p, ccw[i], ccw[(i + 1) % ccw.size()]));
  }
  return best;
}

/// Directed Hausdorff distance sup_{p in P} d(p, Q) between filled convex
/// polygons. The distance to a convex set is a convex function, so its
/// supremum over P is attained at a vertex of P.
inline double directed_hausdorff(const Polygon& p, const Polygon& q) {
  const Polygon qc = make_ccw(q);
  double worst = 0.0;
  for (const auto& v : p) worst = std::max(worst, distance_to_convex_set(v, qc));
  return worst;
}

/// Hausdorff distance between the closures of two convex polygonal domains.
inline double hausdorff_distance(const Polygon& p, const Polygon& q) {
  if (p.empty() || q.empty()) fail(ErrorCode::EmptyInput, "hausdorff_distance needs nonempty polygons");
  return std::max(directed_hausdorff(p, q), directed_hausdorff(q, p));
}

/// Per-vertex distances of P to the filled polygon Q.
inline std::vector<double> nearest_profile(const Polygon& p, const Polygon& q) {
  const Polygon qc = make_ccw(q);
  std::vector<double> out;
  out.reserve(p.size());
  for (const auto& v : p) out.push_back(distance_to_convex_set(v, qc));
  return out;
}

/// Turning behaviour of a closed polygon.
struct ConvexityReport {
  bool convex = true;
  std::size_t reflex_count = 0;
  double min_turn_margin = INFINITY;  ///< smallest |cross| / (|e_i| |e_i+1|)
  double max_turn_jump = 0.0;         ///< largest exterior angle change between neighbours
  std::vector<double> exterior_angles;
};

inline ConvexityReport convexity_of(const Polygon& poly) {
  ConvexityReport r;
  const std::size_t n = poly.size();
  if (n < 3) {
    r.convex = false;
    return r;
  }
  const double sign = signed_area2(poly) >= 0 ? 1.0 : -1.0;
  r.exterior_angles.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 e0 = poly[i] - poly[(i + n - 1) % n];
    const Vec2 e1 = poly[(i + 1) % n] - poly[i];
    const double c = sign * cross2(e0, e1);
    const double margin = c / (e0.norm() * e1.norm());
    if (margin < 0) {
      r.convex = false;
      ++r.reflex_count;
    }
    r.min_turn_margin = std::min(r.min_turn_margin, margin);
    r.exterior_angles[i] = std::atan2(c, e0.dot(e1));
  }
  for (std::size_t i = 0; i < n; ++i) {
    r.max_turn_jump = std::max(r.max_turn_jump, std::abs(r.exterior_angles[(i + 1) % n] - r.exterior_angles[i]));
  }
  return r;
}

}  // namespace hitchin
