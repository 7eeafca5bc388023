#pragma once

#include "hitchin/error.hpp"
#include "hitchin/group.hpp"
#include "hitchin/projlin.hpp"
#include "hitchin/tolerances.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <vector>

namespace hitchin {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Wraps an angle into [0, 2 pi).
inline double wrap_angle(double a) {
  double r = std::fmod(a, kTwoPi);
  if (r < 0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

/// Distance on the circle R / 2 pi Z.
inline double angle_gap(double a, double b) {
  const double d = std::abs(wrap_angle(a) - wrap_angle(b));
  return std::min(d, kTwoPi - d);
}

/// Boundary of the group, coordinatized by RP^1 through the base Fuchsian
/// representation: [x : y] has angle 2 atan2(y, x) mod 2 pi.
struct BoundaryPoint {
  double angle = 0.0;
  std::optional<Word> word;
};

inline double angle_of(const HomPoint<2>& p) { return wrap_angle(2.0 * std::atan2(p[1], p[0])); }

inline HomPoint<2> point_of_angle(double angle) {
  return HomPoint<2>(Vec2(std::cos(angle / 2), std::sin(angle / 2)));
}

/// Moebius action of an SL(2) matrix on boundary angles.
inline double act_on_angle(const Mat2& g, double angle) {
  return angle_of(HomPoint<2>(g * point_of_angle(angle).coords()));
}

/// Attracting fixed point of the image of `w` under a rank-2 representation.
inline BoundaryPoint boundary_point_of_word(const Rep2& rep2, const Word& w,
                                            const Tolerances& tol = default_tolerances()) {
  const auto ws = word_spectrum<2>(rep2, w, tol);
  return {angle_of(HomPoint<2>(ws.split.eigenvectors.col(0))), w};
}

/// A full flag xi1 in xi2 in xi3 of R^4.
struct FlagRP3 {
  HomPoint<4> p1;
  LineRP3 p2;
  Covector<4> p3;

  /// Largest violation of xi1 in xi2 and xi2 in xi3.
  double incidence_residual() const {
    const double a = p2.residual(p1);
    const double b = (p3.coeffs().transpose() * p2.basis()).cwiseAbs().maxCoeff();
    return std::max(a, b);
  }

  double distance(const FlagRP3& o) const {
    return std::max({p1.distance(o.p1), p2.distance(o.p2), p3.distance(o.p3)});
  }
};

/// Image of a flag under g in SL(4); covectors transform by g^-T.
inline FlagRP3 transform_flag(const Mat4& g, const FlagRP3& f) {
  const Mat4 g_inv = accurate_inverse<4>(g);
  return {HomPoint<4>(g * f.p1.coords()), LineRP3(g * f.p2.basis()), Covector<4>(g_inv.transpose() * f.p3.coeffs())};
}

/// Osculating flag of the Veronese curve [f] -> [f^3] at the boundary point:
/// with p = (x, y) and q = (-y, x), the span of the first k Taylor
/// coefficients of t -> veronese(p + t q).
inline FlagRP3 veronese_flag(const BoundaryPoint& b) {
  const HomPoint<2> p = point_of_angle(b.angle);
  const double x = p[0];
  const double y = p[1];
  // (u + t u') with u, u' the first and second coordinate linear forms.
  const std::array<double, 2> first{x, -y};
  const std::array<double, 2> second{y, x};
  auto mul = [](const std::vector<double>& a, const std::array<double, 2>& b) {
    std::vector<double> out(a.size() + 1, 0.0);
    for (std::size_t k = 0; k < a.size(); ++k) {
      out[k] += a[k] * b[0];
      out[k + 1] += a[k] * b[1];
    }
    return out;
  };
  Mat4 coeff;  // column t^k holds the coefficient vector in the monomial basis
  for (int m = 0; m < 4; ++m) {
    std::vector<double> poly{1.0};
    for (int k = 0; k < 3 - m; ++k) poly = mul(poly, first);
    for (int k = 0; k < m; ++k) poly = mul(poly, second);
    for (int k = 0; k < 4; ++k) coeff(m, k) = poly[static_cast<std::size_t>(k)];
  }
  const MatX normal = orthogonal_complement(coeff.leftCols<3>());
  return {HomPoint<4>(coeff.col(0)), LineRP3(coeff.leftCols<2>()), Covector<4>(normal.col(0))};
}

/// Attracting flag of the image of `w`: top eigenline, top two eigenlines,
/// and the plane annihilated by the left eigenvector of the smallest eigenvalue.
inline FlagRP3 flag_of_word(const Rep4& rep4, const Word& w, const Tolerances& tol = default_tolerances()) {
  const auto ws = word_spectrum<4>(rep4, w, tol);
  return {HomPoint<4>(ws.split.eigenvectors.col(0)), LineRP3(ws.split.eigenvectors.leftCols<2>()),
          Covector<4>(ws.left_bottom)};
}

struct FlagEntry {
  BoundaryPoint point;
  FlagRP3 flag;
};

/// Flags at attracting fixed points, sorted by boundary angle. The base
/// rank-2 representation is kept so that group elements can act on angles.
class FlagTable {
 public:
  FlagTable(Rep2 base, std::vector<FlagEntry> entries, const Tolerances& tol = default_tolerances())
      : base_(std::move(base)), entries_(std::move(entries)), tol_(tol) {
    std::sort(entries_.begin(), entries_.end(),
              [](const FlagEntry& a, const FlagEntry& b) { return a.point.angle < b.point.angle; });
  }

  const Rep2& base() const { return base_; }
  const std::vector<FlagEntry>& entries() const { return entries_; }
  std::vector<FlagEntry>& mutable_entries() { return entries_; }
  const FlagEntry& operator[](std::size_t k) const { return entries_[k]; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const Tolerances& tolerances() const { return tol_; }
  std::size_t skipped = 0;

  /// Index of the entry closest to `angle` on the circle.
  std::size_t nearest(double angle) const {
    if (entries_.empty()) fail(ErrorCode::EmptyInput, "flag table is empty");
    const double a = wrap_angle(angle);
    auto it = std::lower_bound(entries_.begin(), entries_.end(), a,
                               [](const FlagEntry& e, double v) { return e.point.angle < v; });
    const std::size_t n = entries_.size();
    const std::size_t hi = static_cast<std::size_t>(it - entries_.begin()) % n;
    const std::size_t lo = (hi + n - 1) % n;
    return angle_gap(entries_[lo].point.angle, a) <= angle_gap(entries_[hi].point.angle, a) ? lo : hi;
  }

  /// Index of the entry within the dedup tolerance of `angle`, if any.
  std::optional<std::size_t> find(double angle, double within = -1.0) const {
    if (entries_.empty()) return std::nullopt;
    const double t = within > 0 ? within : tol_.angle_dedup;
    const std::size_t k = nearest(angle);
    if (angle_gap(entries_[k].point.angle, angle) <= t) return k;
    return std::nullopt;
  }

  /// Like find(), but throws InvalidInput when the angle is not tabulated.
  std::size_t index_of(const BoundaryPoint& b) const {
    const auto k = find(b.angle);
    if (!k) fail(ErrorCode::InvalidInput, "boundary point is not tabulated");
    return *k;
  }

 private:
  Rep2 base_;
  std::vector<FlagEntry> entries_;
  Tolerances tol_;
};

/// One flag per distinct attracting fixed point over all words of length at
/// most `max_len`. Fixed points within the dedup tolerance are merged, keeping
/// the shortest word (first in enumeration order among equals).
inline FlagTable build_flag_table(const Rep4& rep4, const Rep2& rep2, int max_len,
                                  const Tolerances& tol = default_tolerances()) {
  struct Candidate {
    double angle;
    std::size_t order;
  };
  const std::vector<Word> words = enumerate_words(max_len);
  std::vector<Candidate> cands;
  cands.reserve(words.size());
  std::size_t skipped = 0;
  for (std::size_t k = 0; k < words.size(); ++k) {
    try {
      cands.push_back({boundary_point_of_word(rep2, words[k], tol).angle, k});
    } catch (const GeometryError& e) {
      if (e.code() != ErrorCode::NotLoxodromic) throw;
      ++skipped;
    }
  }
  std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
    return a.angle < b.angle || (a.angle == b.angle && a.order < b.order);
  });

  // Clusters of angles closer than the tolerance, on the circle.
  std::vector<std::vector<Candidate>> clusters;
  for (const auto& c : cands) {
    if (!clusters.empty() && c.angle - clusters.back().back().angle <= tol.angle_dedup) {
      clusters.back().push_back(c);
    } else {
      clusters.push_back({c});
    }
  }
  if (clusters.size() > 1 && angle_gap(clusters.back().back().angle, clusters.front().front().angle) <= tol.angle_dedup) {
    clusters.front().insert(clusters.front().end(), clusters.back().begin(), clusters.back().end());
    clusters.pop_back();
  }

  std::vector<FlagEntry> entries;
  entries.reserve(clusters.size());
  for (const auto& cl : clusters) {
    // Enumeration order is by length first, so the minimal order is the
    // shortest word.
    const auto best = *std::min_element(cl.begin(), cl.end(),
                                        [](const Candidate& a, const Candidate& b) { return a.order < b.order; });
    const Word& w = words[best.order];
    try {
      entries.push_back({{best.angle, w}, flag_of_word(rep4, w, tol)});
    } catch (const GeometryError& e) {
      if (e.code() != ErrorCode::NotLoxodromic) throw;
      ++skipped;
    }
  }
  FlagTable table(rep2, std::move(entries), tol);
  table.skipped = skipped;
  return table;
}

/// Largest flag distance between rho(w) xi(x) and xi(w x) over tabulated x
/// whose image w x is tabulated as well.
inline double check_equivariance(const Rep4& rep4, const FlagTable& table, const Word& w) {
  if (table.empty()) fail(ErrorCode::EmptyInput, "flag table is empty");
  const Mat4 g = rep4.evaluate(w);
  const Mat2 h = table.base().evaluate(w);
  double worst = 0.0;
  std::size_t pairs = 0;
  for (const auto& e : table.entries()) {
    const auto k = table.find(act_on_angle(h, e.point.angle));
    if (!k) continue;
    ++pairs;
    worst = std::max(worst, transform_flag(g, e.flag).distance(table[*k].flag));
  }
  if (pairs == 0) fail(ErrorCode::NoOverlap, "no tabulated pair (x, w x)");
  return worst;
}

struct GeneralPositionReport {
  std::size_t tested = 0;
  std::size_t failures = 0;
  double threshold = 0.0;
  /// min over triples of the smallest singular value of the stacked xi3 covectors
  double min_plane_margin = std::numeric_limits<double>::infinity();
  /// min over triples of the smallest singular value of [xi1(x) xi1(y) xi2(z)]
  double min_point_margin = std::numeric_limits<double>::infinity();
};

/// Transversality margins of xi3(x), xi3(y), xi3(z) and of xi1(x) + xi1(y) +
/// xi2(z) on distinct triples. All triples are tested when there are at most
/// `trials` of them, otherwise `trials` random ones drawn with `seed`.
inline GeneralPositionReport check_general_position(const FlagTable& table, std::size_t trials,
                                                    std::uint64_t seed = 1, double threshold = 1e-6) {
  GeneralPositionReport rep;
  rep.threshold = threshold;
  if (trials == 0) return rep;
  const std::size_t n = table.size();
  if (n < 4) fail(ErrorCode::InsufficientSamples, "general position check needs at least 4 flags");

  auto test = [&](std::size_t i, std::size_t j, std::size_t k) {
    Eigen::Matrix<double, 3, 4> planes;
    planes.row(0) = table[i].flag.p3.coeffs().transpose();
    planes.row(1) = table[j].flag.p3.coeffs().transpose();
    planes.row(2) = table[k].flag.p3.coeffs().transpose();
    Mat4 pts;
    pts.col(0) = table[i].flag.p1.coords();
    pts.col(1) = table[j].flag.p1.coords();
    pts.rightCols<2>() = table[k].flag.p2.basis();
    const double a = min_singular(planes);
    const double b = min_singular(pts);
    rep.min_plane_margin = std::min(rep.min_plane_margin, a);
    rep.min_point_margin = std::min(rep.min_point_margin, b);
    if (a < threshold || b < threshold) ++rep.failures;
    ++rep.tested;
  };

  const double total = static_cast<double>(n) * static_cast<double>(n - 1) * static_cast<double>(n - 2);
  if (total <= static_cast<double>(trials)) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < n; ++k) {
          if (i != j && j != k && i != k) test(i, j, k);
        }
      }
    }
    return rep;
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  for (std::size_t t = 0; t < trials; ++t) {
    std::size_t i = pick(rng);
    std::size_t j = pick(rng);
    std::size_t k = pick(rng);
    while (j == i) j = pick(rng);
    while (k == i || k == j) k = pick(rng);
    test(i, j, k);
  }
  return rep;
}

}  // namespace hitchin
