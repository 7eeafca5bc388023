#pragma once

#include "hitchin/error.hpp"
#include "hitchin/group.hpp"
#include "hitchin/projlin.hpp"
#include "hitchin/tolerances.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <utility>
#include <vector>

namespace hitchin {

/// Sorted logs of the absolute eigenvalues.
inline Vec4 jordan_projection(const Mat4& m, const Tolerances& tol = default_tolerances()) {
  return eigen_real<4>(m, tol).eigenvalues.cwiseAbs().array().log().matrix();
}

inline Vec4 jordan_projection(const Mat4& m, const Mat4& m_inv, const Tolerances& tol = default_tolerances()) {
  return eigen_real<4>(m, m_inv, tol).eigenvalues.cwiseAbs().array().log().matrix();
}

namespace detail {

using LMat4 = Eigen::Matrix<long double, 4, 4>;
using LMat6 = Eigen::Matrix<long double, 6, 6>;

/// Second exterior power in the basis e01, e02, e03, e12, e13, e23.
inline LMat6 exterior_square(const LMat4& m) {
  constexpr int pairs[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
  LMat6 out;
  for (int r = 0; r < 6; ++r) {
    for (int c = 0; c < 6; ++c) {
      const int i = pairs[r][0], j = pairs[r][1], k = pairs[c][0], l = pairs[c][1];
      out(r, c) = m(i, k) * m(j, l) - m(i, l) * m(j, k);
    }
  }
  return out;
}

/// Log of the spectral radius, on a copy scaled to unit max entry.
template <class M>
long double log_spectral_radius(const M& a) {
  const long double scale = a.cwiseAbs().maxCoeff();
  if (!(scale > 0)) fail(ErrorCode::NotLoxodromic, "zero matrix");
  Eigen::EigenSolver<M> es(a / scale, false);
  long double top = 0;
  for (Eigen::Index k = 0; k < a.rows(); ++k) top = std::max(top, std::abs(es.eigenvalues()(k)));
  return std::log(top) + std::log(scale);
}

/// Log spectral radii of the word image and of its exterior square, each
/// accumulated letter by letter.
inline std::pair<long double, long double> top_logs(const Rep4& rep, const Word& w) {
  LMat4 m = LMat4::Identity();
  LMat6 e = LMat6::Identity();
  for (int l : w.letters()) {
    const LMat4 g = rep.letter(l).cast<long double>();
    m = m * g;
    e = e * exterior_square(g);
  }
  return {log_spectral_radius(m), log_spectral_radius(e)};
}

}  // namespace detail

/// Jordan projection of a word image from top eigenvalues only: l1 and l1 + l2
/// from the image and its exterior square, l4 and l3 + l4 likewise from the
/// inverse. Each is well conditioned relative to the matrix norm, so long
/// words and powers keep their small eigenvalues.
inline Vec4 jordan_projection(const Rep4& rep, const Word& w, const Tolerances& tol = default_tolerances()) {
  const Word core = w.reduced().cyclic_split().second;
  if (core.empty()) fail(ErrorCode::NotLoxodromic, "word is conjugate to the identity");
  const auto [t1, t12] = detail::top_logs(rep, core);
  const auto [b4, b34] = detail::top_logs(rep, core.inverse());
  const Vec4 l(static_cast<double>(t1), static_cast<double>(t12 - t1), static_cast<double>(b4 - b34),
               static_cast<double>(-b4));
  for (int k = 0; k < 3; ++k) {
    if (l(k) - l(k + 1) < tol.gap) fail(ErrorCode::NotLoxodromic, "eigenvalue moduli not separated");
  }
  return l;
}

namespace detail {
inline void require_sorted(const Vec4& l) {
  for (int k = 0; k < 3; ++k) {
    if (l(k) < l(k + 1)) fail(ErrorCode::NotSorted, "log-eigenvalues must be in decreasing order");
  }
}
}  // namespace detail

/// (l1 - l3)(l3 - l4) - (l2 - l4)(l2 - l3); zero exactly when the two
/// boundary modelling exponents of a loxodromic element agree.
inline double eq1_residual(const Vec4& l) {
  detail::require_sorted(l);
  return (l(0) - l(2)) * (l(2) - l(3)) - (l(1) - l(3)) * (l(1) - l(2));
}

/// eq1_residual of the unit-normalized vector (the residual is homogeneous of degree 2).
inline double eq1_residual_normalized(const Vec4& l) {
  const double n = l.norm();
  if (n == 0.0) fail(ErrorCode::DegenerateGap, "zero log-eigenvalue vector");
  return eq1_residual(l / n);
}

/// ((l1 - l3)/(l1 - l2), (l2 - l4)/(l3 - l4)); both equal 2 for principal spectra.
inline std::pair<double, double> ellipse_ratios(const Vec4& l, double gap_tol = default_tolerances().gap) {
  detail::require_sorted(l);
  const double g12 = l(0) - l(1);
  const double g34 = l(2) - l(3);
  if (g12 < gap_tol || g34 < gap_tol) fail(ErrorCode::DegenerateGap, "denominator gap below tolerance");
  return {(l(0) - l(2)) / g12, (l(1) - l(3)) / g34};
}

/// lambda with l = (3, 1, -1, -3) log(lambda) within `tol`, if the spectrum
/// is symplectic and satisfies the constraint polynomial; otherwise none.
inline std::optional<double> diagonal_form_check(const Vec4& l, double tol) {
  detail::require_sorted(l);
  if (std::abs(l(0) + l(3)) > tol || std::abs(l(1) + l(2)) > tol) return std::nullopt;
  if (std::abs(eq1_residual(l)) > tol) return std::nullopt;
  const double t = l(1);
  if ((l - Vec4(3, 1, -1, -3) * t).cwiseAbs().maxCoeff() > tol) return std::nullopt;
  return std::exp(t);
}

/// Product of (a_i - a_j^3) over all ordered pairs (i, j), including i = j.
inline double fuchsian_witness(const Vec4& a) {
  double f = 1.0;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) f *= a(i) - a(j) * a(j) * a(j);
  }
  return f;
}

/// Witness with every factor divided by max(|a_i|, |a_j|^3); same zero set,
/// bounded magnitude for long words.
inline double fuchsian_witness_normalized(const Vec4& a) {
  double f = 1.0;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      const double c = a(j) * a(j) * a(j);
      const double s = std::max(std::abs(a(i)), std::abs(c));
      f *= s > 0 ? (a(i) - c) / s : 0.0;
    }
  }
  return f;
}

struct SpectrumRecord {
  Word word;
  Vec4 lambda_vec;
  Vec4 eigenvalues;
  double eq1_residual = 0.0;
  double eq1_normalized = 0.0;
  std::pair<double, double> ellipse_ratios{0.0, 0.0};
  double witness = 0.0;
};

struct SpectraScan {
  std::vector<SpectrumRecord> records;
  std::size_t skipped = 0;
};

inline SpectrumRecord spectrum_record(const Rep4& rep, const Word& w, const Tolerances& tol = default_tolerances()) {
  SpectrumRecord r;
  r.word = w;
  r.eigenvalues = word_spectrum<4>(rep, w, tol).split.eigenvalues;
  r.lambda_vec = jordan_projection(rep, w, tol);
  r.eq1_residual = eq1_residual(r.lambda_vec);
  r.eq1_normalized = eq1_residual_normalized(r.lambda_vec);
  r.ellipse_ratios = ellipse_ratios(r.lambda_vec, tol.gap);
  r.witness = fuchsian_witness_normalized(r.eigenvalues);
  return r;
}

/// One record per word of length at most `max_len` with a loxodromic image,
/// in enumeration order; other words are counted in `skipped`.
inline SpectraScan spectra_scan(const Rep4& rep, int max_len, const Tolerances& tol = default_tolerances()) {
  SpectraScan out;
  for (const Word& w : enumerate_words(max_len)) {
    try {
      out.records.push_back(spectrum_record(rep, w, tol));
    } catch (const GeometryError& e) {
      if (e.code() != ErrorCode::NotLoxodromic && e.code() != ErrorCode::DegenerateGap) throw;
      ++out.skipped;
    }
  }
  return out;
}

struct ConeSampleSet {
  std::vector<Vec4> directions;
  std::vector<Word> source_words;
};

inline ConeSampleSet cone_from_records(const std::vector<SpectrumRecord>& records) {
  ConeSampleSet cs;
  for (const auto& r : records) {
    const double n = r.lambda_vec.norm();
    if (n == 0.0) continue;
    cs.directions.push_back(r.lambda_vec / n);
    cs.source_words.push_back(r.word);
  }
  return cs;
}

/// Unit-normalized Jordan projections of all loxodromic words up to `max_len`.
inline ConeSampleSet limit_cone_sample(const Rep4& rep, int max_len, const Tolerances& tol = default_tolerances()) {
  ConeSampleSet cs;
  for (const Word& w : enumerate_words(max_len)) {
    try {
      const Vec4 l = jordan_projection(rep, w, tol);
      cs.directions.push_back(l / l.norm());
      cs.source_words.push_back(w);
    } catch (const GeometryError& e) {
      if (e.code() != ErrorCode::NotLoxodromic) throw;
    }
  }
  return cs;
}

struct ConeDimension {
  int rank = 0;
  Eigen::VectorXd singular_values;
};

/// Numerical rank of the stacked directions at a relative threshold.
inline ConeDimension cone_dimension(const ConeSampleSet& cs, double rel_threshold = 1e-6) {
  if (cs.directions.empty()) fail(ErrorCode::EmptyInput, "cone sample set is empty");
  MatX m(static_cast<Eigen::Index>(cs.directions.size()), 4);
  for (std::size_t k = 0; k < cs.directions.size(); ++k) m.row(static_cast<Eigen::Index>(k)) = cs.directions[k].transpose();
  Eigen::BDCSVD<MatX> svd(m);
  ConeDimension out;
  out.singular_values = svd.singularValues();
  const double top = out.singular_values(0);
  for (Eigen::Index k = 0; k < out.singular_values.size(); ++k) {
    if (out.singular_values(k) > rel_threshold * top) ++out.rank;
  }
  return out;
}

}  // namespace hitchin
