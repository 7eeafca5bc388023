#pragma once

#include "hitchin/error.hpp"
#include "hitchin/linalg.hpp"
#include "hitchin/projlin.hpp"
#include "hitchin/tolerances.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

namespace hitchin {

/// Element of the genus-2 surface group as a word in a1, b1, a2, b2 and their
/// inverses. Letters are encoded as +-1..+-4 (a1, b1, a2, b2); negative means
/// inverse. Text form writes an inverse with an upper-case letter ("A1").
class Word {
 public:
  Word() = default;
  explicit Word(std::vector<int> letters) : letters_(std::move(letters)) {
    for (int l : letters_) {
      if (l == 0 || l < -4 || l > 4) fail(ErrorCode::InvalidInput, "letter out of range");
    }
  }

  static Word parse(const std::string& text) {
    if (text == "e" || text.empty()) return Word();
    std::vector<int> out;
    if (text.size() % 2 != 0) fail(ErrorCode::InvalidInput, "malformed word '" + text + "'");
    for (std::size_t i = 0; i < text.size(); i += 2) {
      const char c = text[i];
      const char k = text[i + 1];
      int base = 0;
      if (c == 'a' || c == 'A') base = 1;
      if (c == 'b' || c == 'B') base = 2;
      if (base == 0 || (k != '1' && k != '2')) fail(ErrorCode::InvalidInput, "malformed word '" + text + "'");
      const int gen = base + 2 * (k - '1');
      out.push_back((c == 'A' || c == 'B') ? -gen : gen);
    }
    return Word(std::move(out));
  }

  std::string str() const {
    if (letters_.empty()) return "e";
    std::string s;
    for (int l : letters_) {
      const int g = std::abs(l);
      const bool inv = l < 0;
      const char c = ((g - 1) % 2 == 0) ? (inv ? 'A' : 'a') : (inv ? 'B' : 'b');
      s += c;
      s += static_cast<char>('1' + (g - 1) / 2);
    }
    return s;
  }

  const std::vector<int>& letters() const { return letters_; }
  std::size_t size() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }

  bool is_reduced() const {
    for (std::size_t i = 1; i < letters_.size(); ++i) {
      if (letters_[i] == -letters_[i - 1]) return false;
    }
    return true;
  }

  Word inverse() const {
    std::vector<int> out(letters_.rbegin(), letters_.rend());
    for (int& l : out) l = -l;
    return Word(std::move(out));
  }

  Word reduced() const {
    std::vector<int> out;
    for (int l : letters_) {
      if (!out.empty() && out.back() == -l) {
        out.pop_back();
      } else {
        out.push_back(l);
      }
    }
    return Word(std::move(out));
  }

  /// Concatenation followed by free reduction.
  friend Word operator*(const Word& u, const Word& v) {
    std::vector<int> out = u.letters_;
    out.insert(out.end(), v.letters_.begin(), v.letters_.end());
    return Word(std::move(out)).reduced();
  }

  Word power(int n) const {
    Word out;
    const Word base = n >= 0 ? *this : inverse();
    for (int k = 0; k < std::abs(n); ++k) out = out * base;
    return out;
  }

  /// Splits a reduced word as u * core * u^-1 with `core` cyclically reduced.
  std::pair<Word, Word> cyclic_split() const {
    std::size_t lo = 0;
    std::size_t hi = letters_.size();
    while (hi - lo >= 2 && letters_[lo] == -letters_[hi - 1]) {
      ++lo;
      --hi;
    }
    return {Word(std::vector<int>(letters_.begin(), letters_.begin() + static_cast<std::ptrdiff_t>(lo))),
            Word(std::vector<int>(letters_.begin() + static_cast<std::ptrdiff_t>(lo),
                                  letters_.begin() + static_cast<std::ptrdiff_t>(hi)))};
  }

  bool operator==(const Word&) const = default;

 private:
  std::vector<int> letters_;
};

/// Letters in enumeration order: a1, A1, b1, B1, a2, A2, b2, B2.
inline constexpr std::array<int, 8> kLetterOrder{1, -1, 2, -2, 3, -3, 4, -4};

inline Word commutator(const Word& u, const Word& v) { return u * v * u.inverse() * v.inverse(); }

/// The surface relator [a1, b1][a2, b2].
inline Word relator() { return Word({1, 2, -1, -2, 3, 4, -3, -4}); }

/// The separating curve [a1, b1].
inline Word separating_curve() { return Word({1, 2, -1, -2}); }

/// Number of freely reduced nontrivial words of length at most `max_len`.
inline std::uint64_t reduced_word_count(int max_len) {
  std::uint64_t total = 0;
  std::uint64_t layer = 8;
  for (int n = 1; n <= max_len; ++n) {
    total += layer;
    layer *= 7;
  }
  return total;
}

inline constexpr std::uint64_t kWordLimit = 10'000'000;

/// All freely reduced words of length 1..max_len, ordered by length and then
/// lexicographically in kLetterOrder.
inline std::vector<Word> enumerate_words(int max_len) {
  if (max_len < 0) fail(ErrorCode::InvalidInput, "max_len must be nonnegative");
  if (reduced_word_count(max_len) > kWordLimit) {
    fail(ErrorCode::ResourceLimit, "word enumeration up to length " + std::to_string(max_len) + " exceeds " +
                                       std::to_string(kWordLimit) + " words");
  }
  std::vector<Word> out;
  out.reserve(static_cast<std::size_t>(reduced_word_count(max_len)));
  std::vector<std::vector<int>> layer{{}};
  for (int n = 1; n <= max_len; ++n) {
    std::vector<std::vector<int>> next;
    next.reserve(layer.size() * 8);
    for (const auto& w : layer) {
      for (int l : kLetterOrder) {
        if (!w.empty() && w.back() == -l) continue;
        auto v = w;
        v.push_back(l);
        next.push_back(std::move(v));
      }
    }
    for (const auto& w : next) out.emplace_back(w);
    layer = std::move(next);
  }
  return out;
}

/// Images of a1, b1, a2, b2 in SL(N, R) together with their inverses.
template <int N>
class SurfaceRep {
 public:
  using Matrix = Eigen::Matrix<double, N, N>;
  using LMatrix = Eigen::Matrix<long double, N, N>;
  static constexpr int rank = N;

  SurfaceRep() {
    for (auto& g : gens_) g = Matrix::Identity();
    inv_ = gens_;
  }

  /// Validates unit determinants and the surface relation.
  explicit SurfaceRep(const std::array<Matrix, 4>& gens, const Tolerances& tol = default_tolerances()) : gens_(gens) {
    for (std::size_t k = 0; k < 4; ++k) {
      if (!gens_[k].allFinite()) fail(ErrorCode::InvalidInput, "generator has non-finite entries");
      const double det = static_cast<double>(gens_[k].template cast<long double>().determinant());
      if (std::abs(det - 1.0) > std::max(tol.det, 1e-12 * gens_[k].cwiseAbs().maxCoeff() * N)) {
        fail(ErrorCode::InvalidInput, "generator determinant is not 1");
      }
      inv_[k] = accurate_inverse<N>(gens_[k]);
    }
    residual_ = compute_relator_residual();
    if (residual_ > tol.relator) {
      fail(ErrorCode::InvalidInput, "surface relator residual " + std::to_string(residual_) + " exceeds tolerance");
    }
  }

  const std::array<Matrix, 4>& generators() const { return gens_; }
  const Matrix& generator(int k) const { return gens_[static_cast<std::size_t>(k)]; }
  double relator_residual() const { return residual_; }

  /// Image of a single letter.
  const Matrix& letter(int l) const {
    const auto k = static_cast<std::size_t>(std::abs(l) - 1);
    return l > 0 ? gens_[k] : inv_[k];
  }

  /// Product of letter images accumulated in long double.
  LMatrix evaluate_long(const Word& w) const {
    if (!w.is_reduced()) fail(ErrorCode::NotReduced, "word " + w.str() + " is not freely reduced");
    LMatrix acc = LMatrix::Identity();
    for (int l : w.letters()) acc = acc * letter(l).template cast<long double>();
    return acc;
  }

  Matrix evaluate(const Word& w) const { return evaluate_long(w).template cast<double>(); }

 private:
  double compute_relator_residual() const {
    LMatrix acc = LMatrix::Identity();
    const Word r = relator();
    for (int l : r.letters()) acc = acc * letter(l).template cast<long double>();
    const LMatrix id = LMatrix::Identity();
    return static_cast<double>(std::min((acc - id).norm(), (acc + id).norm()));
  }

  std::array<Matrix, 4> gens_;
  std::array<Matrix, 4> inv_;
  double residual_ = 0.0;
};

using Rep2 = SurfaceRep<2>;
using Rep4 = SurfaceRep<4>;

template <int N>
Eigen::Matrix<double, N, N> evaluate(const SurfaceRep<N>& rep, const Word& w) {
  return rep.evaluate(w);
}

/// Eigen-decomposition of the image of a word. The spectrum is computed on
/// the cyclically reduced core, whose image is far better conditioned than a
/// long conjugate, and the eigenvectors are transported by the conjugator.
/// `left_bottom` is the left eigenvector of the smallest eigenvalue.
template <int N>
struct WordSpectrum {
  EigenSplit<N> split;
  Eigen::Matrix<double, N, 1> left_bottom;
};

template <int N>
WordSpectrum<N> word_spectrum(const SurfaceRep<N>& rep, const Word& w, const Tolerances& tol = default_tolerances()) {
  if (w.empty()) fail(ErrorCode::NotLoxodromic, "identity word has no loxodromic image");
  using LMat = Eigen::Matrix<long double, N, N>;
  using LVec = Eigen::Matrix<long double, N, 1>;
  const auto [u, core] = w.reduced().cyclic_split();
  const LMat m = rep.evaluate_long(core);
  const LMat m_inv = rep.evaluate_long(core.inverse());
  WordSpectrum<N> out{eigen_real<N>(m, m_inv, tol), {}};
  long double mu = 1.0L / static_cast<long double>(out.split.eigenvalues(N - 1));
  const LMat mt = m_inv.transpose();
  LVec left = detail::eigenvector_for<N>(mt, mu);
  if (!u.empty()) {
    const LMat g = rep.evaluate_long(u);
    const LMat g_inv = rep.evaluate_long(u.inverse());
    for (int k = 0; k < N; ++k) {
      const LVec v = g * out.split.eigenvectors.col(k).template cast<long double>();
      out.split.eigenvectors.col(k) = detail::sign_fixed<N>(v);
    }
    left = g_inv.transpose() * left;
  }
  out.left_bottom = detail::sign_fixed<N>(left);
  return out;
}

namespace detail {

inline Mat2 half_rotation(double theta) {
  Mat2 r;
  r << std::cos(theta / 2), -std::sin(theta / 2), std::sin(theta / 2), std::cos(theta / 2);
  return r;
}

}  // namespace detail

/// Holonomy of the regular hyperbolic octagon with interior angles pi/4 in
/// the upper half-plane, centered at i. Side j is the geodesic at angle
/// j*pi/4; the side pairings 2->0, 1->3, 6->4, 5->7 give a1, b1, a2, b2 and
/// satisfy [a1, b1][a2, b2] = I.
inline Rep2 fuchsian_octagon_rep() {
  using std::numbers::pi;
  const double r = std::acosh(1.0 + std::sqrt(2.0));
  Mat2 d = Mat2::Zero();
  d(0, 0) = std::exp(r);
  d(1, 1) = std::exp(-r);
  auto translation = [&](int j) {
    const Mat2 rot = detail::half_rotation(j * pi / 4);
    return Mat2(rot * d * rot.transpose());
  };
  auto pairing = [&](int from, int to) {
    return Mat2(translation(to) * detail::half_rotation((to + 4 - from) * pi / 4));
  };
  return Rep2({pairing(2, 0), pairing(1, 3), pairing(6, 4), pairing(5, 7)});
}

/// Composition with the irreducible representation SL(2) -> SL(4).
inline Rep4 lift_principal(const Rep2& rep2, const Tolerances& tol = default_tolerances()) {
  std::array<Mat4, 4> g;
  for (int k = 0; k < 4; ++k) g[static_cast<std::size_t>(k)] = sym_cube(rep2.generator(k), tol.det);
  return Rep4(g, tol);
}

/// Bending along the separating curve [a1, b1]: a1, b1 are kept and a2, b2
/// are conjugated by exp(eps * diag(direction)) written in the eigenbasis of
/// the curve's image, which commutes with that image.
inline Rep4 bend(const Rep4& rep, const Word& curve, const Vec4& direction, double eps,
                 const Tolerances& tol = default_tolerances()) {
  if (!(curve == separating_curve())) fail(ErrorCode::InvalidInput, "bending is only supported along [a1,b1]");
  if (std::abs(direction.sum()) > 1e-12) fail(ErrorCode::BadDirection, "bending direction must sum to zero");
  if (eps == 0.0) return rep;
  const Mat4 c = rep.evaluate(curve);
  const Mat4 c_inv = rep.evaluate(curve.inverse());
  const EigenSplit<4> split = eigen_real<4>(c, c_inv, tol);
  using LMat = Eigen::Matrix<long double, 4, 4>;
  const LMat v = split.eigenvectors.cast<long double>();
  const LMat v_inv = v.fullPivLu().inverse();
  LMat e = LMat::Zero();
  for (int k = 0; k < 4; ++k) e(k, k) = std::exp(static_cast<long double>(eps) * direction(k));
  LMat e_inv = LMat::Zero();
  for (int k = 0; k < 4; ++k) e_inv(k, k) = 1.0L / e(k, k);
  const LMat conj = v * e * v_inv;
  const LMat conj_inv = v * e_inv * v_inv;
  std::array<Mat4, 4> g = rep.generators();
  for (std::size_t k = 2; k < 4; ++k) {
    g[k] = (conj * g[k].cast<long double>() * conj_inv).cast<double>();
  }
  return Rep4(g, tol);
}

}  // namespace hitchin
