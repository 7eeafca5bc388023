#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <vector>

namespace hitchin {

/// Polynomial with coefficients in increasing degree: c[0] + c[1] x + ...
template <typename Scalar>
using Poly = std::vector<Scalar>;

template <typename Scalar>
Scalar poly_eval(const Poly<Scalar>& c, Scalar x) {
  Scalar acc = 0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
  return acc;
}

template <typename Scalar>
Poly<Scalar> poly_derivative(const Poly<Scalar>& c) {
  Poly<Scalar> d;
  for (std::size_t k = 1; k < c.size(); ++k) d.push_back(static_cast<Scalar>(k) * c[k]);
  return d;
}

namespace detail {

/// Sum of the principal k x k minors of `a` (the k-th elementary symmetric
/// function of its eigenvalues).
template <typename Scalar, int N>
Scalar principal_minor_sum(const Eigen::Matrix<Scalar, N, N>& a, int k) {
  const int n = static_cast<int>(a.rows());
  if (k == 0) return 1;
  Scalar total = 0;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    if (__builtin_popcount(mask) != k) continue;
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> sub(k, k);
    int r = 0;
    for (int i = 0; i < n; ++i) {
      if (!(mask & (1u << i))) continue;
      int c = 0;
      for (int j = 0; j < n; ++j) {
        if (mask & (1u << j)) sub(r, c++) = a(i, j);
      }
      ++r;
    }
    total += k == 1 ? sub(0, 0) : (k == 2 ? sub(0, 0) * sub(1, 1) - sub(0, 1) * sub(1, 0) : sub.determinant());
  }
  return total;
}

}  // namespace detail

/// Characteristic polynomial from a matrix and its inverse. Elementary
/// symmetric functions up to order n/2 come from principal minors of `a`,
/// the remaining ones from e_k(A) = det(A) e_(n-k)(A^-1). Each coefficient is
/// then dominated by its leading eigenvalue product, which keeps relative
/// accuracy for spectra spread over many orders of magnitude.
template <typename Scalar, int N>
Poly<Scalar> char_poly_paired(const Eigen::Matrix<Scalar, N, N>& a, const Eigen::Matrix<Scalar, N, N>& a_inv) {
  const int n = static_cast<int>(a.rows());
  const int half = n / 2;
  std::vector<Scalar> e(static_cast<std::size_t>(n + 1), Scalar(0));
  std::vector<Scalar> f(static_cast<std::size_t>(n + 1), Scalar(0));
  for (int k = 0; k <= half; ++k) {
    e[static_cast<std::size_t>(k)] = detail::principal_minor_sum<Scalar, N>(a, k);
    f[static_cast<std::size_t>(k)] = detail::principal_minor_sum<Scalar, N>(a_inv, k);
  }
  Scalar det = 0;
  if (n % 2 == 0) {
    det = e[static_cast<std::size_t>(half)] / f[static_cast<std::size_t>(half)];
  } else {
    det = a.determinant();
  }
  for (int k = half + 1; k <= n; ++k) e[static_cast<std::size_t>(k)] = det * f[static_cast<std::size_t>(n - k)];
  Poly<Scalar> c(static_cast<std::size_t>(n + 1));
  for (int k = 0; k <= n; ++k) c[static_cast<std::size_t>(n - k)] = (k % 2 == 0 ? 1 : -1) * e[static_cast<std::size_t>(k)];
  return c;
}

namespace detail {

/// Root of `c` in [lo, hi] given a strict sign change, by bisection to
/// machine resolution followed by a guarded Newton polish.
template <typename Scalar>
Scalar bracketed_root(const Poly<Scalar>& c, Scalar lo, Scalar hi) {
  using std::abs;
  Scalar flo = poly_eval(c, lo);
  for (int it = 0; it < 400; ++it) {
    const Scalar mid = lo + (hi - lo) / 2;
    if (mid <= lo || mid >= hi) break;
    const Scalar fm = poly_eval(c, mid);
    if (fm == Scalar(0)) return mid;
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  const Poly<Scalar> d = poly_derivative(c);
  Scalar x = lo + (hi - lo) / 2;
  for (int it = 0; it < 3; ++it) {
    const Scalar dv = poly_eval(d, x);
    if (dv == Scalar(0)) break;
    const Scalar nx = x - poly_eval(c, x) / dv;
    if (!(nx >= lo && nx <= hi)) break;
    if (abs(poly_eval(c, nx)) > abs(poly_eval(c, x))) break;
    x = nx;
  }
  return x;
}

}  // namespace detail

/// Real roots of a polynomial, sorted increasingly. Roots are isolated
/// between consecutive critical points (roots of the derivative, found
/// recursively) and the Cauchy bound; a root is reported only where the
/// polynomial changes sign, so even-multiplicity and complex roots are
/// not returned.
template <typename Scalar>
std::vector<Scalar> real_roots(Poly<Scalar> c) {
  using std::abs;
  while (c.size() > 1 && c.back() == Scalar(0)) c.pop_back();
  const std::size_t deg = c.size() - 1;
  if (deg == 0) return {};
  if (deg == 1) return {-c[0] / c[1]};

  Scalar bound = 0;
  for (std::size_t k = 0; k < deg; ++k) bound = std::max(bound, abs(c[k] / c[deg]));
  bound += 1;

  std::vector<Scalar> knots{-bound};
  for (Scalar r : real_roots(poly_derivative(c))) {
    if (r > -bound && r < bound) knots.push_back(r);
  }
  knots.push_back(bound);

  std::vector<Scalar> roots;
  for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
    const Scalar a = knots[k];
    const Scalar b = knots[k + 1];
    const Scalar fa = poly_eval(c, a);
    const Scalar fb = poly_eval(c, b);
    if (fa == Scalar(0)) {
      if (roots.empty() || roots.back() != a) roots.push_back(a);
      continue;
    }
    if ((fa < 0) != (fb < 0) && fb != Scalar(0)) roots.push_back(detail::bracketed_root(c, a, b));
  }
  if (poly_eval(c, knots.back()) == Scalar(0)) roots.push_back(knots.back());
  std::sort(roots.begin(), roots.end());
  return roots;
}

}  // namespace hitchin
