#pragma once

// Truncated complex Taylor series around a base point. Every holomorphic
// function handled by the library (f, h1, h2, w1, w2, g1, g2, the components
// of Phi and Psi, reparameterizations) is carried as one of these.
//
// All operations are formal: the coefficients of a result are exact (up to
// rounding) through the truncation degree, which is the minimum of the
// operand degrees.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "weier4/error.hpp"

namespace weier4 {

using Complex = std::complex<double>;

inline constexpr double kFlushBelow = 1e-300;
inline constexpr double kZeroConstantTerm = 1e-14;

namespace detail {

inline double flush(double x) { return std::abs(x) < kFlushBelow ? 0.0 : x; }

inline Complex flush(Complex c) { return {flush(c.real()), flush(c.imag())}; }

inline bool finite(Complex c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); }

inline std::optional<double> min_radius(std::optional<double> a, std::optional<double> b) {
  if (!a) return b;
  if (!b) return a;
  return std::min(*a, *b);
}

}  // namespace detail

class TaylorSeries {
 public:
  static constexpr int kDefaultOrder = 24;
  /// Trust radius used for entire functions (polynomials, exp, cosh, sinh).
  static constexpr double kEntire = std::numeric_limits<double>::infinity();

  /// The zero series of order 1 around 0.
  TaylorSeries() : coeffs_(2, Complex{}) {}

  TaylorSeries(Complex base, std::vector<Complex> coeffs, std::optional<double> radius = std::nullopt)
      : base_(base), coeffs_(std::move(coeffs)), radius_(radius) {
    if (coeffs_.empty()) throw Error(Errc::InvalidArgument, "series needs at least one coefficient");
    if (!detail::finite(base_)) throw Error(Errc::NonFinite, "non-finite series base");
    if (radius_ && !(*radius_ > 0.0)) throw Error(Errc::InvalidArgument, "trust radius must be positive");
    for (auto& c : coeffs_) {
      if (!detail::finite(c)) throw Error(Errc::NonFinite, "non-finite series coefficient");
      c = detail::flush(c);
    }
  }

  static TaylorSeries constant(Complex c, int order = kDefaultOrder, Complex base = {}) {
    std::vector<Complex> v(static_cast<std::size_t>(order) + 1, Complex{});
    v[0] = c;
    return TaylorSeries(base, std::move(v), kEntire);
  }

  /// The coordinate function t itself, expanded around `base`.
  static TaylorSeries variable(int order = kDefaultOrder, Complex base = {}) {
    std::vector<Complex> v(static_cast<std::size_t>(order) + 1, Complex{});
    v[0] = base;
    if (order >= 1) v[1] = 1.0;
    return TaylorSeries(base, std::move(v), kEntire);
  }

  Complex base() const noexcept { return base_; }
  int order() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  std::span<const Complex> coeffs() const noexcept { return coeffs_; }
  const Complex& operator[](int k) const { return coeffs_.at(static_cast<std::size_t>(k)); }
  std::optional<double> radius_hint() const noexcept { return radius_; }

  TaylorSeries with_radius(std::optional<double> r) const { return TaylorSeries(base_, coeffs_, r); }

  TaylorSeries truncated(int order) const {
    if (order < 0) throw Error(Errc::InvalidArgument, "negative truncation order");
    std::vector<Complex> v(coeffs_.begin(), coeffs_.begin() + std::min<std::ptrdiff_t>(order + 1, std::ssize(coeffs_)));
    v.resize(static_cast<std::size_t>(order) + 1, Complex{});
    return TaylorSeries(base_, std::move(v), radius_);
  }

  double max_abs() const {
    double m = 0.0;
    for (const auto& c : coeffs_) m = std::max(m, std::abs(c));
    return m;
  }

  /// Horner evaluation of the truncated polynomial.
  Complex evaluate(Complex t) const {
    const Complex dt = t - base_;
    if (radius_ && !(std::abs(dt) < *radius_))
      throw Error(Errc::OutsideTrustRadius, "evaluation point outside the series trust radius");
    Complex acc{};
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * dt + *it;
    return acc;
  }

  Complex operator()(Complex t) const { return evaluate(t); }

  TaylorSeries operator-() const {
    std::vector<Complex> v(coeffs_);
    for (auto& c : v) c = -c;
    return TaylorSeries(base_, std::move(v), radius_);
  }

  friend TaylorSeries operator+(const TaylorSeries& a, const TaylorSeries& b) {
    const int n = common_order(a, b);
    std::vector<Complex> v(static_cast<std::size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) v[k] = a.coeffs_[k] + b.coeffs_[k];
    return TaylorSeries(a.base_, std::move(v), detail::min_radius(a.radius_, b.radius_));
  }

  friend TaylorSeries operator-(const TaylorSeries& a, const TaylorSeries& b) { return a + (-b); }

  friend TaylorSeries operator*(const TaylorSeries& a, const TaylorSeries& b) {
    const int n = common_order(a, b);
    std::vector<Complex> v(static_cast<std::size_t>(n) + 1, Complex{});
    for (int k = 0; k <= n; ++k)
      for (int j = 0; j <= k; ++j) v[k] += a.coeffs_[j] * b.coeffs_[k - j];
    return TaylorSeries(a.base_, std::move(v), detail::min_radius(a.radius_, b.radius_));
  }

  friend TaylorSeries operator/(const TaylorSeries& a, const TaylorSeries& b) {
    const int n = common_order(a, b);
    const Complex b0 = b.coeffs_[0];
    if (std::abs(b0) <= kZeroConstantTerm)
      throw Error(Errc::DivisionByZeroConstantTerm, "division by a series with vanishing constant term");
    std::vector<Complex> v(static_cast<std::size_t>(n) + 1, Complex{});
    for (int k = 0; k <= n; ++k) {
      Complex s = a.coeffs_[k];
      for (int j = 1; j <= k; ++j) s -= b.coeffs_[j] * v[k - j];
      v[k] = s / b0;
    }
    // The quotient may have poles off the base point; drop the guard.
    return TaylorSeries(a.base_, std::move(v), std::nullopt);
  }

  friend TaylorSeries operator*(Complex s, const TaylorSeries& a) {
    std::vector<Complex> v(a.coeffs_);
    for (auto& c : v) c *= s;
    return TaylorSeries(a.base_, std::move(v), a.radius_);
  }
  friend TaylorSeries operator*(const TaylorSeries& a, Complex s) { return s * a; }
  friend TaylorSeries operator/(const TaylorSeries& a, Complex s) { return (1.0 / s) * a; }

  friend TaylorSeries operator+(const TaylorSeries& a, Complex s) {
    std::vector<Complex> v(a.coeffs_);
    v[0] += s;
    return TaylorSeries(a.base_, std::move(v), a.radius_);
  }
  friend TaylorSeries operator+(Complex s, const TaylorSeries& a) { return a + s; }
  friend TaylorSeries operator-(const TaylorSeries& a, Complex s) { return a + (-s); }
  friend TaylorSeries operator-(Complex s, const TaylorSeries& a) { return (-a) + s; }

  friend TaylorSeries operator/(Complex s, const TaylorSeries& a) {
    return constant(s, a.order(), a.base_) / a;
  }

 private:
  static int common_order(const TaylorSeries& a, const TaylorSeries& b) {
    if (a.base_ != b.base_) throw Error(Errc::BaseMismatch, "series expanded around different base points");
    return std::min(a.order(), b.order());
  }

  Complex base_{};
  std::vector<Complex> coeffs_;
  std::optional<double> radius_{};
};

// ---------------------------------------------------------------------------
// Calculus

/// c_k -> (k+1) c_{k+1}; the order drops by one (never below zero).
inline TaylorSeries differentiate(const TaylorSeries& a) {
  const int n = std::max(a.order() - 1, 0);
  std::vector<Complex> v(static_cast<std::size_t>(n) + 1, Complex{});
  for (int k = 0; k + 1 <= a.order(); ++k) v[k] = static_cast<double>(k + 1) * a[k + 1];
  return TaylorSeries(a.base(), std::move(v), a.radius_hint());
}

/// c_k -> c_{k-1}/k with the constant pinned to zero; the order rises by one.
inline TaylorSeries integrate(const TaylorSeries& a) {
  std::vector<Complex> v(static_cast<std::size_t>(a.order()) + 2, Complex{});
  for (int k = 1; k <= a.order() + 1; ++k) v[k] = a[k - 1] / static_cast<double>(k);
  return TaylorSeries(a.base(), std::move(v), a.radius_hint());
}

// ---------------------------------------------------------------------------
// Elementary functions

inline TaylorSeries exp(const TaylorSeries& a) {
  const int n = a.order();
  std::vector<Complex> v(static_cast<std::size_t>(n) + 1, Complex{});
  v[0] = std::exp(a[0]);
  for (int k = 1; k <= n; ++k) {
    Complex s{};
    for (int j = 1; j <= k; ++j) s += static_cast<double>(j) * a[j] * v[k - j];
    v[k] = s / static_cast<double>(k);
  }
  return TaylorSeries(a.base(), std::move(v), a.radius_hint());
}

inline TaylorSeries cosh(const TaylorSeries& a) { return 0.5 * (exp(a) + exp(-a)); }
inline TaylorSeries sinh(const TaylorSeries& a) { return 0.5 * (exp(a) - exp(-a)); }

inline TaylorSeries cos(const TaylorSeries& a) {
  const Complex i{0.0, 1.0};
  return cosh(i * a);
}

inline TaylorSeries sin(const TaylorSeries& a) {
  const Complex i{0.0, 1.0};
  return -i * sinh(i * a);
}

/// Principal square root on the constant term, continued by the
/// self-convolution recurrence.
inline TaylorSeries sqrt(const TaylorSeries& a) {
  if (std::abs(a[0]) <= kZeroConstantTerm)
    throw Error(Errc::RootAtBranchPoint, "square root of a series with vanishing constant term");
  const int n = a.order();
  std::vector<Complex> v(static_cast<std::size_t>(n) + 1, Complex{});
  v[0] = std::sqrt(a[0]);
  for (int k = 1; k <= n; ++k) {
    Complex s = a[k];
    for (int j = 1; j < k; ++j) s -= v[j] * v[k - j];
    v[k] = s / (2.0 * v[0]);
  }
  return TaylorSeries(a.base(), std::move(v), std::nullopt);
}

/// a^p for real p with the principal branch on the constant term.
inline TaylorSeries pow(const TaylorSeries& a, double p) {
  if (std::abs(a[0]) <= kZeroConstantTerm)
    throw Error(Errc::RootAtBranchPoint, "fractional power of a series with vanishing constant term");
  const int n = a.order();
  std::vector<Complex> v(static_cast<std::size_t>(n) + 1, Complex{});
  v[0] = std::exp(p * std::log(a[0]));
  for (int k = 1; k <= n; ++k) {
    Complex s{};
    for (int j = 1; j <= k; ++j) s += ((p + 1.0) * j - k) * a[j] * v[k - j];
    v[k] = s / (static_cast<double>(k) * a[0]);
  }
  return TaylorSeries(a.base(), std::move(v), std::nullopt);
}

inline TaylorSeries root4(const TaylorSeries& a) { return pow(a, 0.25); }

inline TaylorSeries pow(const TaylorSeries& a, int n) {
  if (n < 0) return 1.0 / pow(a, -n);
  TaylorSeries result = TaylorSeries::constant(1.0, a.order(), a.base()).with_radius(a.radius_hint());
  TaylorSeries sq = a;
  while (n > 0) {
    if (n & 1) result = result * sq;
    n >>= 1;
    if (n > 0) sq = sq * sq;
  }
  return result;
}

/// Principal logarithm: log(c0) + integral of a'/a.
inline TaylorSeries log(const TaylorSeries& a) {
  if (std::abs(a[0]) <= kZeroConstantTerm) throw Error(Errc::LogAtZero, "logarithm of a series vanishing at its base");
  if (a.order() == 0) return TaylorSeries(a.base(), {std::log(a[0])});
  TaylorSeries r = integrate(differentiate(a) / a) + std::log(a[0]);
  return r.with_radius(std::nullopt);
}

// ---------------------------------------------------------------------------
// Composition and reversion

/// Re-expands the truncated polynomial of `a` around a new center. Exact for
/// the polynomial itself.
inline TaylorSeries recenter(const TaylorSeries& a, Complex center) {
  const Complex d = center - a.base();
  if (d == Complex{}) return a;
  std::vector<Complex> v(a.coeffs().begin(), a.coeffs().end());
  const int n = a.order();
  // Repeated synthetic division (Horner shift).
  for (int i = 0; i < n; ++i)
    for (int k = n - 1; k >= i; --k) v[k] += d * v[k + 1];
  std::optional<double> r = a.radius_hint();
  if (r) r = *r - std::abs(d);
  if (r && !(*r > 0.0)) r = std::nullopt;
  return TaylorSeries(center, std::move(v), r);
}

/// Formal composition a(b(s)), expanded around b's base point.
inline TaylorSeries compose(const TaylorSeries& a, const TaylorSeries& b) {
  const Complex inner0 = b[0];
  if (auto r = a.radius_hint(); r && !(std::abs(inner0 - a.base()) < *r))
    throw Error(Errc::CompositionOutsideRadius, "inner series maps its base outside the outer trust disc");
  const TaylorSeries outer = recenter(a, inner0);
  const int n = std::min(a.order(), b.order());
  const TaylorSeries inner = (b - inner0).truncated(n);
  TaylorSeries acc = TaylorSeries::constant(outer[n], n, b.base());
  for (int k = n - 1; k >= 0; --k) acc = acc * inner + outer[k];
  return acc.with_radius(b.radius_hint());
}

/// Series reversion. For `a` with a(base) = 0 and a'(base) != 0 returns b,
/// expanded around 0 with b(0) = a.base(), such that a(b(s)) = s through the
/// truncation degree.
inline TaylorSeries revert(const TaylorSeries& a) {
  const int n = a.order();
  if (n < 1 || std::abs(a[1]) <= kZeroConstantTerm)
    throw Error(Errc::NotInvertibleAtBase, "series derivative vanishes at its base");
  if (std::abs(a[0]) > 1e-12 * std::max(1.0, std::abs(a[1])))
    throw Error(Errc::InvalidArgument, "revert needs a series vanishing at its base");

  // Work in local coordinates: p(x) = a(base + x), solve p(r(s)) = s, r(0) = 0.
  std::vector<Complex> pc(a.coeffs().begin(), a.coeffs().end());
  pc[0] = 0.0;
  const TaylorSeries p(0.0, std::move(pc));
  const TaylorSeries dp = differentiate(p).truncated(n);
  const TaylorSeries s = TaylorSeries::variable(n, 0.0);

  TaylorSeries r = s / a[1];
  auto newton_step = [&] { r = r - (compose(p, r) - s) / compose(dp, r); };
  // Each Newton step doubles the number of correct coefficients; one extra
  // pass polishes rounding.
  for (int correct = 2; correct <= n; correct *= 2) newton_step();
  newton_step();
  std::vector<Complex> out(r.coeffs().begin(), r.coeffs().end());
  out[0] = a.base();
  return TaylorSeries(0.0, std::move(out));
}

/// Free-function spelling of evaluation.
inline Complex evaluate(const TaylorSeries& a, Complex t) { return a.evaluate(t); }

/// Largest coefficient-wise distance between two series over their common
/// truncation degree.
inline double max_coeff_diff(const TaylorSeries& a, const TaylorSeries& b) {
  if (a.base() != b.base()) throw Error(Errc::BaseMismatch, "series expanded around different base points");
  const int n = std::min(a.order(), b.order());
  double m = 0.0;
  for (int k = 0; k <= n; ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

}  // namespace weier4
