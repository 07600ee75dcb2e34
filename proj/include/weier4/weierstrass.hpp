#pragma once

// Weierstrass representations of minimal surfaces in R^4.
//
// Phi = 2 dx/dt = x_u - i x_v is carried as four Taylor series. The builders
// below produce Phi from a function f and a pair of holomorphic functions in
// one of the trigonometric (W1), hyperbolic (W2, W5) or polynomial (W6)
// shapes, or from a pair alone in canonical form.

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include <Eigen/Core>

#include "weier4/series.hpp"

namespace weier4 {

using CVec4 = Eigen::Matrix<Complex, 4, 1>;
using Vec4 = Eigen::Vector4d;

inline constexpr Complex kI{0.0, 1.0};

/// Tolerance for Phi^2 = 0, relative to the squared coefficient scale.
inline constexpr double kIsothermalTol = 1e-10;
/// Tolerance for Phi'^2 = +-1 on canonical builder output.
inline constexpr double kCanonicalTol = 1e-9;

enum class PhiKind { general, canonical_first, canonical_second };

struct PhiCurve {
  std::array<TaylorSeries, 4> phi;
  PhiKind kind = PhiKind::general;

  Complex base() const { return phi[0].base(); }
  int order() const {
    int n = phi[0].order();
    for (const auto& c : phi) n = std::min(n, c.order());
    return n;
  }

  /// Phi . Phi (complex bilinear, no conjugation).
  TaylorSeries square() const {
    return phi[0] * phi[0] + phi[1] * phi[1] + phi[2] * phi[2] + phi[3] * phi[3];
  }

  std::array<TaylorSeries, 4> derivative() const {
    return {differentiate(phi[0]), differentiate(phi[1]), differentiate(phi[2]), differentiate(phi[3])};
  }

  CVec4 value(Complex t) const {
    return CVec4(phi[0].evaluate(t), phi[1].evaluate(t), phi[2].evaluate(t), phi[3].evaluate(t));
  }

  CVec4 derivative_value(Complex t) const {
    CVec4 d;
    for (int i = 0; i < 4; ++i) d[i] = differentiate(phi[i]).evaluate(t);
    return d;
  }

  double max_abs() const {
    double m = 0.0;
    for (const auto& c : phi) m = std::max(m, c.max_abs());
    return m;
  }

  /// Largest coefficient of Phi^2 relative to the squared coefficient scale.
  double isothermal_violation() const {
    const double scale = std::max(1.0, max_abs() * max_abs());
    return square().max_abs() / scale;
  }
};

/// Checks Phi^2 = 0 and regularity at the base point.
inline void check_phi(const PhiCurve& p) {
  for (const auto& c : p.phi)
    if (c.base() != p.base()) throw Error(Errc::BaseMismatch, "Phi components expanded around different points");
  if (const double v = p.isothermal_violation(); v > kIsothermalTol)
    throw Error(Errc::InternalInconsistency, "Phi^2 does not vanish (violation " + std::to_string(v) + ")");
  if (p.value(p.base()).squaredNorm() <= 1e-12) throw Error(Errc::DegeneratePoint, "|Phi|^2 vanishes at the base point");
}

inline double max_coeff_diff(const PhiCurve& a, const PhiCurve& b) {
  double m = 0.0;
  for (int i = 0; i < 4; ++i) m = std::max(m, max_coeff_diff(a.phi[i], b.phi[i]));
  return m;
}

/// Coefficient distance between Phi curves; with allow_sign the better of
/// a - b and a + b is reported (the square-root branch fixes Phi only up to
/// sign).
inline double phi_distance(const PhiCurve& a, const PhiCurve& b, bool allow_sign) {
  const double plus = max_coeff_diff(a, b);
  if (!allow_sign) return plus;
  PhiCurve nb = b;
  for (auto& c : nb.phi) c = -c;
  return std::min(plus, max_coeff_diff(a, nb));
}

// ---------------------------------------------------------------------------
// Holomorphic pairs

enum class PairFlavor { h, w, g };

inline const char* flavor_name(PairFlavor f) {
  switch (f) {
    case PairFlavor::h: return "h";
    case PairFlavor::w: return "w";
    case PairFlavor::g: return "g";
  }
  return "?";
}

/// (h1, h2), (w1, w2) or (g1, g2). General-type conditions are not enforced on
/// construction; the canonical builders check them at the base point.
struct HoloPair {
  TaylorSeries p;
  TaylorSeries q;
  PairFlavor flavor = PairFlavor::g;
};

/// Empty when the pair is of general type at `t`; otherwise a diagnostic
/// naming the failed condition.
inline std::string general_type_failure(const HoloPair& pair, Complex t) {
  const Complex dp = differentiate(pair.p).evaluate(t);
  const Complex dq = differentiate(pair.q).evaluate(t);
  const std::string n = flavor_name(pair.flavor);
  switch (pair.flavor) {
    case PairFlavor::g:
    case PairFlavor::w:
      if (std::abs(dp) <= kZeroConstantTerm) return n + "1' = 0";
      if (std::abs(dq) <= kZeroConstantTerm) return n + "2' = 0";
      return {};
    case PairFlavor::h:
      if (std::abs(dp * dp - dq * dq) <= kZeroConstantTerm) return "h1'^2 = h2'^2";
      return {};
  }
  return {};
}

inline HoloPair convert_pair(const HoloPair& pair, PairFlavor to) {
  if (pair.flavor == to) return pair;
  switch (pair.flavor) {
    case PairFlavor::h:
      if (to == PairFlavor::w) return {pair.p + pair.q, pair.p - pair.q, PairFlavor::w};
      return convert_pair(convert_pair(pair, PairFlavor::w), to);
    case PairFlavor::w:
      if (to == PairFlavor::h) return {0.5 * (pair.p + pair.q), 0.5 * (pair.p - pair.q), PairFlavor::h};
      return {exp(pair.p), exp(pair.q), PairFlavor::g};
    case PairFlavor::g:
      if (to == PairFlavor::w) return {log(pair.p), log(pair.q), PairFlavor::w};
      return convert_pair(convert_pair(pair, PairFlavor::w), to);
  }
  return pair;
}

// ---------------------------------------------------------------------------
// Builders

enum class Representation { W1, W2, W5, W6 };

inline PairFlavor required_flavor(Representation r) {
  switch (r) {
    case Representation::W1:
    case Representation::W2: return PairFlavor::h;
    case Representation::W5: return PairFlavor::w;
    case Representation::W6: return PairFlavor::g;
  }
  return PairFlavor::g;
}

namespace detail {

inline PhiCurve assemble(std::array<TaylorSeries, 4> comps, PhiKind kind) {
  // Components may come out at different orders; truncate to the common one.
  int n = comps[0].order();
  for (const auto& c : comps) n = std::min(n, c.order());
  for (auto& c : comps) c = c.truncated(n);
  PhiCurve p{std::move(comps), kind};
  check_phi(p);
  return p;
}

inline PhiCurve hyperbolic(const TaylorSeries& f, const TaylorSeries& h1, const TaylorSeries& h2, PhiKind kind) {
  return assemble({kI * f * cosh(h1), f * sinh(h1), f * cosh(h2), kI * f * sinh(h2)}, kind);
}

inline PhiCurve polynomial(const TaylorSeries& f, const TaylorSeries& g1, const TaylorSeries& g2, PhiKind kind) {
  const TaylorSeries g12 = g1 * g2;
  return assemble({kI * f * (g12 + 1.0), f * (g12 - 1.0), f * (g1 + g2), kI * f * (g1 - g2)}, kind);
}

}  // namespace detail

inline PhiCurve build_representation(Representation kind, const TaylorSeries& f, const HoloPair& pair) {
  if (pair.flavor != required_flavor(kind))
    throw Error(Errc::FlavorMismatch, std::string("representation needs an ") + flavor_name(required_flavor(kind)) +
                                          "-pair, got " + flavor_name(pair.flavor));
  if (std::abs(f[0]) <= kZeroConstantTerm) throw Error(Errc::ZeroF, "f vanishes at the base point");
  switch (kind) {
    case Representation::W1:
      return detail::assemble({f * cos(pair.p), f * sin(pair.p), kI * f * cos(pair.q), kI * f * sin(pair.q)},
                              PhiKind::general);
    case Representation::W2:
      return detail::hyperbolic(f, pair.p, pair.q, PhiKind::general);
    case Representation::W5:
      return detail::hyperbolic(f, 0.5 * (pair.p + pair.q), 0.5 * (pair.p - pair.q), PhiKind::general);
    case Representation::W6:
      return detail::polynomial(f, pair.p, pair.q, PhiKind::general);
  }
  throw Error(Errc::InvalidArgument, "unknown representation");
}

/// The f that makes a pair's representation canonical of the first type:
/// f^2 (h1'^2 - h2'^2) = 1, f^2 w1' w2' = 1, or 4 f^2 g1' g2' = 1, with the
/// principal square root.
inline TaylorSeries canonical_f(const HoloPair& pair) {
  if (const std::string why = general_type_failure(pair, pair.p.base()); !why.empty())
    throw Error(Errc::SuperconformalInput, "superconformal: " + why);
  const TaylorSeries dp = differentiate(pair.p);
  const TaylorSeries dq = differentiate(pair.q);
  switch (pair.flavor) {
    case PairFlavor::h: return 1.0 / sqrt(dp * dp - dq * dq);
    case PairFlavor::w: return 1.0 / sqrt(dp * dq);
    case PairFlavor::g: return 0.5 / sqrt(dp * dq);
  }
  throw Error(Errc::InvalidArgument, "unknown flavor");
}

inline PhiCurve build_canonical(const HoloPair& pair) {
  const TaylorSeries f = canonical_f(pair);
  PhiCurve p;
  switch (pair.flavor) {
    case PairFlavor::h: p = detail::hyperbolic(f, pair.p, pair.q, PhiKind::canonical_first); break;
    case PairFlavor::w:
      p = detail::hyperbolic(f, 0.5 * (pair.p + pair.q), 0.5 * (pair.p - pair.q), PhiKind::canonical_first);
      break;
    case PairFlavor::g: p = detail::polynomial(f, pair.p, pair.q, PhiKind::canonical_first); break;
  }
  // Re-derive canonicity from Phi'^2 rather than trusting the construction.
  const auto d = p.derivative();
  const TaylorSeries d2 = d[0] * d[0] + d[1] * d[1] + d[2] * d[2] + d[3] * d[3];
  const double dev = max_coeff_diff(d2, TaylorSeries::constant(1.0, d2.order(), d2.base()));
  if (dev > kCanonicalTol * std::max(1.0, d2.max_abs()))
    throw Error(Errc::InternalInconsistency, "canonical builder output has Phi'^2 != 1");
  return p;
}

/// Overload taking the flavor explicitly; it must match the pair.
inline PhiCurve build_canonical(PairFlavor kind, const HoloPair& pair) {
  if (pair.flavor != kind) throw Error(Errc::FlavorMismatch, "canonical builder flavor does not match the pair");
  return build_canonical(pair);
}

struct Triplet {
  TaylorSeries f;
  TaylorSeries g1;
  TaylorSeries g2;
};

/// Inverts W6: f = -(i phi1 + phi2)/2, g1 = -(phi3 - i phi4)/(i phi1 + phi2),
/// g2 = -(phi3 + i phi4)/(i phi1 + phi2).
inline Triplet recover_triplet(const PhiCurve& p) {
  const TaylorSeries s = kI * p.phi[0] + p.phi[1];
  if (std::abs(s[0]) <= kZeroConstantTerm)
    throw Error(Errc::DegenerateRecovery, "i phi1 + phi2 vanishes at the base point");
  return {-0.5 * s, -(p.phi[2] - kI * p.phi[3]) / s, -(p.phi[2] + kI * p.phi[3]) / s};
}

}  // namespace weier4
