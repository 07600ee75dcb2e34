#pragma once

// Canonical coordinates. A change t = t(t~) makes Phi~'^2 = Phi'^2 t'^4, so
// canonical coordinates of the first (second) type solve
// (+-Phi'^2)^(1/4) dt = dt~. Points with Phi'^2 = 0 are superconformal and
// admit no such coordinates.

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "weier4/curvature.hpp"

namespace weier4 {

inline constexpr double kSuperconformalTol = 1e-10;
inline constexpr double kToCanonicalTol = 1e-8;

enum class CanonicalType { first, second };
enum class PointClass { superconformal, general_type };

/// Phi'^2 = phi1'^2 + ... + phi4'^2, which equals (Phi'_perp)^2.
inline TaylorSeries phiprime_sq(const PhiCurve& p) {
  const auto d = p.derivative();
  return d[0] * d[0] + d[1] * d[1] + d[2] * d[2] + d[3] * d[3];
}

inline PointClass classify_point(const PhiCurve& p, Complex t) {
  const CVec4 d = p.derivative_value(t);
  const Complex sq = d.transpose() * d;
  const double scale = std::max(1.0, d.squaredNorm());
  return std::abs(sq) < kSuperconformalTol * scale ? PointClass::superconformal : PointClass::general_type;
}

/// Deviation of Phi'^2 from the constant `target`, per coefficient.
inline double canonical_deviation(const PhiCurve& p, Complex target) {
  const TaylorSeries d2 = phiprime_sq(p);
  return max_coeff_diff(d2, TaylorSeries::constant(target, d2.order(), d2.base()));
}

/// A holomorphic coordinate change. `forward` is t~ as a series in t around
/// the original base (with t~(base) = 0); `inverse` is t as a series in t~
/// around 0. When `antiholomorphic` is set the actual change is the complex
/// conjugate of `forward` (and `inverse` takes conj(t~)).
struct Reparam {
  TaylorSeries forward;
  TaylorSeries inverse;
  CanonicalType target = CanonicalType::first;
  bool antiholomorphic = false;
};

struct CanonicalPatch {
  PhiCurve phi;
  Reparam reparam;
};

/// Phi~(s) = Phi(t(s)) t'(s) for a holomorphic change t = t(s).
inline PhiCurve reparameterize(const PhiCurve& p, const TaylorSeries& t_of_s) {
  const TaylorSeries dt = differentiate(t_of_s);
  PhiCurve out;
  for (int i = 0; i < 4; ++i) out.phi[i] = compose(p.phi[i], t_of_s) * dt;
  out.kind = PhiKind::general;
  return out;
}

inline CanonicalPatch to_canonical(const PhiCurve& p, CanonicalType target) {
  if (classify_point(p, p.base()) == PointClass::superconformal)
    throw Error(Errc::SuperconformalInput, "superconformal point: no canonical coordinates exist");
  const double sign = target == CanonicalType::first ? 1.0 : -1.0;
  const TaylorSeries rate = root4(sign * phiprime_sq(p));
  if (std::abs(rate[0]) <= kZeroConstantTerm) throw Error(Errc::NotInvertible, "coordinate change is singular at base");
  const TaylorSeries forward = integrate(rate);
  const TaylorSeries inverse = revert(forward);

  PhiCurve canon = reparameterize(p, inverse);
  canon.kind = target == CanonicalType::first ? PhiKind::canonical_first : PhiKind::canonical_second;
  check_phi(canon);
  if (const double dev = canonical_deviation(canon, sign); dev > kToCanonicalTol * std::max(1.0, canon.max_abs()))
    throw Error(Errc::InternalInconsistency, "reparameterized Phi is not canonical (deviation " +
                                                 std::to_string(dev) + ")");
  return {canon, {forward, inverse, target, false}};
}

/// Substitution t = w t~ for a unit complex w: Phi~(t~) = Phi(w t~) w.
inline PhiCurve rotate_parameter(const PhiCurve& p, Complex w) {
  PhiCurve out;
  for (int i = 0; i < 4; ++i) {
    const auto c = p.phi[i].coeffs();
    std::vector<Complex> v(c.size());
    Complex wk = w;
    for (std::size_t k = 0; k < c.size(); ++k, wk *= w) v[k] = c[k] * wk;
    std::optional<double> r = p.phi[i].radius_hint();
    if (r) r = *r / std::abs(w);
    out.phi[i] = TaylorSeries(p.base() / w, std::move(v), r);
  }
  out.kind = PhiKind::general;
  return out;
}

/// Rotation by pi/4 in the parameter plane: canonical coordinates of the
/// first type become canonical coordinates of the second type.
inline PhiCurve rotate_type(const PhiCurve& p) {
  if (canonical_deviation(p, 1.0) > kToCanonicalTol * std::max(1.0, p.max_abs()))
    throw Error(Errc::NotCanonicalFirst, "input is not canonical of the first type");
  PhiCurve out = rotate_parameter(p, std::polar(1.0, std::numbers::pi / 4));
  out.kind = PhiKind::canonical_second;
  return out;
}

/// The eight reparameterizations t~ -> +-t~, +-i t~ and their conjugates
/// (integration constant 0) applied to `rep`.
inline std::array<Reparam, 8> ambiguity_orbit(const Reparam& rep) {
  static const std::array<Complex, 4> units{Complex(1, 0), Complex(-1, 0), Complex(0, 1), Complex(0, -1)};
  std::array<Reparam, 8> out;
  std::size_t k = 0;
  for (bool conj : {false, true}) {
    for (const Complex& e : units) {
      Reparam r = rep;
      r.forward = e * rep.forward;
      // t = inverse(conj(e) t~): scale the k-th coefficient by conj(e)^k.
      const auto c = rep.inverse.coeffs();
      std::vector<Complex> v(c.size());
      Complex ek = 1.0;
      for (std::size_t j = 0; j < c.size(); ++j, ek *= std::conj(e)) v[j] = c[j] * ek;
      r.inverse = TaylorSeries(rep.inverse.base(), std::move(v), rep.inverse.radius_hint());
      r.antiholomorphic = rep.antiholomorphic != conj;
      out[k++] = r;
    }
  }
  return out;
}

/// The change t = conj(s): Phi~(s) = conj(Phi(conj(s))).
inline PhiCurve conjugate_parameter(const PhiCurve& p) {
  PhiCurve out;
  for (int i = 0; i < 4; ++i) {
    const auto c = p.phi[i].coeffs();
    std::vector<Complex> v(c.size());
    for (std::size_t k = 0; k < c.size(); ++k) v[k] = std::conj(c[k]);
    out.phi[i] = TaylorSeries(std::conj(p.base()), std::move(v), p.phi[i].radius_hint());
  }
  out.kind = p.kind;
  return out;
}

}  // namespace weier4
