#pragma once

// Gauss curvature K, normal curvature kappa and the curvature-ellipse
// invariants (nu, mu) of minimal surfaces in R^4, computed two ways:
// intrinsically from Phi and in closed form from Weierstrass data.

#include <cmath>
#include <optional>
#include <utility>

#include "weier4/geometry.hpp"

namespace weier4 {

inline constexpr double kRouteAgreementTol = 1e-9;

struct Curvatures {
  double K = 0.0;
  double kappa = 0.0;
};

struct EllipseInvariants {
  double nu = 0.0;
  double mu = 0.0;
};

namespace detail {

/// Determinant of a complex 4x4 matrix by Gaussian elimination with partial
/// pivoting.
inline Complex det4(Eigen::Matrix<Complex, 4, 4> m) {
  Complex det = 1.0;
  for (int col = 0; col < 4; ++col) {
    int pivot = col;
    for (int r = col + 1; r < 4; ++r)
      if (std::abs(m(r, col)) > std::abs(m(pivot, col))) pivot = r;
    if (m(pivot, col) == Complex{}) return 0.0;
    if (pivot != col) {
      m.row(pivot).swap(m.row(col));
      det = -det;
    }
    det *= m(col, col);
    for (int r = col + 1; r < 4; ++r) {
      const Complex factor = m(r, col) / m(col, col);
      m.row(r) -= factor * m.row(col);
    }
  }
  return det;
}

inline double rel_scale(double K) { return std::max(1.0, std::abs(K)); }

}  // namespace detail

/// K = -4|Phi'_perp|^2/|Phi|^4 = -4|Phi ^ Phi'|^2/|Phi|^6 and
/// kappa = -4 det(Phi, conj Phi, Phi', conj Phi') / |Phi|^6.
/// Both K forms are computed and must agree.
inline Curvatures curvatures_from_phi(const CVec4& phi, const CVec4& dphi) {
  const double n2 = phi.squaredNorm();
  if (std::sqrt(n2) <= kDegenerateNorm) throw Error(Errc::DegeneratePoint, "|Phi| vanishes");
  const double n4 = n2 * n2;
  const double n6 = n4 * n2;

  const CVec4 perp = normal_project(phi, dphi);
  const double k_perp = -4.0 * perp.squaredNorm() / n4;
  // |Phi ^ Phi'|^2 = |Phi|^2 |Phi'|^2 - |conj(Phi) . Phi'|^2
  const double wedge2 = n2 * dphi.squaredNorm() - std::norm(phi.dot(dphi));
  const double k_wedge = -4.0 * wedge2 / n6;
  if (std::abs(k_perp - k_wedge) > kRouteAgreementTol * detail::rel_scale(k_perp))
    throw Error(Errc::InternalInconsistency, "the two Gauss curvature forms disagree");

  Eigen::Matrix<Complex, 4, 4> m;
  m.col(0) = phi;
  m.col(1) = phi.conjugate();
  m.col(2) = dphi;
  m.col(3) = dphi.conjugate();
  const Complex kappa = -4.0 * detail::det4(m) / n6;
  if (std::abs(kappa.imag()) > kRouteAgreementTol * detail::rel_scale(kappa.real()))
    throw Error(Errc::InternalInconsistency, "normal curvature determinant is not real");
  return {k_perp, kappa.real()};
}

inline Curvatures curvatures_from_phi(const PhiCurve& p, Complex t) {
  return curvatures_from_phi(p.value(t), p.derivative_value(t));
}

// ---------------------------------------------------------------------------
// Closed forms in Weierstrass data

enum class ClosedFormKind { general_w, general_g, canonical_w, canonical_g };

namespace detail {

inline PairFlavor closed_form_flavor(ClosedFormKind k) {
  return (k == ClosedFormKind::general_w || k == ClosedFormKind::canonical_w) ? PairFlavor::w : PairFlavor::g;
}

inline bool closed_form_general(ClosedFormKind k) {
  return k == ClosedFormKind::general_w || k == ClosedFormKind::general_g;
}

/// Pointwise quantities shared by the closed forms.
struct PairValues {
  double c1 = 0.0, c2 = 0.0;    // cosh(Re w_j), or |g_j|^2 + 1
  double d1 = 0.0, d2 = 0.0;    // |w_j'| or |g_j'|
  double f2 = 0.0;              // |f|^2 (general kinds)
};

inline PairValues pair_values(ClosedFormKind kind, const std::optional<TaylorSeries>& f, const HoloPair& pair,
                              Complex t) {
  if (pair.flavor != closed_form_flavor(kind))
    throw Error(Errc::FlavorMismatch, "closed form and pair flavor do not match");
  PairValues pv;
  if (closed_form_general(kind)) {
    if (!f) throw Error(Errc::InvalidArgument, "general closed forms need f");
    pv.f2 = std::norm(f->evaluate(t));
  }
  const Complex a = pair.p.evaluate(t), b = pair.q.evaluate(t);
  pv.d1 = std::abs(differentiate(pair.p).evaluate(t));
  pv.d2 = std::abs(differentiate(pair.q).evaluate(t));
  if (pair.flavor == PairFlavor::w) {
    pv.c1 = std::cosh(a.real());
    pv.c2 = std::cosh(b.real());
  } else {
    pv.c1 = std::norm(a) + 1.0;
    pv.c2 = std::norm(b) + 1.0;
  }
  return pv;
}

}  // namespace detail

inline Curvatures curvatures_closed_form(ClosedFormKind kind, const std::optional<TaylorSeries>& f,
                                         const HoloPair& pair, Complex t) {
  const auto v = detail::pair_values(kind, f, pair, t);
  const double r1 = v.d1 * v.d1 / (v.c1 * v.c1);
  const double r2 = v.d2 * v.d2 / (v.c2 * v.c2);
  double pre = 0.0;
  switch (kind) {
    case ClosedFormKind::general_w: pre = 1.0 / (2.0 * v.f2 * v.c1 * v.c2); break;
    case ClosedFormKind::general_g: pre = 2.0 / (v.f2 * v.c1 * v.c2); break;
    case ClosedFormKind::canonical_w: pre = v.d1 * v.d2 / (2.0 * v.c1 * v.c2); break;
    case ClosedFormKind::canonical_g: pre = 8.0 * v.d1 * v.d2 / (v.c1 * v.c2); break;
  }
  return {-pre * (r1 + r2), pre * (r1 - r2)};
}

inline double coefficient_E_closed_form(ClosedFormKind kind, const std::optional<TaylorSeries>& f,
                                        const HoloPair& pair, Complex t) {
  const auto v = detail::pair_values(kind, f, pair, t);
  switch (kind) {
    case ClosedFormKind::general_w: return v.f2 * v.c1 * v.c2;
    case ClosedFormKind::general_g: return v.f2 * v.c1 * v.c2;
    case ClosedFormKind::canonical_w: return v.c1 * v.c2 / (v.d1 * v.d2);
    case ClosedFormKind::canonical_g: return v.c1 * v.c2 / (4.0 * v.d1 * v.d2);
  }
  return 0.0;
}

inline bool is_general_type(double K, double kappa) { return K < 0.0 && -K > std::abs(kappa); }

/// nu = (sqrt(-K+kappa) + sqrt(-K-kappa))/2, mu = (sqrt(-K+kappa) - sqrt(-K-kappa))/2.
inline EllipseInvariants ellipse_invariants(double K, double kappa) {
  if (!is_general_type(K, kappa)) throw Error(Errc::NotGeneralType, "curvatures violate K < 0, -K > |kappa|");
  const double a = std::sqrt(-K + kappa), b = std::sqrt(-K - kappa);
  return {0.5 * (a + b), 0.5 * (a - b)};
}

inline Curvatures curvatures_from_invariants(double nu, double mu) { return {-nu * nu - mu * mu, 2.0 * nu * mu}; }

/// Closed-form nu, mu for canonical w- and g-representations.
inline EllipseInvariants numu_closed_form(ClosedFormKind kind, const HoloPair& pair, Complex t) {
  if (kind != ClosedFormKind::canonical_w && kind != ClosedFormKind::canonical_g)
    throw Error(Errc::FlavorMismatch, "nu/mu closed forms exist for canonical kinds only");
  const auto v = detail::pair_values(kind, std::nullopt, pair, t);
  if (v.d1 <= kZeroConstantTerm || v.d2 <= kZeroConstantTerm)
    throw Error(Errc::NotGeneralType, "pair is superconformal at the sample point");
  const double a = v.d1 / v.c1, b = v.d2 / v.c2;
  const double pre = kind == ClosedFormKind::canonical_w ? 0.5 * std::sqrt(v.d1 * v.d2 / (v.c1 * v.c2))
                                                         : 2.0 * std::sqrt(v.d1 * v.d2 / (v.c1 * v.c2));
  return {pre * (a + b), pre * (a - b)};
}

/// Full sample from Phi: curvatures via the intrinsic route, invariants from
/// them, E = |Phi|^2/2.
inline CurvatureSample sample_from_phi(const PhiCurve& p, Complex t) {
  const CVec4 phi = p.value(t);
  const Curvatures c = curvatures_from_phi(phi, p.derivative_value(t));
  const EllipseInvariants e = ellipse_invariants(c.K, c.kappa);
  return {c.K, c.kappa, e.nu, e.mu, 0.5 * phi.squaredNorm()};
}

/// Full sample from a canonical g- or w-pair via closed forms.
inline CurvatureSample sample_closed_form(ClosedFormKind kind, const HoloPair& pair, Complex t) {
  const Curvatures c = curvatures_closed_form(kind, std::nullopt, pair, t);
  const EllipseInvariants e = numu_closed_form(kind, pair, t);
  return {c.K, c.kappa, e.nu, e.mu, coefficient_E_closed_form(kind, std::nullopt, pair, t)};
}

/// Attaches intrinsic curvature samples to every node of a patch.
inline void attach_curvature(SurfacePatch& patch, const PhiCurve& p) {
  patch.curvature.resize(patch.points.size());
  for (int r = 0; r < patch.rows; ++r)
    for (int c = 0; c < patch.cols; ++c) patch.curvature[patch.index(r, c)] = sample_from_phi(p, patch.grid.node(r, c));
}

}  // namespace weier4
