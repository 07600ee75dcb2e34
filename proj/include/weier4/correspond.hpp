#pragma once

// Correspondences between minimal surfaces, solutions of the natural
// equations, and holomorphic functions, in R^3 and R^4.
//
//   R^3:  g  ->  nu = 4|g'|^2 / (|g|^2 + 1)^2,   Delta ln nu + 2 nu = 0
//   R^4:  (g1, g2) -> (K, kappa) with
//         K = -sqrt(nu1 nu2)(nu1 + nu2)/2,  kappa = sqrt(nu1 nu2)(nu1 - nu2)/2
//
// Pairs related by SU(2) fractional-linear maps give the same fields.

#include <array>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "weier4/curvature.hpp"

namespace weier4 {

// ---------------------------------------------------------------------------
// Moebius maps

/// g -> (-conj(b) + conj(a) g) / (a + b g) with |a|^2 + |b|^2 = 1.
struct MobiusMap {
  Complex a{1.0, 0.0};
  Complex b{0.0, 0.0};

  void validate() const {
    if (std::abs(std::norm(a) + std::norm(b) - 1.0) > 1e-12)
      throw Error(Errc::NotUnitary, "Moebius datum violates |a|^2 + |b|^2 = 1");
  }

  Complex apply(Complex g) const { return (-std::conj(b) + std::conj(a) * g) / (a + b * g); }
};

/// The map equal to applying `first` and then `second`.
inline MobiusMap compose(const MobiusMap& second, const MobiusMap& first) {
  // Matrix of (a, b) acting on g is [[conj a, -conj b], [b, a]].
  return {second.a * first.a - second.b * std::conj(first.b), second.b * std::conj(first.a) + second.a * first.b};
}

inline TaylorSeries mobius_apply(const TaylorSeries& g, const MobiusMap& m) {
  m.validate();
  const TaylorSeries den = m.a + m.b * g;
  if (std::abs(den[0]) <= kZeroConstantTerm) throw Error(Errc::PoleAtBase, "Moebius image has a pole at the base point");
  return (std::conj(m.a) * g - std::conj(m.b)) / den;
}

// ---------------------------------------------------------------------------
// R^3

struct Phi3Curve {
  std::array<TaylorSeries, 3> phi;

  TaylorSeries square() const { return phi[0] * phi[0] + phi[1] * phi[1] + phi[2] * phi[2]; }
  double max_abs() const {
    return std::max({phi[0].max_abs(), phi[1].max_abs(), phi[2].max_abs()});
  }
};

/// Phi = ((g^2 - 1)/(2g'), -i (g^2 + 1)/(2g'), -g/g').
inline Phi3Curve build_r3(const TaylorSeries& g) {
  const TaylorSeries dg = differentiate(g);
  if (std::abs(dg[0]) <= kZeroConstantTerm) throw Error(Errc::DegenerateG, "g' vanishes at the base point");
  const TaylorSeries g2 = g * g;
  Phi3Curve p{{0.5 * (g2 - 1.0) / dg, -0.5 * kI * (g2 + 1.0) / dg, -g / dg}};
  const int n = std::min({p.phi[0].order(), p.phi[1].order(), p.phi[2].order()});
  for (auto& c : p.phi) c = c.truncated(n);
  if (p.square().max_abs() > kIsothermalTol * std::max(1.0, p.max_abs() * p.max_abs()))
    throw Error(Errc::InternalInconsistency, "R^3 Phi^2 does not vanish");
  return p;
}

/// The R^3 surface embedded in R^4 with a zero fourth coordinate.
inline Psi integrate_phi3(const Phi3Curve& p) {
  return {integrate(p.phi[0]), integrate(p.phi[1]), integrate(p.phi[2]),
          TaylorSeries::constant(0.0, p.phi[0].order() + 1, p.phi[0].base())};
}

inline double nu_r3(const TaylorSeries& g, Complex t) {
  const double dg = std::abs(differentiate(g).evaluate(t));
  const double m = std::norm(g.evaluate(t)) + 1.0;
  return 4.0 * dg * dg / (m * m);
}

/// Positive principal curvature of the R^3 surface x = Re Psi at t, from
/// central finite differences with step h: |x_uu . n| / |x_u|^2.
inline double frame_nu_r3(const Psi& psi, Complex t, double h) {
  auto x = [&](Complex s) {
    Eigen::Vector3d v;
    for (int i = 0; i < 3; ++i) v[i] = psi[i].evaluate(s).real();
    return v;
  };
  const Complex du{h, 0.0}, dv{0.0, h};
  const Eigen::Vector3d xu = (x(t + du) - x(t - du)) / (2 * h);
  const Eigen::Vector3d xv = (x(t + dv) - x(t - dv)) / (2 * h);
  const Eigen::Vector3d xuu = (x(t + du) - 2 * x(t) + x(t - du)) / (h * h);
  const Eigen::Vector3d n = xu.cross(xv).normalized();
  return std::abs(xuu.dot(n)) / xu.squaredNorm();
}

// ---------------------------------------------------------------------------
// Scalar fields and natural-equation residuals

enum class FieldRole { K, kappa, nu };

inline const char* role_name(FieldRole r) {
  switch (r) {
    case FieldRole::K: return "K";
    case FieldRole::kappa: return "kappa";
    case FieldRole::nu: return "nu";
  }
  return "?";
}

struct ScalarField {
  double h = 0.0;
  FieldRole role = FieldRole::nu;
  int rows = 0;
  int cols = 0;
  std::vector<double> values;  // row-major

  double at(int r, int c) const { return values[static_cast<std::size_t>(r) * cols + c]; }

  void validate() const {
    if (values.size() != static_cast<std::size_t>(rows) * cols)
      throw Error(Errc::InvalidArgument, "scalar field size does not match rows x cols");
    for (double v : values) {
      if (!std::isfinite(v)) throw Error(Errc::NonFinite, "non-finite scalar field value");
      if (role == FieldRole::nu && !(v > 0.0)) throw Error(Errc::NonPositiveNu, "nu field must be positive");
    }
  }
};

template <class F>
ScalarField sample_field(const GridSpec& grid, FieldRole role, F&& fn) {
  ScalarField s{grid.h, role, grid.rows(), grid.cols(), {}};
  s.values.reserve(static_cast<std::size_t>(s.rows) * s.cols);
  for (int r = 0; r < s.rows; ++r)
    for (int c = 0; c < s.cols; ++c) s.values.push_back(fn(grid.node(r, c)));
  return s;
}

inline ScalarField nu_field(const TaylorSeries& g, const GridSpec& grid) {
  return sample_field(grid, FieldRole::nu, [&](Complex t) { return nu_r3(g, t); });
}

/// (K, kappa) fields of the canonical g-representation.
inline std::pair<ScalarField, ScalarField> curvature_fields(const HoloPair& pair, const GridSpec& grid) {
  ScalarField K = sample_field(grid, FieldRole::K, [&](Complex t) {
    return curvatures_closed_form(ClosedFormKind::canonical_g, std::nullopt, pair, t).K;
  });
  ScalarField kappa = sample_field(grid, FieldRole::kappa, [&](Complex t) {
    return curvatures_closed_form(ClosedFormKind::canonical_g, std::nullopt, pair, t).kappa;
  });
  return {std::move(K), std::move(kappa)};
}

namespace detail {

template <class F>
double laplacian(const ScalarField& s, int r, int c, F&& transform) {
  return (transform(s.at(r, c - 1)) + transform(s.at(r, c + 1)) + transform(s.at(r - 1, c)) +
          transform(s.at(r + 1, c)) - 4.0 * transform(s.at(r, c))) /
         (s.h * s.h);
}

inline void check_grid(const ScalarField& s) {
  if (s.rows < 5 || s.cols < 5) throw Error(Errc::GridTooSmall, "residual needs at least a 5x5 grid");
}

}  // namespace detail

/// max over interior nodes of |Delta ln nu + 2 nu|.
inline double natural_residual_r3(const ScalarField& nu) {
  detail::check_grid(nu);
  for (double v : nu.values)
    if (!(v > 0.0)) throw Error(Errc::NonPositiveNu, "nu field must be positive");
  double worst = 0.0;
  auto ln = [](double v) { return std::log(v); };
  for (int r = 1; r + 1 < nu.rows; ++r)
    for (int c = 1; c + 1 < nu.cols; ++c)
      worst = std::max(worst, std::abs(detail::laplacian(nu, r, c, ln) + 2.0 * nu.at(r, c)));
  return worst;
}

/// Residuals of
///   (K^2 - kappa^2)^(1/4) Delta ln|kappa - K| = 2(2K - kappa)
///   (K^2 - kappa^2)^(1/4) Delta ln|kappa + K| = 2(2K + kappa)
/// as max interior absolute values.
inline std::pair<double, double> natural_residual_r4(const ScalarField& K, const ScalarField& kappa) {
  detail::check_grid(K);
  if (K.rows != kappa.rows || K.cols != kappa.cols || K.h != kappa.h)
    throw Error(Errc::InvalidArgument, "K and kappa fields live on different grids");
  for (std::size_t i = 0; i < K.values.size(); ++i)
    if (!is_general_type(K.values[i], kappa.values[i]))
      throw Error(Errc::NotGeneralTypeField, "fields violate K < 0, -K > |kappa|");

  ScalarField minus = K, plus = K;
  for (std::size_t i = 0; i < K.values.size(); ++i) {
    minus.values[i] = std::abs(kappa.values[i] - K.values[i]);
    plus.values[i] = std::abs(kappa.values[i] + K.values[i]);
  }
  auto ln = [](double v) { return std::log(v); };
  double r1 = 0.0, r2 = 0.0;
  for (int r = 1; r + 1 < K.rows; ++r) {
    for (int c = 1; c + 1 < K.cols; ++c) {
      const double k = K.at(r, c), x = kappa.at(r, c);
      const double w = std::pow(k * k - x * x, 0.25);
      r1 = std::max(r1, std::abs(w * detail::laplacian(minus, r, c, ln) - 2.0 * (2.0 * k - x)));
      r2 = std::max(r2, std::abs(w * detail::laplacian(plus, r, c, ln) - 2.0 * (2.0 * k + x)));
    }
  }
  return {r1, r2};
}

// Text format: "h <spacing> <role> <rows> <cols>" then row-major values.

inline void write_field(std::ostream& os, const ScalarField& s) {
  os << "h " << std::setprecision(17) << s.h << ' ' << role_name(s.role) << ' ' << s.rows << ' ' << s.cols << '\n';
  for (int r = 0; r < s.rows; ++r) {
    for (int c = 0; c < s.cols; ++c) os << (c ? " " : "") << s.at(r, c);
    os << '\n';
  }
}

inline ScalarField read_field(std::istream& is) {
  std::string tag, role;
  ScalarField s;
  if (!(is >> tag >> s.h >> role >> s.rows >> s.cols) || tag != "h")
    throw Error(Errc::IoError, "malformed scalar field header");
  if (role == "K") s.role = FieldRole::K;
  else if (role == "kappa") s.role = FieldRole::kappa;
  else if (role == "nu") s.role = FieldRole::nu;
  else throw Error(Errc::IoError, "unknown scalar field role '" + role + "'");
  if (s.rows <= 0 || s.cols <= 0 || !(s.h > 0.0)) throw Error(Errc::IoError, "invalid scalar field dimensions");
  s.values.resize(static_cast<std::size_t>(s.rows) * s.cols);
  for (auto& v : s.values)
    if (!(is >> v)) throw Error(Errc::IoError, "scalar field has too few values");
  s.validate();
  return s;
}

inline void write_field(const std::string& path, const ScalarField& s) {
  std::ofstream os(path);
  if (!os) throw Error(Errc::IoError, "cannot open '" + path + "' for writing");
  write_field(os, s);
  if (!os) throw Error(Errc::IoError, "failed writing '" + path + "'");
}

inline ScalarField read_field(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error(Errc::IoError, "cannot open '" + path + "'");
  return read_field(is);
}

// ---------------------------------------------------------------------------
// R^4 <-> R^3 x R^3

struct SplitCombine {
  double nu1 = 0.0;
  double nu2 = 0.0;
  double K = 0.0;
  double kappa = 0.0;
};

inline SplitCombine split_combine(const TaylorSeries& g1, const TaylorSeries& g2, Complex t) {
  if (std::abs(differentiate(g1).evaluate(t)) <= kZeroConstantTerm ||
      std::abs(differentiate(g2).evaluate(t)) <= kZeroConstantTerm)
    throw Error(Errc::DegenerateG, "g' vanishes at the sample point");
  const double n1 = nu_r3(g1, t), n2 = nu_r3(g2, t);
  const double s = std::sqrt(n1 * n2);
  return {n1, n2, -0.5 * s * (n1 + n2), 0.5 * s * (n1 - n2)};
}

/// Curvature-field criterion for SO(4)-equivalence of two canonical g-pairs:
/// (K, kappa) agree at every grid node within 1e-8 scaled by max(1, |K|).
inline bool equivalent_pairs(const HoloPair& p, const HoloPair& q, const GridSpec& grid) {
  if (p.flavor != PairFlavor::g || q.flavor != PairFlavor::g)
    throw Error(Errc::FlavorMismatch, "equivalence test needs g-pairs");
  for (int r = 0; r < grid.rows(); ++r) {
    for (int c = 0; c < grid.cols(); ++c) {
      const Complex t = grid.node(r, c);
      const auto a = curvatures_closed_form(ClosedFormKind::canonical_g, std::nullopt, p, t);
      const auto b = curvatures_closed_form(ClosedFormKind::canonical_g, std::nullopt, q, t);
      const double tol = 1e-8 * std::max(1.0, std::abs(a.K));
      if (std::abs(a.K - b.K) > tol || std::abs(a.kappa - b.kappa) > tol) return false;
    }
  }
  return true;
}

}  // namespace weier4
