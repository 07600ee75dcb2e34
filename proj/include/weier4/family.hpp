#pragma once

// The associated family M(k1, k2; alpha) generated by g1 = exp(-k1 a z),
// g2 = exp(-k2 a z) with a = cos(alpha) + i sin(alpha). alpha = 0 gives
// catenoids, alpha = pi/4 helicoids; every member has the same K and kappa.

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "weier4/correspond.hpp"

namespace weier4 {

struct FamilyParams {
  double k1 = 1.0;
  double k2 = 2.0;
  double alpha = 0.0;
  GridSpec grid = GridSpec::square(-0.3, 0.3, 0.05);

  void validate() const {
    if (!(k1 > 0.0) || !(k2 > 0.0)) throw Error(Errc::InvalidArgument, "k1 and k2 must be positive");
    if (k1 == k2) throw Error(Errc::InvalidArgument, "k1 and k2 must differ");
    if (alpha < 0.0 || alpha > std::numbers::pi / 4 + 1e-15)
      throw Error(Errc::InvalidArgument, "alpha must lie in [0, pi/4]");
  }

  Complex rotation() const { return {std::cos(alpha), std::sin(alpha)}; }
};

/// The g-pair (exp(-k1 a z), exp(-k2 a z)) expanded around 0.
inline HoloPair family_pair(const FamilyParams& p, int order = TaylorSeries::kDefaultOrder) {
  const TaylorSeries z = TaylorSeries::variable(order);
  const Complex a = p.rotation();
  return {exp(-p.k1 * a * z), exp(-p.k2 * a * z), PairFlavor::g};
}

/// Direct evaluation of the closed-form coordinates of M(k1, k2; alpha).
inline Vec4 family_point(const FamilyParams& prm, double u, double v) {
  const double kp = 0.5 * (prm.k1 + prm.k2);
  const double kpp = 0.5 * (prm.k1 - prm.k2);
  const double root = std::sqrt(prm.k1 * prm.k2);
  const double ca = std::cos(prm.alpha), sa = std::sin(prm.alpha);
  const double c2 = std::cos(2 * prm.alpha), s2 = std::sin(2 * prm.alpha);
  const double p = u * ca - v * sa;
  const double q = u * sa + v * ca;
  const double a1 = 1.0 / (kp * root), a2 = 1.0 / (kpp * root);
  return Vec4(a1 * (s2 * std::sinh(kp * p) * std::cos(kp * q) - c2 * std::cosh(kp * p) * std::sin(kp * q)),
              a1 * (-c2 * std::cosh(kp * p) * std::cos(kp * q) - s2 * std::sinh(kp * p) * std::sin(kp * q)),
              a2 * (c2 * std::sinh(kpp * p) * std::cos(kpp * q) + s2 * std::cosh(kpp * p) * std::sin(kpp * q)),
              a2 * (-s2 * std::cosh(kpp * p) * std::cos(kpp * q) + c2 * std::sinh(kpp * p) * std::sin(kpp * q)));
}

/// Closed-form family surface; E and curvature come from the canonical
/// g-formulas of the generating pair.
inline SurfacePatch family_m(const FamilyParams& prm) {
  prm.validate();
  SurfacePatch patch = sample_patch(prm.grid, [&](double u, double v) { return family_point(prm, u, v); });
  const HoloPair pair = family_pair(prm);
  patch.curvature.resize(patch.points.size());
  for (int r = 0; r < patch.rows; ++r) {
    for (int c = 0; c < patch.cols; ++c) {
      const auto s = sample_closed_form(ClosedFormKind::canonical_g, pair, prm.grid.node(r, c));
      patch.E[patch.index(r, c)] = s.E;
      patch.curvature[patch.index(r, c)] = s;
    }
  }
  return patch;
}

/// The same surface built through the canonical pipeline: pair -> Phi -> Psi.
inline SurfacePatch family_pipeline(const FamilyParams& prm, int order = TaylorSeries::kDefaultOrder) {
  prm.validate();
  const PhiCurve phi = build_canonical(family_pair(prm, order));
  SurfacePatch patch = eval_patch(integrate_phi(phi), prm.grid);
  attach_curvature(patch, phi);
  return patch;
}

/// Result of comparing two patches up to translation and global sign.
struct PatchComparison {
  double max_deviation = 0.0;
  double sign = 1.0;
  Vec4 translation = Vec4::Zero();  // b - sign * a at the reference node
};

/// Compares a and b after subtracting each patch's value at the node closest
/// to the parameter origin, choosing the sign that fits best.
inline PatchComparison compare_modulo_translation_sign(const SurfacePatch& a, const SurfacePatch& b) {
  if (a.rows != b.rows || a.cols != b.cols) throw Error(Errc::InvalidArgument, "patches have different grids");
  std::size_t ref = 0;
  double best = INFINITY;
  for (int r = 0; r < a.rows; ++r)
    for (int c = 0; c < a.cols; ++c)
      if (const double d = std::abs(a.grid.node(r, c)); d < best) {
        best = d;
        ref = a.index(r, c);
      }
  PatchComparison out;
  double dev[2] = {0.0, 0.0};
  const double signs[2] = {1.0, -1.0};
  for (int s = 0; s < 2; ++s)
    for (std::size_t i = 0; i < a.points.size(); ++i)
      dev[s] = std::max(dev[s], ((b.points[i] - b.points[ref]) - signs[s] * (a.points[i] - a.points[ref])).norm());
  const int pick = dev[0] <= dev[1] ? 0 : 1;
  out.max_deviation = dev[pick];
  out.sign = signs[pick];
  out.translation = b.points[ref] - out.sign * a.points[ref];
  return out;
}

struct FamilyReport {
  double max_dK = 0.0;
  double max_dkappa = 0.0;
  double fixed_point_dK = 0.0;  // same comparison at equal parameter values
  double fixed_point_dkappa = 0.0;
  bool pass = false;
  std::vector<double> alphas;
};

inline constexpr double kFamilyTol = 1e-8;

/// Compares the closed-form (K, kappa) fields of every run against the first
/// run over the first run's grid. The isometry between members maps t to
/// (p, q) = a t, so run i at t is compared with run 0 at a_i conj(a_0) t.
inline FamilyReport verify_family(const std::vector<FamilyParams>& runs) {
  if (runs.size() < 2) throw Error(Errc::InvalidArgument, "verify_family needs at least two runs");
  FamilyReport rep;
  const GridSpec& grid = runs.front().grid;
  std::vector<HoloPair> pairs;
  for (const auto& r : runs) {
    r.validate();
    pairs.push_back(family_pair(r));
    rep.alphas.push_back(r.alpha);
  }
  auto K_of = [](const HoloPair& p, Complex t) {
    return curvatures_closed_form(ClosedFormKind::canonical_g, std::nullopt, p, t);
  };
  for (int row = 0; row < grid.rows(); ++row) {
    for (int col = 0; col < grid.cols(); ++col) {
      const Complex t = grid.node(row, col);
      const auto same = K_of(pairs.front(), t);
      for (std::size_t i = 1; i < pairs.size(); ++i) {
        const auto c = K_of(pairs[i], t);
        const auto ref = K_of(pairs.front(), runs[i].rotation() * std::conj(runs.front().rotation()) * t);
        rep.max_dK = std::max(rep.max_dK, std::abs(c.K - ref.K));
        rep.max_dkappa = std::max(rep.max_dkappa, std::abs(c.kappa - ref.kappa));
        rep.fixed_point_dK = std::max(rep.fixed_point_dK, std::abs(c.K - same.K));
        rep.fixed_point_dkappa = std::max(rep.fixed_point_dkappa, std::abs(c.kappa - same.kappa));
      }
    }
  }
  rep.pass = rep.max_dK < kFamilyTol && rep.max_dkappa < kFamilyTol;
  return rep;
}

inline FamilyReport verify_family(double k1, double k2, const GridSpec& grid, const std::vector<double>& alphas) {
  std::vector<FamilyParams> runs;
  for (double a : alphas) runs.push_back({k1, k2, a, grid});
  if (runs.size() == 1) runs.push_back(runs.front());
  return verify_family(runs);
}

}  // namespace weier4
