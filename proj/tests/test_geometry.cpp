#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "weier4/canonize.hpp"

using namespace weier4;

namespace {

const TaylorSeries z = TaylorSeries::variable();
HoloPair golden() { return {exp(-z), exp(-2.0 * z), PairFlavor::g}; }

}  // namespace

TEST(Geometry, IntegratePhiConstant) {
  PhiCurve p;
  const Complex c[4] = {1.0, kI, 2.0, -kI};
  for (int i = 0; i < 4; ++i) p.phi[i] = TaylorSeries::constant(c[i], 3);
  const Psi psi = integrate_phi(p);
  for (int i = 0; i < 4; ++i) {
    EXPECT_EQ(psi[i][0], Complex(0));
    EXPECT_EQ(psi[i][1], c[i]);
  }
}

TEST(Geometry, IntegrateRoundTrip) {
  const PhiCurve p = build_canonical(golden());
  const Psi psi = integrate_phi(p);
  EXPECT_LT(max_coeff_diff(differentiate_psi(psi), p), 1e-14);
  for (const auto& s : psi) EXPECT_EQ(s.evaluate(0.0), Complex(0));
}

TEST(Geometry, EvalPatchAtOrigin) {
  const PhiCurve p = build_canonical(golden());
  const SurfacePatch patch = eval_patch(integrate_phi(p), GridSpec::square(-0.1, 0.1, 0.05));
  EXPECT_EQ(patch.rows, 5);
  EXPECT_EQ(patch.cols, 5);
  EXPECT_TRUE(patch.origin_pinned);
  EXPECT_NEAR(patch.E[patch.index(2, 2)], 0.5, 1e-15);
  EXPECT_LT(patch.at(2, 2).norm(), 1e-15);
  for (double e : patch.E) EXPECT_GT(e, 0.0);
}

TEST(Geometry, FiniteDifferenceTangent) {
  const PhiCurve p = build_canonical(golden());
  const Psi psi = integrate_phi(p);
  const Vec4 re = p.value(0.0).real();
  double prev = 0.0;
  for (double h : {1e-2, 5e-3}) {
    const SurfacePatch patch = eval_patch(psi, GridSpec::square(-h, h, h));
    const Vec4 xu = (patch.at(1, 2) - patch.at(1, 0)) / (2 * h);
    const double err = (xu - re).norm();
    EXPECT_LT(err, 10 * h * h);
    if (prev > 0.0) {
      EXPECT_NEAR(prev / err, 4.0, 0.5);
    }
    prev = err;
  }
}

TEST(Geometry, FundamentalDataGolden) {
  const PhiCurve p = build_canonical(golden());
  for (Complex t : {Complex(0.0), Complex(0.07, -0.04)}) {
    const FundamentalData fd = fundamental_data(p, t);
    for (int k = 0; k < 2; ++k) {
      EXPECT_NEAR(fd.sigma_uu.dot(fd.frame[k]), 0.0, 1e-9);
      EXPECT_NEAR(fd.sigma_uv.dot(fd.frame[k]), 0.0, 1e-9);
    }
    EXPECT_NEAR(det4(fd.frame[0], fd.frame[1], fd.frame[2], fd.frame[3]), 1.0, 1e-9);
    EXPECT_NEAR((fd.sigma_vv() + fd.sigma_uu).norm(), 0.0, 1e-9);
    EXPECT_NEAR(fd.lambda(), 0.0, 1e-9);  // canonical coordinates
    const auto cf = numu_closed_form(ClosedFormKind::canonical_g, golden(), t);
    EXPECT_NEAR(fd.nu(), cf.nu, 1e-8);
    EXPECT_NEAR(std::abs(fd.mu()), std::abs(cf.mu), 1e-8);
  }
  EXPECT_NEAR(fundamental_data(p, 0.0).nu(), 3.0 * std::sqrt(2.0) / 2.0, 1e-12);
}

TEST(Geometry, NormalProjection) {
  const PhiCurve p = build_canonical(golden());
  for (Complex t : {Complex(0.0), Complex(0.1, 0.1), Complex(-0.15, 0.02)}) {
    const CVec4 perp = normal_project(p, t);
    const CVec4 d = p.derivative_value(t);
    const Complex a = perp.transpose() * perp, b = d.transpose() * d;
    EXPECT_NEAR(std::abs(a - b), 0.0, 1e-10);
    EXPECT_NEAR(std::abs(a - 1.0), 0.0, 1e-10);
  }
}

TEST(Geometry, NormalProjectionOfTangentialDerivative) {
  PhiCurve p;
  const TaylorSeries e = exp(z);
  p.phi = {e, kI * e, TaylorSeries::constant(0.0), TaylorSeries::constant(0.0)};
  EXPECT_LT(normal_project(p, Complex(0.1, 0.2)).norm(), 1e-14);
}

TEST(Geometry, Motions) {
  const PhiCurve p = build_canonical(golden());
  EXPECT_LT(max_coeff_diff(apply_motion(p, Motion4{}), p), 1e-15);

  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 5; ++trial) {
    Motion4 m;
    m.A = oracle::random_so4(rng);
    m.b = Vec4(1, 2, 3, 4);
    const PhiCurve q = apply_motion(p, m);
    for (Complex t : {Complex(0.0), Complex(0.1, -0.1)}) {
      EXPECT_NEAR(q.value(t).norm(), p.value(t).norm(), 1e-12);
      const auto a = curvatures_from_phi(p, t), b = curvatures_from_phi(q, t);
      EXPECT_NEAR(a.K, b.K, 1e-10);
      EXPECT_NEAR(a.kappa, b.kappa, 1e-10);
    }
  }

  Motion4 reflect;
  reflect.A(0, 0) = -1.0;
  try {
    (void)apply_motion(p, reflect);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NotOrthogonal);
  }
}

TEST(Geometry, HarmonicResidual) {
  const Psi psi = integrate_phi(build_canonical(golden()));
  const double r1 = harmonic_residual(eval_patch(psi, GridSpec::square(-0.1, 0.1, 0.01)));
  const double r2 = harmonic_residual(eval_patch(psi, GridSpec::square(-0.1, 0.1, 0.005)));
  EXPECT_LT(r1, 1e-3);
  EXPECT_GE(r1 / r2, 3.5);
  EXPECT_LE(r1 / r2, 4.5);

  const SurfacePatch control =
      sample_patch(GridSpec::square(-0.1, 0.1, 0.01), [](double u, double) { return Vec4(u * u, 0, 0, 0); });
  EXPECT_NEAR(harmonic_residual(control), 2.0, 1e-9);

  try {
    (void)harmonic_residual(eval_patch(psi, GridSpec::square(-0.1, 0.1, 0.1)));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::GridTooSmall);
  }
}
