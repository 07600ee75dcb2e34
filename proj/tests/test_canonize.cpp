#include <gtest/gtest.h>

#include <numbers>

#include "oracles.hpp"
#include "weier4/canonize.hpp"

using namespace weier4;

namespace {

const TaylorSeries z = TaylorSeries::variable();
const TaylorSeries one = TaylorSeries::constant(1.0);
HoloPair golden() { return {exp(-z), exp(-2.0 * z), PairFlavor::g}; }
PhiCurve w6_golden() { return build_representation(Representation::W6, one, golden()); }

}  // namespace

TEST(Canonize, PhiPrimeSquared) {
  EXPECT_LT(max_coeff_diff(phiprime_sq(build_canonical(golden())), one), 1e-12);
  EXPECT_LT(max_coeff_diff(phiprime_sq(w6_golden()), 8.0 * exp(-3.0 * z)), 1e-12);
  const PhiCurve sc =
      build_representation(Representation::W6, one, HoloPair{exp(-z), TaylorSeries::constant(5.0), PairFlavor::g});
  EXPECT_LT(phiprime_sq(sc).max_abs(), 1e-12);
}

TEST(Canonize, ClassifyPoint) {
  EXPECT_EQ(classify_point(build_canonical(golden()), 0.0), PointClass::general_type);
  const PhiCurve same = build_representation(Representation::W6, one, HoloPair{exp(-z), exp(-z), PairFlavor::g});
  EXPECT_EQ(classify_point(same, 0.0), PointClass::general_type);
  const PhiCurve sc =
      build_representation(Representation::W6, one, HoloPair{exp(-z), TaylorSeries::constant(5.0), PairFlavor::g});
  EXPECT_EQ(classify_point(sc, 0.0), PointClass::superconformal);
  try {
    (void)to_canonical(sc, CanonicalType::first);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::SuperconformalInput);
  }
}

TEST(Canonize, FixedPoint) {
  const CanonicalPatch cp = to_canonical(build_canonical(golden()), CanonicalType::first);
  EXPECT_LT(max_coeff_diff(cp.reparam.forward, z.truncated(cp.reparam.forward.order())), 1e-12);
}

TEST(Canonize, W6ClosedFormReparameterization) {
  const CanonicalPatch cp = to_canonical(w6_golden(), CanonicalType::first);
  const double s = std::pow(8.0, 0.25);
  const auto& fw = cp.reparam.forward;
  EXPECT_NEAR(std::abs(fw[1] - s), 0.0, 1e-12);
  EXPECT_NEAR(s, 1.681793, 1e-6);
  for (int k = 0; k <= fw.order(); ++k) {
    const double ref = k == 0 ? 0.0 : s * (-4.0 / 3.0) * std::pow(-0.75, k) / oracle::factorial(k);
    EXPECT_NEAR(std::abs(fw[k] - ref), 0.0, 1e-8) << k;
  }
  EXPECT_LT(canonical_deviation(cp.phi, 1.0), 1e-8);
  const auto id = compose(cp.reparam.forward, cp.reparam.inverse);
  EXPECT_LT(max_coeff_diff(id, TaylorSeries::variable(id.order())), 1e-9);
}

TEST(Canonize, CurvatureAgreementAfterReparameterization) {
  const CanonicalPatch cp = to_canonical(w6_golden(), CanonicalType::first);
  const Triplet tr = recover_triplet(cp.phi);
  const HoloPair pair{tr.g1, tr.g2, PairFlavor::g};
  const auto a = curvatures_from_phi(cp.phi, 0.0);
  const auto b = curvatures_closed_form(ClosedFormKind::canonical_g, std::nullopt, pair, 0.0);
  EXPECT_NEAR(a.K, b.K, 1e-9);
  EXPECT_NEAR(a.kappa, b.kappa, 1e-9);
  const auto orig = curvatures_from_phi(w6_golden(), 0.0);
  EXPECT_NEAR(a.K, orig.K, 1e-9 * std::abs(orig.K));
  EXPECT_NEAR(a.kappa, orig.kappa, 1e-9 * std::abs(orig.K));
}

TEST(Canonize, SecondType) {
  const CanonicalPatch cp = to_canonical(w6_golden(), CanonicalType::second);
  EXPECT_LT(canonical_deviation(cp.phi, -1.0), 1e-8);
  EXPECT_EQ(cp.phi.kind, PhiKind::canonical_second);
}

TEST(Canonize, RotateType) {
  const PhiCurve p = build_canonical(golden());
  const PhiCurve q = rotate_type(p);
  EXPECT_LT(canonical_deviation(q, -1.0), 1e-9);
  EXPECT_NEAR(q.value(0.0).norm(), p.value(0.0).norm(), 1e-15);
  const Complex w = std::polar(1.0, std::numbers::pi / 4);
  EXPECT_LT(canonical_deviation(rotate_parameter(rotate_parameter(p, w), w), 1.0), 1e-9);
  try {
    (void)rotate_type(w6_golden());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NotCanonicalFirst);
  }
}

TEST(Canonize, AmbiguityOrbit) {
  const CanonicalPatch cp = to_canonical(w6_golden(), CanonicalType::first);
  const auto orbit = ambiguity_orbit(cp.reparam);
  EXPECT_EQ(orbit.size(), 8u);
  int holomorphic = 0, negated = 0;
  for (const Reparam& r : orbit) {
    EXPECT_NEAR(std::abs(r.forward[1]), std::abs(cp.reparam.forward[1]), 1e-14);
    if (max_coeff_diff(r.forward, -cp.reparam.forward) < 1e-15 && !r.antiholomorphic) ++negated;
    if (r.antiholomorphic) continue;
    ++holomorphic;
    const auto id = compose(r.forward, r.inverse);
    EXPECT_LT(max_coeff_diff(id, TaylorSeries::variable(id.order())), 1e-9);
    const PhiCurve q = reparameterize(w6_golden(), r.inverse);
    EXPECT_LT(canonical_deviation(q, 1.0), 1e-8);
  }
  EXPECT_EQ(holomorphic, 4);
  EXPECT_EQ(negated, 1);
}

TEST(Canonize, ConjugateParameterKeepsInvariants) {
  // t = conj(s) reverses the orientation of both the tangent and the normal
  // plane, so K and kappa are unchanged.
  const PhiCurve p = build_canonical(golden());
  const PhiCurve q = conjugate_parameter(p);
  const Complex t(0.05, 0.1);
  const auto a = curvatures_from_phi(p, t);
  const auto b = curvatures_from_phi(q, std::conj(t));
  EXPECT_NEAR(a.K, b.K, 1e-10);
  EXPECT_NEAR(a.kappa, b.kappa, 1e-10);
  EXPECT_LT(canonical_deviation(q, 1.0), 1e-9);
  EXPECT_NEAR((q.value(std::conj(t)) - p.value(t).conjugate()).norm(), 0.0, 1e-15);
}

TEST(Canonize, ReflectionFlipsNormalCurvature) {
  const PhiCurve p = build_canonical(golden());
  PhiCurve q = p;
  q.phi[3] = -p.phi[3];
  const Complex t(0.05, 0.1);
  const auto a = curvatures_from_phi(p, t), b = curvatures_from_phi(q, t);
  EXPECT_NEAR(a.K, b.K, 1e-10);
  EXPECT_NEAR(a.kappa, -b.kappa, 1e-10);
}
