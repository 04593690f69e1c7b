#include "test_util.hpp"

using namespace detlab;

namespace {
CauchySuite selected(const std::string& name, int x) {
  SymbolSpec s = fx(name);
  return CauchySuite(s, select_contour(analyze(s)), x);
}
}  // namespace

TEST(Cauchy, ScalarJumpOnSelectedContour) {
  for (auto name : {"F0", "F1", "F2", "F3", "F4", "F5", "F6", "F7"}) {
    CauchySuite s = selected(name, 2);
    ASSERT_TRUE(s.has_series()) << name;
    EXPECT_LT(s.jump_residual(), 1e-10) << name;
  }
}

TEST(Cauchy, ScalarJumpOnUnitCircleWithShift) {
  for (auto name : {"F2", "F3", "F4", "F5", "F7"}) {
    CauchySuite u = unit_circle_suite(fx(name), 1);
    EXPECT_LT(u.jump_residual(), 1e-10) << name;
  }
}

TEST(Cauchy, F1PhaseIsConstant) {
  CauchySuite s = selected("F1", 0);
  EXPECT_LT(std::abs(s.omega_inside(0.3) - std::log(1.5)), 1e-14);
  EXPECT_LT(std::abs(s.omega_outside(3.0)), 1e-14);
}

TEST(Cauchy, F2PhaseSplitsExactly) {
  CauchySuite s = selected("F2", 0);
  cplx q(0.2, 0.4), p(1.5, -2.0);
  EXPECT_LT(std::abs(s.omega_inside(q) - 0.3 * q), 1e-14);
  EXPECT_LT(std::abs(s.omega_outside(p) + 0.2 / p), 1e-14);
}

TEST(Cauchy, UnshiftedWindingHasNoSeries) {
  CauchySuite s(fx("F3"), unit_circle(), 2);
  EXPECT_FALSE(s.has_series());
  EXPECT_DETLAB_ERROR(s.phase(), ErrorCode::WindingNonzero);
  // residue-type quantities remain available
  EXPECT_NO_THROW(s.w_C(0.5));
}

TEST(Cauchy, DomainChecks) {
  CauchySuite s = selected("F3", 2);
  EXPECT_DETLAB_ERROR(s.omega_inside(2.5), ErrorCode::OutsideDomain);
  EXPECT_DETLAB_ERROR(s.omega_outside(1.0), ErrorCode::OutsideDomain);
  EXPECT_DETLAB_ERROR(s.varphi_C(cplx(2.0 + 1e-3, 0.0), 64), ErrorCode::TooCloseToContour);
}

TEST(Cauchy, VarphiQuadratureMatchesResidues) {
  for (auto name : {"F3", "F4", "F5"}) {
    CauchySuite s = selected(name, 3);
    for (cplx q : {cplx(0.5, 0.2), cplx(-3.5, 1.0), cplx(0.0, 1.0)})
      EXPECT_LT(rel(s.varphi_C(q, 512), s.varphi_C_residue(q)), 1e-10) << name << " " << q;
  }
}

TEST(Cauchy, WContinuationAgreesWithSeries) {
  // same symbol written with a vanishing log part goes through the series route
  SymbolSpec r = fx("F6");
  SymbolSpec p = r;
  p.kind = SymbolKind::product;
  p.log_coeffs[2] = 1e-300;
  CauchySuite a(r, unit_circle(), 4), b(p, unit_circle(), 4);
  for (cplx q : {cplx(1.5, 0.5), cplx(-2.0, 0.1)}) {
    EXPECT_LT(rel(a.w_C(q).value, b.w_C(q).value), 1e-10) << q;
    EXPECT_LT(rel(a.w_C(q).deriv, b.w_C(q).deriv), 1e-9) << q;
  }
}

TEST(Cauchy, BPlusRoutesAgree) {
  CauchySuite s = selected("F4", 3);
  for (cplx q : {cplx(0.0), cplx(0.3, -0.6), cplx(1.0, 0.5)}) {
    Jet r = s.b_plus(q), c = s.b_plus_quadrature(q);
    EXPECT_LT(std::abs(r.value - c.value), 1e-10 * std::max(1.0, std::abs(r.value))) << q;
    EXPECT_LT(std::abs(r.deriv - c.deriv), 1e-9 * std::max(1.0, std::abs(r.deriv))) << q;
    EXPECT_LT(std::abs(s.b_plus_symmetric(q) - r.value), 1e-10 * std::max(1.0, std::abs(r.value))) << q;
  }
}

TEST(Cauchy, BPlusOracleF2) {
  CauchySuite s = selected("F2", 3);
  EXPECT_LT(std::abs(s.b_plus(0.0).value - oracle::F2_b_plus_at_zero_x3), 1e-12);
  EXPECT_LT(std::abs(s.b_plus_symmetric(0.0) - oracle::F2_b_plus_at_zero_x3), 1e-12);
}

TEST(Cauchy, BJumpAcrossContour) {
  // b_> - b_< on the circle is minus the transformed density
  CauchySuite s = selected("F2", 2);
  for (double a : {0.1, 1.7, -2.9}) {
    cplx k = std::polar(1.0, a);
    cplx dens = ipow(k, -2) * (1.0 - 1.0 / eval_phi(s.spec(), k)) * std::exp(-2.0 * s.omega_outside(k));
    EXPECT_LT(std::abs(s.b_plus(k).value - s.b_minus(k).value + dens), 1e-12) << a;
  }
}

TEST(Cauchy, SmallOmegaFreeFunction) {
  SymbolSpec s = fx("F2");
  EXPECT_LT(std::abs(small_omega(s, 0.5, Side::inside) - 0.15), 1e-14);
  EXPECT_LT(std::abs(small_omega(s, 2.0, Side::outside) + 0.1), 1e-14);
}

TEST(Cauchy, ZerosSplitByContour) {
  CauchySuite s = selected("F4", 1);
  ASSERT_EQ(s.zeros_inside().size(), 2u);
  ASSERT_EQ(s.zeros_outside().size(), 1u);
  EXPECT_NEAR(std::abs(s.zeros_outside()[0] - 2.2), 0.0, 1e-12);
}
