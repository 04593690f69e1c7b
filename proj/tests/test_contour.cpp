#include "test_util.hpp"

using namespace detlab;

TEST(Contour, SelectedRadii) {
  EXPECT_NEAR(select_contour(analyze(fx("F3"))).outer().radius, 2.0, 1e-12);
  EXPECT_NEAR(select_contour(analyze(fx("F4"))).outer().radius, std::sqrt(1.4 * 2.2), 1e-12);
  EXPECT_NEAR(select_contour(analyze(fx("F5"))).outer().radius, 1.25 * 1.9, 1e-12);
  EXPECT_NEAR(select_contour(analyze(fx("F7"))).outer().radius, 0.4 / 1.25, 1e-12);
  for (auto name : {"F0", "F1", "F2", "F6"}) EXPECT_EQ(select_contour(analyze(fx(name))).outer().radius, 1.0) << name;
}

TEST(Contour, SelectedContourSeparatesZeros) {
  for (auto name : {"F3", "F4", "F5", "F7"}) {
    SymbolAnalysis a = analyze(fx(name));
    Contour c = select_contour(a);
    for (auto& z : a.z_list) EXPECT_EQ(c.encloses(z), a.winding < 0) << name;
    for (auto& w : a.w_list) EXPECT_EQ(c.encloses(w), a.winding > 0) << name;
  }
}

TEST(Contour, ShiftedNuHasZeroWindingOnSelectedContour) {
  for (auto name : {"F3", "F4", "F5"}) {
    SymbolSpec s = fx(name);
    Contour c = select_contour(analyze(s));
    cvec q = circle_nodes(0.0, c.outer().radius, 512);
    cvec lg = eval_log_phi_grid(s, q);
    double incr = lg.back().imag() - lg.front().imag() + (lg[1] - lg[0]).imag();
    EXPECT_NEAR(incr, 0.0, 0.05) << name;
  }
}

TEST(Contour, EmptyAnnulusWhenPoleBlocks) {
  // winding -1 requires z=1.5 inside, but a pole at 1.2 sits in between
  SymbolSpec s = SymbolSpec::rational(poly_from_roots({1.5, 0.3}), poly_from_roots({0.0, 0.0, 1.2}));
  EXPECT_DETLAB_ERROR(select_contour(analyze(s)), ErrorCode::EmptyAnnulus);
}

TEST(Contour, QuadratureExactForMonomials) {
  for (double r : {1.0, 2.0, 0.32}) {
    Quadrature qd = quadrature(circle_contour(r, 64));
    for (int n = -20; n <= 20; ++n) {
      cplx s = 0.0;
      for (std::size_t j = 0; j < qd.nodes.size(); ++j) s += qd.weights[j] * ipow(qd.nodes[j], n);
      cplx expect = n == -1 ? two_pi_i : cplx(0.0);
      EXPECT_LT(std::abs(s - expect), 1e-12 * std::max(1.0, std::pow(r, n + 1))) << r << " " << n;
    }
  }
}

TEST(Contour, QuadratureWeightsSumToZero) {
  Quadrature qd = quadrature(unit_circle(128));
  cplx s = 0.0;
  for (auto& w : qd.weights) s += w;
  EXPECT_LT(std::abs(s), 1e-13);
}

TEST(Contour, DeformedContourIndex) {
  SymbolSpec s = fx("F4");
  SymbolAnalysis a = analyze(s);
  Contour base = select_contour(a);
  Contour d = deformed_contour(base, {1.4}, {2.2}, a);
  EXPECT_EQ(d.components.size(), 2u);
  EXPECT_FALSE(d.encloses(1.4));
  EXPECT_TRUE(d.encloses(2.2));
  EXPECT_TRUE(d.encloses(0.3));
  EXPECT_EQ(d.index_of(1.4), 0);
  // multi-component quadrature: integral of 1/(q - c) counts enclosed points
  Quadrature qd = quadrature(d.with_m(128));
  for (cplx c : {cplx(1.4), cplx(2.2), cplx(0.3)}) {
    cplx sum = 0.0;
    for (std::size_t j = 0; j < qd.nodes.size(); ++j) sum += qd.weights[j] / (qd.nodes[j] - c);
    EXPECT_NEAR(std::abs(sum / two_pi_i - double(d.index_of(c))), 0.0, 1e-10);
  }
}

TEST(Contour, DeformedGeometryConflicts) {
  SymbolAnalysis a = analyze(fx("F4"));
  Contour base = select_contour(a);
  EXPECT_DETLAB_ERROR(deformed_contour(base, {2.2}, {}, a), ErrorCode::GeometryConflict);
  EXPECT_DETLAB_ERROR(deformed_contour(base, {}, {1.4}, a), ErrorCode::GeometryConflict);
}

TEST(Contour, CheckContourRejectsBadComponents) {
  Contour c = unit_circle();
  c.components.push_back(Circle{0.0, 0.5, -1});
  EXPECT_DETLAB_ERROR(check_contour(c), ErrorCode::GeometryConflict);
  Contour d = unit_circle();
  d.components.push_back(Circle{0.5, 0.2, 1});
  EXPECT_DETLAB_ERROR(check_contour(d), ErrorCode::GeometryConflict);
}
