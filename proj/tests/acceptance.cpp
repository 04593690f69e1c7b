// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <cstdio>
#include <functional>

#include "detlab/detlab.hpp"

using namespace detlab;

namespace {

const std::vector<std::string> all_fixtures{"F0", "F1", "F2", "F3", "F4", "F5", "F6", "F7"};

struct Outcome {
  bool passed = false;
  std::string detail;
};

std::string sci(double v) {
  char b[32];
  std::snprintf(b, sizeof b, "%.3g", v);
  return b;
}

Contour selected(const SymbolSpec& s) { return select_contour(analyze(s)); }

cplx det_on(const KernelOnContour& k, const Contour& c, double tol = 1e-12) { return nystrom_det(k, c, tol, 32, 512).value; }

cplx unit_V(const SymbolSpec& s, int x) { return det_on(kernel_V(s, unit_circle(), x), unit_circle()); }

// worst value over a grid, failing on the first exception
struct Worst {
  double value = 0.0;
  std::string where;
  void add(double v, const std::string& w) {
    if (where.empty() || !(v <= value)) {
      value = v;
      where = w;
    }
  }
  Outcome below(double tol) const { return {value <= tol, "max " + sci(value) + " at " + where + " (tol " + sci(tol) + ")"}; }
};

std::string at(const std::string& fx, int x) { return fx + " x=" + std::to_string(x); }

Outcome c01() {
  Worst w;
  for (auto& f : all_fixtures) {
    if (f == "F0") continue;
    SymbolSpec s = load_fixture(f);
    Contour c = selected(s);
    for (int x = 1; x <= 10; ++x) w.add(rel_err(det_on(kernel_S(s, x), c), toeplitz_det(s, x)), at(f, x));
  }
  return w.below(1e-8);
}

Outcome c02() {
  SymbolSpec s = load_fixture("F1");
  Worst w;
  for (int x = 1; x <= 10; ++x) {
    double e = std::pow(1.5, x);
    w.add(rel_err(toeplitz_det(s, x), e), "toeplitz x=" + std::to_string(x));
    w.add(rel_err(det_on(kernel_S(s, x), unit_circle()), e), "fredholm x=" + std::to_string(x));
    w.add(rel_err(tau_leading(s, selected(s), x).value, e), "leading x=" + std::to_string(x));
    w.add(rel_err(szego(s, x), e), "szego x=" + std::to_string(x));
    w.add(rel_err(borodin_okounkov(s, x), e), "bo x=" + std::to_string(x));
  }
  return w.below(1e-12);
}

Outcome c03() {
  Worst w;
  for (auto f : {"F3", "F5"}) {
    SymbolSpec s = load_fixture(f);
    for (int x = 1; x <= 8; ++x) w.add(rel_err(hartwig_fisher(s, x), unit_V(s, x)), at(f, x));
  }
  return w.below(1e-7);
}

Outcome c04() {
  Worst w;
  bool ordered = true;
  std::string order_note;
  for (auto f : {"F3", "F4"}) {
    SymbolSpec s = load_fixture(f);
    for (int x : {2, 4, 6}) {
      cplx t = toeplitz_det(s, x);
      SlavnovSeries full = slavnov_series(s, x, 8), zero = slavnov_series(s, x, 0);
      double ef = rel_err(full.value, t), e0 = rel_err(zero.value, t);
      w.add(ef, at(f, x));
      if (full.order_used == 0) {
        // no zero outside the contour: the series is its empty term, order 0 is already full
        order_note = std::string(f) + " has no correction terms";
        continue;
      }
      if (!(e0 > ef)) {
        ordered = false;
        order_note = "order-0 not worse at " + at(f, x);
      }
    }
  }
  Outcome o = w.below(1e-8);
  o.passed = o.passed && ordered;
  o.detail += "; order-0 error > full error where corrections exist" + (order_note.empty() ? "" : " (" + order_note + ")");
  return o;
}

Outcome c05() {
  SymbolSpec s = load_fixture("F4");
  Worst w;
  for (int x : {2, 3, 4}) {
    SwapRatio r = tau_ratio_swap(s, x, 1.4, cplx(2.2));
    w.add(rel_err(r.route_b, r.route_a), "x=" + std::to_string(x));
  }
  return w.below(1e-6);
}

Outcome c06() {
  Worst w;
  for (auto f : {"F2", "F6"}) {
    SymbolSpec s = load_fixture(f);
    for (int x : {3, 5, 8}) w.add(rel_err(borodin_okounkov(s, x, 48), toeplitz_det(s, x)), at(f, x));
  }
  return w.below(1e-8);
}

Outcome c07() {
  Worst w;
  int pairs = 0;
  for (auto& f : all_fixtures) {
    SymbolSpec s = load_fixture(f);
    CauchySuite suite(s, selected(s), 2);
    Resolvent res = build_resolvent(suite, 256);
    std::mt19937_64 rng(20240601 ^ fnv1a(f));
    const double rho = suite.radius();
    cvec in = probe_points(rng, 0.45 * rho, 8), out = probe_points(rng, 1.8 * rho, 8);
    for (int j = 0; j < 8; ++j) {
      cplx k1 = j % 2 ? in[j] : out[j], k2 = j % 4 < 2 ? in[(j + 3) % 8] : out[(j + 5) % 8];
      MValue m = m_function(suite, res, k1, k2);
      w.add(std::abs(m.route_a - m.route_b) / std::max(1.0, std::abs(m.route_b)), f + " pair " + std::to_string(j));
      ++pairs;
    }
  }
  Outcome o = w.below(1e-8);
  o.detail = std::to_string(pairs) + " pairs, " + o.detail;
  return o;
}

Outcome c08() {
  Worst w;
  for (auto f : {"F3", "F5"}) {
    SymbolSpec s = load_fixture(f);
    for (int x : {2, 5}) w.add(rel_err(hf_leading(s, x), tau_leading_reduced(s, x)), at(f, x));
  }
  return w.below(1e-7);
}

Outcome c09() {
  Worst rhp, moment, cd;
  for (auto f : {"F3", "F5"}) {
    SymbolSpec s = load_fixture(f);
    std::mt19937_64 rng(7 ^ fnv1a(f));
    for (int x : {1, 2, 3}) {
      MeasureMu mu(s, x);
      RhpSolution Y(mu);
      rhp.add(Y.jump_residual(probe_points(rng, 1.0, 8)), "jump " + at(f, x));
      rhp.add(Y.normalization_residual(), "normalization " + at(f, x));
      cvec in = probe_points(rng, 0.6, 4), out = probe_points(rng, 1.7, 4);
      for (int j = 0; j < 4; ++j) {
        CDValue off = christoffel_darboux(mu, in[j], out[j]), diag = christoffel_darboux(mu, in[j], in[j]);
        cd.add(std::max(rel_err(off.closed, off.sum), rel_err(diag.closed, diag.sum)), at(f, x));
      }
    }
  }
  SymbolSpec f3 = load_fixture("F3"), f5 = load_fixture("F5");
  for (int x = 1; x <= 6; ++x) moment.add(hf_moment_equivalence(f3, x).residual, at("F3", x));
  for (int x : {2, 3}) moment.add(hf_moment_equivalence(f5, x).residual, at("F5", x));
  Outcome a = rhp.below(1e-8), b = moment.below(1e-8), c = cd.below(1e-9);
  return {a.passed && b.passed && c.passed, "rhp " + a.detail + "; moments " + b.detail + "; CD " + c.detail};
}

Outcome c10() {
  Worst w;
  for (auto f : {"F1", "F2", "F3"}) {
    SymbolSpec s = load_fixture(f);
    for (int x : {2, 6}) w.add(build_resolvent(CauchySuite(s, selected(s), x), 256, INFINITY).residual, at(f, x));
  }
  return w.below(1e-8);
}

Outcome c11() {
  Worst w;
  for (auto f : {"F2", "F6"}) {
    SymbolSpec s = load_fixture(f);
    for (int x : {2, 5, 8}) {
      RankOneReport r = rank_one_shift_identity(s, x);
      w.add(r.residual, "identity " + at(f, x));
      w.add(r.closed_residual, "closed form " + at(f, x));
    }
  }
  return w.below(1e-8);
}

Outcome c12() {
  Worst w;
  std::string gaps;
  for (auto f : {"F1", "F2"}) {
    SymbolSpec s = load_fixture(f);
    for (int x = 1; x <= 3; ++x) {
      cplx ref = det_on(kernel_V(s, unit_circle(), x), unit_circle(), 1e-13);
      double g8 = std::abs(tau_eff_finite(s, 8, 8, x).value - ref);
      double g16 = std::abs(tau_eff_finite(s, 16, 16, x).value - ref);
      // both gaps at double-precision level: nothing left to shrink
      double floor = 1e-12 * std::max(1.0, std::abs(ref));
      w.add(g8 < floor && g16 < floor ? 0.0 : g16 / g8, at(f, x));
      gaps += " " + at(f, x) + " " + sci(g8) + "->" + sci(g16);
    }
  }
  Outcome o = w.below(2.0 / 3.0);
  o.detail = "gap16/gap8 " + o.detail + "; gaps L=8->16:" + gaps;
  return o;
}

// strictly decreasing until the sequence reaches the floor, then staying there
bool decays(const std::vector<double>& e, double floor) {
  for (std::size_t k = 1; k < e.size(); ++k) {
    if (e[k - 1] <= floor) {
      if (e[k] > floor) return false;
    } else if (!(e[k] < e[k - 1])) {
      return false;
    }
  }
  return true;
}

std::string seq(const std::vector<double>& e) {
  std::string s;
  for (double v : e) s += (s.empty() ? "" : " ") + sci(v);
  return s;
}

Outcome c13() {
  const double floor = 1e-13;
  SymbolSpec f3 = load_fixture("F3"), f2 = load_fixture("F2");
  std::vector<double> a, b;
  for (int x = 4; x <= 12; ++x) {
    a.push_back(std::abs(toeplitz_det(f3, x) / hf_leading(f3, x) - 1.0));
    b.push_back(std::abs(toeplitz_det(f2, x) / szego(f2, x) - 1.0));
  }
  return {decays(a, floor) && decays(b, floor),
          "floor " + sci(floor) + "; F3 hf_leading [" + seq(a) + "]; F2 szego [" + seq(b) + "]"};
}

Outcome c14() {
  Worst jump, drop;
  for (auto& f : all_fixtures) {
    SymbolSpec s = load_fixture(f);
    SymbolAnalysis a = analyze(s);
    Contour c = select_contour(a);
    jump.add(CauchySuite(s, c, 0).jump_residual(), f + " selected");
    jump.add(CauchySuite(s, unit_circle(256), 0, a.winding).jump_residual(), f + " unit");
    std::vector<std::pair<std::string, KernelOnContour>> kernels{{"S", kernel_S(s, 4)}};
    Contour where = c;
    if (a.winding <= 0) kernels.push_back({"V_unit", kernel_V(s, unit_circle(), 4)});
    if (a.winding > 0) kernels.push_back({"Q", kernel_Q(s, 4)});
    for (auto& [name, k] : kernels) {
      Contour on = name == "S" ? c : unit_circle();
      drop.add(spectral_drop_ratio(nystrom_history(k, on, 16, 512), 1e-12), f + " " + name);
    }
    if (a.winding < 0 && s.pure_rational()) {
      CauchySuite suite(s, c, 4);
      drop.add(spectral_drop_ratio(nystrom_history(kernel_V(suite) - kernel_Delta(suite), c, 16, 512), 1e-12),
               f + " V-Delta");
    }
  }
  Outcome a = jump.below(1e-10), b = drop.below(0.1);
  return {a.passed && b.passed, "scalar jump " + a.detail + "; worst drop ratio " + b.detail};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"contour Fredholm determinant equals Toeplitz", c01},
      {"constant symbol exact on every route", c02},
      {"Hartwig-Fisher determinant equals unit-circle Fredholm determinant", c03},
      {"full-order Slavnov series equals Toeplitz", c04},
      {"zero swap ratio by two routes", c05},
      {"Borodin-Okounkov equals Toeplitz", c06},
      {"M function dual route", c07},
      {"HF leading term equals reduced leading term", c08},
      {"matrix RHP, moment determinant and Christoffel-Darboux", c09},
      {"resolvent inversion residual", c10},
      {"rank-one shift identity and closed form", c11},
      {"form-factor sum converges with L", c12},
      {"asymptotic gaps decay monotonically", c13},
      {"scalar RHP residuals and Nystrom self-convergence", c14},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const Error& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    failed += !o.passed;
    std::printf("%s %02zu %s: %s\n", o.passed ? "PASS" : "FAIL", k + 1, criteria[k].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu criteria, %d failed\n", criteria.size(), failed);
  return failed ? 1 : 0;
}
