#pragma once

#include <algorithm>
#include <numeric>

#include "cauchy.hpp"

namespace detlab {

struct RootSystem {
  int L = 0;
  int N = 0;
  cvec q_roots;  // all L solutions of q^L = 1
  cvec p_roots;  // N solutions of p^L = e^{-2 pi i nu(p)}
  std::vector<int> seeds;
  SymbolSpec spec;
  CircleSeries phase;  // 2 pi i nu on the unit circle
};

// seeds: the N grid indices whose angle 2 pi j/L is closest to 0
inline std::vector<int> seed_indices(int L, int N) {
  std::vector<int> j(L);
  std::iota(j.begin(), j.end(), 0);
  auto angle = [L](int k) { return std::abs(std::remainder(2.0 * pi * k / L, 2.0 * pi)); };
  std::stable_sort(j.begin(), j.end(), [&](int a, int b) { return angle(a) < angle(b); });
  j.resize(N);
  return j;
}

// Newton in u = ln p on L u + t 2 pi i nu(e^u) = 2 pi i j, continued in t from 0 to 1
inline RootSystem solve_shifted(const SymbolSpec& spec, int L, int N, int steps = 10) {
  if (L < 4 || N < 0 || N > L) fail(ErrorCode::SizeMismatch, "need L >= 4 and 0 <= N <= L");
  if (winding_number(spec) != 0) fail(ErrorCode::WindingNonzero, "form factors need zero winding");
  RootSystem rs;
  rs.L = L;
  rs.N = N;
  rs.spec = spec;
  rs.phase = CauchySuite(spec, unit_circle(256), 0).phase();
  for (int j = 0; j < L; ++j) rs.q_roots.push_back(std::polar(1.0, 2.0 * pi * j / L));
  rs.seeds = seed_indices(L, N);
  for (int j : rs.seeds) {
    double jj = std::remainder(double(j), double(L));
    cplx u(0.0, 2.0 * pi * jj / L);
    for (int s = 1; s <= steps; ++s) {
      double t = double(s) / steps;
      for (int it = 0; it < 60; ++it) {
        cplx p = std::exp(u);
        cplx f = double(L) * u + t * rs.phase.value(p) - two_pi_i * jj;
        cplx df = double(L) + t * rs.phase.d_value(p) * p;
        cplx du = f / df;
        u -= du;
        if (!std::isfinite(u.real()) || !std::isfinite(u.imag()))
          fail(ErrorCode::NewtonDiverged, "Newton diverged for seed index " + std::to_string(j));
        if (std::abs(du) < 1e-15) break;
      }
    }
    cplx p = std::exp(u);
    if (std::abs(ipow(p, L) * std::exp(rs.phase.value(p)) - 1.0) > 1e-12)
      fail(ErrorCode::NewtonDiverged, "root residual above 1e-12 for seed index " + std::to_string(j));
    rs.p_roots.push_back(p);
  }
  for (std::size_t a = 0; a < rs.p_roots.size(); ++a)
    for (std::size_t b = 0; b < a; ++b)
      if (std::abs(rs.p_roots[a] - rs.p_roots[b]) < 1e-8)
        fail(ErrorCode::NewtonDiverged, "two shifted roots coincide");
  return rs;
}

// ln of the form factor; -inf real part when theta vanishes on a root
inline cplx log_form_factor(const RootSystem& rs, const cvec& q) {
  const int N = rs.N;
  if (int(q.size()) != N) fail(ErrorCode::SizeMismatch, "q_subset must have N elements");
  const auto& p = rs.p_roots;
  cplx s = 2.0 * N * std::log(1.0 / rs.L);
  for (int i = 0; i < N; ++i) {
    cplx tq = eval_theta(rs.spec, q[i]), tp = eval_theta(rs.spec, p[i]);
    if (tq == 0.0 || tp == 0.0) return {-INFINITY, 0.0};
    cplx density = 1.0 + 2.0 * pi / rs.L * cplx(0.0, 1.0) * p[i] * rs.phase.d_value(p[i]) / two_pi_i;
    s += std::log(p[i]) + std::log(q[i]) + std::log(tq) + std::log(tp) - std::log(1.0 + tq) - std::log(density);
  }
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < i; ++j) s += 2.0 * (std::log(p[i] - p[j]) + std::log(q[i] - q[j]));
    for (int j = 0; j < N; ++j) s -= 2.0 * std::log(p[i] - q[j]);
  }
  return s;
}

inline cplx form_factor(const RootSystem& rs, const cvec& q_subset) {
  cplx l = log_form_factor(rs, q_subset);
  if (l.real() == -INFINITY) return 0.0;
  if (l.real() > 700.0) fail(ErrorCode::OverflowGuard, "form factor log-magnitude above 700");
  return std::exp(l);
}

inline double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

struct FormFactorSum {
  cplx value;
  long terms = 0;
};

// sum over N-subsets (colex order) of |<p|q>|^2 prod (q_i/p_i)^x, Kahan-compensated
inline FormFactorSum tau_eff_finite(const RootSystem& rs, int x) {
  FormFactorSum r;
  if (rs.spec.trivial()) {
    r.value = 1.0;
    r.terms = 1;
    return r;
  }
  const int L = rs.L, N = rs.N;
  if (binomial(L, N) > 2e5) fail(ErrorCode::BudgetExceeded, "binomial(L, N) above 2e5");
  cplx pp = 1.0;
  for (auto& p : rs.p_roots) pp *= ipow(p, -x);
  std::vector<int> c(N);
  std::iota(c.begin(), c.end(), 0);
  double sr = 0.0, si = 0.0, cr = 0.0, ci = 0.0;
  auto kahan = [](double& sum, double& comp, double v) {
    double y = v - comp, t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  };
  while (true) {
    cvec q(N);
    cplx qq = 1.0;
    for (int i = 0; i < N; ++i) {
      q[i] = rs.q_roots[c[i]];
      qq *= ipow(q[i], x);
    }
    cplx term = form_factor(rs, q) * qq * pp;
    kahan(sr, cr, term.real());
    kahan(si, ci, term.imag());
    ++r.terms;
    int i = 0;
    while (i < N && c[i] + 1 == (i + 1 < N ? c[i + 1] : L)) ++i;
    if (i == N) break;
    ++c[i];
    for (int k = 0; k < i; ++k) c[k] = k;
  }
  r.value = {sr, si};
  return r;
}

inline FormFactorSum tau_eff_finite(const SymbolSpec& spec, int L, int N, int x) {
  return tau_eff_finite(solve_shifted(spec, L, N), x);
}

}  // namespace detlab
