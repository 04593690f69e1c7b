#pragma once

#include <optional>

#include "fredholm.hpp"

namespace detlab {

struct TauLeading {
  int x = 0;
  cplx linear;         // x \oint nu dq/q
  cplx double_term;    // -1/2 \iint ((nu(k)-nu(q))/(k-q))^2
  cplx value;          // exp(linear + double_term)
  cplx value_laurent;  // exp(x g_0 + sum_j j g_j g_{-j})
};

inline TauLeading tau_leading(const CauchySuite& suite, int m = 512) {
  if (!suite.contour().single_circle()) fail(ErrorCode::NotAvailable, "tau_leading needs a single circle");
  const SymbolSpec& spec = suite.spec();
  const int x = suite.x();
  Quadrature qd = quadrature(suite.contour().with_m(m));
  cvec nu = suite.phase_samples(qd.nodes);  // 2 pi i nu
  const std::size_t n = qd.nodes.size();
  cvec dnu(n);
  for (std::size_t j = 0; j < n; ++j) dnu[j] = eval_dphi(spec, qd.nodes[j]) / eval_phi(spec, qd.nodes[j]);
  TauLeading t;
  t.x = x;
  cplx lin = 0.0;
  for (std::size_t j = 0; j < n; ++j) lin += qd.weights[j] * nu[j] / qd.nodes[j];
  t.linear = double(x) * lin / two_pi_i;
  cplx dbl = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    cplx row = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      cplx r = i == j ? dnu[i] : (nu[i] - nu[j]) / (qd.nodes[i] - qd.nodes[j]);
      row += qd.weights[j] * r * r;
    }
    dbl += qd.weights[i] * row;
  }
  t.double_term = -0.5 * dbl / (two_pi_i * two_pi_i);
  t.value = std::exp(t.linear + t.double_term);
  const CircleSeries& g = suite.phase();
  t.value_laurent = std::exp(double(x) * g.coeff(0) + g.cross_sum());
  return t;
}

inline TauLeading tau_leading(const SymbolSpec& spec, const Contour& contour, int x) {
  return tau_leading(CauchySuite(spec, contour, x));
}

inline cplx szego(const SymbolSpec& spec, int x) {
  if (winding_number(spec) != 0) fail(ErrorCode::WindingNonzero, "Szego formula needs zero winding");
  FourierTable t = fourier_coefficients(spec, 1024);
  cplx s = double(x) * t.nu_at(0);
  for (int j = t.nu.half(); j >= 1; --j) s += double(j) * t.nu_at(j) * t.nu_at(-j);
  return std::exp(s);
}

inline int negative_winding(const SymbolSpec& spec) {
  int w = winding_number(spec);
  if (w >= 0) fail(ErrorCode::WindingNonnegative, "formula needs negative winding");
  return -w;
}

// y_n(s) = (1/2 pi i) \oint dk/k k^{-s} e^{-2 pi i nu_n(k)} e^{-2 omega_<(k)}
inline cplx hf_y(const CauchySuite& unit, int s, int m = 1024) {
  cvec k = circle_nodes(0.0, 1.0, m);
  cvec lg = unit.phase_samples(k);
  cplx acc = 0.0;
  for (int j = 0; j < m; ++j) acc += ipow(k[j], -s) * std::exp(-lg[j] - 2.0 * unit.omega_outside(k[j]));
  return acc / double(m);
}

inline cplx hartwig_fisher(const SymbolSpec& spec, int x) {
  const int n = negative_winding(spec);
  CauchySuite unit(spec, unit_circle(256), x, -n);
  Eigen::MatrixXcd Y(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) Y(i, j) = hf_y(unit, x + i - j);
  const CircleSeries& g = unit.phase();
  return determinant(Y) * std::exp(double(x + n) * g.coeff(0) + g.cross_sum());
}

// prod_k prod_{j != k} (z_j - z_k)
inline cplx vandermonde_both_orders(const cvec& z) {
  cplx p = 1.0;
  for (std::size_t k = 0; k < z.size(); ++k)
    for (std::size_t j = 0; j < z.size(); ++j)
      if (j != k) p *= z[j] - z[k];
  return p;
}

// Leading Hartwig-Fisher form, every integral by quadrature on the unit circle:
//   (x+n) \oint nu_n dq/q  -  1/2 \iint (Delta nu_n / Delta q)^2  +  2 sum_j \oint ln(1 - k/z_j) dnu_n(k),
// times prod_{j != k}(z_j - z_k) / prod z_k^{x+2n} theta'(z_k).
// The first term is the integration by parts of \int ln q dnu on [-pi, pi) with its boundary term kept.
inline cplx hf_leading(const SymbolSpec& spec, int x, int m = 512) {
  const int n = negative_winding(spec);
  SymbolAnalysis a = analyze(spec);
  CauchySuite unit(spec, unit_circle(256), x, -n);
  Quadrature qd = quadrature(unit_circle(m));
  cvec nu = unit.phase_samples(qd.nodes);  // 2 pi i nu_n
  cvec dnu(qd.nodes.size());
  for (std::size_t j = 0; j < dnu.size(); ++j) {
    cplx q = qd.nodes[j];
    dnu[j] = eval_dphi(spec, q) / eval_phi(spec, q) + double(n) / q;
  }
  cplx lin = 0.0, dbl = 0.0;
  for (std::size_t i = 0; i < nu.size(); ++i) {
    lin += qd.weights[i] * nu[i] / qd.nodes[i];
    cplx row = 0.0;
    for (std::size_t j = 0; j < nu.size(); ++j) {
      cplx r = i == j ? dnu[i] : (nu[i] - nu[j]) / (qd.nodes[i] - qd.nodes[j]);
      row += qd.weights[j] * r * r;
    }
    dbl += qd.weights[i] * row;
  }
  cplx s = double(x + n) * lin / two_pi_i - 0.5 * dbl / (two_pi_i * two_pi_i);
  cplx den = 1.0;
  for (auto& z : a.z_list) {
    cplx t = 0.0;
    for (std::size_t j = 0; j < nu.size(); ++j) t += qd.weights[j] * std::log(1.0 - qd.nodes[j] / z) * dnu[j];
    s += 2.0 * t / two_pi_i;
    den *= ipow(z, x + 2 * n) * eval_dphi(spec, z);
  }
  return std::exp(s) * vandermonde_both_orders(a.z_list) / den;
}

// same quantity through omega_>(0), the cross sum and omega_<(z_k)
inline cplx tau_leading_reduced(const SymbolSpec& spec, int x) {
  const int n = negative_winding(spec);
  SymbolAnalysis a = analyze(spec);
  CauchySuite unit(spec, unit_circle(256), x, -n);
  const CircleSeries& g = unit.phase();
  cplx s = double(x + n) * unit.omega_inside(0.0) + g.cross_sum();
  cplx den = 1.0;
  for (auto& z : a.z_list) {
    s -= 2.0 * unit.omega_outside(z);
    den *= ipow(z, 2 * n + x) * eval_dphi(spec, z);
  }
  return std::exp(s) * vandermonde_both_orders(a.z_list) / den;
}

inline bool contains_point(const cvec& v, cplx z) {
  return std::any_of(v.begin(), v.end(), [&](cplx u) { return std::abs(u - z) < 1e-9 * std::max(1.0, std::abs(z)); });
}

// Cauchy-type correction for the zero sets zset (inside D) and wset (outside D)
inline cplx slavnov_term(const CauchySuite& suite, const cvec& zset, const cvec& wset) {
  if (zset.size() != wset.size()) fail(ErrorCode::SizeMismatch, "zset and wset must have equal size");
  const SymbolSpec& spec = suite.spec();
  const int x = suite.x();
  cplx d = 1.0;
  for (auto& z : zset) {
    if (!contains_point(suite.zeros_inside(), z)) fail(ErrorCode::NotAvailable, "zset point is not a zero inside D");
    d *= ipow(z, x) * std::exp(2.0 * suite.omega_inside(z)) / eval_dphi(spec, z);
  }
  for (auto& w : wset) {
    if (!contains_point(suite.zeros_outside(), w)) fail(ErrorCode::NotAvailable, "wset point is not a zero outside D");
    d *= ipow(w, -x) * std::exp(-2.0 * suite.omega_outside(w)) / eval_dphi(spec, w);
  }
  auto sq = [](cplx v) { return v * v; };
  for (std::size_t a = 0; a < zset.size(); ++a)
    for (std::size_t b = 0; b < a; ++b) d *= sq(zset[a] - zset[b]) * sq(wset[a] - wset[b]);
  for (auto& z : zset)
    for (auto& w : wset) d /= sq(z - w);
  return d;
}

inline cplx slavnov_term(const SymbolSpec& spec, int x, const cvec& zset, const cvec& wset) {
  return slavnov_term(CauchySuite(spec, select_contour(analyze(spec)), x), zset, wset);
}

// all k-subsets of v in lexicographic index order
inline std::vector<cvec> subsets(const cvec& v, std::size_t k) {
  std::vector<cvec> out;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  if (k > v.size()) return out;
  while (true) {
    cvec s;
    for (auto i : idx) s.push_back(v[i]);
    out.push_back(s);
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == v.size() - k + i - 1) --i;
    if (i == 0) break;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

struct SlavnovSeries {
  cplx tau;
  cplx correction_sum;  // sum of D_{z,w} up to the order, including the empty term
  cplx value;
  int order_used = 0;
};

inline SlavnovSeries slavnov_series(const SymbolSpec& spec, int x, int max_order) {
  if (!spec.pure_rational()) fail(ErrorCode::NoResidueForm, "Slavnov series needs a rational symbol");
  CauchySuite suite(spec, select_contour(analyze(spec)), x);
  SlavnovSeries r;
  r.tau = tau_leading(suite).value_laurent;
  r.correction_sum = 1.0;
  std::size_t top = std::min({std::size_t(std::max(max_order, 0)), suite.zeros_inside().size(), suite.zeros_outside().size()});
  for (std::size_t k = 1; k <= top; ++k)
    for (auto& z : subsets(suite.zeros_inside(), k))
      for (auto& w : subsets(suite.zeros_outside(), k)) r.correction_sum += slavnov_term(suite, z, w);
  r.order_used = int(top);
  r.value = r.tau * r.correction_sum;
  return r;
}

struct SwapRatio {
  cplx route_a;  // closed form
  cplx route_b;  // Nystrom ratio on the deformed contour
};

inline SwapRatio tau_ratio_swap(const SymbolSpec& spec, int x, cplx z_a, std::optional<cplx> w_b, double tol = 1e-11) {
  SymbolAnalysis a = analyze(spec);
  Contour base = select_contour(a);
  CauchySuite suite(spec, base, x);
  if (!w_b || !contains_point(suite.zeros_outside(), *w_b)) fail(ErrorCode::NotAvailable, "no zero outside D to include");
  if (!contains_point(suite.zeros_inside(), z_a)) fail(ErrorCode::NotAvailable, "z_a is not a zero inside D");
  cplx w = *w_b;
  SwapRatio r;
  r.route_a = ipow(z_a, x) * ipow(w, -x) * std::exp(2.0 * suite.omega_inside(z_a) - 2.0 * suite.omega_outside(w)) /
              (eval_dphi(spec, z_a) * eval_dphi(spec, w) * (z_a - w) * (z_a - w));
  Contour deformed = deformed_contour(base, {z_a}, {w}, a);
  cplx num = nystrom_det(kernel_V(spec, deformed, x), deformed, tol).value;
  cplx den = nystrom_det(kernel_V(suite), base, tol).value;
  r.route_b = num / den;
  return r;
}

inline cplx borodin_okounkov(const SymbolSpec& spec, int x, int trunc = 48) {
  if (winding_number(spec) != 0) fail(ErrorCode::WindingNonzero, "Borodin-Okounkov needs zero winding");
  if (trunc < 8) fail(ErrorCode::InvalidSpec, "trunc must be at least 8");
  CauchySuite unit(spec, unit_circle(256), x);
  int m = 1024;
  while (m < 4 * (x + trunc + 64)) m *= 2;
  cvec k = circle_nodes(0.0, 1.0, m), fm(m), fp(m);
  for (int j = 0; j < m; ++j) {
    cplx o = unit.phase().inner(k[j]) + unit.phase().outer(k[j]);
    fm[j] = std::exp(-o);
    fp[j] = std::exp(o);
  }
  CircleSeries b = CircleSeries::from_samples(0.0, 1.0, fm), c = CircleSeries::from_samples(0.0, 1.0, fp);
  double scale = 0.0, cb = 0.0, cc = 0.0;
  for (int n = -b.half(); n <= b.half(); ++n) {
    cb = std::max(cb, std::abs(b.coeff(n)));
    cc = std::max(cc, std::abs(c.coeff(n)));
  }
  scale = cb * cc;
  const int l_tail = 4096;
  Eigen::MatrixXcd K(trunc, trunc);
  for (int n = 1; n <= trunc; ++n)
    for (int mm = 1; mm <= trunc; ++mm) {
      cplx s = 0.0;
      int small = 0;
      bool done = false;
      for (int l = 0; l <= l_tail; ++l) {
        int i1 = x + n + l, i2 = x + mm + l;
        if (i1 > b.half() || i2 > c.half()) break;
        cplx add = b.coeff(i1) * c.coeff(-i2);
        s += add;
        small = std::abs(add) < 1e-16 * scale ? small + 1 : 0;
        if (small >= 4) {
          done = true;
          break;
        }
      }
      if (!done) fail(ErrorCode::TailNotConverged, "BO kernel tail did not fall below 1e-16");
      K(n - 1, mm - 1) = s;
    }
  return szego(spec, x) * determinant(Eigen::MatrixXcd::Identity(trunc, trunc) - K);
}

struct Variation {
  cplx finite_difference;
  cplx formula;
};

// d ln tau / d eps for nu -> nu + eps q^j, finite difference vs \oint q^j (x/q + Omega_<' + Omega_>') dq
inline Variation tau_leading_variation(const SymbolSpec& spec, const Contour& contour, int x, int j, double eps = 1e-6) {
  auto perturbed = [&](double e) {
    SymbolSpec s = spec;
    if (s.kind == SymbolKind::rational) s.kind = SymbolKind::product;
    s.log_coeffs[j] += two_pi_i * e;
    const CircleSeries& g = CauchySuite(s, contour, x).phase();
    return double(x) * g.coeff(0) + g.cross_sum();
  };
  Variation v;
  v.finite_difference = (perturbed(eps) - perturbed(-eps)) / (2.0 * eps);
  CauchySuite suite(spec, contour, x);
  Quadrature qd = quadrature(contour.with_m(512));
  cplx s = 0.0;
  for (std::size_t k = 0; k < qd.nodes.size(); ++k) {
    cplx q = qd.nodes[k];
    s += qd.weights[k] * ipow(q, j) * (double(x) / q + suite.d_omega_outside(q) + suite.d_omega_inside(q));
  }
  v.formula = s;
  return v;
}

}  // namespace detlab
