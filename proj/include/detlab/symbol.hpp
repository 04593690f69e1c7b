#pragma once

#include <algorithm>
#include <map>
#include <string>

#include "circle_series.hpp"
#include "polynomial.hpp"

namespace detlab {

// phi(q) = 1 + theta(q).  `product` is the internal closure of the two file
// formats: phi = P/Q * exp(sum t_j q^j).
enum class SymbolKind { rational, laurent_phase, product };

struct SymbolSpec {
  SymbolKind kind = SymbolKind::rational;
  Poly numer{1.0};
  Poly denom{1.0};
  std::map<int, cplx> log_coeffs;

  static SymbolSpec rational(Poly p, Poly q) {
    SymbolSpec s;
    s.kind = SymbolKind::rational;
    s.numer = poly_trim(std::move(p));
    s.denom = poly_trim(std::move(q));
    return s;
  }

  static SymbolSpec laurent_phase(std::map<int, cplx> t) {
    SymbolSpec s;
    s.kind = SymbolKind::laurent_phase;
    s.log_coeffs = std::move(t);
    return s;
  }

  bool has_log_part() const {
    return std::any_of(log_coeffs.begin(), log_coeffs.end(),
                       [](auto& kv) { return kv.second != 0.0; });
  }
  bool pure_rational() const { return !has_log_part(); }

  // theta identically zero
  bool trivial() const {
    if (has_log_part()) return false;
    Poly p = poly_trim(numer), q = poly_trim(denom);
    if (p.size() != q.size()) return false;
    for (std::size_t k = 0; k < p.size(); ++k)
      if (std::abs(p[k] - q[k]) > 1e-15 * std::abs(q.back())) return false;
    return true;
  }

  int max_log_power() const {
    int j = 0;
    for (auto& [k, t] : log_coeffs)
      if (t != 0.0) j = std::max(j, std::abs(k));
    return j;
  }
};

inline cplx log_part(const SymbolSpec& s, cplx q) {
  cplx r = 0.0;
  for (auto& [j, t] : s.log_coeffs) r += t * ipow(q, j);
  return r;
}

inline cplx d_log_part(const SymbolSpec& s, cplx q) {
  cplx r = 0.0;
  for (auto& [j, t] : s.log_coeffs)
    if (j != 0) r += double(j) * t * ipow(q, j - 1);
  return r;
}

inline cplx eval_phi(const SymbolSpec& s, cplx q) {
  cplx den = poly_eval(s.denom, q);
  if (std::abs(den) <= 1e-14 * poly_scale_at(s.denom, q)) fail(ErrorCode::PoleHit, "q is a root of the denominator");
  cplx r = poly_eval(s.numer, q) / den;
  if (s.has_log_part()) r *= std::exp(log_part(s, q));
  return r;
}

inline cplx eval_theta(const SymbolSpec& s, cplx q) { return eval_phi(s, q) - 1.0; }

// phi'(q) (equal to theta'(q))
inline cplx eval_dphi(const SymbolSpec& s, cplx q) {
  cplx P = poly_eval(s.numer, q), Q = poly_eval(s.denom, q);
  if (std::abs(Q) <= 1e-14 * poly_scale_at(s.denom, q)) fail(ErrorCode::PoleHit, "q is a root of the denominator");
  cplx dP = poly_eval(poly_derivative(s.numer), q), dQ = poly_eval(poly_derivative(s.denom), q);
  cplx r = (dP * Q - P * dQ) / (Q * Q);
  if (s.has_log_part()) r = (r + P / Q * d_log_part(s, q)) * std::exp(log_part(s, q));
  return r;
}

// ln phi along nodes ordered counterclockwise on one circle, imaginary part unwrapped
inline cvec eval_log_phi_grid(const SymbolSpec& s, const cvec& nodes) {
  cvec out(nodes.size());
  double prev = 0.0;
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    cplx q = nodes[j];
    cplx r = poly_eval(s.numer, q) / poly_eval(s.denom, q);
    double mag = std::abs(r) * (s.has_log_part() ? std::exp(log_part(s, q).real()) : 1.0);
    if (!(mag >= 1e-12)) fail(ErrorCode::ZeroOnContour, "|phi| < 1e-12 at a contour node");
    cplx l = std::log(r);
    double im = l.imag();
    if (j > 0) im += 2.0 * pi * std::round((prev - im) / (2.0 * pi));
    prev = im;
    out[j] = cplx(l.real(), im) + log_part(s, q);
  }
  return out;
}

inline cvec eval_nu_grid(const SymbolSpec& s, const cvec& nodes) {
  cvec v = eval_log_phi_grid(s, nodes);
  for (auto& z : v) z /= two_pi_i;
  return v;
}

inline void validate(const SymbolSpec& s) {
  if (s.kind == SymbolKind::laurent_phase) return;
  Poly P = poly_trim(s.numer), Q = poly_trim(s.denom);
  if (Q.size() == 1 && Q[0] == 0.0) fail(ErrorCode::InvalidSpec, "denominator is identically zero");
  if (P.size() == 1 && P[0] == 0.0) fail(ErrorCode::InvalidSpec, "numerator is identically zero");
  cvec zp = poly_roots(P), zq = poly_roots(Q);
  for (auto& z : zq)
    if (std::abs(std::abs(z) - 1.0) < 1e-8) fail(ErrorCode::InvalidSpec, "denominator root on the unit circle");
  for (auto& z : zp)
    if (std::abs(std::abs(z) - 1.0) < 1e-8) fail(ErrorCode::InvalidSpec, "numerator root on the unit circle");
  for (auto& a : zp)
    for (auto& b : zq)
      if (std::abs(a - b) < 1e-10 * std::max(1.0, std::abs(a)))
        fail(ErrorCode::InvalidSpec, "numerator and denominator share a root");
}

struct Pole {
  cplx value;
  int multiplicity;
};

struct SymbolAnalysis {
  cvec zeros;  // descending modulus
  std::vector<Pole> poles;
  int winding = 0;
  double winding_quadrature = 0.0;
  cvec z_list;
  cvec w_list;
};

// (1/2 pi i) \oint phi'/phi dq on the unit circle, trapezoidal
inline double winding_quadrature(const SymbolSpec& s, int m = 2048) {
  cplx acc = 0.0;
  for (int j = 0; j < m; ++j) {
    cplx q = std::polar(1.0, -pi + 2.0 * pi * j / m);
    acc += q * eval_dphi(s, q) / eval_phi(s, q);
  }
  return (acc / double(m)).real();
}

inline SymbolAnalysis analyze(const SymbolSpec& s, double sep_tol = 1e-6) {
  validate(s);
  SymbolAnalysis a;
  if (s.kind != SymbolKind::laurent_phase) {
    a.zeros = poly_roots(s.numer);
    std::sort(a.zeros.begin(), a.zeros.end(), [](cplx u, cplx v) { return std::abs(u) > std::abs(v); });
    for (std::size_t k = 1; k < a.zeros.size(); ++k)
      if (std::abs(a.zeros[k - 1]) - std::abs(a.zeros[k]) < sep_tol)
        fail(ErrorCode::DegenerateZeros, "two zeros of phi closer than sep_tol in modulus");
    for (auto& z : poly_roots(s.denom)) {
      auto it = std::find_if(a.poles.begin(), a.poles.end(), [&](const Pole& p) { return std::abs(p.value - z) < 1e-6; });
      if (it == a.poles.end())
        a.poles.push_back({z, 1});
      else
        ++it->multiplicity;
    }
  }
  a.winding_quadrature = winding_quadrature(s);
  if (s.kind == SymbolKind::laurent_phase) {
    a.winding = int(std::lround(a.winding_quadrature));
  } else {
    int count = 0;
    for (auto& z : a.zeros) count += std::abs(z) < 1.0;
    for (auto& p : a.poles) count -= std::abs(p.value) < 1.0 ? p.multiplicity : 0;
    if (std::abs(a.winding_quadrature - count) > 0.25)
      fail(ErrorCode::WindingInconsistent, "quadrature winding disagrees with zero/pole count");
    a.winding = count;
  }
  cvec out, in;
  for (auto& z : a.zeros) (std::abs(z) > 1.0 ? out : in).push_back(z);
  auto by_dist = [](cplx u, cplx v) { return std::abs(std::abs(u) - 1.0) < std::abs(std::abs(v) - 1.0); };
  std::sort(out.begin(), out.end(), by_dist);
  std::sort(in.begin(), in.end(), by_dist);
  cvec& side = a.winding > 0 ? in : out;
  std::size_t n = std::min<std::size_t>(std::abs(a.winding), side.size());
  a.z_list.assign(side.begin(), side.begin() + n);
  a.w_list.assign(side.begin() + n, side.end());
  if (a.winding < 0)
    std::sort(a.z_list.begin(), a.z_list.end(), [](cplx u, cplx v) { return std::abs(u) > std::abs(v); });
  else
    std::sort(a.z_list.begin(), a.z_list.end(), [](cplx u, cplx v) { return std::abs(u) < std::abs(v); });
  return a;
}

inline int winding_number(const SymbolSpec& s) { return analyze(s).winding; }

struct FourierTable {
  int m = 0;
  CircleSeries c;   // coefficients of phi on the unit circle
  CircleSeries nu;  // coefficients of 2 pi i nu_n (nu itself when the winding is zero)
  cplx c_at(int k) const { return c.coeff(k); }
  cplx nu_at(int j) const { return nu.coeff(j); }
};

inline FourierTable fourier_coefficients(const SymbolSpec& s, int m) {
  int deg = std::max({poly_degree(s.numer), poly_degree(s.denom), s.max_log_power()});
  if (m < 16 || (m & (m - 1)) != 0 || m < 4 * deg + 16)
    fail(ErrorCode::InvalidSpec, "fourier_coefficients needs m a power of two with m >= 4*degree+16");
  FourierTable t;
  t.m = m;
  cvec nodes = circle_nodes(0.0, 1.0, m);
  cvec vals(m);
  for (int j = 0; j < m; ++j) vals[j] = eval_phi(s, nodes[j]);
  t.c = CircleSeries::from_samples(0.0, 1.0, vals);
  double cmax = 0.0;
  for (int k = -m / 2 + 1; k < m / 2; ++k) cmax = std::max(cmax, std::abs(t.c.coeff(k)));
  if (std::max(std::abs(t.c.coeff(m / 2 - 1)), std::abs(t.c.coeff(-m / 2 + 1))) > 1e-13 * cmax)
    fail(ErrorCode::AliasingSuspected, "edge Fourier coefficients above 1e-13 of max");
  if (s.kind == SymbolKind::laurent_phase) {
    t.nu = CircleSeries::from_coefficients(0.0, 1.0, m, s.log_coeffs);
  } else {
    cvec lg = eval_log_phi_grid(s, nodes);
    double incr = (lg.back().imag() - lg.front().imag());
    int wind = int(std::lround(incr / (2.0 * pi)));
    for (int j = 0; j < m; ++j) lg[j] -= double(wind) * (log_hat(nodes[j]) + cplx(0.0, pi));
    t.nu = CircleSeries::from_samples(0.0, 1.0, lg);
  }
  return t;
}

// phi -> -phi/q, the winding shift by +1 applied to nu
inline SymbolSpec shift_winding(const SymbolSpec& s) {
  SymbolSpec r = s;
  r.numer = poly_scale(s.numer, -1.0);
  r.denom = poly_mul(s.denom, Poly{0.0, 1.0});
  r.kind = s.has_log_part() ? SymbolKind::product : SymbolKind::rational;
  return r;
}

}  // namespace detlab
