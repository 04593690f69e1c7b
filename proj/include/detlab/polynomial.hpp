#pragma once

#include <Eigen/Dense>
#include <algorithm>

#include "errors.hpp"
#include "types.hpp"

namespace detlab {

// coefficients in ascending powers
using Poly = cvec;

inline cplx poly_eval(const Poly& p, cplx q) {
  cplx r = 0.0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) r = r * q + *it;
  return r;
}

inline Poly poly_derivative(const Poly& p) {
  if (p.size() <= 1) return Poly{0.0};
  Poly d(p.size() - 1);
  for (std::size_t k = 1; k < p.size(); ++k) d[k - 1] = double(k) * p[k];
  return d;
}

inline Poly poly_mul(const Poly& a, const Poly& b) {
  Poly r(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return r;
}

inline Poly poly_scale(Poly p, cplx s) {
  for (auto& c : p) c *= s;
  return p;
}

inline Poly poly_trim(Poly p) {
  while (p.size() > 1 && p.back() == 0.0) p.pop_back();
  return p;
}

inline int poly_degree(const Poly& p) { return int(poly_trim(p).size()) - 1; }

// sum |a_k| |q|^k, the natural scale for residual tests
inline double poly_scale_at(const Poly& p, cplx q) {
  double s = 0.0, r = std::abs(q), t = 1.0;
  for (auto& c : p) {
    s += std::abs(c) * t;
    t *= r;
  }
  return s;
}

// Companion eigenvalues polished by Newton. Exact zero roots are split off first.
inline cvec poly_roots(const Poly& p_in) {
  Poly p = poly_trim(p_in);
  int deg = int(p.size()) - 1;
  cvec roots;
  if (deg <= 0) return roots;
  std::size_t low = 0;
  while (low < p.size() && p[low] == 0.0) ++low;
  for (std::size_t k = 0; k < low; ++k) roots.push_back(0.0);
  Poly r(p.begin() + low, p.end());
  int n = int(r.size()) - 1;
  if (n <= 0) return roots;
  Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 1; i < n; ++i) C(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) C(i, n - 1) = -r[i] / r[n];
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(C, false);
  Poly dr = poly_derivative(r);
  const bool real_coeffs = std::all_of(r.begin(), r.end(), [](cplx c) { return c.imag() == 0.0; });
  for (int i = 0; i < n; ++i) {
    cplx z = es.eigenvalues()(i);
    cplx z0 = z;
    for (int it = 0; it < 50; ++it) {
      cplx f = poly_eval(r, z), df = poly_eval(dr, z);
      if (df == 0.0) break;
      cplx dz = f / df;
      z -= dz;
      if (std::abs(dz) <= 1e-16 * std::max(1.0, std::abs(z))) break;
    }
    // real polynomials: rounding-level imaginary parts are dropped
    if (real_coeffs && std::abs(z.imag()) < 1e-12 * std::max(1.0, std::abs(z))) {
      z = z.real();
      cplx df = poly_eval(dr, z);
      if (df != 0.0) z -= (poly_eval(r, z) / df).real();
    }
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()) ||
        std::abs(z - z0) > 1e-3 * std::max(1.0, std::abs(z0)))
      fail(ErrorCode::RootFindFailure, "Newton polish diverged from companion eigenvalue");
    if (std::abs(poly_eval(r, z)) > 1e-12 * poly_scale_at(r, z))
      fail(ErrorCode::RootFindFailure, "polished root residual above 1e-12");
    roots.push_back(z);
  }
  return roots;
}

inline Poly poly_from_roots(const cvec& roots, cplx lead = 1.0) {
  Poly p{lead};
  for (auto& z : roots) p = poly_mul(p, Poly{-z, 1.0});
  return p;
}

}  // namespace detlab
