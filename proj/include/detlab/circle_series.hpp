#pragma once

#include <map>
#include <unsupported/Eigen/FFT>

#include "errors.hpp"
#include "types.hpp"

namespace detlab {

// m counterclockwise trapezoidal nodes c + r e^{i a}, a = -pi + 2 pi j/m
inline cvec circle_nodes(cplx c, double r, int m) {
  cvec q(m);
  for (int j = 0; j < m; ++j) q[j] = c + std::polar(r, -pi + 2.0 * pi * j / m);
  return q;
}

// Truncated Laurent expansion f(c + r e^{ia}) = sum_n a_n e^{ina} on one circle.
// inner() and outer() are the two Cauchy transforms:
//   inner(q) = sum_{n>=0} a_n z^n,  outer(q) = -sum_{n<0} a_n z^n,  z = (q-c)/r,
// so inner - outer = f on the circle.
class CircleSeries {
 public:
  CircleSeries() = default;

  static CircleSeries from_samples(cplx c, double r, const cvec& f) {
    int m = int(f.size());
    Eigen::FFT<double> fft;
    std::vector<cplx> out;
    fft.fwd(out, f);
    CircleSeries s;
    s.c_ = c;
    s.r_ = r;
    s.half_ = m / 2 - 1;
    s.a_.assign(2 * s.half_ + 1, 0.0);
    for (int n = -s.half_; n <= s.half_; ++n) {
      double sign = (n % 2 == 0) ? 1.0 : -1.0;
      s.a_[n + s.half_] = sign * out[((n % m) + m) % m] / double(m);
    }
    return s;
  }

  static CircleSeries from_coefficients(cplx c, double r, int m, const std::map<int, cplx>& coeffs) {
    CircleSeries s;
    s.c_ = c;
    s.r_ = r;
    s.half_ = m / 2 - 1;
    s.a_.assign(2 * s.half_ + 1, 0.0);
    for (auto& [n, v] : coeffs) {
      if (std::abs(n) > s.half_) fail(ErrorCode::TruncationFailure, "coefficient index beyond series length");
      s.a_[n + s.half_] = v * std::pow(r, n);
    }
    return s;
  }

  // Sample f on nodes (vector in, vector out) with doubling until the edge
  // coefficients fall below tol * max.
  template <class Sampler>
  static CircleSeries fit(cplx c, double r, Sampler&& sampler, double tol = 1e-13, int m0 = 256,
                          int m_max = 2048) {
    for (int m = m0;; m *= 2) {
      CircleSeries s = from_samples(c, r, sampler(circle_nodes(c, r, m)));
      // relative to max(|a|, 1): tiny functions only need absolute accuracy
      if (s.tail_ratio() * std::min(s.max_coeff(), 1.0) < tol) return s;
      if (m >= m_max) fail(ErrorCode::TruncationFailure, "Laurent tail above tolerance at the size cap");
    }
  }

  cplx center() const { return c_; }
  double radius() const { return r_; }
  int half() const { return half_; }

  cplx coeff(int n) const { return std::abs(n) > half_ ? cplx(0.0) : a_[n + half_]; }

  double max_coeff() const {
    double mx = 0.0;
    for (auto& v : a_) mx = std::max(mx, std::abs(v));
    return mx;
  }

  double tail_ratio() const {
    double mx = 0.0;
    for (auto& v : a_) mx = std::max(mx, std::abs(v));
    if (mx == 0.0) return 0.0;
    double edge = 0.0;
    for (int k = 0; k < 2; ++k) edge = std::max({edge, std::abs(coeff(half_ - k)), std::abs(coeff(-half_ + k))});
    return edge / mx;
  }

  cplx inner(cplx q) const {
    cplx z = (q - c_) / r_, s = 0.0;
    for (int n = half_; n >= 0; --n) s = s * z + coeff(n);
    return s;
  }

  cplx outer(cplx q) const {
    cplx w = r_ / (q - c_), s = 0.0;
    for (int n = half_; n >= 1; --n) s = (s + coeff(-n)) * w;
    return -s;
  }

  cplx d_inner(cplx q) const {
    cplx z = (q - c_) / r_, s = 0.0;
    for (int n = half_; n >= 1; --n) s = s * z + double(n) * coeff(n);
    return s / r_;
  }

  cplx d_outer(cplx q) const {
    // d/dq of -sum_{n>=1} a_{-n} w^n with w = r/(q-c), dw/dq = -w^2/r
    cplx w = r_ / (q - c_), s = 0.0;
    for (int n = half_; n >= 1; --n) s = s * w + double(n) * coeff(-n);
    return s * w * w / r_;
  }

  cplx value(cplx q) const { return inner(q) - outer(q); }
  cplx d_value(cplx q) const { return d_inner(q) - d_outer(q); }

  // sum_{j>=1} j a_j a_{-j} (scale-invariant on origin-centered circles)
  cplx cross_sum() const {
    cplx s = 0.0;
    for (int j = half_; j >= 1; --j) s += double(j) * coeff(j) * coeff(-j);
    return s;
  }

 private:
  cplx c_ = 0.0;
  double r_ = 1.0;
  int half_ = 0;
  cvec a_;
};

}  // namespace detlab
