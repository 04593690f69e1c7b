#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

namespace detlab {

using cplx = std::complex<double>;
using cvec = std::vector<cplx>;

inline constexpr double pi = std::numbers::pi;
inline constexpr cplx two_pi_i{0.0, 2.0 * std::numbers::pi};

// q^n for integer n by repeated squaring
inline cplx ipow(cplx q, int n) {
  if (n < 0) return 1.0 / ipow(q, -n);
  cplx r = 1.0, b = q;
  while (n) {
    if (n & 1) r *= b;
    b *= b;
    n >>= 1;
  }
  return r;
}

// ln q with arg in [-pi, pi)
inline cplx log_hat(cplx q) {
  double a = std::arg(q);
  if (a >= pi) a -= 2.0 * pi;
  return {std::log(std::abs(q)), a};
}

// q^a on the same branch as log_hat
inline cplx power_hat(cplx q, double a) { return std::exp(a * log_hat(q)); }

inline double max_abs(const cvec& v) {
  double m = 0.0;
  for (auto& z : v) m = std::max(m, std::abs(z));
  return m;
}

}  // namespace detlab

namespace detlab {

// value and first derivative of a function at a point
struct Jet {
  cplx value = 0.0;
  cplx deriv = 0.0;
};

}  // namespace detlab
