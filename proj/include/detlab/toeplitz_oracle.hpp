#pragma once

#include <Eigen/Dense>

#include "symbol.hpp"

namespace detlab {

// x-by-x matrix of Fourier moments c_{n-m}
struct ToeplitzMatrix {
  int order = 0;
  Eigen::MatrixXcd entries;
};

inline int toeplitz_sampling(const SymbolSpec& s, int x) {
  int deg = std::max({poly_degree(s.numer), poly_degree(s.denom), s.max_log_power()});
  int m = 256;
  while (m < 8 * x || m < 4 * deg + 16) m *= 2;
  return m;
}

inline ToeplitzMatrix toeplitz_matrix(const SymbolSpec& s, int x) {
  if (x < 0) fail(ErrorCode::InvalidSpec, "Toeplitz order must be nonnegative");
  int m = toeplitz_sampling(s, x);
  FourierTable t = fourier_coefficients(s, m);
  FourierTable t2 = fourier_coefficients(s, 2 * m);
  for (int k = -x; k <= x; ++k)
    if (std::abs(t.c_at(k) - t2.c_at(k)) > 1e-12 * std::max(1.0, std::abs(t2.c_at(k))))
      fail(ErrorCode::AliasingSuspected, "moments not reproduced at doubled sampling");
  ToeplitzMatrix tm;
  tm.order = x;
  tm.entries.resize(x, x);
  for (int n = 0; n < x; ++n)
    for (int k = 0; k < x; ++k) tm.entries(n, k) = t.c_at(n - k);
  return tm;
}

inline cplx toeplitz_det(const SymbolSpec& s, int x) {
  if (x == 0) return 1.0;
  ToeplitzMatrix tm = toeplitz_matrix(s, x);
  return Eigen::PartialPivLU<Eigen::MatrixXcd>(tm.entries).determinant();
}

}  // namespace detlab
