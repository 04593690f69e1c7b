#pragma once

#include <Eigen/Dense>
#include <functional>

#include "asymptotics.hpp"

namespace detlab {

// mu(q) = e^{-omega_> - omega_<} q^{-x+n} on the unit circle (n the negative winding),
// optionally multiplied by a perturbation factor.
class MeasureMu {
 public:
  MeasureMu(const SymbolSpec& spec, int x, int m = 512, std::function<cplx(cplx)> factor = {})
      : x_(x), m_(m) {
    n_ = negative_winding(spec);
    CauchySuite unit(spec, unit_circle(256), x, -n_);
    nodes_ = circle_nodes(0.0, 1.0, m);
    cvec lg = unit.phase_samples(nodes_);
    values_.resize(m);
    for (int j = 0; j < m; ++j) {
      cplx k = nodes_[j];
      values_[j] = std::exp(-lg[j] - 2.0 * unit.omega_outside(k)) * ipow(k, -x - n_);
      if (factor) values_[j] *= factor(k);
    }
    const int jmax = 4 * n_ + x + 8;
    for (int j = -jmax; j <= jmax; ++j) moments_.push_back(quad_moment(j));
    jmax_ = jmax;
  }

  int n() const { return n_; }
  int x() const { return x_; }
  int m() const { return m_; }
  const cvec& nodes() const { return nodes_; }
  const cvec& values() const { return values_; }

  // \oint k^j mu(k) dk
  cplx moment(int j) const {
    if (std::abs(j) > jmax_) return quad_moment(j);
    return moments_[j + jmax_];
  }

  // Cauchy-transform series of f(k) mu(k) on the unit circle
  CircleSeries transform(const std::function<cplx(cplx)>& f) const {
    cvec v(m_);
    for (int j = 0; j < m_; ++j) v[j] = f(nodes_[j]) * values_[j];
    return CircleSeries::from_samples(0.0, 1.0, v);
  }

 private:
  cplx quad_moment(int j) const {
    cplx s = 0.0;
    for (int i = 0; i < m_; ++i) s += ipow(nodes_[i], j + 1) * values_[i];
    return s * two_pi_i / double(m_);
  }

  int x_, m_, n_ = 0, jmax_ = 0;
  cvec nodes_, values_, moments_;
};

inline cplx moments(const MeasureMu& mu, int j) { return mu.moment(j); }

inline Eigen::MatrixXcd gram_matrix(const MeasureMu& mu, int k) {
  Eigen::MatrixXcd G(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) G(i, j) = mu.moment(i + j);
  return G;
}

struct OrthoPoly {
  Poly coeffs;  // monic, ascending
  cplx h;       // \oint p_k p_k mu dq
  double orthogonality_residual = 0.0;
  double h_scale = 0.0;
  bool h_vanishes() const { return std::abs(h) < 1e-12 * h_scale; }
};

inline OrthoPoly nondegenerate(OrthoPoly p) {
  if (p.h_vanishes()) fail(ErrorCode::SingularGram, "vanishing norm h_k");
  return p;
}

inline OrthoPoly monic_orthogonal(const MeasureMu& mu, int k) {
  OrthoPoly p;
  p.coeffs.assign(k + 1, 0.0);
  p.coeffs[k] = 1.0;
  if (k > 0) {
    Eigen::MatrixXcd G = gram_matrix(mu, k);
    double scale = 1.0;
    for (int i = 0; i < k; ++i) scale *= G.row(i).norm();
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(G);
    if (std::abs(lu.determinant()) < 1e-12 * scale) fail(ErrorCode::SingularGram, "Gram determinant below threshold");
    Eigen::VectorXcd rhs(k);
    for (int j = 0; j < k; ++j) rhs(j) = -mu.moment(k + j);
    Eigen::VectorXcd c = lu.solve(rhs);
    for (int l = 0; l < k; ++l) p.coeffs[l] = c(l);
  }
  for (int j = 0; j < k; ++j) {
    cplx s = 0.0;
    double sc = 0.0;
    for (int l = 0; l <= k; ++l) {
      s += p.coeffs[l] * mu.moment(l + j);
      sc += std::abs(p.coeffs[l] * mu.moment(l + j));
    }
    p.orthogonality_residual = std::max(p.orthogonality_residual, std::abs(s) / sc);
  }
  p.h = 0.0;
  for (int l = 0; l <= k; ++l) p.h += p.coeffs[l] * mu.moment(l + k);
  for (int l = 0; l <= k; ++l) p.h_scale += std::abs(p.coeffs[l] * mu.moment(l + k));
  return p;
}

// Y = [[alpha, A], [beta, B]], alpha = p_n, beta = -2 pi i p_{n-1}/h_{n-1}
class RhpSolution {
 public:
  explicit RhpSolution(const MeasureMu& mu) : mu_(mu) {
    pn_ = monic_orthogonal(mu, mu.n());
    pm_ = nondegenerate(monic_orthogonal(mu, mu.n() - 1));
    Poly a = pn_.coeffs, b = poly_scale(pm_.coeffs, -two_pi_i / pm_.h);
    alpha_ = a;
    beta_ = b;
    A_ = mu.transform([a](cplx k) { return poly_eval(a, k); });
    B_ = mu.transform([b](cplx k) { return poly_eval(b, k); });
  }

  const OrthoPoly& p_n() const { return pn_; }
  const OrthoPoly& p_n_minus_1() const { return pm_; }
  const Poly& alpha() const { return alpha_; }
  const Poly& beta() const { return beta_; }

  // off the circle
  Eigen::Matrix2cd operator()(cplx q) const {
    if (std::abs(std::abs(q) - 1.0) < 1e-8) fail(ErrorCode::OutsideDomain, "rhp_Y evaluated on the unit circle");
    return boundary(q, std::abs(q) < 1.0 ? Side::inside : Side::outside);
  }

  // boundary value from one side (also valid off the circle on that side)
  Eigen::Matrix2cd boundary(cplx q, Side side) const {
    Eigen::Matrix2cd Y;
    Y(0, 0) = poly_eval(alpha_, q);
    Y(1, 0) = poly_eval(beta_, q);
    Y(0, 1) = side == Side::inside ? A_.inner(q) : A_.outer(q);
    Y(1, 1) = side == Side::inside ? B_.inner(q) : B_.outer(q);
    return Y;
  }

  // max over probes on the circle of |Y_>^{-1} Y_< - [[1, -mu], [0, 1]]|
  double jump_residual(const cvec& probes) const {
    double r = 0.0;
    for (auto& q : probes) {
      Eigen::Matrix2cd J;
      J << 1.0, -mu_at(q), 0.0, 1.0;
      Eigen::Matrix2cd E = boundary(q, Side::inside).inverse() * boundary(q, Side::outside) - J;
      r = std::max(r, E.cwiseAbs().maxCoeff());
    }
    return r;
  }

  // Y diag(q^{-n}, q^{n}) - I at large q, read off the Laurent coefficients at infinity
  double normalization_residual() const {
    const int n = mu_.n();
    double scale = 0.0, r = 0.0;
    for (int k = 1; k <= A_.half(); ++k) scale = std::max({scale, std::abs(A_.coeff(-k)), std::abs(B_.coeff(-k))});
    for (int k = 1; k <= n; ++k) r = std::max(r, std::abs(A_.coeff(-k)));
    for (int k = 1; k < n; ++k) r = std::max(r, std::abs(B_.coeff(-k)));
    r = std::max(r, std::abs(-B_.coeff(-n) - 1.0));
    return r / std::max(scale, 1.0);
  }

  Eigen::Matrix2cd normalized(cplx q) const {
    Eigen::Matrix2cd Y = (*this)(q);
    const int n = mu_.n();
    Y.col(0) *= ipow(q, -n);
    Y.col(1) *= ipow(q, n);
    return Y;
  }

  // mu on the circle by trigonometric interpolation of the samples
  cplx mu_at(cplx q) const {
    if (!mu_series_) mu_series_ = mu_.transform([](cplx) { return cplx(1.0); });
    return mu_series_->value(q);
  }

 private:
  MeasureMu mu_;
  OrthoPoly pn_, pm_;
  Poly alpha_, beta_;
  CircleSeries A_, B_;
  mutable std::optional<CircleSeries> mu_series_;
};

inline Eigen::Matrix2cd rhp_Y(const MeasureMu& mu, cplx q) { return RhpSolution(mu)(q); }

struct CDValue {
  cplx sum;     // sum_{j<n} p_j(q) p_j(k)/h_j
  cplx closed;  // (p_n(k) p_{n-1}(q) - p_n(q) p_{n-1}(k)) / (h_{n-1}(k-q)), diagonal limit at q = k
};

inline CDValue christoffel_darboux(const MeasureMu& mu, cplx q, cplx k) {
  const int n = mu.n();
  CDValue v;
  v.sum = 0.0;
  for (int j = 0; j < n; ++j) {
    OrthoPoly p = nondegenerate(monic_orthogonal(mu, j));
    v.sum += poly_eval(p.coeffs, q) * poly_eval(p.coeffs, k) / p.h;
  }
  OrthoPoly pn = monic_orthogonal(mu, n), pm = nondegenerate(monic_orthogonal(mu, n - 1));
  if (std::abs(q - k) < 1e-12 * std::max(1.0, std::abs(q))) {
    // (alpha beta' - alpha' beta)/(2 pi i)
    Poly beta = poly_scale(pm.coeffs, -two_pi_i / pm.h);
    cplx a = poly_eval(pn.coeffs, q), da = poly_eval(poly_derivative(pn.coeffs), q);
    cplx b = poly_eval(beta, q), db = poly_eval(poly_derivative(beta), q);
    v.closed = (a * db - da * b) / two_pi_i;
  } else {
    v.closed = (poly_eval(pn.coeffs, k) * poly_eval(pm.coeffs, q) - poly_eval(pn.coeffs, q) * poly_eval(pm.coeffs, k)) /
               (pm.h * (k - q));
  }
  return v;
}

struct MomentEquivalence {
  cplx y_det;   // det y_n(x+i-j)
  cplx mu_det;  // det mu_{n-1+i-j} / (2 pi i)^n
  double residual = 0.0;
};

inline MomentEquivalence hf_moment_equivalence(const SymbolSpec& spec, int x) {
  MeasureMu mu(spec, x);
  const int n = mu.n();
  CauchySuite unit(spec, unit_circle(256), x, -n);
  Eigen::MatrixXcd Y(n, n), M(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Y(i, j) = hf_y(unit, x + i - j);
      M(i, j) = mu.moment(n - 1 + i - j) / two_pi_i;
    }
  MomentEquivalence r;
  r.y_det = determinant(Y);
  r.mu_det = determinant(M);
  r.residual = std::abs(r.y_det - r.mu_det) / std::max(std::abs(r.y_det), 1e-300);
  return r;
}

struct GramVariation {
  cplx finite_difference;
  cplx formula;
};

// d/d eps ln det(mu_{i+j}) under mu -> mu (1 + eps k) vs \oint k mu(k) K_{n-1}(k,k) dk
inline GramVariation gram_log_det_variation(const SymbolSpec& spec, int x, double eps = 1e-6) {
  auto logdet = [&](double e) {
    MeasureMu mu(spec, x, 512, [e](cplx k) { return 1.0 + e * k; });
    return std::log(determinant(gram_matrix(mu, mu.n())));
  };
  GramVariation v;
  v.finite_difference = (logdet(eps) - logdet(-eps)) / (2.0 * eps);
  MeasureMu mu(spec, x);
  std::vector<OrthoPoly> ps;
  for (int j = 0; j < mu.n(); ++j) ps.push_back(nondegenerate(monic_orthogonal(mu, j)));
  cplx s = 0.0;
  for (int i = 0; i < mu.m(); ++i) {
    cplx k = mu.nodes()[i], kk = 0.0;
    for (auto& p : ps) kk += poly_eval(p.coeffs, k) * poly_eval(p.coeffs, k) / p.h;
    s += k * mu.values()[i] * kk * two_pi_i * k / double(mu.m());
  }
  v.formula = s;
  return v;
}

}  // namespace detlab
