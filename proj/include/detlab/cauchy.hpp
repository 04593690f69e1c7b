#pragma once

#include <optional>

#include "contour.hpp"

namespace detlab {

enum class Side { inside, outside };

// Cauchy transforms attached to one symbol, contour and x.
// On a single origin-centered circle everything goes through Laurent series of
// 2 pi i nu; multi-circle contours support only residue forms (rational symbols).
class CauchySuite {
 public:
  CauchySuite(SymbolSpec spec, Contour contour, int x, int winding_shift = 0)
      : spec_(std::move(spec)), contour_(std::move(contour)), x_(x), shift_(winding_shift) {
    if (spec_.kind != SymbolKind::laurent_phase) {
      for (auto& z : poly_roots(spec_.numer)) (contour_.encloses(z) ? in_ : out_).push_back(z);
    }
    if (!contour_.single_circle()) return;
    const Circle& c = contour_.outer();
    if (c.center != 0.0) fail(ErrorCode::GeometryConflict, "Laurent transforms need an origin-centered circle");
    rho_ = c.radius;
    // k^x (1 - 1/phi): its outer transform continues w_C
    w_series_ = CircleSeries::fit(0.0, rho_, [&](const cvec& nodes) {
      cvec v(nodes.size());
      for (std::size_t j = 0; j < nodes.size(); ++j) v[j] = ipow(nodes[j], x_) * (1.0 - 1.0 / eval_phi(spec_, nodes[j]));
      return v;
    });
    // k^{-x}(1 - 1/phi) from inside: w~ of the positive-winding kernel
    w_tilde_series_ = CircleSeries::fit(0.0, rho_, [&](const cvec& nodes) {
      cvec v(nodes.size());
      for (std::size_t j = 0; j < nodes.size(); ++j) v[j] = ipow(nodes[j], -x_) * (1.0 - 1.0 / eval_phi(spec_, nodes[j]));
      return v;
    });
    if (spec_.kind == SymbolKind::laurent_phase && shift_ == 0) {
      phase_ = CircleSeries::from_coefficients(0.0, rho_, 256, spec_.log_coeffs);
    } else {
      try {
        phase_ = CircleSeries::fit(0.0, rho_, [&](const cvec& nodes) { return phase_samples(nodes); });
      } catch (const Error& e) {
        if (e.code() != ErrorCode::WindingNonzero) throw;
        return;  // only residue/w-type quantities are available
      }
    }
    // k^{-x}(1 - 1/phi) e^{-2 Omega_<}: its Cauchy transform gives b
    b_series_ = CircleSeries::fit(0.0, rho_, [&](const cvec& nodes) {
      cvec v(nodes.size());
      for (std::size_t j = 0; j < nodes.size(); ++j) {
        cplx k = nodes[j];
        v[j] = ipow(k, -x_) * (1.0 - 1.0 / eval_phi(spec_, k)) * std::exp(-2.0 * phase_->outer(k));
      }
      return v;
    });
  }

  const SymbolSpec& spec() const { return spec_; }
  const Contour& contour() const { return contour_; }
  int x() const { return x_; }
  int winding_shift() const { return shift_; }
  double radius() const { return rho_; }
  bool has_series() const { return phase_.has_value(); }
  const CircleSeries& phase() const {
    need_series();
    return *phase_;
  }
  const cvec& zeros_inside() const { return in_; }
  const cvec& zeros_outside() const { return out_; }

  // 2 pi i nu (minus shift*(ln q + i pi)) on nodes of this circle
  cvec phase_samples(const cvec& nodes) const {
    cvec lg = eval_log_phi_grid(spec_, nodes);
    for (std::size_t j = 0; j < nodes.size(); ++j) lg[j] -= double(shift_) * (log_hat(nodes[j]) + cplx(0.0, pi));
    double incr = 0.0;
    std::size_t m = nodes.size();
    incr = lg[m - 1].imag() - lg[0].imag();
    double step = lg[1].imag() - lg[0].imag();
    if (std::abs(incr + step) > pi) fail(ErrorCode::WindingNonzero, "nu has nonzero winding on the contour");
    return lg;
  }

  cplx omega_inside(cplx q) const {
    need_series();
    if (std::abs(q) > rho_ * (1.0 + 1e-8)) fail(ErrorCode::OutsideDomain, "omega_inside evaluated outside D");
    return phase_->inner(q);
  }
  cplx omega_outside(cplx q) const {
    need_series();
    if (std::abs(q) < rho_ * (1.0 - 1e-8)) fail(ErrorCode::OutsideDomain, "omega_outside evaluated inside D");
    return phase_->outer(q);
  }
  cplx d_omega_inside(cplx q) const {
    need_series();
    return phase_->d_inner(q);
  }
  cplx d_omega_outside(cplx q) const {
    need_series();
    return phase_->d_outer(q);
  }

  // max |Omega_> - Omega_< - 2 pi i nu| over the contour nodes
  double jump_residual() const {
    need_series();
    cvec nodes = circle_nodes(0.0, rho_, contour_.m);
    cvec lg = phase_samples(nodes);
    double r = 0.0;
    for (std::size_t j = 0; j < nodes.size(); ++j)
      r = std::max(r, std::abs(phase_->inner(nodes[j]) - phase_->outer(nodes[j]) - lg[j]));
    return r;
  }

  // \oint_C dk/(2 pi i) k^x theta/((k - q)(1 + theta)) by trapezoidal quadrature
  cplx varphi_C(cplx q, int m = 0) const {
    Contour c = m > 0 ? contour_.with_m(m) : contour_;
    for (auto& ci : c.components) {
      double h = 2.0 * pi * ci.radius / c.m;
      if (std::abs(std::abs(q - ci.center) - ci.radius) < h) fail(ErrorCode::TooCloseToContour, "q within one node spacing of the contour");
    }
    Quadrature qd = quadrature(c);
    cplx s = 0.0;
    for (std::size_t j = 0; j < qd.nodes.size(); ++j) {
      cplx k = qd.nodes[j];
      s += qd.weights[j] * ipow(k, x_) * (1.0 - 1.0 / eval_phi(spec_, k)) / (k - q);
    }
    return s / two_pi_i;
  }

  // same object from residues at the zeros in D (rational symbols), any q off C
  cplx varphi_C_residue(cplx q) const {
    need_residue();
    cplx s = 0.0;
    for (auto& z : in_) s -= ipow(z, x_) / (eval_dphi(spec_, z) * (z - q));
    if (contour_.encloses(q)) s += ipow(q, x_) * (1.0 - 1.0 / eval_phi(spec_, q));
    return s;
  }

  // w_C(q) = q^x + (continuation from outside of varphi_C)
  Jet w_C(cplx q) const {
    Jet j{ipow(q, x_), x_ == 0 ? cplx(0.0) : double(x_) * ipow(q, x_ - 1)};
    if (spec_.pure_rational()) {
      for (auto& z : in_) {
        cplx c = ipow(z, x_) / eval_dphi(spec_, z);
        j.value -= c / (z - q);
        j.deriv -= c / ((z - q) * (z - q));
      }
      return j;
    }
    if (!w_series_) fail(ErrorCode::NoResidueForm, "w_C needs residues or a single circle");
    j.value += w_series_->outer(q);
    j.deriv += w_series_->d_outer(q);
    return j;
  }

  // b_> inside D (and its continuation onto C)
  Jet b_plus(cplx q) const {
    if (spec_.pure_rational() && has_series()) {
      Jet j;
      for (auto& w : out_) {
        cplx c = ipow(w, -x_) * std::exp(-2.0 * omega_outside(w)) / eval_dphi(spec_, w);
        j.value -= c / (w - q);
        j.deriv -= c / ((w - q) * (w - q));
      }
      return j;
    }
    return b_plus_quadrature(q);
  }

  // Cauchy-transform route for b_>, valid for every symbol kind
  Jet b_plus_quadrature(cplx q) const {
    need_series();
    return {-b_series_->inner(q), -b_series_->d_inner(q)};
  }

  // same transform built from k^{-x} theta e^{-Omega_> - Omega_<}
  cplx b_plus_symmetric(cplx q, int m = 512) const {
    need_series();
    CircleSeries g = CircleSeries::from_samples(0.0, rho_, [&] {
      cvec nodes = circle_nodes(0.0, rho_, m), v(m);
      for (int j = 0; j < m; ++j) {
        cplx k = nodes[j];
        v[j] = ipow(k, -x_) * eval_theta(spec_, k) * std::exp(-phase_->inner(k) - phase_->outer(k));
      }
      return v;
    }());
    return -g.inner(q);
  }

  // b_< outside D
  Jet b_minus(cplx q) const {
    need_series();
    return {-b_series_->outer(q), -b_series_->d_outer(q)};
  }

  bool has_residue_form() const { return spec_.pure_rational(); }

  // k^{-x} minus the inside boundary value of the transform of k^{-x} theta/(1+theta)
  Jet w_tilde(cplx q) const {
    if (!w_tilde_series_) fail(ErrorCode::NotAvailable, "w~ needs a single origin-centered circle");
    return {ipow(q, -x_) - w_tilde_series_->inner(q),
            -double(x_) * ipow(q, -x_ - 1) - w_tilde_series_->d_inner(q)};
  }

 private:
  void need_series() const {
    if (phase_) return;
    if (w_series_) fail(ErrorCode::WindingNonzero, "nu has nonzero winding on the contour");
    fail(ErrorCode::NotAvailable, "Laurent transforms need a single origin-centered circle");
  }
  void need_residue() const {
    if (!spec_.pure_rational()) fail(ErrorCode::NoResidueForm, "residue form needs a rational symbol");
  }

  SymbolSpec spec_;
  Contour contour_;
  int x_ = 0;
  int shift_ = 0;
  double rho_ = 0.0;
  cvec in_, out_;
  std::optional<CircleSeries> phase_, b_series_, w_series_, w_tilde_series_;
};

// omega_> / omega_< on the unit circle, built from nu_n (winding removed)
inline CauchySuite unit_circle_suite(const SymbolSpec& spec, int x = 0) {
  return CauchySuite(spec, unit_circle(256), x, winding_number(spec));
}

inline cplx small_omega(const CauchySuite& unit_suite, cplx q, Side side) {
  return side == Side::inside ? unit_suite.omega_inside(q) : unit_suite.omega_outside(q);
}

inline cplx small_omega(const SymbolSpec& spec, cplx q, Side side) {
  return small_omega(unit_circle_suite(spec), q, side);
}

}  // namespace detlab
