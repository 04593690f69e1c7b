#pragma once

#include <Eigen/Dense>
#include <functional>

#include "cauchy.hpp"

namespace detlab {

enum class KernelLabel { S, V, Delta, W_s, K, Q, V1, R, Generic };

inline const char* to_string(KernelLabel l) {
  switch (l) {
    case KernelLabel::S: return "S";
    case KernelLabel::V: return "V";
    case KernelLabel::Delta: return "Delta";
    case KernelLabel::W_s: return "W_s";
    case KernelLabel::K: return "K";
    case KernelLabel::Q: return "Q";
    case KernelLabel::V1: return "V1";
    case KernelLabel::R: return "R";
    case KernelLabel::Generic: return "generic";
  }
  return "generic";
}

using NodeFn = std::function<Jet(cplx)>;

// K(q,p) = sum_r u_r(q) v_r(p)/(p - q) + sum_s a_s(q) b_s(p),
// with sum_r u_r(q) v_r(q) = 0 so the diagonal is sum_r u_r(q) v_r'(q) + sum_s a_s b_s.
struct KernelOnContour {
  struct Term {
    NodeFn left, right;
  };
  KernelLabel label = KernelLabel::Generic;
  std::vector<Term> integrable;
  std::vector<Term> separable;

  cplx operator()(cplx q, cplx p) const {
    if (q == p) return diagonal(q);
    cplx s = 0.0;
    for (auto& t : integrable) s += t.left(q).value * t.right(p).value;
    s /= (p - q);
    for (auto& t : separable) s += t.left(q).value * t.right(p).value;
    return s;
  }

  cplx diagonal(cplx q) const {
    cplx s = 0.0;
    for (auto& t : integrable) s += t.left(q).value * t.right(q).deriv;
    for (auto& t : separable) s += t.left(q).value * t.right(q).value;
    return s;
  }

  Eigen::MatrixXcd on_nodes(const cvec& q) const {
    const Eigen::Index n = Eigen::Index(q.size());
    Eigen::MatrixXcd K = Eigen::MatrixXcd::Zero(n, n);
    auto eval = [&](const NodeFn& f) {
      std::vector<Jet> v(q.size());
      for (std::size_t i = 0; i < q.size(); ++i) v[i] = f(q[i]);
      return v;
    };
    for (auto& t : integrable) {
      auto L = eval(t.left), R = eval(t.right);
      for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
          K(i, j) += i == j ? L[i].value * R[i].deriv : L[i].value * R[j].value / (q[j] - q[i]);
    }
    for (auto& t : separable) {
      auto L = eval(t.left), R = eval(t.right);
      for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) K(i, j) += L[i].value * R[j].value;
    }
    return K;
  }

  KernelOnContour operator+(const KernelOnContour& o) const {
    KernelOnContour k = *this;
    k.label = KernelLabel::Generic;
    k.integrable.insert(k.integrable.end(), o.integrable.begin(), o.integrable.end());
    k.separable.insert(k.separable.end(), o.separable.begin(), o.separable.end());
    return k;
  }

  KernelOnContour operator-() const {
    KernelOnContour k = *this;
    auto flip = [](NodeFn f) {
      return NodeFn([f](cplx q) {
        Jet j = f(q);
        return Jet{-j.value, -j.deriv};
      });
    };
    for (auto& t : k.integrable) t.left = flip(t.left);
    for (auto& t : k.separable) t.left = flip(t.left);
    return k;
  }
  KernelOnContour operator-(const KernelOnContour& o) const { return *this + (-o); }
};

// sign per node for the square-root branch; default principal
using BranchFn = std::function<double(cplx)>;

// sqrt(theta(q)) q^{a}, principal square root, power on the log_hat branch
inline NodeFn sqrt_theta_times_power(const SymbolSpec& spec, double a, BranchFn branch = {}) {
  return [spec, a, branch](cplx q) -> Jet {
    cplx th = eval_theta(spec, q);
    if (th == 0.0) return {0.0, 0.0};
    cplx st = std::sqrt(th), pw = power_hat(q, a);
    double sg = branch ? branch(q) : 1.0;
    cplx d = eval_dphi(spec, q) / (2.0 * st) + a * st / q;
    return {sg * st * pw, sg * d * pw};
  };
}

// s(q) s(p) (f(p) - f(q)) / (2 pi i (p - q))
inline KernelOnContour integrable_kernel(NodeFn s, NodeFn f, KernelLabel label) {
  KernelOnContour k;
  k.label = label;
  k.integrable.push_back({[s](cplx q) { return Jet{s(q).value / two_pi_i, 0.0}; },
                          [s, f](cplx p) {
                            Jet a = s(p), b = f(p);
                            return Jet{a.value * b.value, a.deriv * b.value + a.value * b.deriv};
                          }});
  k.integrable.push_back({[s, f](cplx q) { return Jet{-s(q).value * f(q).value / two_pi_i, 0.0}; }, s});
  return k;
}

inline KernelOnContour zero_kernel(KernelLabel label) {
  KernelOnContour k;
  k.label = label;
  return k;
}

inline NodeFn power_jet(int x) {
  return [x](cplx q) { return Jet{ipow(q, x), x == 0 ? cplx(0.0) : double(x) * ipow(q, x - 1)}; };
}

// theta(q)/(2 pi i) ((p/q)^{x/2} - (q/p)^{x/2})/(p - q)
inline KernelOnContour kernel_S(const SymbolSpec& spec, int x) {
  if (spec.trivial()) return zero_kernel(KernelLabel::S);
  const double h = 0.5 * x;
  KernelOnContour k;
  k.label = KernelLabel::S;
  k.integrable.push_back({[spec, h](cplx q) { return Jet{eval_theta(spec, q) / (two_pi_i * power_hat(q, h)), 0.0}; },
                          [h](cplx p) {
                            cplx e = power_hat(p, h);
                            return Jet{e, h * e / p};
                          }});
  k.integrable.push_back({[spec, h](cplx q) { return Jet{-eval_theta(spec, q) * power_hat(q, h) / two_pi_i, 0.0}; },
                          [h](cplx p) {
                            cplx e = power_hat(p, -h);
                            return Jet{e, -h * e / p};
                          }});
  return k;
}

// S conjugated by sqrt(theta) q^{-x/2}: same determinant, symmetric integrable form
inline KernelOnContour kernel_S_conj(const SymbolSpec& spec, int x, BranchFn branch = {}) {
  if (spec.trivial()) return zero_kernel(KernelLabel::S);
  return integrable_kernel(sqrt_theta_times_power(spec, -0.5 * x, branch), power_jet(x), KernelLabel::S);
}

inline KernelOnContour kernel_V(const CauchySuite& suite, BranchFn branch = {}) {
  if (suite.spec().trivial()) return zero_kernel(KernelLabel::V);
  auto w = [suite](cplx q) { return suite.w_C(q); };
  return integrable_kernel(sqrt_theta_times_power(suite.spec(), -0.5 * suite.x(), branch), w, KernelLabel::V);
}

inline KernelOnContour kernel_V(const SymbolSpec& spec, const Contour& contour, int x, BranchFn branch = {}) {
  return kernel_V(CauchySuite(spec, contour, x), branch);
}

inline KernelOnContour kernel_Delta(const CauchySuite& suite) {
  if (suite.spec().trivial()) return zero_kernel(KernelLabel::Delta);
  int x = suite.x();
  auto f = [suite, x](cplx q) {
    Jet w = suite.w_C(q);
    w.value -= ipow(q, x);
    if (x > 0) w.deriv -= double(x) * ipow(q, x - 1);
    return w;
  };
  return integrable_kernel(sqrt_theta_times_power(suite.spec(), -0.5 * x), f, KernelLabel::Delta);
}

// rank-one residue kernel at a simple zero s0 of phi
inline KernelOnContour kernel_W(const SymbolSpec& spec, cplx s0, int x) {
  cplx d = eval_dphi(spec, s0);
  if (std::abs(eval_phi(spec, s0)) > 1e-9 * std::max(1.0, std::abs(d)) || std::abs(d) < 1e-10)
    fail(ErrorCode::NotASimpleZero, "s is not a simple zero of 1+theta");
  cplx c = ipow(s0, x) / d;
  NodeFn s = sqrt_theta_times_power(spec, -0.5 * x);
  KernelOnContour k;
  k.label = KernelLabel::W_s;
  k.separable.push_back({[s, s0, c](cplx q) { return Jet{s(q).value * c / (two_pi_i * (s0 - q)), 0.0}; },
                         [s, s0](cplx p) { return Jet{s(p).value / (s0 - p), 0.0}; }});
  return k;
}

// kernel whose determinant det(1 - K) equals the finite w-sum of Cauchy determinants
inline KernelOnContour kernel_K(const CauchySuite& suite) {
  KernelOnContour k;
  k.label = KernelLabel::K;
  int x = suite.x();
  const SymbolSpec& spec = suite.spec();
  for (auto& w : suite.zeros_outside()) {
    cplx c = ipow(w, -x) * std::exp(-2.0 * suite.omega_outside(w)) / eval_dphi(spec, w);
    k.separable.push_back({[suite, spec, w, c, x](cplx q) {
                             return Jet{ipow(q, x) * std::exp(suite.phase().inner(q)) * c /
                                            (two_pi_i * eval_phi(spec, q) * (w - q)),
                                        0.0};
                           },
                           [suite, w](cplx p) { return Jet{std::exp(suite.phase().inner(p)) / (w - p), 0.0}; }});
  }
  return k;
}

// positive-winding kernel on the unit circle
inline KernelOnContour kernel_Q(const SymbolSpec& spec, int x) {
  if (winding_number(spec) < 0) fail(ErrorCode::NotAvailable, "Q kernel needs winding >= 0");
  if (spec.trivial()) return zero_kernel(KernelLabel::Q);
  CauchySuite suite(spec, unit_circle(256), x);
  NodeFn t = sqrt_theta_times_power(spec, 0.5 * x);
  NodeFn wt = [suite](cplx q) { return suite.w_tilde(q); };
  // t(q) t(p) (w~(q) - w~(p)) / (2 pi i (p - q))
  KernelOnContour k = integrable_kernel(t, wt, KernelLabel::Q);
  for (auto& term : k.integrable) {
    auto left = term.left;
    term.left = [left](cplx q) { return Jet{-left(q).value, 0.0}; };
  }
  return k;
}

// rank-one correction; the sign makes det(1+V+V1) - det(1+V) = det(1+V_{nu_1})
inline KernelOnContour kernel_rank_one(const SymbolSpec& spec, int x) {
  if (spec.trivial()) return zero_kernel(KernelLabel::V1);
  NodeFn s = sqrt_theta_times_power(spec, -0.5 * x);
  KernelOnContour k;
  k.label = KernelLabel::V1;
  k.separable.push_back({[s](cplx q) { return Jet{-s(q).value / (two_pi_i * q), 0.0}; }, s});
  return k;
}

struct DetResult {
  cplx value = 1.0;
  double err_estimate = 0.0;
  int m_used = 0;
  std::string method;
  std::vector<cplx> history;  // det at m_start, 2 m_start, ...
};

inline Eigen::MatrixXcd nystrom_matrix(const KernelOnContour& k, const Quadrature& qd) {
  Eigen::MatrixXcd A = k.on_nodes(qd.nodes);
  for (Eigen::Index j = 0; j < A.cols(); ++j) A.col(j) *= qd.weights[std::size_t(j)];
  A += Eigen::MatrixXcd::Identity(A.rows(), A.cols());
  return A;
}

inline cplx determinant(const Eigen::MatrixXcd& A) {
  if (A.rows() == 0) return 1.0;
  return Eigen::PartialPivLU<Eigen::MatrixXcd>(A).determinant();
}

inline cplx nystrom_det_fixed(const KernelOnContour& k, const Contour& c) {
  return determinant(nystrom_matrix(k, quadrature(c)));
}

// m doubled from m_start until |det(m) - det(m/2)| < tol max(1, |det|)
inline DetResult nystrom_det(const KernelOnContour& k, const Contour& c, double tol = 1e-10, int m_start = 32,
                             int m_max = 1024) {
  DetResult r;
  r.method = std::string("nystrom:") + to_string(k.label);
  cplx prev = nystrom_det_fixed(k, c.with_m(m_start));
  r.history.push_back(prev);
  for (int m = 2 * m_start; m <= m_max; m *= 2) {
    cplx cur = nystrom_det_fixed(k, c.with_m(m));
    r.history.push_back(cur);
    r.value = cur;
    r.m_used = m;
    r.err_estimate = std::abs(cur - prev);
    if (r.err_estimate < tol * std::max(1.0, std::abs(cur))) return r;
    prev = cur;
  }
  fail(ErrorCode::NotConverged, "Nystrom determinant not converged at m = " + std::to_string(m_max));
}

struct Resolvent {
  Quadrature quad;
  cvec f_plus, f_minus;
  Eigen::MatrixXcd R;  // kernel values on nodes
  Eigen::MatrixXcd V;
  double residual = 0.0;  // max |(I + V W)(I - R W) - I|
};

// f_+ = e^{Omega_<} q^{x/2},  f_- = e^{-Omega_>} q^{-x/2} - b_> e^{Omega_<} q^{x/2}
inline Resolvent build_resolvent(const CauchySuite& suite, int m = 256, double check_tol = 1e-8) {
  const SymbolSpec& spec = suite.spec();
  const double h = 0.5 * suite.x();
  Resolvent res;
  res.quad = quadrature(suite.contour().with_m(m));
  NodeFn fp = [suite, h](cplx q) {
    cplx e = std::exp(suite.omega_outside(q)), p = power_hat(q, h);
    return Jet{e * p, e * (suite.d_omega_outside(q) * p + h * p / q)};
  };
  NodeFn fm = [suite, h](cplx q) {
    cplx ei = std::exp(-suite.omega_inside(q)), eo = std::exp(suite.omega_outside(q));
    cplx p = power_hat(q, h), dp = h * p / q;
    Jet b = suite.b_plus(q);
    cplx val = ei / p - b.value * eo * p;
    cplx der = ei * (-suite.d_omega_inside(q) / p - dp / (p * p)) -
               (b.deriv * eo * p + b.value * eo * (suite.d_omega_outside(q) * p + dp));
    return Jet{val, der};
  };
  NodeFn st = sqrt_theta_times_power(spec, 0.0);
  auto prod = [](NodeFn a, NodeFn b) {
    return NodeFn([a, b](cplx q) {
      Jet u = a(q), v = b(q);
      return Jet{u.value * v.value, u.deriv * v.value + u.value * v.deriv};
    });
  };
  for (auto& q : res.quad.nodes) {
    res.f_plus.push_back(fp(q).value);
    res.f_minus.push_back(fm(q).value);
  }
  KernelOnContour rk;
  rk.label = KernelLabel::R;
  if (!spec.trivial()) {
    NodeFn a = prod(st, fm), b = prod(st, fp);
    rk.integrable.push_back({[a](cplx q) { return Jet{a(q).value / two_pi_i, 0.0}; }, b});
    rk.integrable.push_back({[b](cplx q) { return Jet{-b(q).value / two_pi_i, 0.0}; }, a});
  }
  res.R = rk.on_nodes(res.quad.nodes);
  res.V = kernel_V(suite).on_nodes(res.quad.nodes);
  const Eigen::Index n = res.R.rows();
  Eigen::MatrixXcd W = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) W(j, j) = res.quad.weights[std::size_t(j)];
  Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(n, n);
  Eigen::MatrixXcd E = (I + res.V * W) * (I - res.R * W) - I;
  res.residual = n ? E.cwiseAbs().maxCoeff() : 0.0;
  if (res.residual > check_tol) fail(ErrorCode::InversionCheckFailed, "(I+V)(I-R) differs from I");
  return res;
}

struct MValue {
  cplx route_a;
  cplx route_b;
};

// route A: double quadrature with the resolvent; route B: closed form through b and e^{Omega}
inline MValue m_function(const CauchySuite& suite, const Resolvent& res, cplx k1, cplx k2) {
  const SymbolSpec& spec = suite.spec();
  const int x = suite.x();
  const auto& q = res.quad.nodes;
  const auto& w = res.quad.weights;
  const Eigen::Index n = Eigen::Index(q.size());
  Eigen::VectorXcd a1(n), a2(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    cplx s = sqrt_theta_times_power(spec, -0.5 * x)(q[std::size_t(j)]).value;
    a1(j) = s / (k1 - q[std::size_t(j)]) * w[std::size_t(j)];
    a2(j) = s / (k2 - q[std::size_t(j)]) * w[std::size_t(j)];
  }
  cplx direct = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) direct += a1(j) * a2(j) / w[std::size_t(j)];
  cplx corr = (a1.transpose() * res.R * a2)(0, 0);
  MValue mv;
  mv.route_a = (direct - corr) / two_pi_i;

  auto side = [&](cplx k) {
    if (std::abs(k) < suite.radius()) return std::make_pair(suite.omega_inside(k), suite.b_plus(k));
    return std::make_pair(suite.omega_outside(k), suite.b_minus(k));
  };
  auto [o1, b1] = side(k1);
  auto [o2, b2] = side(k2);
  if (std::abs(k1 - k2) < 1e-12 * std::max(1.0, std::abs(k1)))
    mv.route_b = -std::exp(2.0 * o1) * b1.deriv;
  else
    mv.route_b = -std::exp(o1 + o2) * (b1.value - b2.value) / (k1 - k2);
  return mv;
}

struct RankOneReport {
  cplx det_base;       // det(1 + V_nu)
  cplx det_augmented;  // det(1 + V_nu + V1)
  cplx det_shifted;    // det(1 + V_{nu_1})
  cplx closed_form;    // det(1 + V_nu) e^{Omega_>(0)} b_>(0)
  double residual = 0.0;
  double closed_residual = 0.0;
};

inline RankOneReport rank_one_shift_identity(const SymbolSpec& spec, int x, double tol = 1e-11) {
  if (winding_number(spec) != 0) fail(ErrorCode::WindingNonzero, "rank-one identity needs zero winding");
  RankOneReport r;
  Contour c = unit_circle();
  CauchySuite base(spec, c, x);
  KernelOnContour v = kernel_V(base);
  r.det_base = nystrom_det(v, c, tol).value;
  r.det_augmented = nystrom_det(v + kernel_rank_one(spec, x), c, tol).value;
  r.det_shifted = nystrom_det(kernel_V(CauchySuite(shift_winding(spec), c, x)), c, tol).value;
  r.closed_form = r.det_base * std::exp(base.omega_inside(0.0)) * base.b_plus(0.0).value;
  cplx lhs = r.det_augmented - r.det_base;
  // det_shifted vanishes for constant symbols
  double scale = std::max(std::abs(r.det_shifted), std::abs(r.det_base));
  r.residual = std::abs(lhs - r.det_shifted) / scale;
  r.closed_residual = std::abs(r.closed_form - r.det_shifted) / scale;
  return r;
}

}  // namespace detlab
