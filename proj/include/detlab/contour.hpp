#pragma once

#include <algorithm>

#include "symbol.hpp"

namespace detlab {

struct Circle {
  cplx center = 0.0;
  double radius = 1.0;
  int orientation = 1;  // +1 counterclockwise
};

struct Quadrature {
  cvec nodes;
  cvec weights;  // dq under the trapezoidal rule
  std::vector<int> component;
};

struct Contour {
  std::vector<Circle> components{Circle{}};
  int m = 128;  // nodes per component

  Contour with_m(int mm) const {
    Contour c = *this;
    c.m = mm;
    return c;
  }
  const Circle& outer() const { return components.front(); }
  bool single_circle() const { return components.size() == 1; }

  // winding number of the contour about z
  int index_of(cplx z) const {
    int w = 0;
    for (auto& c : components) w += std::abs(z - c.center) < c.radius ? c.orientation : 0;
    return w;
  }
  bool encloses(cplx z) const { return index_of(z) == 1; }

  double distance(cplx z) const {
    double d = 1e300;
    for (auto& c : components) d = std::min(d, std::abs(std::abs(z - c.center) - c.radius));
    return d;
  }
};

inline Contour circle_contour(double radius, int m = 128) {
  Contour c;
  c.components = {Circle{0.0, radius, 1}};
  c.m = m;
  return c;
}

inline Contour unit_circle(int m = 128) { return circle_contour(1.0, m); }

inline void check_contour(const Contour& c) {
  if (c.components.empty()) fail(ErrorCode::GeometryConflict, "contour has no components");
  const Circle& o = c.outer();
  if (o.center != 0.0 || o.orientation != 1) fail(ErrorCode::GeometryConflict, "outer component must be a counterclockwise circle at 0");
  for (std::size_t i = 1; i < c.components.size(); ++i) {
    const Circle& a = c.components[i];
    if (a.orientation != -1) fail(ErrorCode::GeometryConflict, "inner components must be clockwise");
    if (std::abs(a.center) + a.radius >= o.radius) fail(ErrorCode::GeometryConflict, "inner component not strictly inside the outer circle");
    if (std::abs(a.center) - a.radius <= 0.0) fail(ErrorCode::GeometryConflict, "inner component contains the origin");
    for (std::size_t j = 1; j < i; ++j) {
      const Circle& b = c.components[j];
      if (std::abs(a.center - b.center) <= a.radius + b.radius) fail(ErrorCode::GeometryConflict, "inner components intersect");
    }
  }
}

inline Quadrature quadrature(const Contour& c) {
  Quadrature qd;
  for (std::size_t k = 0; k < c.components.size(); ++k) {
    const Circle& ci = c.components[k];
    for (auto& q : circle_nodes(ci.center, ci.radius, c.m)) {
      qd.nodes.push_back(q);
      qd.weights.push_back(double(ci.orientation) * two_pi_i * (q - ci.center) / double(c.m));
      qd.component.push_back(int(k));
    }
  }
  return qd;
}

// Circle separating z_list from the unit circle side and from every obstruction.
inline Contour select_contour(const SymbolAnalysis& a, int m = 128) {
  constexpr double sep = 1e-6;
  if (a.winding == 0) return unit_circle(m);
  if (a.z_list.size() != std::size_t(std::abs(a.winding)))
    fail(ErrorCode::EmptyAnnulus, "not enough zeros on the required side to absorb the winding");
  std::vector<double> obstructions;
  if (a.winding < 0) {
    double zn = 0.0;
    for (auto& z : a.z_list) zn = std::max(zn, std::abs(z));
    for (auto& w : a.w_list) obstructions.push_back(std::abs(w));
    for (auto& p : a.poles) {
      double r = std::abs(p.value);
      if (r > 1.0 && r < zn) fail(ErrorCode::EmptyAnnulus, "a pole lies between the unit circle and the selected zeros");
      if (r > zn) obstructions.push_back(r);
    }
    double b = obstructions.empty() ? 0.0 : *std::min_element(obstructions.begin(), obstructions.end());
    if (!obstructions.empty() && b - zn < sep * zn) fail(ErrorCode::EmptyAnnulus, "no radius separates z_list from obstructions");
    return circle_contour(obstructions.empty() ? 1.25 * zn : std::sqrt(zn * b), m);
  }
  double zn = 1.0;
  for (auto& z : a.z_list) zn = std::min(zn, std::abs(z));
  for (auto& w : a.w_list) obstructions.push_back(std::abs(w));
  for (auto& p : a.poles) {
    double r = std::abs(p.value);
    if (r < 1.0 && r > zn) fail(ErrorCode::EmptyAnnulus, "a pole lies between the selected zeros and the unit circle");
    if (r < zn) obstructions.push_back(r);
  }
  double b = obstructions.empty() ? 0.0 : *std::max_element(obstructions.begin(), obstructions.end());
  if (!obstructions.empty() && zn - b < sep * zn) fail(ErrorCode::EmptyAnnulus, "no radius separates z_list from obstructions");
  return circle_contour(b > 0.0 ? std::sqrt(zn * b) : zn / 1.25, m);
}

// Outer circle enlarged past `include`, plus a clockwise loop around each `exclude` point.
inline Contour deformed_contour(const Contour& base, const cvec& exclude, const cvec& include, const SymbolAnalysis& a) {
  Contour c = base;
  double rho = base.outer().radius;
  cvec singular = a.zeros;
  for (auto& p : a.poles) singular.push_back(p.value);
  auto is_in = [](const cvec& v, cplx z) {
    return std::any_of(v.begin(), v.end(), [&](cplx u) { return std::abs(u - z) < 1e-12 * std::max(1.0, std::abs(z)); });
  };
  if (!include.empty()) {
    double big = 0.0;
    for (auto& w : include) {
      if (base.encloses(w)) fail(ErrorCode::GeometryConflict, "included point already inside the base contour");
      big = std::max(big, std::abs(w));
    }
    double r_new = 1.25 * big;
    for (auto& s : singular) {
      double r = std::abs(s);
      if (r > rho && r < r_new && !is_in(include, s))
        fail(ErrorCode::GeometryConflict, "enlarging the outer circle would cross another zero or pole");
    }
    c.components.front().radius = r_new;
  }
  for (auto& z : exclude) {
    if (!base.encloses(z)) fail(ErrorCode::GeometryConflict, "excluded point is not inside the base contour");
    double d = 1e300;
    for (auto& s : singular)
      if (std::abs(s - z) > 1e-12 * std::max(1.0, std::abs(z))) d = std::min(d, std::abs(s - z));
    c.components.push_back(Circle{z, std::min(0.4, d / 2.0), -1});
  }
  check_contour(c);
  return c;
}

}  // namespace detlab
