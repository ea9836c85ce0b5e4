#pragma once

#include <array>
#include <cmath>
#include <functional>

#include <Eigen/Core>

namespace dpgls {

using Vec2 = Eigen::Vector2d;

/// Quadrature node in barycentric coordinates with weight normalized so that
/// the weights of a rule sum to one (integrals scale with the triangle area).
struct TriQuadNode {
  double l0, l1, l2;
  double weight;
};

/// Three-point midpoint rule, exact for polynomials of degree 2.
inline const std::array<TriQuadNode, 3>& tri_rule_degree2() {
  static const std::array<TriQuadNode, 3> rule = {{
      {0.5, 0.5, 0.0, 1.0 / 3.0},
      {0.0, 0.5, 0.5, 1.0 / 3.0},
      {0.5, 0.0, 0.5, 1.0 / 3.0},
  }};
  return rule;
}

/// Six-point rule, exact for polynomials of degree 4.
inline const std::array<TriQuadNode, 6>& tri_rule_degree4() {
  constexpr double a = 0.445948490915965;
  constexpr double wa = 0.223381589678011;
  constexpr double b = 0.091576213509771;
  constexpr double wb = 0.109951743655322;
  static const std::array<TriQuadNode, 6> rule = {{
      {a, a, 1.0 - 2.0 * a, wa},
      {a, 1.0 - 2.0 * a, a, wa},
      {1.0 - 2.0 * a, a, a, wa},
      {b, b, 1.0 - 2.0 * b, wb},
      {b, 1.0 - 2.0 * b, b, wb},
      {1.0 - 2.0 * b, b, b, wb},
  }};
  return rule;
}

/// Integrates g over the triangle (p0,p1,p2); |T| must be the triangle area.
template <class Rule, class G>
double integrate_triangle(const Rule& rule, const Vec2& p0, const Vec2& p1,
                          const Vec2& p2, double area, G&& g) {
  double s = 0.0;
  for (const auto& n : rule) {
    const Vec2 x = n.l0 * p0 + n.l1 * p1 + n.l2 * p2;
    s += n.weight * g(x);
  }
  return area * s;
}

/// Three-point Gauss rule on the segment [a,b], exact for degree 5.
template <class G>
double integrate_segment(const Vec2& a, const Vec2& b, G&& g) {
  const double r = std::sqrt(3.0 / 5.0);
  const std::array<double, 3> t = {0.5 * (1.0 - r), 0.5, 0.5 * (1.0 + r)};
  const std::array<double, 3> w = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};
  double s = 0.0;
  for (int i = 0; i < 3; ++i) {
    const Vec2 x = (1.0 - t[i]) * a + t[i] * b;
    s += w[i] * g(x);
  }
  return (b - a).norm() * s;
}

/// Adaptive Simpson quadrature on [a,b] with absolute tolerance tol.
double adaptive_simpson(const std::function<double(double)>& g, double a,
                        double b, double tol);

}  // namespace dpgls
