#include "superconv/quadrature.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace superconv {

QuadratureRule gauss_legendre(int m) {
  if (m < 1) throw std::invalid_argument("quadrature size must be >= 1");
  QuadratureRule rule;
  rule.nodes.resize(m);
  rule.weights.resize(m);
  const int half = (m + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Chebyshev initial guess, Newton on P_m.
    double x = std::cos(M_PI * (i + 0.75) / (m + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= m; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = m * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.nodes[i] = -x;
    rule.nodes[m - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * pp * pp);
    rule.weights[i] = w;
    rule.weights[m - 1 - i] = w;
  }
  if (m % 2 == 1) rule.nodes[m / 2] = 0.0;
  return rule;
}

QuadratureRule gauss_legendre_on(int m, double a, double b) {
  QuadratureRule base = gauss_legendre(m);
  QuadratureRule rule;
  rule.nodes = 0.5 * (b - a) * base.nodes.array() + 0.5 * (a + b);
  rule.weights = 0.5 * (b - a) * base.weights;
  return rule;
}

QuadratureRule composite_gauss(int m, const std::vector<std::pair<double, double>>& panels) {
  QuadratureRule rule;
  const int total = m * static_cast<int>(panels.size());
  rule.nodes.resize(total);
  rule.weights.resize(total);
  int at = 0;
  for (const auto& [a, b] : panels) {
    QuadratureRule part = gauss_legendre_on(m, a, b);
    rule.nodes.segment(at, m) = part.nodes;
    rule.weights.segment(at, m) = part.weights;
    at += m;
  }
  return rule;
}

QuadratureRule torus_rule(int m) {
  if (m < 1) throw std::invalid_argument("quadrature size must be >= 1");
  QuadratureRule rule;
  rule.nodes.resize(m);
  rule.weights.setConstant(m, 1.0 / m);
  for (int j = 0; j < m; ++j) rule.nodes[j] = static_cast<double>(j) / m;
  return rule;
}

} // namespace superconv
