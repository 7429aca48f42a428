#pragma once

#include <Eigen/Core>

namespace superconv {

struct QuadratureRule {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
  int size() const { return static_cast<int>(nodes.size()); }
};

// Gauss-Legendre rule with m nodes on [-1,1]; exact for degree <= 2m-1.
QuadratureRule gauss_legendre(int m);

// Gauss-Legendre rule mapped to [a,b].
QuadratureRule gauss_legendre_on(int m, double a, double b);

// Composite rule: Gauss-Legendre with m nodes on each of the given panels.
QuadratureRule composite_gauss(int m, const std::vector<std::pair<double, double>>& panels);

// Equispaced rectangle rule x_j = j/m, w_j = 1/m on the unit torus cell;
// integrates trigonometric polynomials of degree <= m-1 exactly.
QuadratureRule torus_rule(int m);

} // namespace superconv
