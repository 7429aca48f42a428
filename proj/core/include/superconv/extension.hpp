#pragma once

#include <Eigen/Core>
#include <functional>

namespace superconv {

// Trigonometric representation of a function on the period-4 torus with cell
// (-1,3): sum_k a_k cos(w k (x+1)) + b_k sin(w k (x+1)), w = pi/2.
struct ExtendedField {
  int resolution = 0;
  Eigen::VectorXd cos_coeffs; // 0..resolution
  Eigen::VectorXd sin_coeffs; // 0..resolution, index 0 unused

  double eval(double x) const;
  double eval_deriv(double x) const;
  // Integral over one period; vanishes for odd extensions.
  double mean() const { return 4.0 * cos_coeffs[0]; }
};

// Value of the odd reflection of g across x = 1, periodised with period 4:
// h(x) = g(x) on (-1,1), h(x) = -g(2-x) on (1,3).
double odd_extension_value(const std::function<double(double)>& g, double x);

// Odd periodic extension of boundary-vanishing data g on (-1,1). The data is
// sampled on an oversampled equispaced grid (8x the requested resolution)
// before the transform to control seam aliasing. Throws std::domain_error
// when |g(+-1)| > 1e-10.
ExtendedField odd_extend(const std::function<double(double)>& g, int resolution);

// Solve -u'' = rhs on the period-4 torus by diagonal inversion; the zero-mean
// right-hand side is enforced (and checked) before inverting.
ExtendedField solve_poisson_periodic(const ExtendedField& rhs);

// Extension-based Dirichlet Poisson solve: extend g, solve periodically,
// restrict to (-1,1).
ExtendedField solve_dirichlet_via_extension(const std::function<double(double)>& g,
                                            int resolution);

// H1(-1,1) distance between the extension-based solve and the direct
// Legendre Dirichlet solve of -u'' = g at the given polynomial degree.
double dirichlet_agreement_h1(const std::function<double(double)>& g, int extension_resolution,
                              int legendre_degree);

} // namespace superconv
