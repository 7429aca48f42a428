#pragma once

#include <optional>

#include "superconv/problem.hpp"

namespace superconv {

double energy_src(const SourceProblem& p, const Field& u);
double energy_eig(const EigProblem& p, const Field& u);

// Rayleigh quotient of the nonlinear operator:
// [(grad u, grad u) + (V u, u) + int u^4] / (u, u).
double rayleigh_lambda(const EigProblem& p, const Field& u);

// Euler-Lagrange residual dual vectors [(residual, phi_i)].
Eigen::VectorXd source_residual(const SourceProblem& p, const Eigen::VectorXd& coeffs);
Eigen::VectorXd eig_residual(const EigProblem& p, const Eigen::VectorXd& coeffs, double lambda);

// Dual (X'-scaled) norm of a residual vector: sqrt(r^T G^-1 r).
double dual_norm(const Space& s, const Eigen::VectorXd& residual);

SourceSolution solve_source(const SourceProblem& p, const SolverOptions& opts = {});

EigSolution solve_eig(const EigProblem& p, const SolverOptions& opts = {},
                      const std::optional<Field>& reference_for_sign = std::nullopt);

// Max relative error between the analytic Newton linearisation applied to
// random directions and central finite differences of the residual.
double jacobian_check(const SourceProblem& p, const Field& u, double h_fd = 1e-5);

} // namespace superconv
