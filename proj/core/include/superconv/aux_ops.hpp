#pragma once

#include <optional>

#include "superconv/field.hpp"
#include "superconv/space.hpp"

namespace superconv {

// Pointwise error-equation potentials built from a reference state u_ref and
// a discrete state u_delta, plus the assembled coercive bilinear form
// stiffness + M_{V + u_ref^2 + u_delta^2 + u_ref u_delta}.
struct AuxOperators {
  Eigen::VectorXd v_delta;        // V + u_ref^2 + u_delta^2 + u_ref u_delta
  Eigen::VectorXd v_tilde;        // v_delta - 1
  Eigen::VectorXd v1_aux;         // eigen analogue: v_delta - lambda
  Eigen::VectorXd v2_aux;         // V - lambda + 3 u_ref^2
  AssembledOp a_delta;            // stiffness + M_{v_delta}
};

// Both fields must be representable on `space`'s quadrature: u_ref may live
// on a finer nested space, in which case pass its samples directly.
AuxOperators build_aux_operators(const Space& space, const Eigen::VectorXd& u_ref_samples,
                                 const Eigen::VectorXd& u_delta_samples,
                                 const Eigen::VectorXd& v_samples,
                                 std::optional<double> lambda_star = std::nullopt);

AuxOperators build_aux_operators(const Space& space, const Field& u_ref, const Field& u_delta,
                                 const PotentialSpec& V,
                                 std::optional<double> lambda_star = std::nullopt);

// Smallest generalized eigenvalue of a_delta against the X-Gram (dense).
double coercivity_constant(const Space& space, const AuxOperators& aux);

// max_i |a_delta(u_ref - u_delta, phi_i)| / ||u_ref - u_delta||_X, assembled
// on the reference space and restricted to the coarse basis functions.
double galerkin_orthogonality_residual(const SpaceHandle& coarse, const SpaceHandle& reference,
                                       const Field& u_ref, const Field& u_delta,
                                       const Eigen::VectorXd& v_samples_ref);

// L2 overlap (projected - u_delta, u_ref) on a common space; u_ref should be
// L2-normalised for the eigen diagnostics.
double cbar_diagnostic(const Space& space, const Field& u_ref, const Field& u_delta,
                       const Field& projected);

} // namespace superconv
