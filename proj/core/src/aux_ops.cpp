#include "superconv/aux_ops.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <stdexcept>

#include "superconv/transfer.hpp"

namespace superconv {

AuxOperators build_aux_operators(const Space& space, const Eigen::VectorXd& u_ref_samples,
                                 const Eigen::VectorXd& u_delta_samples,
                                 const Eigen::VectorXd& v_samples,
                                 std::optional<double> lambda_star) {
  const int q = space.quad().size();
  if (u_ref_samples.size() != q || u_delta_samples.size() != q || v_samples.size() != q)
    throw std::invalid_argument("aux operator samples must live on the space quadrature");

  AuxOperators aux;
  aux.v_delta = v_samples + u_ref_samples.cwiseProduct(u_ref_samples) +
                u_delta_samples.cwiseProduct(u_delta_samples) +
                u_ref_samples.cwiseProduct(u_delta_samples);
  aux.v_tilde = aux.v_delta.array() - 1.0;
  const double lam = lambda_star.value_or(0.0);
  aux.v1_aux = aux.v_delta.array() - lam;
  aux.v2_aux = (v_samples + 3.0 * u_ref_samples.cwiseProduct(u_ref_samples)).array() - lam;
  aux.a_delta = space.weighted_mass(aux.v_delta);
  if (aux.a_delta.dense) {
    *aux.a_delta.dense += Eigen::MatrixXd(space.stiffness());
  } else {
    *aux.a_delta.sparse = *aux.a_delta.sparse + space.stiffness();
  }
  return aux;
}

AuxOperators build_aux_operators(const Space& space, const Field& u_ref, const Field& u_delta,
                                 const PotentialSpec& V, std::optional<double> lambda_star) {
  return build_aux_operators(space, space.synth(u_ref.coeffs), space.synth(u_delta.coeffs),
                             synthesize_potential(V, space), lambda_star);
}

double coercivity_constant(const Space& space, const AuxOperators& aux) {
  const Eigen::MatrixXd a = aux.a_delta.to_dense();
  const Eigen::MatrixXd g = Eigen::MatrixXd(space.gram_x());
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(a, g, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("generalized eigensolve for the coercivity constant failed");
  return es.eigenvalues().minCoeff();
}

double galerkin_orthogonality_residual(const SpaceHandle& coarse, const SpaceHandle& reference,
                                       const Field& u_ref, const Field& u_delta,
                                       const Eigen::VectorXd& v_samples_ref) {
  const Space& R = *reference;
  const Field u_delta_up = prolong(coarse, reference, u_delta);
  const Eigen::VectorXd diff = u_ref.coeffs - u_delta_up.coeffs;

  AuxOperators aux = build_aux_operators(R, R.synth(u_ref.coeffs), R.synth(u_delta_up.coeffs),
                                         v_samples_ref);
  // Dual vector of a_delta(diff, .) on the reference space, restricted to the
  // coarse basis.
  Eigen::VectorXd dual = R.stiffness() * diff;
  dual += R.analysis(aux.v_delta.cwiseProduct(R.synth(diff)));

  Eigen::VectorXd restricted;
  if (coarse->is_fem()) {
    TransferMap map = TransferMap::between(coarse, reference);
    restricted = map.matrix.transpose() * dual;
  } else {
    restricted = dual.head(coarse->dim());
  }

  // Scaled against the reference solution: dividing by ||diff||_X degenerates
  // to noise/noise for manufactured cases where the difference vanishes.
  const double scale = std::sqrt(std::max(0.0, u_ref.coeffs.dot(R.gram_x() * u_ref.coeffs)));
  if (scale == 0.0) return restricted.cwiseAbs().maxCoeff();
  return restricted.cwiseAbs().maxCoeff() / scale;
}

double cbar_diagnostic(const Space& space, const Field& u_ref, const Field& u_delta,
                       const Field& projected) {
  const Eigen::VectorXd diff = projected.coeffs - u_delta.coeffs;
  return diff.dot(space.mass() * u_ref.coeffs);
}

} // namespace superconv
