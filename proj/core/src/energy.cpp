#include <cmath>

#include "superconv/solver.hpp"

namespace superconv {

namespace {

void require_space(const SpaceHandle& s, const Field& u) {
  if (!(u.basis == s->basis()))
    throw std::invalid_argument("field does not live on the problem space");
}

} // namespace

double energy_src(const SourceProblem& p, const Field& u) {
  require_space(p.space, u);
  const Space& S = *p.space;
  const Eigen::VectorXd uq = S.synth(u.coeffs);
  const double grad = u.coeffs.dot(S.stiffness() * u.coeffs);
  double integrand_sum = 0.0;
  for (int j = 0; j < S.quad().size(); ++j) {
    const double w = S.quad().weights[j];
    const double v = uq[j];
    double val = 0.5 * p.v_samples[j] * v * v - p.f_samples[j] * v;
    if (p.cubic_on) val += 0.25 * v * v * v * v;
    integrand_sum += w * val;
  }
  return 0.5 * grad + integrand_sum;
}

double energy_eig(const EigProblem& p, const Field& u) {
  require_space(p.space, u);
  const Space& S = *p.space;
  const Eigen::VectorXd uq = S.synth(u.coeffs);
  const double grad = u.coeffs.dot(S.stiffness() * u.coeffs);
  double integrand_sum = 0.0;
  for (int j = 0; j < S.quad().size(); ++j) {
    const double w = S.quad().weights[j];
    const double v = uq[j];
    integrand_sum += w * (0.5 * p.v_samples[j] * v * v + 0.25 * v * v * v * v);
  }
  return 0.5 * grad + integrand_sum;
}

double rayleigh_lambda(const EigProblem& p, const Field& u) {
  require_space(p.space, u);
  const Space& S = *p.space;
  const double l2sq = u.coeffs.dot(S.mass() * u.coeffs);
  if (l2sq <= 0.0) throw std::invalid_argument("rayleigh quotient of the zero field");
  const Eigen::VectorXd uq = S.synth(u.coeffs);
  const double grad = u.coeffs.dot(S.stiffness() * u.coeffs);
  double pot = 0.0;
  for (int j = 0; j < S.quad().size(); ++j) {
    const double w = S.quad().weights[j];
    const double v = uq[j];
    pot += w * (p.v_samples[j] * v * v + v * v * v * v);
  }
  return (grad + pot) / l2sq;
}

Eigen::VectorXd source_residual(const SourceProblem& p, const Eigen::VectorXd& coeffs) {
  const Space& S = *p.space;
  const Eigen::VectorXd uq = S.synth(coeffs);
  Eigen::VectorXd g(uq.size());
  for (int j = 0; j < uq.size(); ++j) {
    double val = p.v_samples[j] * uq[j] - p.f_samples[j];
    if (p.cubic_on) val += uq[j] * uq[j] * uq[j];
    g[j] = val;
  }
  return S.stiffness() * coeffs + S.analysis(g);
}

Eigen::VectorXd eig_residual(const EigProblem& p, const Eigen::VectorXd& coeffs, double lambda) {
  const Space& S = *p.space;
  const Eigen::VectorXd uq = S.synth(coeffs);
  Eigen::VectorXd g(uq.size());
  for (int j = 0; j < uq.size(); ++j)
    g[j] = (p.v_samples[j] + uq[j] * uq[j]) * uq[j];
  return S.stiffness() * coeffs + S.analysis(g) - lambda * (S.mass() * coeffs);
}

double dual_norm(const Space& s, const Eigen::VectorXd& residual) {
  const Eigen::VectorXd z = s.solve_gram_x(residual);
  return std::sqrt(std::max(0.0, residual.dot(z)));
}

} // namespace superconv
