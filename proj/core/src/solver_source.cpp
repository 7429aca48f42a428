#include <cmath>
#include <random>

#include "superconv/log.hpp"
#include "superconv/solver.hpp"

namespace superconv {

namespace {

Eigen::VectorXd newton_weight(const SourceProblem& p, const Eigen::VectorXd& uq) {
  if (!p.cubic_on) return p.v_samples;
  return p.v_samples + 3.0 * uq.cwiseProduct(uq);
}

} // namespace

SourceSolution solve_source(const SourceProblem& p, const SolverOptions& opts) {
  opts.validate();
  const Space& S = *p.space;
  SourceSolution sol;

  // A strictly convex functional with zero forcing has the zero minimiser.
  if (p.f_samples.isZero(0.0)) {
    sol.u = Field::zero(S.basis());
    sol.energy = 0.0;
    sol.residual = 0.0;
    sol.iterations = 0;
    return sol;
  }

  // Initial guess: the linear problem with the cubic dropped.
  const Eigen::VectorXd rhs_f = S.analysis(p.f_samples);
  EllipticSolver linear(p.space, p.v_samples);
  Eigen::VectorXd c = linear.solve(rhs_f);

  // Residuals are reported in the dual norm scaled by the forcing, so the
  // tolerance is meaningful independently of the data magnitude.
  const double scale = 1.0 + dual_norm(S, rhs_f);

  Field u(S.basis(), c);
  double energy = energy_src(p, u);
  const double initial_guess_energy = energy;
  Eigen::VectorXd r = source_residual(p, c);
  double res = dual_norm(S, r) / scale;
  sol.history.push_back({energy, res});

  int it = 0;
  while (res > opts.tol) {
    if (it >= opts.max_iter) throw NonConvergence(Field(S.basis(), c), res);
    const Eigen::VectorXd uq = S.synth(c);
    EllipticSolver jac(p.space, newton_weight(p, uq));
    Eigen::VectorXd d = -jac.solve(r);
    const double slope = r.dot(d); // directional derivative of the energy
    if (!(slope < 0.0)) throw NegativeCurvatureStall(Field(S.basis(), c));

    bool accepted = false;
    // Once the predicted decrease falls below the evaluation noise of the
    // energy, Armijo cannot distinguish good steps from bad ones; the
    // residual takes over as the acceptance measure.
    const double noise = 1e-10 * (1.0 + std::abs(energy));
    if (std::abs(slope) <= noise) {
      Field trial(S.basis(), c + d);
      const Eigen::VectorXd r_new = source_residual(p, trial.coeffs);
      const double res_new = dual_norm(S, r_new) / scale;
      if (res_new <= 0.9 * res) {
        c = trial.coeffs;
        energy = energy_src(p, trial);
        r = r_new;
        res = res_new;
        accepted = true;
      }
    } else {
      const double slack = 1e-14 * (1.0 + std::abs(energy));
      double tau = 1.0;
      for (int ls = 0; ls < 50; ++ls) {
        Field trial(S.basis(), c + tau * d);
        const double e_new = energy_src(p, trial);
        if (e_new <= energy + 1e-4 * tau * slope + slack) {
          c = trial.coeffs;
          energy = e_new;
          accepted = true;
          break;
        }
        tau *= 0.5;
      }
      if (accepted) {
        r = source_residual(p, c);
        res = dual_norm(S, r) / scale;
      }
    }
    if (!accepted) throw NegativeCurvatureStall(Field(S.basis(), c));
    ++it;
    sol.history.push_back({energy, res});
  }

  sol.u = Field(S.basis(), c);
  sol.energy = energy;
  sol.residual = res;
  sol.iterations = it;
  if (sol.energy > initial_guess_energy + 1e-12 * (1.0 + std::abs(initial_guess_energy)))
    log_info("source solve ended above the linear initial guess energy");
  return sol;
}

double jacobian_check(const SourceProblem& p, const Field& u, double h_fd) {
  const Space& S = *p.space;
  if (!(u.basis == S.basis()))
    throw std::invalid_argument("field does not live on the problem space");
  const Eigen::VectorXd uq = S.synth(u.coeffs);
  const Eigen::VectorXd w = newton_weight(p, uq);

  std::mt19937 rng(123);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 5; ++trial) {
    Eigen::VectorXd dir(S.dim());
    for (int i = 0; i < S.dim(); ++i) dir[i] = unit(rng);
    const double nrm = dir.norm();
    if (nrm == 0.0) continue;
    dir /= nrm;

    const Eigen::VectorXd jd =
        S.stiffness() * dir + S.analysis(w.cwiseProduct(S.synth(dir)));
    const Eigen::VectorXd rp = source_residual(p, u.coeffs + h_fd * dir);
    const Eigen::VectorXd rm = source_residual(p, u.coeffs - h_fd * dir);
    const Eigen::VectorXd fd = (rp - rm) / (2.0 * h_fd);
    const double scale = std::max(jd.norm(), 1e-30);
    worst = std::max(worst, (fd - jd).norm() / scale);
  }
  return worst;
}

} // namespace superconv
