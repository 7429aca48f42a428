#include <cmath>

#include "superconv/log.hpp"
#include "superconv/solver.hpp"

namespace superconv {

namespace {

double l2_norm(const Space& S, const Eigen::VectorXd& c) {
  return std::sqrt(std::max(0.0, c.dot(S.mass() * c)));
}

Eigen::VectorXd normalized(const Space& S, Eigen::VectorXd c) {
  const double n = l2_norm(S, c);
  if (n <= 0.0) throw std::invalid_argument("cannot normalise the zero field");
  return c / n;
}

// Positive, normalised starting state: the constant on the torus, a projected
// half-cosine bump on the Dirichlet interval.
Eigen::VectorXd initial_state(const EigProblem& p) {
  const Space& S = *p.space;
  if (S.domain().setting == Setting::Two) {
    Eigen::VectorXd c = Eigen::VectorXd::Zero(S.dim());
    c[0] = 1.0;
    return c;
  }
  Eigen::VectorXd samples(S.quad().size());
  for (int j = 0; j < S.quad().size(); ++j)
    samples[j] = std::cos(0.5 * M_PI * S.quad().nodes[j]);
  Eigen::VectorXd c = S.solve_mass(S.analysis(samples));
  return normalized(S, std::move(c));
}

struct EigState {
  Eigen::VectorXd c;
  double lambda = 0.0;
  double energy = 0.0;
  double residual = 0.0;
  Eigen::VectorXd r;
};

EigState evaluate(const EigProblem& p, Eigen::VectorXd c) {
  const Space& S = *p.space;
  EigState st;
  st.c = std::move(c);
  Field u(S.basis(), st.c);
  st.lambda = rayleigh_lambda(p, u);
  st.energy = energy_eig(p, u);
  st.r = eig_residual(p, st.c, st.lambda);
  // Dual norm scaled by the eigenvalue magnitude (the natural size of the
  // two sides of the stationarity condition for a unit-norm state).
  st.residual = dual_norm(S, st.r) / (1.0 + std::abs(st.lambda));
  return st;
}

// Steepest descent in the X metric on the L2 sphere with Armijo backtracking.
void sobolev_gradient_phase(const EigProblem& p, EigState& st, double target, int max_iter,
                            int& it, std::vector<IterationRecord>& history) {
  const Space& S = *p.space;
  double tau = 1.0;
  while (st.residual > target && it < max_iter) {
    Eigen::VectorXd d = S.solve_gram_x(st.r);
    const Eigen::VectorXd mc = S.mass() * st.c;
    d -= d.dot(mc) * st.c; // tangent to the sphere
    const double slope = st.r.dot(d);
    if (!(slope > 0.0)) throw NegativeCurvatureStall(Field(S.basis(), st.c));

    bool accepted = false;
    double step = std::min(2.0 * tau, 1.0);
    const double noise = 1e-10 * (1.0 + std::abs(st.energy));
    if (std::abs(slope) <= noise) {
      // Energy differences are below evaluation noise here; accept on a
      // residual decrease instead.
      for (int ls = 0; ls < 8 && !accepted; ++ls) {
        EigState next = evaluate(p, normalized(S, st.c - step * d));
        if (next.residual <= 0.95 * st.residual) {
          st = std::move(next);
          tau = step;
          accepted = true;
        }
        step *= 0.5;
      }
    } else {
      const double slack = 1e-14 * (1.0 + std::abs(st.energy));
      for (int ls = 0; ls < 60 && !accepted; ++ls) {
        EigState next = evaluate(p, normalized(S, st.c - step * d));
        if (next.energy <= st.energy - 1e-4 * step * slope + slack) {
          st = std::move(next);
          tau = step;
          accepted = true;
        } else {
          step *= 0.5;
        }
      }
    }
    if (!accepted) throw NegativeCurvatureStall(Field(S.basis(), st.c));
    ++it;
    history.push_back({st.energy, st.residual});
  }
}

// Constrained Newton correction via a bordered solve; rejects steps that
// raise the energy and reports whether anything was accepted.
bool newton_refinement(const EigProblem& p, EigState& st, double tol, int sweeps, int& it,
                       std::vector<IterationRecord>& history) {
  const Space& S = *p.space;
  bool progressed = false;
  for (int sweep = 0; sweep < sweeps && st.residual > tol; ++sweep) {
    const Eigen::VectorXd uq = S.synth(st.c);
    const Eigen::VectorXd w = p.v_samples + 3.0 * uq.cwiseProduct(uq);
    EllipticSolver hess(p.space, w, -st.lambda);
    if (!hess.positive_definite()) return progressed;
    const Eigen::VectorXd mc = S.mass() * st.c;
    const Eigen::VectorXd a = hess.solve(st.r);
    const Eigen::VectorXd b = hess.solve(mc);
    if (!hess.positive_definite()) return progressed;
    const double denom = mc.dot(b);
    if (denom == 0.0) return progressed;
    const double dlambda = mc.dot(a) / denom;
    const Eigen::VectorXd du = dlambda * b - a;

    EigState next = evaluate(p, normalized(S, st.c + du));
    ++it;
    // Quadratic phase: require either an energy decrease or a residual drop.
    const bool e_ok = next.energy <= st.energy + 1e-13 * (1.0 + std::abs(st.energy));
    const bool r_ok = next.residual < 0.5 * st.residual;
    if (!(e_ok || r_ok)) return progressed;
    st = std::move(next);
    progressed = true;
    history.push_back({st.energy, st.residual});
  }
  return progressed;
}

void scf_phase(const EigProblem& p, EigState& st, double tol, int max_iter, int& it,
               std::vector<IterationRecord>& history) {
  const Space& S = *p.space;
  double mix = 1.0;
  while (st.residual > tol && it < max_iter) {
    const Eigen::VectorXd uq = S.synth(st.c);
    EllipticSolver op(p.space, p.v_samples + uq.cwiseProduct(uq));
    // Inverse iteration for the lowest eigenpair of the frozen operator.
    Eigen::VectorXd w = st.c;
    double theta_prev = st.lambda;
    for (int inner = 0; inner < 64; ++inner) {
      w = normalized(S, op.solve(S.mass() * w));
      const double theta = w.dot(op.apply(w));
      if (std::abs(theta - theta_prev) <= 1e-13 * (1.0 + std::abs(theta))) break;
      theta_prev = theta;
    }
    if (w.dot(S.mass() * st.c) < 0.0) w = -w;

    bool accepted = false;
    for (int tries = 0; tries < 30; ++tries) {
      EigState next = evaluate(p, normalized(S, (1.0 - mix) * st.c + mix * w));
      if (next.energy <= st.energy + 1e-13 * (1.0 + std::abs(st.energy)) ||
          next.residual < st.residual) {
        st = std::move(next);
        accepted = true;
        mix = std::min(1.0, 1.5 * mix);
        break;
      }
      mix *= 0.5;
      if (mix < 1e-4) break;
    }
    if (!accepted) throw NegativeCurvatureStall(Field(S.basis(), st.c));
    ++it;
    history.push_back({st.energy, st.residual});
  }
}

} // namespace

EigSolution solve_eig(const EigProblem& p, const SolverOptions& opts,
                      const std::optional<Field>& reference_for_sign) {
  opts.validate();
  const Space& S = *p.space;

  EigState st = evaluate(p, initial_state(p));
  std::vector<IterationRecord> history{{st.energy, st.residual}};
  int it = 0;

  if (opts.algorithm == EigAlgorithm::Scf) {
    scf_phase(p, st, opts.tol, opts.max_iter, it, history);
    if (st.residual > opts.tol) throw NonConvergence(Field(S.basis(), st.c), st.residual);
  } else {
    // Gradient descent to a Newton-safe neighbourhood, then refinement
    // sweeps; fall back to more gradient work if refinement stalls.
    const double newton_entry = std::max(opts.tol, 1e-7);
    while (st.residual > opts.tol) {
      sobolev_gradient_phase(p, st, newton_entry, opts.max_iter, it, history);
      if (st.residual <= opts.tol) break;
      if (it >= opts.max_iter) throw NonConvergence(Field(S.basis(), st.c), st.residual);
      const bool progressed = newton_refinement(p, st, opts.tol, 5, it, history);
      if (st.residual <= opts.tol) break;
      if (it >= opts.max_iter) throw NonConvergence(Field(S.basis(), st.c), st.residual);
      if (!progressed) {
        // Push the gradient phase one decade further before retrying.
        const double tighter = std::max(opts.tol, st.residual * 0.1);
        sobolev_gradient_phase(p, st, tighter, opts.max_iter, it, history);
        if (it >= opts.max_iter && st.residual > opts.tol)
          throw NonConvergence(Field(S.basis(), st.c), st.residual);
      }
    }
  }

  // Representative selection: nonnegative overlap with the reference when
  // given, else nonnegative mean.
  bool sign_fixed = false;
  if (reference_for_sign) {
    const Field& ref = *reference_for_sign;
    if (!(ref.basis == S.basis()))
      throw std::invalid_argument("sign reference must live on the problem space");
    if (st.c.dot(S.mass() * ref.coeffs) < 0.0) {
      st.c = -st.c;
      sign_fixed = true;
    }
  } else {
    const double mean = S.quad().weights.dot(S.synth(st.c));
    if (mean < 0.0) {
      st.c = -st.c;
      sign_fixed = true;
    }
  }

  EigSolution sol;
  Field u(S.basis(), st.c);
  sol.lambda = rayleigh_lambda(p, u);
  sol.energy = energy_eig(p, u);
  sol.residual =
      dual_norm(S, eig_residual(p, st.c, sol.lambda)) / (1.0 + std::abs(sol.lambda));
  sol.u = std::move(u);
  sol.iterations = it;
  sol.sign_fixed = sign_fixed;
  sol.history = std::move(history);
  return sol;
}

} // namespace superconv
