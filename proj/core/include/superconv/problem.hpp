#pragma once

#include <Eigen/Core>
#include <stdexcept>
#include <vector>

#include "superconv/field.hpp"
#include "superconv/space.hpp"

namespace superconv {

// Discrete source problem: minimise the energy
//   1/2 |grad u|^2 + 1/2 (V u, u) + 1/4 |u|_4^4 - (f, u)
// over the space; the quartic term is dropped when cubic_on is false.
struct SourceProblem {
  SpaceHandle space;
  PotentialSpec V;
  Eigen::VectorXd v_samples; // V at the space quadrature nodes
  Eigen::VectorXd f_samples; // f at the space quadrature nodes
  bool cubic_on = true;

  static SourceProblem make(SpaceHandle space, const PotentialSpec& V,
                            const Eigen::VectorXd& f_samples, bool cubic_on = true) {
    SourceProblem p;
    p.v_samples = synthesize_potential(V, *space);
    if (f_samples.size() != space->quad().size())
      throw std::invalid_argument("source samples must live on the space quadrature");
    p.f_samples = f_samples;
    p.space = std::move(space);
    p.V = V;
    p.cubic_on = cubic_on;
    return p;
  }

  static SourceProblem make(SpaceHandle space, const PotentialSpec& V, const PotentialSpec& f,
                            bool cubic_on = true) {
    Eigen::VectorXd fs = synthesize_samples(f, space->quad().nodes);
    return make(std::move(space), V, fs, cubic_on);
  }

  // Source given as a field on the same space.
  static SourceProblem make(SpaceHandle space, const PotentialSpec& V, const Field& f,
                            bool cubic_on = true) {
    Eigen::VectorXd fs = space->synth(f.coeffs);
    return make(std::move(space), V, fs, cubic_on);
  }
};

// Discrete ground-state problem: minimise the same energy (no source term)
// over the unit L2 sphere of the space.
struct EigProblem {
  SpaceHandle space;
  PotentialSpec V;
  Eigen::VectorXd v_samples;

  static EigProblem make(SpaceHandle space, const PotentialSpec& V) {
    EigProblem p;
    p.v_samples = synthesize_potential(V, *space);
    p.space = std::move(space);
    p.V = V;
    return p;
  }
};

enum class EigAlgorithm { SobolevGradient, Scf };
enum class Damping { Armijo };

struct SolverOptions {
  double tol = 1e-12; // dual-norm residual target
  int max_iter = 200;
  Damping damping = Damping::Armijo;
  EigAlgorithm algorithm = EigAlgorithm::SobolevGradient;

  void validate() const {
    if (tol <= 0.0) throw std::invalid_argument("solver tolerance must be positive");
    if (max_iter < 1) throw std::invalid_argument("max_iter must be >= 1");
  }
};

struct IterationRecord {
  double energy = 0.0;
  double residual = 0.0;
};

struct SourceSolution {
  Field u;
  double energy = 0.0;
  double residual = 0.0;
  int iterations = 0;
  std::vector<IterationRecord> history;
};

struct EigSolution {
  Field u;
  double energy = 0.0;
  double residual = 0.0;
  int iterations = 0;
  double lambda = 0.0;
  bool sign_fixed = false;
  std::vector<IterationRecord> history;
};

// Iteration budget exhausted; carries the last iterate and its residual.
struct NonConvergence : std::runtime_error {
  Field last_iterate;
  double residual;
  NonConvergence(Field last, double resid)
      : std::runtime_error("solver did not reach the residual tolerance"),
        last_iterate(std::move(last)),
        residual(resid) {}
};

// The energy line search stalled; usually a bad initial guess.
struct NegativeCurvatureStall : std::runtime_error {
  Field last_iterate;
  NegativeCurvatureStall(Field last)
      : std::runtime_error("line search cannot decrease the energy"),
        last_iterate(std::move(last)) {}
};

} // namespace superconv
