#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>
#include <memory>
#include <optional>
#include <vector>

#include "superconv/domain.hpp"
#include "superconv/field.hpp"
#include "superconv/potential.hpp"
#include "superconv/quadrature.hpp"

namespace superconv {

// Quadrature requirements implied by the data bound to a problem. The base
// policy integrates the quartic form u^3 v exactly; band-limited or
// non-polynomial data extends/doubles the rule so the only inexactness left
// is through genuinely non-resolvable data.
struct QuadPolicy {
  int data_bandwidth = 0;    // largest trig mode of band-limited data
  bool nonpoly_data = false; // double per-cell Gauss nodes

  static QuadPolicy for_data(const PotentialSpec& V) {
    return QuadPolicy{V.bandwidth(), V.non_polynomial()};
  }
  static QuadPolicy for_data(const PotentialSpec& V, const PotentialSpec& f) {
    return QuadPolicy{std::max(V.bandwidth(), f.bandwidth()),
                      V.non_polynomial() || f.non_polynomial()};
  }
};

// Weighted-mass operator (M_W u, v) = quadrature of W*u*v; dense for spectral
// bases (modes couple globally), sparse for FEM.
struct AssembledOp {
  std::optional<Eigen::MatrixXd> dense;
  std::optional<Eigen::SparseMatrix<double>> sparse;

  Eigen::VectorXd apply(const Eigen::VectorXd& v) const {
    if (dense) return (*dense) * v;
    return (*sparse) * v;
  }
  Eigen::MatrixXd to_dense() const {
    if (dense) return *dense;
    return Eigen::MatrixXd(*sparse);
  }
};

class Space;
using SpaceHandle = std::shared_ptr<const Space>;

// An assembled discrete space: basis, quadrature, mass/stiffness/X-Gram
// operators and their factorizations. Immutable after construction and safe
// to share across threads.
class Space {
 public:
  struct Backend;

  Space(DomainSpec domain, BasisTag basis, QuadPolicy policy);
  ~Space();
  Space(const Space&) = delete;
  Space& operator=(const Space&) = delete;

  const DomainSpec& domain() const { return domain_; }
  const BasisTag& basis() const { return basis_; }
  int dim() const { return dim_; }
  const QuadratureRule& quad() const { return quad_; }
  const QuadPolicy& quad_policy() const { return policy_; }

  const Eigen::SparseMatrix<double>& mass() const { return mass_; }
  const Eigen::SparseMatrix<double>& stiffness() const { return stiffness_; }
  const Eigen::SparseMatrix<double>& gram_x() const { return gram_x_; }

  // Optional potential bound at build time.
  const std::optional<AssembledOp>& potential_mass() const { return potential_mass_; }

  // Coefficients -> values / derivative values at the quadrature nodes.
  Eigen::VectorXd synth(const Eigen::VectorXd& coeffs) const;
  Eigen::VectorXd synth_deriv(const Eigen::VectorXd& coeffs) const;
  // Samples at quadrature nodes -> dual vector [(w, phi_i)_L2].
  Eigen::VectorXd analysis(const Eigen::VectorXd& samples) const;

  // Pointwise evaluation; cross-space plumbing and tests.
  double eval(const Eigen::VectorXd& coeffs, double x) const;
  double eval_deriv(const Eigen::VectorXd& coeffs, double x) const;

  // Basis functions with support at x: (index, value) and (index, d/dx value).
  void basis_at(double x, std::vector<std::pair<int, double>>& values,
                std::vector<std::pair<int, double>>& derivs) const;

  // Interior Lagrange node coordinates (FEM only).
  const Eigen::VectorXd& fem_nodes() const;

  Eigen::VectorXd solve_gram_x(const Eigen::VectorXd& rhs) const;
  Eigen::VectorXd solve_mass(const Eigen::VectorXd& rhs) const;

  // (M_W u, v) = quadrature of W*u*v for W sampled on this space's grid.
  AssembledOp weighted_mass(const Eigen::VectorXd& samples) const;

  // Diagonals used by iterative solvers.
  Eigen::VectorXd stiffness_diagonal() const;
  Eigen::VectorXd mass_diagonal() const;

  bool is_fourier() const { return basis_.family == BasisFamily::Fourier; }
  bool is_legendre() const { return basis_.family == BasisFamily::Legendre; }
  bool is_fem() const { return basis_.family == BasisFamily::FemLagrange; }

  // Assembles and caches M_V on this space.
  void bind_potential(const PotentialSpec& V);

 private:
  DomainSpec domain_;
  BasisTag basis_;
  QuadPolicy policy_;
  int dim_ = 0;
  QuadratureRule quad_;
  Eigen::SparseMatrix<double> mass_, stiffness_, gram_x_;
  std::optional<AssembledOp> potential_mass_;
  std::unique_ptr<const Backend> impl_;
  std::unique_ptr<Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>> gram_solver_;
  std::unique_ptr<Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>> mass_solver_;
};

SpaceHandle build_space(const DomainSpec& domain, const BasisTag& basis,
                        const QuadPolicy& policy = {});

// Builds with the quadrature policy implied by V and binds M_V.
SpaceHandle build_space(const DomainSpec& domain, const BasisTag& basis,
                        const PotentialSpec& V);

// ---- core-field operations on fields ----

double inner_x(const Space& s, const Field& u, const Field& v);
double inner_l2(const Space& s, const Field& u, const Field& v);
NormTriple norms(const Space& s, const Field& u);

// Pointwise samples of V at the space's quadrature nodes; rejects
// non-positive realised potentials.
Eigen::VectorXd synthesize_potential(const PotentialSpec& spec, const Space& s);

// (M_V u, v) = quadrature of V*u*v.
AssembledOp assemble_potential_mass(const Space& s, const PotentialSpec& V);
AssembledOp assemble_weighted_mass(const Space& s, const Eigen::VectorXd& samples);

// Solves (stiffness + M_W + sigma*mass) x = rhs for W given by samples.
// Direct factorization for Legendre/FEM, preconditioned CG with transform
// matvecs for Fourier.
class EllipticSolver {
 public:
  EllipticSolver(SpaceHandle s, Eigen::VectorXd W_samples, double sigma = 0.0);
  ~EllipticSolver();
  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;
  // False when a factorization pivot or CG curvature test showed the
  // operator is not positive definite; solve() results are then unusable.
  bool positive_definite() const { return spd_ && !cg_indefinite_; }

 private:
  SpaceHandle space_;
  Eigen::VectorXd w_;
  double sigma_;
  bool spd_ = true;
  Eigen::VectorXd precond_diag_; // fourier
  std::unique_ptr<Eigen::LDLT<Eigen::MatrixXd>> dense_;
  std::unique_ptr<Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>> sparse_;
  mutable bool cg_indefinite_ = false;
};

} // namespace superconv
