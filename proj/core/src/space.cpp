#include "superconv/space.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <stdexcept>

#include "space_backend.hpp"
#include "superconv/log.hpp"

namespace superconv {

const Eigen::VectorXd& Space::Backend::fem_nodes() const {
  throw std::logic_error("lagrange nodes are only defined for FEM spaces");
}

Space::Space(DomainSpec domain, BasisTag basis, QuadPolicy policy)
    : domain_(domain), basis_(basis), policy_(policy) {
  validate_basis(domain_, basis_);
  switch (basis_.family) {
    case BasisFamily::Fourier:
      impl_ = make_fourier_backend(basis_.size, policy_);
      break;
    case BasisFamily::Legendre:
      impl_ = make_legendre_backend(basis_.size, policy_);
      break;
    case BasisFamily::FemLagrange:
      impl_ = make_fem_backend(basis_.size, basis_.fem_degree, policy_);
      break;
  }
  dim_ = basis_.dim();
  quad_ = impl_->quad;
  mass_ = impl_->mass;
  stiffness_ = impl_->stiffness;
  gram_x_ = (domain_.x_inner() == XInner::GradOnly) ? stiffness_
                                                    : Eigen::SparseMatrix<double>(mass_ + stiffness_);

  gram_solver_ = std::make_unique<Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>>();
  gram_solver_->compute(gram_x_);
  if (gram_solver_->info() != Eigen::Success)
    throw std::runtime_error("singular X-Gram system for " + basis_.describe());
  mass_solver_ = std::make_unique<Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>>();
  mass_solver_->compute(mass_);
  if (mass_solver_->info() != Eigen::Success)
    throw std::runtime_error("singular mass matrix for " + basis_.describe());
}

Space::~Space() = default;

Eigen::VectorXd Space::synth(const Eigen::VectorXd& coeffs) const { return impl_->synth(coeffs); }
Eigen::VectorXd Space::synth_deriv(const Eigen::VectorXd& coeffs) const {
  return impl_->synth_deriv(coeffs);
}
Eigen::VectorXd Space::analysis(const Eigen::VectorXd& samples) const {
  return impl_->analysis(samples);
}
double Space::eval(const Eigen::VectorXd& coeffs, double x) const { return impl_->eval(coeffs, x); }
double Space::eval_deriv(const Eigen::VectorXd& coeffs, double x) const {
  return impl_->eval_deriv(coeffs, x);
}
void Space::basis_at(double x, std::vector<std::pair<int, double>>& values,
                     std::vector<std::pair<int, double>>& derivs) const {
  impl_->basis_at(x, values, derivs);
}
const Eigen::VectorXd& Space::fem_nodes() const { return impl_->fem_nodes(); }

Eigen::VectorXd Space::solve_gram_x(const Eigen::VectorXd& rhs) const {
  return gram_solver_->solve(rhs);
}
Eigen::VectorXd Space::solve_mass(const Eigen::VectorXd& rhs) const {
  return mass_solver_->solve(rhs);
}

Eigen::VectorXd Space::stiffness_diagonal() const { return stiffness_.diagonal(); }
Eigen::VectorXd Space::mass_diagonal() const { return mass_.diagonal(); }

void Space::bind_potential(const PotentialSpec& V) {
  potential_mass_ = assemble_potential_mass(*this, V);
}

SpaceHandle build_space(const DomainSpec& domain, const BasisTag& basis,
                        const QuadPolicy& policy) {
  return std::make_shared<const Space>(domain, basis, policy);
}

SpaceHandle build_space(const DomainSpec& domain, const BasisTag& basis,
                        const PotentialSpec& V) {
  auto s = std::make_shared<Space>(domain, basis, QuadPolicy::for_data(V));
  s->bind_potential(V);
  return s;
}

namespace {

void require_same_basis(const Space& s, const Field& u) {
  if (!(u.basis == s.basis()))
    throw std::invalid_argument("field basis does not match the space");
}

} // namespace

double inner_x(const Space& s, const Field& u, const Field& v) {
  require_same_basis(s, u);
  require_same_basis(s, v);
  return u.coeffs.dot(s.gram_x() * v.coeffs);
}

double inner_l2(const Space& s, const Field& u, const Field& v) {
  require_same_basis(s, u);
  require_same_basis(s, v);
  return u.coeffs.dot(s.mass() * v.coeffs);
}

NormTriple norms(const Space& s, const Field& u) {
  require_same_basis(s, u);
  NormTriple t;
  const double l2sq = u.coeffs.dot(s.mass() * u.coeffs);
  const double h1semi = u.coeffs.dot(s.stiffness() * u.coeffs);
  t.l2 = std::sqrt(std::max(0.0, l2sq));
  t.h1 = std::sqrt(std::max(0.0, l2sq + h1semi));
  if (s.is_fourier()) {
    // Mode-weighted H2: sum (1 + w^2 + w^4) |c|^2 with w = 2 pi k.
    double acc = u.coeffs[0] * u.coeffs[0];
    for (int k = 1; k <= s.basis().size; ++k) {
      const double w2 = (2.0 * M_PI * k) * (2.0 * M_PI * k);
      const double wgt = 1.0 + w2 + w2 * w2;
      acc += wgt * (u.coeffs[2 * k - 1] * u.coeffs[2 * k - 1] +
                    u.coeffs[2 * k] * u.coeffs[2 * k]);
    }
    t.h2 = std::sqrt(acc);
  }
  return t;
}

Eigen::VectorXd synthesize_potential(const PotentialSpec& spec, const Space& s) {
  return synthesize_potential(spec, s.quad().nodes);
}

AssembledOp Space::weighted_mass(const Eigen::VectorXd& samples) const {
  if (samples.size() != quad_.size())
    throw std::invalid_argument("weighted mass samples must live on the space quadrature");
  return impl_->weighted_mass(samples);
}

AssembledOp assemble_weighted_mass(const Space& s, const Eigen::VectorXd& samples) {
  return s.weighted_mass(samples);
}

AssembledOp assemble_potential_mass(const Space& s, const PotentialSpec& V) {
  return assemble_weighted_mass(s, synthesize_potential(V, s));
}

// ---------------------------------------------------------------------------

EllipticSolver::EllipticSolver(SpaceHandle s, Eigen::VectorXd W_samples, double sigma)
    : space_(std::move(s)), w_(std::move(W_samples)), sigma_(sigma) {
  const Space& S = *space_;
  if (w_.size() != S.quad().size())
    throw std::invalid_argument("weight samples must live on the space quadrature");
  if (S.is_fourier()) {
    const double wmean = S.quad().weights.dot(w_);
    precond_diag_ = S.stiffness_diagonal().array() + std::max(wmean, 1e-8) + sigma_;
    if ((precond_diag_.array() <= 0.0).any())
      precond_diag_ = S.stiffness_diagonal().array() + 1.0;
    return;
  }
  AssembledOp mw = assemble_weighted_mass(S, w_);
  if (S.is_legendre()) {
    Eigen::MatrixXd a = Eigen::MatrixXd(S.stiffness()) + *mw.dense;
    if (sigma_ != 0.0) a += sigma_ * Eigen::MatrixXd(S.mass());
    dense_ = std::make_unique<Eigen::LDLT<Eigen::MatrixXd>>(a);
    if (dense_->info() != Eigen::Success || (dense_->vectorD().array() <= 0.0).any())
      spd_ = false;
  } else {
    Eigen::SparseMatrix<double> a = S.stiffness() + *mw.sparse;
    if (sigma_ != 0.0) a += Eigen::SparseMatrix<double>(sigma_ * S.mass());
    sparse_ = std::make_unique<Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>>();
    sparse_->compute(a);
    if (sparse_->info() != Eigen::Success || (sparse_->vectorD().array() <= 0.0).any())
      spd_ = false;
  }
}

EllipticSolver::~EllipticSolver() = default;

Eigen::VectorXd EllipticSolver::apply(const Eigen::VectorXd& x) const {
  const Space& S = *space_;
  Eigen::VectorXd y = S.stiffness() * x;
  y += S.analysis(w_.cwiseProduct(S.synth(x)));
  if (sigma_ != 0.0) y += sigma_ * (S.mass() * x);
  return y;
}

Eigen::VectorXd EllipticSolver::solve(const Eigen::VectorXd& rhs) const {
  if (dense_) return dense_->solve(rhs);
  if (sparse_) return sparse_->solve(rhs);

  // Preconditioned CG with transform-based matvecs.
  const int n = static_cast<int>(rhs.size());
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd r = rhs;
  Eigen::VectorXd z = r.cwiseQuotient(precond_diag_);
  Eigen::VectorXd p = z;
  double rz = r.dot(z);
  const double rhs_norm = rhs.norm();
  if (rhs_norm == 0.0) return x;
  const double tol = 1e-14 * rhs_norm;
  const int max_iter = 40 * n + 100;
  for (int it = 0; it < max_iter; ++it) {
    Eigen::VectorXd ap = apply(p);
    const double pap = p.dot(ap);
    if (pap <= 0.0) {
      cg_indefinite_ = true;
      break;
    }
    const double alpha = rz / pap;
    x += alpha * p;
    r -= alpha * ap;
    if (r.norm() <= tol) break;
    z = r.cwiseQuotient(precond_diag_);
    const double rz_new = r.dot(z);
    p = z + (rz_new / rz) * p;
    rz = rz_new;
  }
  return x;
}

} // namespace superconv
