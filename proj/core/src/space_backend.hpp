#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <memory>
#include <vector>

#include "superconv/space.hpp"

namespace superconv {

// Family-specific machinery behind Space. Implementations are immutable
// after construction.
struct Space::Backend {
  virtual ~Backend() = default;

  QuadratureRule quad;
  Eigen::SparseMatrix<double> mass, stiffness;

  virtual Eigen::VectorXd synth(const Eigen::VectorXd& coeffs) const = 0;
  virtual Eigen::VectorXd synth_deriv(const Eigen::VectorXd& coeffs) const = 0;
  virtual Eigen::VectorXd analysis(const Eigen::VectorXd& samples) const = 0;
  virtual double eval(const Eigen::VectorXd& coeffs, double x) const = 0;
  virtual double eval_deriv(const Eigen::VectorXd& coeffs, double x) const = 0;
  virtual void basis_at(double x, std::vector<std::pair<int, double>>& values,
                        std::vector<std::pair<int, double>>& derivs) const = 0;
  // Dense weighted mass for spectral families; FEM overrides the sparse hook.
  virtual AssembledOp weighted_mass(const Eigen::VectorXd& samples) const = 0;
  virtual const Eigen::VectorXd& fem_nodes() const;
};

std::unique_ptr<const Space::Backend> make_fourier_backend(int n, const QuadPolicy& policy);
std::unique_ptr<const Space::Backend> make_legendre_backend(int n, const QuadPolicy& policy);
std::unique_ptr<const Space::Backend> make_fem_backend(int elements, int degree,
                                                       const QuadPolicy& policy);

} // namespace superconv
