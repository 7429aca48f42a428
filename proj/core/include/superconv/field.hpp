#pragma once

#include <Eigen/Core>
#include <cmath>
#include <optional>
#include <stdexcept>

#include "superconv/domain.hpp"

namespace superconv {

// A function represented by its coefficient vector in a tagged basis.
// Fourier: [a_0, a_1, b_1, ..., a_N, b_N] against {1, sqrt(2)cos(2pi k x),
// sqrt(2)sin(2pi k x)} (orthonormal in L2(0,1)).
// Legendre: modal coefficients in the boundary-adapted basis
// phi_k = (L_k - L_{k+2})/sqrt(4k+6), k = 0..N-2.
// FEM: interior nodal values, Dirichlet endpoints omitted.
struct Field {
  BasisTag basis;
  Eigen::VectorXd coeffs;

  Field() = default;
  Field(BasisTag tag, Eigen::VectorXd c) : basis(tag), coeffs(std::move(c)) {
    if (coeffs.size() != basis.dim())
      throw std::invalid_argument("field coefficient count does not match basis dimension");
    if (!coeffs.allFinite())
      throw std::invalid_argument("field coefficients must be finite");
  }

  static Field zero(BasisTag tag) {
    return Field(tag, Eigen::VectorXd::Zero(tag.dim()));
  }
};

struct NormTriple {
  double l2 = 0.0;
  double h1 = 0.0;
  std::optional<double> h2; // mode-weighted, Fourier only
};

} // namespace superconv
