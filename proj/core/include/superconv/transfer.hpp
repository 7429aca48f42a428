#pragma once

#include <Eigen/SparseCore>
#include <functional>

#include "superconv/space.hpp"

namespace superconv {

// Exact embedding between nested spaces of the same family (coarse -> fine).
// Spectral families zero-pad; FEM re-expresses coarse piecewise polynomials
// on the refined mesh.
struct TransferMap {
  SpaceHandle from;
  SpaceHandle to;
  Eigen::SparseMatrix<double> matrix; // fine_dim x coarse_dim

  static TransferMap between(SpaceHandle from, SpaceHandle to);
};

Field prolong(const TransferMap& map, const Field& u);
Field prolong(const SpaceHandle& from, const SpaceHandle& to, const Field& u);

// X-orthogonal projection of a field living on a finer nested space onto
// `target`: the unique X-norm best approximation, characterised by
// inner_x(u - Pu, phi_i) = 0 for every basis function of the target.
Field project_x(const SpaceHandle& target, const SpaceHandle& source, const Field& u);

// L2-orthogonal analogue.
Field project_l2(const SpaceHandle& target, const SpaceHandle& source, const Field& u);

// Nodal interpolant onto an FEM space; exact on members of the space.
Field interpolate_fem(const Space& space, const std::function<double(double)>& g);

} // namespace superconv
