#include "superconv/transfer.hpp"

#include <stdexcept>
#include <vector>

namespace superconv {

namespace {

void require_nested(const Space& from, const Space& to) {
  if (from.basis().family != to.basis().family)
    throw std::invalid_argument("transfer requires spaces of the same family");
  switch (from.basis().family) {
    case BasisFamily::Fourier:
    case BasisFamily::Legendre:
      if (to.basis().size < from.basis().size)
        throw std::invalid_argument("transfer target must be at least as fine");
      break;
    case BasisFamily::FemLagrange:
      if (to.basis().fem_degree != from.basis().fem_degree)
        throw std::invalid_argument("fem transfer requires equal polynomial degree");
      if (to.basis().size % from.basis().size != 0)
        throw std::invalid_argument("fem transfer requires a nested (multiple) mesh");
      break;
  }
}

bool spectral(const Space& s) { return !s.is_fem(); }

} // namespace

TransferMap TransferMap::between(SpaceHandle from, SpaceHandle to) {
  require_nested(*from, *to);
  TransferMap map;
  map.matrix.resize(to->dim(), from->dim());
  std::vector<Eigen::Triplet<double>> t;
  if (spectral(*from)) {
    for (int i = 0; i < from->dim(); ++i) t.emplace_back(i, i, 1.0);
  } else {
    // Coarse basis evaluated at fine Lagrange nodes.
    const Eigen::VectorXd& fine_nodes = to->fem_nodes();
    std::vector<std::pair<int, double>> vals, ders;
    for (int i = 0; i < to->dim(); ++i) {
      from->basis_at(fine_nodes[i], vals, ders);
      for (const auto& [j, v] : vals)
        if (v != 0.0) t.emplace_back(i, j, v);
    }
  }
  map.matrix.setFromTriplets(t.begin(), t.end());
  map.from = std::move(from);
  map.to = std::move(to);
  return map;
}

Field prolong(const TransferMap& map, const Field& u) {
  if (!(u.basis == map.from->basis()))
    throw std::invalid_argument("field does not live on the transfer source space");
  Eigen::VectorXd c = Eigen::VectorXd::Zero(map.to->dim());
  if (spectral(*map.from)) {
    c.head(u.coeffs.size()) = u.coeffs;
  } else {
    c = map.matrix * u.coeffs;
  }
  return Field(map.to->basis(), std::move(c));
}

Field prolong(const SpaceHandle& from, const SpaceHandle& to, const Field& u) {
  return prolong(TransferMap::between(from, to), u);
}

namespace {

enum class Metric { X, L2 };

Field project_impl(const SpaceHandle& target, const SpaceHandle& source, const Field& u,
                   Metric metric) {
  if (!(u.basis == source->basis()))
    throw std::invalid_argument("field does not live on the stated source space");
  if (target->basis().family != source->basis().family)
    throw std::invalid_argument("projection requires spaces of the same family");

  if (spectral(*target)) {
    if (source->basis().size < target->basis().size)
      throw std::invalid_argument("projection source must be at least as fine");
    const bool diagonal_gram =
        target->is_fourier() || (target->is_legendre() && metric == Metric::X);
    if (diagonal_gram) {
      // Nested modal bases with a diagonal Gram in the shared basis:
      // projection is exact coefficient truncation.
      Eigen::VectorXd c = u.coeffs.head(target->dim());
      return Field(target->basis(), std::move(c));
    }
    // Legendre L2 projection: the shared basis functions make the dual data
    // a plain restriction, the mass system still has to be solved.
    Eigen::VectorXd rhs = (source->mass() * u.coeffs).head(target->dim());
    Eigen::VectorXd c = target->solve_mass(rhs);
    if (!c.allFinite()) throw std::runtime_error("projection Gram solve failed");
    return Field(target->basis(), std::move(c));
  }

  TransferMap map = TransferMap::between(target, source);
  const Eigen::SparseMatrix<double>& g =
      metric == Metric::X ? source->gram_x() : source->mass();
  Eigen::VectorXd rhs = map.matrix.transpose() * (g * u.coeffs);
  Eigen::VectorXd c = metric == Metric::X ? target->solve_gram_x(rhs) : target->solve_mass(rhs);
  if (!c.allFinite()) throw std::runtime_error("projection Gram solve failed");
  return Field(target->basis(), std::move(c));
}

} // namespace

Field project_x(const SpaceHandle& target, const SpaceHandle& source, const Field& u) {
  return project_impl(target, source, u, Metric::X);
}

Field project_l2(const SpaceHandle& target, const SpaceHandle& source, const Field& u) {
  return project_impl(target, source, u, Metric::L2);
}

Field interpolate_fem(const Space& space, const std::function<double(double)>& g) {
  if (!space.is_fem()) throw std::invalid_argument("nodal interpolation needs an FEM space");
  const Eigen::VectorXd& nodes = space.fem_nodes();
  Eigen::VectorXd c(space.dim());
  for (int i = 0; i < space.dim(); ++i) c[i] = g(nodes[i]);
  return Field(space.basis(), std::move(c));
}

} // namespace superconv
