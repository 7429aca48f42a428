#pragma once

#include <stdexcept>
#include <string>

namespace superconv {

// Problem setting: Dirichlet interval (-1,1) or unit torus cell (0,1).
enum class Setting { One, Two };

// Inner product of the ambient space X: gradient-only (H1_0 seminorm) or full H1.
enum class XInner { GradOnly, FullH1 };

struct DomainSpec {
  Setting setting = Setting::Two;

  static DomainSpec make(Setting s) { return DomainSpec{s}; }

  double lo() const { return setting == Setting::One ? -1.0 : 0.0; }
  double hi() const { return 1.0; }
  double length() const { return hi() - lo(); }
  XInner x_inner() const {
    return setting == Setting::One ? XInner::GradOnly : XInner::FullH1;
  }
};

enum class BasisFamily { Fourier, Legendre, FemLagrange };

inline const char* to_string(BasisFamily f) {
  switch (f) {
    case BasisFamily::Fourier: return "fourier";
    case BasisFamily::Legendre: return "legendre";
    case BasisFamily::FemLagrange: return "fem";
  }
  return "?";
}

// Identifies a discrete space: family, resolution, and FEM polynomial degree.
// `size` is N (max wave number / max polynomial degree) for spectral families
// and the element count M for FEM.
struct BasisTag {
  BasisFamily family = BasisFamily::Fourier;
  int size = 0;
  int fem_degree = 1; // used only by FemLagrange, 1..3

  static BasisTag fourier(int n) { return BasisTag{BasisFamily::Fourier, n, 1}; }
  static BasisTag legendre(int n) { return BasisTag{BasisFamily::Legendre, n, 1}; }
  static BasisTag fem(int elements, int degree) {
    return BasisTag{BasisFamily::FemLagrange, elements, degree};
  }

  bool operator==(const BasisTag&) const = default;

  // Number of real degrees of freedom implied by the tag.
  int dim() const {
    switch (family) {
      case BasisFamily::Fourier: return 2 * size + 1;
      case BasisFamily::Legendre: return size - 1;
      case BasisFamily::FemLagrange: return fem_degree * size - 1;
    }
    return 0;
  }

  // Mesh/resolution parameter delta: h for FEM, 1/N for spectral.
  double delta() const {
    if (family == BasisFamily::FemLagrange) return 2.0 / static_cast<double>(size);
    return 1.0 / static_cast<double>(size);
  }

  std::string describe() const {
    std::string s = to_string(family);
    if (family == BasisFamily::FemLagrange)
      s += " P" + std::to_string(fem_degree) + " M=" + std::to_string(size);
    else
      s += " N=" + std::to_string(size);
    return s;
  }
};

// Validates basis/setting compatibility and minimum sizes.
inline void validate_basis(const DomainSpec& domain, const BasisTag& tag) {
  switch (tag.family) {
    case BasisFamily::Fourier:
      if (domain.setting != Setting::Two)
        throw std::invalid_argument("fourier basis requires the torus setting");
      if (tag.size < 0) throw std::invalid_argument("fourier size must be >= 0");
      break;
    case BasisFamily::Legendre:
      if (domain.setting != Setting::One)
        throw std::invalid_argument("legendre basis requires the Dirichlet setting");
      if (tag.size < 2) throw std::invalid_argument("legendre size must be >= 2");
      break;
    case BasisFamily::FemLagrange:
      if (domain.setting != Setting::One)
        throw std::invalid_argument("fem basis requires the Dirichlet setting");
      if (tag.size < 2) throw std::invalid_argument("fem element count must be >= 2");
      if (tag.fem_degree < 1 || tag.fem_degree > 3)
        throw std::invalid_argument("fem degree must be in {1,2,3}");
      break;
  }
}

} // namespace superconv
