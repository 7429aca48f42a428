#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "superconv/domain.hpp"

namespace superconv {

enum class PotentialKind { Const, TrigDecay, Polynomial, AbsPower };

// Closed-form data function used for potentials V and source terms f.
// TrigDecay realises a function with algebraic coefficient decay,
//   v_min + c * sum_{k=1..K} k^{-(r+1/2)} cos(2 pi k x),
// with c = v_min / (2 sum k^{-(r+1/2)}), so the minimum stays >= v_min/2.
// `scale` multiplies the realised samples (useful for source amplitudes).
struct PotentialSpec {
  PotentialKind kind = PotentialKind::Const;
  double value = 1.0;                // Const
  double r = 2.0;                    // TrigDecay regularity exponent
  int cutoff = 16;                   // TrigDecay mode cutoff K
  double v_min = 1.0;                // TrigDecay floor
  std::vector<double> poly_coeffs;   // Polynomial, ascending powers
  double gamma = 1.0;                // AbsPower exponent
  double scale = 1.0;

  static PotentialSpec constant(double v) {
    PotentialSpec s;
    s.kind = PotentialKind::Const;
    s.value = v;
    return s;
  }
  static PotentialSpec trig_decay(double r, int cutoff, double v_min, double scale = 1.0) {
    PotentialSpec s;
    s.kind = PotentialKind::TrigDecay;
    s.r = r;
    s.cutoff = cutoff;
    s.v_min = v_min;
    s.scale = scale;
    return s;
  }
  static PotentialSpec polynomial(std::vector<double> coeffs, double scale = 1.0) {
    PotentialSpec s;
    s.kind = PotentialKind::Polynomial;
    s.poly_coeffs = std::move(coeffs);
    s.scale = scale;
    return s;
  }
  static PotentialSpec abs_power(double gamma, double scale = 1.0) {
    PotentialSpec s;
    s.kind = PotentialKind::AbsPower;
    s.gamma = gamma;
    s.scale = scale;
    return s;
  }

  // Trigonometric bandwidth of the realised function, 0 if none / not
  // band-limited. Used to size Fourier quadrature so integrals against
  // band-limited data stay exact.
  int bandwidth() const { return kind == PotentialKind::TrigDecay ? cutoff : 0; }

  // True when per-cell polynomial quadrature cannot integrate products with
  // this function exactly (triggers the node-doubling policy).
  bool non_polynomial() const {
    switch (kind) {
      case PotentialKind::Const: return false;
      case PotentialKind::Polynomial: return false;
      case PotentialKind::TrigDecay: return true;
      case PotentialKind::AbsPower: return gamma != std::floor(gamma);
    }
    return true;
  }

  double eval(double x) const;
  std::string describe() const;
};

// Pointwise samples of V at the quadrature nodes of the space that produced
// them; the sampled-at-quadrature currency for data functions.
Eigen::VectorXd synthesize_samples(const PotentialSpec& spec, const Eigen::VectorXd& nodes);

// As synthesize_samples, but enforces positivity of the realised potential.
// Throws std::domain_error naming the minimum sample on violation.
Eigen::VectorXd synthesize_potential(const PotentialSpec& spec, const Eigen::VectorXd& nodes);

} // namespace superconv
