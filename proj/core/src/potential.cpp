#include "superconv/potential.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace superconv {

double PotentialSpec::eval(double x) const {
  double v = 0.0;
  switch (kind) {
    case PotentialKind::Const:
      v = value;
      break;
    case PotentialKind::TrigDecay: {
      double norm = 0.0;
      for (int k = 1; k <= cutoff; ++k) norm += std::pow(k, -(r + 0.5));
      const double c = v_min / (2.0 * norm);
      double sum = 0.0;
      for (int k = 1; k <= cutoff; ++k)
        sum += std::pow(k, -(r + 0.5)) * std::cos(2.0 * M_PI * k * x);
      v = v_min + c * sum;
      break;
    }
    case PotentialKind::Polynomial: {
      double acc = 0.0;
      for (auto it = poly_coeffs.rbegin(); it != poly_coeffs.rend(); ++it) acc = acc * x + *it;
      v = acc;
      break;
    }
    case PotentialKind::AbsPower:
      v = std::pow(std::abs(x), gamma);
      break;
  }
  return scale * v;
}

std::string PotentialSpec::describe() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind) {
    case PotentialKind::Const: os << "const:" << value; break;
    case PotentialKind::TrigDecay:
      os << "trig:r=" << r << ",K=" << cutoff << ",vmin=" << v_min;
      break;
    case PotentialKind::Polynomial: {
      os << "poly:";
      for (std::size_t i = 0; i < poly_coeffs.size(); ++i) {
        if (i) os << ",";
        os << poly_coeffs[i];
      }
      break;
    }
    case PotentialKind::AbsPower: os << "abspow:" << gamma; break;
  }
  if (scale != 1.0) os << ",scale=" << scale;
  return os.str();
}

namespace {

Eigen::VectorXd eval_on_nodes(const PotentialSpec& spec, const Eigen::VectorXd& nodes) {
  Eigen::VectorXd out(nodes.size());
  if (spec.kind == PotentialKind::TrigDecay) {
    std::vector<double> coeff(spec.cutoff + 1, 0.0);
    double norm = 0.0;
    for (int k = 1; k <= spec.cutoff; ++k) {
      coeff[k] = std::pow(k, -(spec.r + 0.5));
      norm += coeff[k];
    }
    const double c = spec.v_min / (2.0 * norm);
    for (Eigen::Index j = 0; j < nodes.size(); ++j) {
      // cos(k t) via plane rotation; error stays O(k*eps) and is damped by
      // the decaying coefficients.
      const double t = 2.0 * M_PI * nodes[j];
      const double ct = std::cos(t), st = std::sin(t);
      double ck = 1.0, sk = 0.0;
      double sum = 0.0;
      for (int k = 1; k <= spec.cutoff; ++k) {
        const double cn = ck * ct - sk * st;
        const double sn = sk * ct + ck * st;
        ck = cn;
        sk = sn;
        sum += coeff[k] * ck;
      }
      out[j] = spec.scale * (spec.v_min + c * sum);
    }
    return out;
  }
  for (Eigen::Index j = 0; j < nodes.size(); ++j) out[j] = spec.eval(nodes[j]);
  return out;
}

} // namespace

Eigen::VectorXd synthesize_samples(const PotentialSpec& spec, const Eigen::VectorXd& nodes) {
  return eval_on_nodes(spec, nodes);
}

Eigen::VectorXd synthesize_potential(const PotentialSpec& spec, const Eigen::VectorXd& nodes) {
  Eigen::VectorXd samples = eval_on_nodes(spec, nodes);
  const double vmin = samples.minCoeff();
  if (vmin <= 0.0) {
    std::ostringstream os;
    os << "potential is not positive on the quadrature grid (min sample " << vmin << ")";
    throw std::domain_error(os.str());
  }
  return samples;
}

} // namespace superconv
