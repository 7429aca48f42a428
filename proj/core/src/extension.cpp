#include "superconv/extension.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "superconv/fft.hpp"
#include "superconv/quadrature.hpp"
#include "superconv/space.hpp"

namespace superconv {

namespace {
constexpr double kOmega = M_PI / 2.0; // fundamental frequency of the period-4 torus
}

double ExtendedField::eval(double x) const {
  const double t = kOmega * (x + 1.0);
  double v = cos_coeffs[0];
  for (int k = 1; k <= resolution; ++k)
    v += cos_coeffs[k] * std::cos(k * t) + sin_coeffs[k] * std::sin(k * t);
  return v;
}

double ExtendedField::eval_deriv(double x) const {
  const double t = kOmega * (x + 1.0);
  double v = 0.0;
  for (int k = 1; k <= resolution; ++k) {
    const double w = kOmega * k;
    v += w * (-cos_coeffs[k] * std::sin(k * t) + sin_coeffs[k] * std::cos(k * t));
  }
  return v;
}

double odd_extension_value(const std::function<double(double)>& g, double x) {
  // Reduce to the fundamental cell [-1,3).
  double t = std::fmod(x + 1.0, 4.0);
  if (t < 0.0) t += 4.0;
  t -= 1.0;
  if (t <= 1.0) return g(t);
  return -g(2.0 - t);
}

ExtendedField odd_extend(const std::function<double(double)>& g, int resolution) {
  if (resolution < 1) throw std::invalid_argument("extension resolution must be >= 1");
  if (std::abs(g(-1.0)) > 1e-10 || std::abs(g(1.0)) > 1e-10)
    throw std::domain_error("extension data must vanish at the interval endpoints");

  const int grid = next_pow2(8 * resolution);
  std::vector<std::complex<double>> f(grid);
  for (int j = 0; j < grid; ++j) {
    const double x = -1.0 + 4.0 * static_cast<double>(j) / grid;
    f[j] = {odd_extension_value(g, x), 0.0};
  }
  fft(f, /*inverse=*/false);

  ExtendedField out;
  out.resolution = resolution;
  out.cos_coeffs = Eigen::VectorXd::Zero(resolution + 1);
  out.sin_coeffs = Eigen::VectorXd::Zero(resolution + 1);
  out.cos_coeffs[0] = f[0].real() / grid;
  for (int k = 1; k <= resolution; ++k) {
    out.cos_coeffs[k] = 2.0 * f[k].real() / grid;
    out.sin_coeffs[k] = -2.0 * f[k].imag() / grid;
  }
  return out;
}

ExtendedField solve_poisson_periodic(const ExtendedField& rhs) {
  if (std::abs(rhs.mean()) > 1e-10)
    throw std::domain_error("periodic Poisson data must have zero mean");
  ExtendedField u;
  u.resolution = rhs.resolution;
  u.cos_coeffs = Eigen::VectorXd::Zero(rhs.resolution + 1);
  u.sin_coeffs = Eigen::VectorXd::Zero(rhs.resolution + 1);
  for (int k = 1; k <= rhs.resolution; ++k) {
    const double w2 = (kOmega * k) * (kOmega * k);
    u.cos_coeffs[k] = rhs.cos_coeffs[k] / w2;
    u.sin_coeffs[k] = rhs.sin_coeffs[k] / w2;
  }
  return u;
}

ExtendedField solve_dirichlet_via_extension(const std::function<double(double)>& g,
                                            int resolution) {
  return solve_poisson_periodic(odd_extend(g, resolution));
}

double dirichlet_agreement_h1(const std::function<double(double)>& g, int extension_resolution,
                              int legendre_degree) {
  const ExtendedField u_per = solve_dirichlet_via_extension(g, extension_resolution);

  // Direct Legendre solve of -u'' = g: the gradient Gram system with the
  // plain L2 load vector.
  auto space = build_space(DomainSpec::make(Setting::One), BasisTag::legendre(legendre_degree),
                           QuadPolicy{0, true});
  Eigen::VectorXd gs(space->quad().size());
  for (int j = 0; j < space->quad().size(); ++j) gs[j] = g(space->quad().nodes[j]);
  const Eigen::VectorXd c = space->solve_gram_x(space->analysis(gs));

  // H1 distance on (-1,1) by quadrature.
  QuadratureRule rule = composite_gauss(256, {{-1.0, 0.0}, {0.0, 1.0}});
  double acc = 0.0;
  for (int j = 0; j < rule.size(); ++j) {
    const double x = rule.nodes[j];
    const double dv = space->eval(c, x) - u_per.eval(x);
    const double dd = space->eval_deriv(c, x) - u_per.eval_deriv(x);
    acc += rule.weights[j] * (dv * dv + dd * dd);
  }
  return std::sqrt(std::max(0.0, acc));
}

} // namespace superconv
