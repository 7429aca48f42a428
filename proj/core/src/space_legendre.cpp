#include <cmath>

#include "space_backend.hpp"

namespace superconv {

namespace {

// Legendre values and derivatives up to degree nmax at x, by recurrence.
void legendre_all(int nmax, double x, std::vector<double>& p, std::vector<double>& dp) {
  p.assign(nmax + 1, 0.0);
  dp.assign(nmax + 1, 0.0);
  p[0] = 1.0;
  dp[0] = 0.0;
  if (nmax >= 1) {
    p[1] = x;
    dp[1] = 1.0;
  }
  for (int k = 2; k <= nmax; ++k) {
    p[k] = ((2.0 * k - 1.0) * x * p[k - 1] - (k - 1.0) * p[k - 2]) / k;
    dp[k] = dp[k - 2] + (2.0 * k - 1.0) * p[k - 1];
  }
}

// Boundary-adapted modal basis phi_k = (L_k - L_{k+2})/sqrt(4k+6) on (-1,1),
// k = 0..N-2; vanishes at +-1 and the gradient Gram is the identity.
struct LegendreBackend final : Space::Backend {
  int n = 0;
  int dim = 0;
  Eigen::MatrixXd bt;  // quad x dim basis values
  Eigen::MatrixXd bdt; // quad x dim basis derivative values

  explicit LegendreBackend(int n_, const QuadPolicy& policy) : n(n_), dim(n_ - 1) {
    // Two panels split at 0 keep |x|-type data exactly integrable; node count
    // covers the quartic form, doubled for non-polynomial data.
    int per_panel = 2 * n + 2;
    if (policy.nonpoly_data) per_panel *= 2;
    quad = composite_gauss(per_panel, {{-1.0, 0.0}, {0.0, 1.0}});

    const int q = quad.size();
    bt.resize(q, dim);
    bdt.resize(q, dim);
    std::vector<double> p, dp;
    for (int j = 0; j < q; ++j) {
      legendre_all(n, quad.nodes[j], p, dp);
      for (int k = 0; k < dim; ++k) {
        const double s = 1.0 / std::sqrt(4.0 * k + 6.0);
        bt(j, k) = s * (p[k] - p[k + 2]);
        bdt(j, k) = s * (dp[k] - dp[k + 2]);
      }
    }

    Eigen::MatrixXd wb = quad.weights.asDiagonal() * bt;
    Eigen::MatrixXd wdb = quad.weights.asDiagonal() * bdt;
    Eigen::MatrixXd md = bt.transpose() * wb;
    Eigen::MatrixXd kd = bdt.transpose() * wdb;
    mass = md.sparseView(1.0, 0.0); // keep every entry
    stiffness = kd.sparseView(1.0, 0.0);
  }

  Eigen::VectorXd synth(const Eigen::VectorXd& c) const override { return bt * c; }
  Eigen::VectorXd synth_deriv(const Eigen::VectorXd& c) const override { return bdt * c; }
  Eigen::VectorXd analysis(const Eigen::VectorXd& samples) const override {
    return bt.transpose() * quad.weights.cwiseProduct(samples);
  }

  double eval(const Eigen::VectorXd& c, double x) const override {
    std::vector<double> p, dp;
    legendre_all(n, x, p, dp);
    double v = 0.0;
    for (int k = 0; k < dim; ++k)
      v += c[k] * (p[k] - p[k + 2]) / std::sqrt(4.0 * k + 6.0);
    return v;
  }
  double eval_deriv(const Eigen::VectorXd& c, double x) const override {
    std::vector<double> p, dp;
    legendre_all(n, x, p, dp);
    double v = 0.0;
    for (int k = 0; k < dim; ++k)
      v += c[k] * (dp[k] - dp[k + 2]) / std::sqrt(4.0 * k + 6.0);
    return v;
  }

  void basis_at(double x, std::vector<std::pair<int, double>>& values,
                std::vector<std::pair<int, double>>& derivs) const override {
    values.clear();
    derivs.clear();
    std::vector<double> p, dp;
    legendre_all(n, x, p, dp);
    for (int k = 0; k < dim; ++k) {
      const double s = 1.0 / std::sqrt(4.0 * k + 6.0);
      values.emplace_back(k, s * (p[k] - p[k + 2]));
      derivs.emplace_back(k, s * (dp[k] - dp[k + 2]));
    }
  }

  AssembledOp weighted_mass(const Eigen::VectorXd& samples) const override {
    AssembledOp op;
    op.dense = bt.transpose() * (quad.weights.cwiseProduct(samples)).asDiagonal() * bt;
    return op;
  }
};

} // namespace

std::unique_ptr<const Space::Backend> make_legendre_backend(int n, const QuadPolicy& policy) {
  return std::make_unique<LegendreBackend>(n, policy);
}

} // namespace superconv
