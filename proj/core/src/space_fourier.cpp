#include <cmath>
#include <complex>

#include "space_backend.hpp"
#include "superconv/fft.hpp"

namespace superconv {

namespace {

// Coefficient layout: [a_0, a_1, b_1, ..., a_N, b_N] against the orthonormal
// basis {1, sqrt(2)cos(2 pi k x), sqrt(2)sin(2 pi k x)} on the unit cell.
// Mass is the identity; stiffness is diag((2 pi k)^2), repeated per cos/sin.
struct FourierBackend final : Space::Backend {
  int n = 0;
  int grid = 0;

  explicit FourierBackend(int n_, const QuadPolicy& policy) : n(n_) {
    // Exact for the quartic form (degree 4N) and for products with
    // band-limited data (degree bandwidth + 2N).
    const int need = std::max({4 * n + 2, 2 * n + policy.data_bandwidth + 1, 8});
    grid = next_pow2(need);
    quad = torus_rule(grid);

    const int dim = 2 * n + 1;
    mass.resize(dim, dim);
    stiffness.resize(dim, dim);
    std::vector<Eigen::Triplet<double>> mt, kt;
    mt.emplace_back(0, 0, 1.0);
    kt.emplace_back(0, 0, 0.0);
    for (int k = 1; k <= n; ++k) {
      const double w2 = (2.0 * M_PI * k) * (2.0 * M_PI * k);
      mt.emplace_back(2 * k - 1, 2 * k - 1, 1.0);
      mt.emplace_back(2 * k, 2 * k, 1.0);
      kt.emplace_back(2 * k - 1, 2 * k - 1, w2);
      kt.emplace_back(2 * k, 2 * k, w2);
    }
    mass.setFromTriplets(mt.begin(), mt.end());
    stiffness.setFromTriplets(kt.begin(), kt.end());
  }

  // Complex spectrum of length `grid` from the real coefficient layout.
  std::vector<std::complex<double>> spectrum(const Eigen::VectorXd& c, bool differentiate) const {
    std::vector<std::complex<double>> f(grid, {0.0, 0.0});
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    f[0] = {c[0], 0.0};
    for (int k = 1; k <= n; ++k) {
      const double a = c[2 * k - 1], b = c[2 * k];
      std::complex<double> pos(a * inv_sqrt2, -b * inv_sqrt2);
      std::complex<double> neg(a * inv_sqrt2, b * inv_sqrt2);
      if (differentiate) {
        const std::complex<double> iw(0.0, 2.0 * M_PI * k);
        pos *= iw;
        neg *= -iw;
      }
      f[k] = pos;
      f[grid - k] = neg;
    }
    if (differentiate) f[0] = {0.0, 0.0};
    return f;
  }

  Eigen::VectorXd from_spectrum(std::vector<std::complex<double>> f) const {
    fft(f, /*inverse=*/true);
    Eigen::VectorXd out(grid);
    for (int j = 0; j < grid; ++j) out[j] = f[j].real();
    return out;
  }

  Eigen::VectorXd synth(const Eigen::VectorXd& c) const override {
    return from_spectrum(spectrum(c, false));
  }
  Eigen::VectorXd synth_deriv(const Eigen::VectorXd& c) const override {
    return from_spectrum(spectrum(c, true));
  }

  Eigen::VectorXd analysis(const Eigen::VectorXd& samples) const override {
    std::vector<std::complex<double>> f(grid);
    for (int j = 0; j < grid; ++j) f[j] = {samples[j], 0.0};
    fft(f, /*inverse=*/false);
    const double sqrt2 = std::sqrt(2.0);
    Eigen::VectorXd dual(2 * n + 1);
    dual[0] = f[0].real() / grid;
    for (int k = 1; k <= n; ++k) {
      dual[2 * k - 1] = sqrt2 * f[k].real() / grid;
      dual[2 * k] = -sqrt2 * f[k].imag() / grid;
    }
    return dual;
  }

  double eval(const Eigen::VectorXd& c, double x) const override {
    const double sqrt2 = std::sqrt(2.0);
    double v = c[0];
    for (int k = 1; k <= n; ++k) {
      const double t = 2.0 * M_PI * k * x;
      v += sqrt2 * (c[2 * k - 1] * std::cos(t) + c[2 * k] * std::sin(t));
    }
    return v;
  }
  double eval_deriv(const Eigen::VectorXd& c, double x) const override {
    const double sqrt2 = std::sqrt(2.0);
    double v = 0.0;
    for (int k = 1; k <= n; ++k) {
      const double w = 2.0 * M_PI * k;
      const double t = w * x;
      v += sqrt2 * w * (-c[2 * k - 1] * std::sin(t) + c[2 * k] * std::cos(t));
    }
    return v;
  }

  void basis_at(double x, std::vector<std::pair<int, double>>& values,
                std::vector<std::pair<int, double>>& derivs) const override {
    values.clear();
    derivs.clear();
    const double sqrt2 = std::sqrt(2.0);
    values.emplace_back(0, 1.0);
    derivs.emplace_back(0, 0.0);
    for (int k = 1; k <= n; ++k) {
      const double w = 2.0 * M_PI * k;
      const double t = w * x;
      values.emplace_back(2 * k - 1, sqrt2 * std::cos(t));
      values.emplace_back(2 * k, sqrt2 * std::sin(t));
      derivs.emplace_back(2 * k - 1, -sqrt2 * w * std::sin(t));
      derivs.emplace_back(2 * k, sqrt2 * w * std::cos(t));
    }
  }

  AssembledOp weighted_mass(const Eigen::VectorXd& samples) const override {
    // Entries couple modes through the spectrum of W; fill from one forward
    // transform. (W phi_i, phi_j) reduces to W-hat at |i +- j|.
    std::vector<std::complex<double>> f(grid);
    for (int j = 0; j < grid; ++j) f[j] = {samples[j], 0.0};
    fft(f, /*inverse=*/false);
    // w_c[k] = integral W cos(2 pi k x), w_s[k] = integral W sin(2 pi k x)
    const int maxmode = 2 * n;
    Eigen::VectorXd wc(maxmode + 1), ws(maxmode + 1);
    for (int k = 0; k <= maxmode; ++k) {
      wc[k] = f[k].real() / grid;
      ws[k] = -f[k].imag() / grid;
    }
    const int dim = 2 * n + 1;
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
    const double sqrt2 = std::sqrt(2.0);
    auto cos_idx = [](int k) { return 2 * k - 1; };
    auto sin_idx = [](int k) { return 2 * k; };
    m(0, 0) = wc[0];
    for (int k = 1; k <= n; ++k) {
      // (W, sqrt2 cos_k * 1), (W, sqrt2 sin_k * 1)
      m(0, cos_idx(k)) = m(cos_idx(k), 0) = sqrt2 * wc[k];
      m(0, sin_idx(k)) = m(sin_idx(k), 0) = sqrt2 * ws[k];
    }
    for (int k = 1; k <= n; ++k) {
      for (int l = k; l <= n; ++l) {
        // 2 cos(kt)cos(lt) = cos((l-k)t) + cos((l+k)t)
        m(cos_idx(k), cos_idx(l)) = wc[l - k] + wc[l + k];
        // 2 sin(kt)sin(lt) = cos((l-k)t) - cos((l+k)t)
        m(sin_idx(k), sin_idx(l)) = wc[l - k] - wc[l + k];
        // 2 cos(kt)sin(lt) = sin((l+k)t) + sin((l-k)t)
        m(cos_idx(k), sin_idx(l)) = ws[l + k] + ws[l - k];
        // 2 sin(kt)cos(lt) = sin((k+l)t) - sin((l-k)t)  [as sin_k * cos_l]
        m(sin_idx(k), cos_idx(l)) = ws[l + k] - ws[l - k];
        m(cos_idx(l), cos_idx(k)) = m(cos_idx(k), cos_idx(l));
        m(sin_idx(l), sin_idx(k)) = m(sin_idx(k), sin_idx(l));
        m(sin_idx(l), cos_idx(k)) = m(cos_idx(k), sin_idx(l));
        m(cos_idx(l), sin_idx(k)) = m(sin_idx(k), cos_idx(l));
      }
    }
    AssembledOp op;
    op.dense = std::move(m);
    return op;
  }
};

} // namespace

std::unique_ptr<const Space::Backend> make_fourier_backend(int n, const QuadPolicy& policy) {
  return std::make_unique<FourierBackend>(n, policy);
}

} // namespace superconv
