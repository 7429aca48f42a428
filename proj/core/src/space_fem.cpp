#include <cmath>

#include "space_backend.hpp"

namespace superconv {

namespace {

// Lagrange shape functions on the reference element [0,1] with equispaced
// nodes xi_i = i/n.
void lagrange_shapes(int n, double xi, std::vector<double>& val, std::vector<double>& der) {
  val.assign(n + 1, 0.0);
  der.assign(n + 1, 0.0);
  for (int i = 0; i <= n; ++i) {
    const double xi_i = static_cast<double>(i) / n;
    double v = 1.0;
    for (int j = 0; j <= n; ++j) {
      if (j == i) continue;
      const double xi_j = static_cast<double>(j) / n;
      v *= (xi - xi_j) / (xi_i - xi_j);
    }
    val[i] = v;
    double d = 0.0;
    for (int m = 0; m <= n; ++m) {
      if (m == i) continue;
      const double xi_m = static_cast<double>(m) / n;
      double term = 1.0 / (xi_i - xi_m);
      for (int j = 0; j <= n; ++j) {
        if (j == i || j == m) continue;
        const double xi_j = static_cast<double>(j) / n;
        term *= (xi - xi_j) / (xi_i - xi_j);
      }
      d += term;
    }
    der[i] = d;
  }
}

// Uniform P_n Lagrange elements on (-1,1) with homogeneous Dirichlet ends.
struct FemBackend final : Space::Backend {
  int elements = 0;
  int degree = 1;
  double h = 0.0;
  int dim = 0;
  int qper = 0;                       // quadrature nodes per element
  Eigen::MatrixXd ref_val, ref_der;   // qper x (degree+1) shape tables
  Eigen::VectorXd ref_w;              // reference weights on [0,1]
  Eigen::VectorXd nodes_;             // interior Lagrange nodes

  FemBackend(int elements_, int degree_, const QuadPolicy& policy)
      : elements(elements_), degree(degree_) {
    h = 2.0 / elements;
    dim = degree * elements - 1;
    qper = 2 * degree + 1;
    if (policy.nonpoly_data) qper *= 2;

    QuadratureRule ref = gauss_legendre_on(qper, 0.0, 1.0);
    ref_w = ref.weights;
    ref_val.resize(qper, degree + 1);
    ref_der.resize(qper, degree + 1);
    std::vector<double> v, d;
    for (int q = 0; q < qper; ++q) {
      lagrange_shapes(degree, ref.nodes[q], v, d);
      for (int i = 0; i <= degree; ++i) {
        ref_val(q, i) = v[i];
        ref_der(q, i) = d[i];
      }
    }

    quad.nodes.resize(qper * elements);
    quad.weights.resize(qper * elements);
    for (int e = 0; e < elements; ++e) {
      const double xl = -1.0 + e * h;
      for (int q = 0; q < qper; ++q) {
        quad.nodes[e * qper + q] = xl + ref.nodes[q] * h;
        quad.weights[e * qper + q] = ref.weights[q] * h;
      }
    }

    nodes_.resize(dim);
    for (int g = 1; g < degree * elements; ++g)
      nodes_[g - 1] = -1.0 + g * h / degree;

    std::vector<Eigen::Triplet<double>> mt, kt;
    for (int e = 0; e < elements; ++e) {
      for (int i = 0; i <= degree; ++i) {
        const int gi = e * degree + i;
        if (gi == 0 || gi == degree * elements) continue;
        for (int j = 0; j <= degree; ++j) {
          const int gj = e * degree + j;
          if (gj == 0 || gj == degree * elements) continue;
          double me = 0.0, ke = 0.0;
          for (int q = 0; q < qper; ++q) {
            me += ref_w[q] * ref_val(q, i) * ref_val(q, j);
            ke += ref_w[q] * ref_der(q, i) * ref_der(q, j);
          }
          mt.emplace_back(gi - 1, gj - 1, me * h);
          kt.emplace_back(gi - 1, gj - 1, ke / h);
        }
      }
    }
    mass.resize(dim, dim);
    stiffness.resize(dim, dim);
    mass.setFromTriplets(mt.begin(), mt.end());
    stiffness.setFromTriplets(kt.begin(), kt.end());
  }

  Eigen::VectorXd synth(const Eigen::VectorXd& c) const override {
    Eigen::VectorXd out(quad.size());
    for (int e = 0; e < elements; ++e) {
      for (int q = 0; q < qper; ++q) {
        double v = 0.0;
        for (int i = 0; i <= degree; ++i) {
          const int g = e * degree + i;
          if (g == 0 || g == degree * elements) continue;
          v += c[g - 1] * ref_val(q, i);
        }
        out[e * qper + q] = v;
      }
    }
    return out;
  }

  Eigen::VectorXd synth_deriv(const Eigen::VectorXd& c) const override {
    Eigen::VectorXd out(quad.size());
    for (int e = 0; e < elements; ++e) {
      for (int q = 0; q < qper; ++q) {
        double v = 0.0;
        for (int i = 0; i <= degree; ++i) {
          const int g = e * degree + i;
          if (g == 0 || g == degree * elements) continue;
          v += c[g - 1] * ref_der(q, i);
        }
        out[e * qper + q] = v / h;
      }
    }
    return out;
  }

  Eigen::VectorXd analysis(const Eigen::VectorXd& samples) const override {
    Eigen::VectorXd dual = Eigen::VectorXd::Zero(dim);
    for (int e = 0; e < elements; ++e) {
      for (int q = 0; q < qper; ++q) {
        const double ws = quad.weights[e * qper + q] * samples[e * qper + q];
        for (int i = 0; i <= degree; ++i) {
          const int g = e * degree + i;
          if (g == 0 || g == degree * elements) continue;
          dual[g - 1] += ws * ref_val(q, i);
        }
      }
    }
    return dual;
  }

  int locate(double x) const {
    int e = static_cast<int>(std::floor((x + 1.0) / h));
    if (e < 0) e = 0;
    if (e >= elements) e = elements - 1;
    return e;
  }

  double eval(const Eigen::VectorXd& c, double x) const override {
    const int e = locate(x);
    const double xi = (x - (-1.0 + e * h)) / h;
    std::vector<double> v, d;
    lagrange_shapes(degree, xi, v, d);
    double out = 0.0;
    for (int i = 0; i <= degree; ++i) {
      const int g = e * degree + i;
      if (g == 0 || g == degree * elements) continue;
      out += c[g - 1] * v[i];
    }
    return out;
  }

  double eval_deriv(const Eigen::VectorXd& c, double x) const override {
    const int e = locate(x);
    const double xi = (x - (-1.0 + e * h)) / h;
    std::vector<double> v, d;
    lagrange_shapes(degree, xi, v, d);
    double out = 0.0;
    for (int i = 0; i <= degree; ++i) {
      const int g = e * degree + i;
      if (g == 0 || g == degree * elements) continue;
      out += c[g - 1] * d[i];
    }
    return out / h;
  }

  void basis_at(double x, std::vector<std::pair<int, double>>& values,
                std::vector<std::pair<int, double>>& derivs) const override {
    values.clear();
    derivs.clear();
    const int e = locate(x);
    const double xi = (x - (-1.0 + e * h)) / h;
    std::vector<double> v, d;
    lagrange_shapes(degree, xi, v, d);
    for (int i = 0; i <= degree; ++i) {
      const int g = e * degree + i;
      if (g == 0 || g == degree * elements) continue;
      values.emplace_back(g - 1, v[i]);
      derivs.emplace_back(g - 1, d[i] / h);
    }
  }

  const Eigen::VectorXd& fem_nodes() const override { return nodes_; }

  AssembledOp weighted_mass(const Eigen::VectorXd& samples) const override {
    std::vector<Eigen::Triplet<double>> t;
    for (int e = 0; e < elements; ++e) {
      for (int i = 0; i <= degree; ++i) {
        const int gi = e * degree + i;
        if (gi == 0 || gi == degree * elements) continue;
        for (int j = 0; j <= degree; ++j) {
          const int gj = e * degree + j;
          if (gj == 0 || gj == degree * elements) continue;
          double me = 0.0;
          for (int q = 0; q < qper; ++q)
            me += quad.weights[e * qper + q] * samples[e * qper + q] * ref_val(q, i) *
                  ref_val(q, j);
          t.emplace_back(gi - 1, gj - 1, me);
        }
      }
    }
    AssembledOp op;
    Eigen::SparseMatrix<double> m(dim, dim);
    m.setFromTriplets(t.begin(), t.end());
    op.sparse = std::move(m);
    return op;
  }
};

} // namespace

std::unique_ptr<const Space::Backend> make_fem_backend(int elements, int degree,
                                                       const QuadPolicy& policy) {
  return std::make_unique<FemBackend>(elements, degree, policy);
}

} // namespace superconv
