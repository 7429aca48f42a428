#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "superconv/space.hpp"
#include "superconv/transfer.hpp"

using namespace superconv;

namespace {

const DomainSpec kTorus = DomainSpec::make(Setting::Two);
const DomainSpec kInterval = DomainSpec::make(Setting::One);

Field random_field(const Space& s, unsigned seed, double scale = 1.0) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  Eigen::VectorXd c(s.dim());
  for (int i = 0; i < s.dim(); ++i) c[i] = scale * unit(rng);
  return Field(s.basis(), std::move(c));
}

Eigen::MatrixXd naive_weighted_mass(const Space& s, const Eigen::VectorXd& w) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(s.dim(), s.dim());
  std::vector<std::pair<int, double>> vals, ders;
  for (int q = 0; q < s.quad().size(); ++q) {
    s.basis_at(s.quad().nodes[q], vals, ders);
    const double wq = s.quad().weights[q] * w[q];
    for (const auto& [i, vi] : vals)
      for (const auto& [j, vj] : vals) m(i, j) += wq * vi * vj;
  }
  return m;
}

} // namespace

TEST_CASE("declared dimensions") {
  CHECK(build_space(kTorus, BasisTag::fourier(3))->dim() == 7);
  CHECK(build_space(kInterval, BasisTag::legendre(5))->dim() == 4);
  CHECK(build_space(kInterval, BasisTag::fem(8, 1))->dim() == 7);
}

TEST_CASE("basis/setting compatibility is enforced") {
  CHECK_THROWS_AS(build_space(kInterval, BasisTag::fourier(3)), std::invalid_argument);
  CHECK_THROWS_AS(build_space(kTorus, BasisTag::legendre(5)), std::invalid_argument);
  CHECK_THROWS_AS(build_space(kTorus, BasisTag::fem(8, 1)), std::invalid_argument);
  CHECK_THROWS_AS(build_space(kInterval, BasisTag::fem(1, 1)), std::invalid_argument);
  CHECK_THROWS_AS(build_space(kInterval, BasisTag::fem(8, 4)), std::invalid_argument);
  CHECK_THROWS_AS(build_space(kInterval, BasisTag::legendre(1)), std::invalid_argument);
}

TEST_CASE("fourier operators are diagonal with the documented entries") {
  auto s = build_space(kTorus, BasisTag::fourier(4));
  const Eigen::MatrixXd m = Eigen::MatrixXd(s->mass());
  const Eigen::MatrixXd k = Eigen::MatrixXd(s->stiffness());
  CHECK((m - Eigen::MatrixXd::Identity(9, 9)).norm() < 1e-14);
  for (int kk = 1; kk <= 4; ++kk) {
    const double w2 = std::pow(2.0 * M_PI * kk, 2);
    CHECK(k(2 * kk - 1, 2 * kk - 1) == doctest::Approx(w2).epsilon(1e-14));
    CHECK(k(2 * kk, 2 * kk) == doctest::Approx(w2).epsilon(1e-14));
  }
  CHECK(k.norm() == doctest::Approx(k.diagonal().norm()).epsilon(1e-14));
}

TEST_CASE("legendre boundary-adapted stiffness is the identity") {
  auto s = build_space(kInterval, BasisTag::legendre(12));
  const Eigen::MatrixXd k = Eigen::MatrixXd(s->stiffness());
  CHECK((k - Eigen::MatrixXd::Identity(s->dim(), s->dim())).cwiseAbs().maxCoeff() < 1e-12);

  // Mass stays symmetric positive definite and pentadiagonal.
  const Eigen::MatrixXd m = Eigen::MatrixXd(s->mass());
  CHECK((m - m.transpose()).cwiseAbs().maxCoeff() < 1e-13 * m.cwiseAbs().maxCoeff());
  for (int i = 0; i < s->dim(); ++i)
    for (int j = 0; j < s->dim(); ++j)
      if (std::abs(i - j) != 0 && std::abs(i - j) != 2) CHECK(std::abs(m(i, j)) < 1e-14);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  CHECK(es.eigenvalues().minCoeff() > 0.0);
}

TEST_CASE("fem P1 stiffness is the classic tridiagonal stencil") {
  auto s = build_space(kInterval, BasisTag::fem(8, 1));
  const double h = 0.25;
  const Eigen::MatrixXd k = Eigen::MatrixXd(s->stiffness());
  for (int i = 0; i < 7; ++i) {
    CHECK(k(i, i) == doctest::Approx(2.0 / h).epsilon(1e-13));
    if (i > 0) CHECK(k(i, i - 1) == doctest::Approx(-1.0 / h).epsilon(1e-13));
  }
  const Eigen::MatrixXd m = Eigen::MatrixXd(s->mass());
  CHECK((m - m.transpose()).cwiseAbs().maxCoeff() < 1e-13 * m.cwiseAbs().maxCoeff());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  CHECK(es.eigenvalues().minCoeff() > 0.0);
}

TEST_CASE("inner_x worked values") {
  SUBCASE("zero fields") {
    auto s = build_space(kTorus, BasisTag::fourier(3));
    Field z = Field::zero(s->basis());
    CHECK(inner_x(*s, z, z) == 0.0);
  }
  SUBCASE("cos mode on the torus") {
    auto s = build_space(kTorus, BasisTag::fourier(2));
    Eigen::VectorXd c = Eigen::VectorXd::Zero(5);
    c[1] = 1.0 / std::sqrt(2.0); // cos(2 pi x) = phi_c1 / sqrt(2)
    Field u(s->basis(), c);
    CHECK(inner_x(*s, u, u) ==
          doctest::Approx(0.5 + 2.0 * M_PI * M_PI).epsilon(1e-14));
  }
  SUBCASE("P1 hat at the midpoint") {
    auto s = build_space(kInterval, BasisTag::fem(2, 1));
    Eigen::VectorXd c(1);
    c << 1.0;
    Field u(s->basis(), c);
    CHECK(inner_x(*s, u, u) == doctest::Approx(2.0).epsilon(1e-14));
  }
}

TEST_CASE("norms worked values") {
  auto s = build_space(kTorus, BasisTag::fourier(2));
  SUBCASE("zero") {
    NormTriple t = norms(*s, Field::zero(s->basis()));
    CHECK(t.l2 == 0.0);
    CHECK(t.h1 == 0.0);
    CHECK(*t.h2 == 0.0);
  }
  SUBCASE("cos mode") {
    Eigen::VectorXd c = Eigen::VectorXd::Zero(5);
    c[1] = 1.0 / std::sqrt(2.0);
    NormTriple t = norms(*s, Field(s->basis(), c));
    CHECK(t.l2 == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
    CHECK(t.h1 == doctest::Approx(std::sqrt(0.5 + 2.0 * M_PI * M_PI)).epsilon(1e-14));
  }
  SUBCASE("constant one") {
    Eigen::VectorXd c = Eigen::VectorXd::Zero(5);
    c[0] = 1.0;
    NormTriple t = norms(*s, Field(s->basis(), c));
    CHECK(t.l2 == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(t.h1 == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(*t.h2 == doctest::Approx(1.0).epsilon(1e-15));
  }
}

TEST_CASE("inner_x is symmetric and bilinear; Cauchy-Schwarz holds") {
  auto check_space = [](const SpaceHandle& s) {
    for (unsigned seed = 0; seed < 20; ++seed) {
      Field u = random_field(*s, 100 + seed);
      Field v = random_field(*s, 200 + seed);
      Field w = random_field(*s, 300 + seed);
      const double uv = inner_x(*s, u, v);
      CHECK(inner_x(*s, v, u) == doctest::Approx(uv).epsilon(1e-13));
      Field lin(s->basis(), 2.5 * u.coeffs - 0.75 * w.coeffs);
      CHECK(inner_x(*s, lin, v) ==
            doctest::Approx(2.5 * uv - 0.75 * inner_x(*s, w, v)).epsilon(1e-12));
      const double nu = std::sqrt(inner_x(*s, u, u));
      const double nv = std::sqrt(inner_x(*s, v, v));
      CHECK(std::abs(uv) <= nu * nv + 1e-12);
    }
  };
  check_space(build_space(kTorus, BasisTag::fourier(6)));
  check_space(build_space(kInterval, BasisTag::legendre(9)));
  check_space(build_space(kInterval, BasisTag::fem(6, 2)));
}

TEST_CASE("parseval: fourier quadrature l2 equals coefficient l2") {
  auto s = build_space(kTorus, BasisTag::fourier(5));
  for (unsigned seed = 0; seed < 10; ++seed) {
    Field u = random_field(*s, seed);
    const Eigen::VectorXd uq = s->synth(u.coeffs);
    double acc = 0.0;
    for (int j = 0; j < s->quad().size(); ++j) acc += s->quad().weights[j] * uq[j] * uq[j];
    CHECK(std::sqrt(acc) == doctest::Approx(norms(*s, u).l2).epsilon(1e-12));
  }
}

TEST_CASE("norms are invariant under prolongation") {
  auto check = [](const SpaceHandle& from, const SpaceHandle& to) {
    for (unsigned seed = 0; seed < 10; ++seed) {
      Field u = random_field(*from, 42 + seed);
      Field up = prolong(from, to, u);
      NormTriple a = norms(*from, u);
      NormTriple b = norms(*to, up);
      CHECK(b.l2 == doctest::Approx(a.l2).epsilon(1e-12));
      CHECK(b.h1 == doctest::Approx(a.h1).epsilon(1e-12));
    }
  };
  check(build_space(kTorus, BasisTag::fourier(4)), build_space(kTorus, BasisTag::fourier(9)));
  check(build_space(kInterval, BasisTag::legendre(6)),
        build_space(kInterval, BasisTag::legendre(13)));
  check(build_space(kInterval, BasisTag::fem(4, 2)), build_space(kInterval, BasisTag::fem(16, 2)));
}

TEST_CASE("prolongation worked examples and composition") {
  SUBCASE("fourier zero-pads") {
    auto c4 = build_space(kTorus, BasisTag::fourier(2));
    auto f = build_space(kTorus, BasisTag::fourier(4));
    Field u = random_field(*c4, 5);
    Field up = prolong(c4, f, u);
    CHECK(up.coeffs.head(5) == u.coeffs);
    CHECK(up.coeffs.tail(4).norm() == 0.0);
  }
  SUBCASE("fem midpoint values average the endpoints") {
    auto c = build_space(kInterval, BasisTag::fem(2, 1));
    auto f = build_space(kInterval, BasisTag::fem(4, 1));
    Eigen::VectorXd one(1);
    one << 1.0;
    Field hat(c->basis(), one);
    Field up = prolong(c, f, hat);
    // Fine interior nodes at -1/2, 0, 1/2.
    CHECK(up.coeffs[0] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(up.coeffs[1] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(up.coeffs[2] == doctest::Approx(0.5).epsilon(1e-14));
  }
  SUBCASE("composition equals the direct transfer") {
    auto a = build_space(kInterval, BasisTag::fem(4, 3));
    auto b = build_space(kInterval, BasisTag::fem(8, 3));
    auto c = build_space(kInterval, BasisTag::fem(32, 3));
    Field u = random_field(*a, 11);
    Field two_step = prolong(b, c, prolong(a, b, u));
    Field direct = prolong(a, c, u);
    CHECK((two_step.coeffs - direct.coeffs).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("mode-weighted h2 norm exists only on the torus family") {
  auto leg = build_space(kInterval, BasisTag::legendre(6));
  CHECK(!norms(*leg, Field::zero(leg->basis())).h2.has_value());
  auto fem = build_space(kInterval, BasisTag::fem(4, 1));
  CHECK(!norms(*fem, Field::zero(fem->basis())).h2.has_value());
}

TEST_CASE("a space built with a potential carries its weighted mass") {
  const PotentialSpec v = PotentialSpec::trig_decay(2.5, 4, 1.0);
  auto s = build_space(kTorus, BasisTag::fourier(4), v);
  REQUIRE(s->potential_mass().has_value());
  const Eigen::MatrixXd bound = s->potential_mass()->to_dense();
  const Eigen::MatrixXd direct = assemble_potential_mass(*s, v).to_dense();
  CHECK((bound - direct).cwiseAbs().maxCoeff() == 0.0);
  // The policy implied by the data sizes the quadrature for exactness.
  CHECK(s->quad_policy().data_bandwidth == 4);
}

TEST_CASE("potential mass assembly") {
  SUBCASE("constant potential scales the mass matrix") {
    for (const SpaceHandle& s :
         {build_space(kTorus, BasisTag::fourier(4)), build_space(kInterval, BasisTag::legendre(7)),
          build_space(kInterval, BasisTag::fem(5, 2))}) {
      AssembledOp op = assemble_potential_mass(*s, PotentialSpec::constant(3.5));
      const Eigen::MatrixXd diff = op.to_dense() - 3.5 * Eigen::MatrixXd(s->mass());
      CHECK(diff.cwiseAbs().maxCoeff() < 1e-13 * 3.5 * Eigen::MatrixXd(s->mass()).norm());
    }
  }
  SUBCASE("zero weight gives the zero operator") {
    auto s = build_space(kTorus, BasisTag::fourier(3));
    AssembledOp op = assemble_weighted_mass(*s, Eigen::VectorXd::Zero(s->quad().size()));
    CHECK(op.to_dense().norm() == 0.0);
  }
  SUBCASE("fourier mode-coupling entry for a single cosine") {
    auto s = build_space(kTorus, BasisTag::fourier(1));
    Eigen::VectorXd w(s->quad().size());
    for (int j = 0; j < s->quad().size(); ++j)
      w[j] = std::cos(2.0 * M_PI * s->quad().nodes[j]);
    AssembledOp op = assemble_weighted_mass(*s, w);
    const Eigen::MatrixXd m = op.to_dense();
    // (cos(2 pi x) * 1, sqrt(2) cos(2 pi x)) = sqrt(2)/2: half the product of
    // the two basis normalisation factors.
    CHECK(m(0, 1) == doctest::Approx(std::sqrt(2.0) / 2.0).epsilon(1e-13));
    CHECK(m(1, 0) == doctest::Approx(std::sqrt(2.0) / 2.0).epsilon(1e-13));
    CHECK(std::abs(m(0, 0)) < 1e-14);
  }
  SUBCASE("spectral fill matches naive quadrature assembly") {
    auto s = build_space(kTorus, BasisTag::fourier(5));
    Eigen::VectorXd w(s->quad().size());
    for (int j = 0; j < s->quad().size(); ++j) {
      const double x = s->quad().nodes[j];
      w[j] = 1.0 + 0.3 * std::cos(2.0 * M_PI * x) + 0.1 * std::sin(4.0 * M_PI * x);
    }
    const Eigen::MatrixXd fast = assemble_weighted_mass(*s, w).to_dense();
    const Eigen::MatrixXd slow = naive_weighted_mass(*s, w);
    CHECK((fast - slow).cwiseAbs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("projection worked examples") {
  SUBCASE("idempotence on members") {
    auto c = build_space(kTorus, BasisTag::fourier(3));
    auto f = build_space(kTorus, BasisTag::fourier(8));
    Field u = random_field(*c, 3);
    Field up = prolong(c, f, u);
    Field back = project_x(c, f, up);
    CHECK((back.coeffs - u.coeffs).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("fourier projection truncates modes") {
    auto c = build_space(kTorus, BasisTag::fourier(3));
    auto f = build_space(kTorus, BasisTag::fourier(6));
    Eigen::VectorXd coeffs = Eigen::VectorXd::Zero(13);
    coeffs[0] = 2.0;  // mode 0
    coeffs[3] = -1.0; // cos mode 2
    coeffs[9] = 0.5;  // cos mode 5
    Field u(f->basis(), coeffs);
    Field p = project_x(c, f, u);
    Eigen::VectorXd expect = Eigen::VectorXd::Zero(7);
    expect[0] = 2.0;
    expect[3] = -1.0;
    CHECK(p.coeffs == expect);
    // L2 and X projections agree coefficient-for-coefficient.
    Field p2 = project_l2(c, f, u);
    CHECK(p.coeffs == p2.coeffs);
  }
  SUBCASE("legendre truncation reproduces the normal-equation solve") {
    auto c = build_space(kInterval, BasisTag::legendre(6));
    auto f = build_space(kInterval, BasisTag::legendre(14));
    Field u = random_field(*f, 9);
    Field p = project_x(c, f, u);
    // Independent route: assemble the X-Gram system from quadrature.
    std::vector<std::pair<int, double>> vals, ders;
    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(c->dim(), c->dim());
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(c->dim());
    const Eigen::VectorXd du = f->synth_deriv(u.coeffs);
    for (int q = 0; q < f->quad().size(); ++q) {
      c->basis_at(f->quad().nodes[q], vals, ders);
      const double w = f->quad().weights[q];
      for (const auto& [i, di] : ders) {
        rhs[i] += w * di * du[q];
        for (const auto& [j, dj] : ders) gram(i, j) += w * di * dj;
      }
    }
    const Eigen::VectorXd direct = gram.ldlt().solve(rhs);
    CHECK((p.coeffs - direct).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("fem P1 hat is reproduced by the L2 projection") {
    auto c = build_space(kInterval, BasisTag::fem(2, 1));
    auto f = build_space(kInterval, BasisTag::fem(8, 1));
    Eigen::VectorXd one(1);
    one << 1.0;
    Field hat = prolong(c, f, Field(c->basis(), one));
    Field p = project_l2(c, f, hat);
    CHECK(p.coeffs[0] == doctest::Approx(1.0).epsilon(1e-13));
  }
}

TEST_CASE("projector structure: idempotent, self-adjoint, best approximation") {
  auto run = [](const SpaceHandle& c, const SpaceHandle& f) {
    std::mt19937 rng(77);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    Field u = random_field(*f, 1234);
    Field pu = project_x(c, f, u);
    Field pu_up = prolong(c, f, pu);

    // Idempotence.
    Field again = project_x(c, f, pu_up);
    CHECK((again.coeffs - pu.coeffs).cwiseAbs().maxCoeff() <
          1e-12 * std::max(1.0, pu.coeffs.cwiseAbs().maxCoeff()));

    // Self-adjointness in the X inner product.
    Field v = random_field(*f, 4321);
    Field pv_up = prolong(c, f, project_x(c, f, v));
    CHECK(inner_x(*f, pu_up, v) == doctest::Approx(inner_x(*f, u, pv_up)).epsilon(1e-12));

    // Best-approximation against random competitors.
    const Field diff(f->basis(), u.coeffs - pu_up.coeffs);
    const double best = std::sqrt(inner_x(*f, diff, diff));
    for (int trial = 0; trial < 100; ++trial) {
      Eigen::VectorXd cand(c->dim());
      for (int i = 0; i < c->dim(); ++i) cand[i] = unit(rng);
      Field cand_up = prolong(c, f, Field(c->basis(), cand));
      Field d2(f->basis(), u.coeffs - cand_up.coeffs);
      CHECK(best <= std::sqrt(inner_x(*f, d2, d2)) + 1e-12);
    }

    // Orthogonality residual against every coarse basis function.
    Eigen::VectorXd dual = f->gram_x() * diff.coeffs;
    double resid;
    if (c->is_fem()) {
      TransferMap map = TransferMap::between(c, f);
      resid = (map.matrix.transpose() * dual).cwiseAbs().maxCoeff();
    } else {
      resid = dual.head(c->dim()).cwiseAbs().maxCoeff();
    }
    const double xnorm = std::sqrt(inner_x(*f, u, u));
    CHECK(resid <= 1e-10 * std::max(1.0, xnorm));

    // Prolong-then-project is the identity on the coarse space.
    Field w = random_field(*c, 999);
    Field w_round = project_x(c, f, prolong(c, f, w));
    CHECK((w_round.coeffs - w.coeffs).cwiseAbs().maxCoeff() < 1e-12);
  };
  run(build_space(kTorus, BasisTag::fourier(4)), build_space(kTorus, BasisTag::fourier(12)));
  run(build_space(kInterval, BasisTag::legendre(6)),
      build_space(kInterval, BasisTag::legendre(17)));
  run(build_space(kInterval, BasisTag::fem(4, 2)), build_space(kInterval, BasisTag::fem(16, 2)));
}

TEST_CASE("fem nodal interpolation") {
  SUBCASE("linear functions are reproduced by P1 away from the clamped ends") {
    auto s = build_space(kInterval, BasisTag::fem(8, 1));
    Field g = interpolate_fem(*s, [](double x) { return 0.5 * x + 0.25; });
    for (double x : {-0.6, -0.1, 0.3, 0.7})
      CHECK(s->eval(g.coeffs, x) == doctest::Approx(0.5 * x + 0.25).epsilon(1e-13));
  }
  SUBCASE("quadratics are reproduced by P2 away from the clamped ends") {
    auto s = build_space(kInterval, BasisTag::fem(4, 2));
    Field g = interpolate_fem(*s, [](double x) { return x * x - 0.25; });
    for (double x : {-0.3, 0.05, 0.45})
      CHECK(s->eval(g.coeffs, x) == doctest::Approx(x * x - 0.25).epsilon(1e-13));
  }
  SUBCASE("members of the space are reproduced exactly") {
    auto s = build_space(kInterval, BasisTag::fem(6, 3));
    Field u = random_field(*s, 52);
    Field g = interpolate_fem(*s, [&](double x) { return s->eval(u.coeffs, x); });
    CHECK((g.coeffs - u.coeffs).cwiseAbs().maxCoeff() < 1e-13);
  }
  SUBCASE("cubic sampled at the midpoint node vanishes on P1") {
    auto s = build_space(kInterval, BasisTag::fem(2, 1));
    Field g = interpolate_fem(*s, [](double x) { return x * x * x; });
    CHECK(g.coeffs[0] == 0.0);
  }
  SUBCASE("non-fem spaces are rejected") {
    auto s = build_space(kTorus, BasisTag::fourier(3));
    CHECK_THROWS_AS(interpolate_fem(*s, [](double) { return 0.0; }), std::invalid_argument);
  }
}
