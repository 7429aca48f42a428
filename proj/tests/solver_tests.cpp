#include <doctest.h>

#include <cmath>
#include <functional>
#include <random>

#include "superconv/solver.hpp"
#include "superconv/transfer.hpp"

using namespace superconv;

namespace {

const DomainSpec kTorus = DomainSpec::make(Setting::Two);
const DomainSpec kInterval = DomainSpec::make(Setting::One);

Eigen::VectorXd sample(const Space& s, const std::function<double(double)>& f) {
  Eigen::VectorXd out(s.quad().size());
  for (int j = 0; j < s.quad().size(); ++j) out[j] = f(s.quad().nodes[j]);
  return out;
}

// Forcing that makes cos(2 pi x) the exact minimiser of the cubic problem
// with V = 1: uses cos^3 t = (3 cos t + cos 3t)/4.
Eigen::VectorXd manufactured_forcing(const Space& s) {
  return sample(s, [](double x) {
    const double c = std::cos(2.0 * M_PI * x);
    const double c3 = std::cos(6.0 * M_PI * x);
    return (4.0 * M_PI * M_PI + 1.0) * c + (3.0 * c + c3) / 4.0;
  });
}

Field cos_field(const Space& s) {
  Eigen::VectorXd c = Eigen::VectorXd::Zero(s.dim());
  c[1] = 1.0 / std::sqrt(2.0);
  return Field(s.basis(), c);
}

Field constant_field(const Space& s, double value) {
  Eigen::VectorXd c = Eigen::VectorXd::Zero(s.dim());
  c[0] = value;
  return Field(s.basis(), c);
}

} // namespace

TEST_CASE("energy worked values") {
  auto s = build_space(kTorus, BasisTag::fourier(4));
  SUBCASE("source energy") {
    SourceProblem zero =
        SourceProblem::make(s, PotentialSpec::constant(10.0), PotentialSpec::constant(0.0));
    CHECK(energy_src(zero, Field::zero(s->basis())) == 0.0);
    CHECK(energy_src(zero, constant_field(*s, 1.0)) == doctest::Approx(5.25).epsilon(1e-14));

    SourceProblem lin = SourceProblem::make(s, PotentialSpec::constant(1.0),
                                            PotentialSpec::constant(0.0), /*cubic_on=*/false);
    CHECK(energy_src(lin, cos_field(*s)) ==
          doctest::Approx(M_PI * M_PI + 0.25).epsilon(1e-14));
  }
  SUBCASE("eigen energy") {
    EigProblem p = EigProblem::make(s, PotentialSpec::constant(10.0));
    CHECK(energy_eig(p, Field::zero(s->basis())) == 0.0);
    CHECK(energy_eig(p, constant_field(*s, 1.0)) == doctest::Approx(5.25).epsilon(1e-14));
    CHECK(energy_eig(p, constant_field(*s, 2.0)) == doctest::Approx(24.0).epsilon(1e-14));
  }
}

TEST_CASE("rayleigh quotient worked values") {
  auto s = build_space(kTorus, BasisTag::fourier(3));
  EigProblem p = EigProblem::make(s, PotentialSpec::constant(10.0));
  CHECK(rayleigh_lambda(p, constant_field(*s, 1.0)) == doctest::Approx(11.0).epsilon(1e-14));
  // The quartic term breaks scale invariance: (40 + 16)/4.
  CHECK(rayleigh_lambda(p, constant_field(*s, 2.0)) == doctest::Approx(14.0).epsilon(1e-14));
  CHECK_THROWS_AS(rayleigh_lambda(p, Field::zero(s->basis())), std::invalid_argument);
}

TEST_CASE("zero forcing short-circuits to the zero minimiser") {
  for (const SpaceHandle& s :
       {build_space(kTorus, BasisTag::fourier(6)), build_space(kInterval, BasisTag::legendre(8)),
        build_space(kInterval, BasisTag::fem(8, 2))}) {
    SourceProblem p =
        SourceProblem::make(s, PotentialSpec::constant(2.0), PotentialSpec::constant(0.0));
    SourceSolution sol = solve_source(p);
    CHECK(sol.u.coeffs.norm() == 0.0);
    CHECK(sol.energy == 0.0);
    CHECK(sol.iterations <= 1);
  }
}

TEST_CASE("manufactured cubic source problem is solved exactly on every resolution") {
  for (int n : {1, 2, 3, 5, 16, 33}) {
    auto s = build_space(kTorus, BasisTag::fourier(n), QuadPolicy{3, false});
    SourceProblem p = SourceProblem::make(s, PotentialSpec::constant(1.0),
                                          manufactured_forcing(*s));
    SolverOptions opts;
    opts.tol = 1e-12;
    SourceSolution sol = solve_source(p, opts);
    CHECK(sol.residual <= 1e-12);
    const Field expect = cos_field(*s);
    CHECK((sol.u.coeffs - expect.coeffs).cwiseAbs().maxCoeff() < 1e-12);
    // Minimisation never ends above the linear initial guess.
    CHECK(sol.energy <= sol.history.front().energy + 1e-12);
    for (std::size_t i = 1; i < sol.history.size(); ++i)
      CHECK(sol.history[i].energy <= sol.history[i - 1].energy + 1e-12);
  }
}

TEST_CASE("linear problem is a single solve") {
  auto s = build_space(kTorus, BasisTag::fourier(4));
  SourceProblem p = SourceProblem::make(
      s, PotentialSpec::constant(1.0),
      sample(*s, [](double x) { return (1.0 + 4.0 * M_PI * M_PI) * std::cos(2.0 * M_PI * x); }),
      /*cubic_on=*/false);
  SourceSolution sol = solve_source(p);
  CHECK(sol.iterations == 0);
  CHECK((sol.u.coeffs - cos_field(*s).coeffs).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("dirichlet source solves converge to a manufactured solution") {
  // u*(x) = sin(pi x) vanishes at the endpoints; f = A(u*) keeps it exact at
  // the continuous level, discretisation error decides the distance.
  auto u_exact = [](double x) { return std::sin(M_PI * x); };
  auto forcing = [&](double x) {
    const double u = u_exact(x);
    return M_PI * M_PI * u + (1.0 + x * x) * u + u * u * u;
  };
  const PotentialSpec v = PotentialSpec::polynomial({1.0, 0.0, 1.0});

  SUBCASE("legendre converges spectrally") {
    auto s = build_space(kInterval, BasisTag::legendre(24), QuadPolicy{0, true});
    SourceProblem p = SourceProblem::make(s, v, sample(*s, forcing));
    SourceSolution sol = solve_source(p);
    CHECK(sol.residual <= 1e-12);
    double worst = 0.0;
    for (double x : {-0.77, -0.21, 0.11, 0.69})
      worst = std::max(worst, std::abs(s->eval(sol.u.coeffs, x) - u_exact(x)));
    CHECK(worst < 1e-10);
  }
  SUBCASE("fem P2 converges at the expected scale") {
    auto s = build_space(kInterval, BasisTag::fem(64, 2), QuadPolicy{0, true});
    SourceProblem p = SourceProblem::make(s, v, sample(*s, forcing));
    SourceSolution sol = solve_source(p);
    CHECK(sol.residual <= 1e-12);
    double worst = 0.0;
    for (double x : {-0.77, -0.21, 0.11, 0.69})
      worst = std::max(worst, std::abs(s->eval(sol.u.coeffs, x) - u_exact(x)));
    CHECK(worst < 1e-5);
  }
}

TEST_CASE("non-convergence carries the last iterate") {
  auto s = build_space(kTorus, BasisTag::fourier(8));
  SourceProblem p = SourceProblem::make(s, PotentialSpec::constant(1.0),
                                        sample(*s, [](double x) {
                                          return 40.0 * std::cos(2.0 * M_PI * x) + 10.0;
                                        }));
  SolverOptions opts;
  opts.max_iter = 1;
  opts.tol = 1e-14;
  try {
    solve_source(p, opts);
    FAIL("expected NonConvergence");
  } catch (const NonConvergence& e) {
    CHECK(e.last_iterate.coeffs.size() == s->dim());
    CHECK(e.residual > 0.0);
  }
}

TEST_CASE("constant-potential ground state on the torus") {
  for (int n : {0, 1, 2, 4, 16}) {
    auto s = build_space(kTorus, BasisTag::fourier(n));
    EigProblem p = EigProblem::make(s, PotentialSpec::constant(10.0));
    EigSolution sol = solve_eig(p);
    CHECK(sol.lambda == doctest::Approx(11.0).epsilon(1e-12));
    CHECK(sol.energy == doctest::Approx(5.25).epsilon(1e-12));
    CHECK(std::abs(norms(*s, sol.u).l2 - 1.0) < 1e-13);
    Field expect = constant_field(*s, 1.0);
    CHECK((sol.u.coeffs - expect.coeffs).cwiseAbs().maxCoeff() < 1e-10);
  }
  for (double v : {1.0, 4.0}) {
    auto s = build_space(kTorus, BasisTag::fourier(3));
    EigSolution sol = solve_eig(EigProblem::make(s, PotentialSpec::constant(v)));
    CHECK(sol.lambda == doctest::Approx(v + 1.0).epsilon(1e-12));
  }
}

TEST_CASE("scf mode reproduces the sobolev-gradient ground state") {
  // trig_decay(2.5, K=1, vmin=2) realises 2 + cos(2 pi x).
  const PotentialSpec pot = PotentialSpec::trig_decay(2.5, 1, 2.0);
  auto s = build_space(kTorus, BasisTag::fourier(16), QuadPolicy::for_data(pot));
  EigProblem p = EigProblem::make(s, pot);
  EigSolution a = solve_eig(p);
  SolverOptions scf;
  scf.algorithm = EigAlgorithm::Scf;
  EigSolution b = solve_eig(p, scf, a.u);
  CHECK(b.lambda == doctest::Approx(a.lambda).epsilon(1e-11));
  CHECK((a.u.coeffs - b.u.coeffs).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("two-level eigenvalue self-consistency for an oscillatory potential") {
  const PotentialSpec pot = PotentialSpec::trig_decay(2.5, 1, 2.0);
  auto s64 = build_space(kTorus, BasisTag::fourier(64), QuadPolicy::for_data(pot));
  auto s128 = build_space(kTorus, BasisTag::fourier(128), QuadPolicy::for_data(pot));
  EigSolution a = solve_eig(EigProblem::make(s64, pot));
  EigSolution b = solve_eig(EigProblem::make(s128, pot));
  CHECK(std::abs(a.lambda - b.lambda) <= 1e-10);
}

TEST_CASE("eigen sign conventions") {
  auto s = build_space(kTorus, BasisTag::fourier(4));
  EigProblem p = EigProblem::make(s, PotentialSpec::constant(3.0));
  SUBCASE("energy is even in u and the mean is kept nonnegative") {
    EigSolution sol = solve_eig(p);
    Field neg(s->basis(), -sol.u.coeffs);
    CHECK(energy_eig(p, neg) == doctest::Approx(sol.energy).epsilon(1e-14));
    CHECK(s->quad().weights.dot(s->synth(sol.u.coeffs)) >= 0.0);
  }
  SUBCASE("a negative reference flips the representative") {
    EigSolution plain = solve_eig(p);
    Field ref(s->basis(), -plain.u.coeffs);
    EigSolution flipped = solve_eig(p, SolverOptions{}, ref);
    CHECK(inner_l2(*s, flipped.u, ref) >= 0.0);
    CHECK(flipped.lambda == doctest::Approx(plain.lambda).epsilon(1e-13));
  }
}

TEST_CASE("eigenvalue and energy are monotone across nested spaces") {
  const PotentialSpec pot = PotentialSpec::trig_decay(2.5, 8, 1.0);
  std::vector<double> lambdas, energies;
  for (int n : {4, 8, 16, 64}) {
    auto s = build_space(kTorus, BasisTag::fourier(n), QuadPolicy::for_data(pot));
    EigSolution sol = solve_eig(EigProblem::make(s, pot));
    lambdas.push_back(sol.lambda);
    energies.push_back(sol.energy);
    for (std::size_t i = 1; i < sol.history.size(); ++i)
      CHECK(sol.history[i].energy <= sol.history[i - 1].energy + 1e-12);
  }
  for (std::size_t i = 1; i < lambdas.size(); ++i) {
    CHECK(lambdas[i - 1] >= lambdas.back() - 1e-10);
    CHECK(energies[i - 1] >= energies[i] - 1e-12);
  }
}

TEST_CASE("dirichlet ground states solve on every family") {
  const PotentialSpec v = PotentialSpec::polynomial({1.0, 0.0, 1.0});
  for (const SpaceHandle& s : {build_space(kInterval, BasisTag::legendre(20)),
                               build_space(kInterval, BasisTag::fem(32, 2))}) {
    EigProblem p = EigProblem::make(s, v);
    EigSolution sol = solve_eig(p);
    CHECK(sol.residual <= 1e-12);
    CHECK(std::abs(norms(*s, sol.u).l2 - 1.0) < 1e-13);
    CHECK(sol.lambda == doctest::Approx(rayleigh_lambda(p, sol.u)).epsilon(1e-13));
    // The ground state of a positive potential on the interval stays positive.
    CHECK(s->synth(sol.u.coeffs).minCoeff() > 0.0);
  }
}

TEST_CASE("jacobian check against finite differences") {
  auto s = build_space(kTorus, BasisTag::fourier(8));
  SUBCASE("linear residual matches exactly") {
    SourceProblem p = SourceProblem::make(s, PotentialSpec::constant(2.0),
                                          PotentialSpec::constant(1.0), /*cubic_on=*/false);
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    Eigen::VectorXd c(s->dim());
    for (int i = 0; i < s->dim(); ++i) c[i] = unit(rng);
    CHECK(jacobian_check(p, Field(s->basis(), c)) < 1e-10);
  }
  SUBCASE("cubic residual matches to finite-difference accuracy") {
    SourceProblem p =
        SourceProblem::make(s, PotentialSpec::constant(2.0), PotentialSpec::constant(1.0));
    std::mt19937 rng(6);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    Eigen::VectorXd c(s->dim());
    for (int i = 0; i < s->dim(); ++i) c[i] = unit(rng);
    CHECK(jacobian_check(p, Field(s->basis(), c)) < 1e-6);
  }
  SUBCASE("the linearisation of the zero direction vanishes") {
    SourceProblem p =
        SourceProblem::make(s, PotentialSpec::constant(2.0), PotentialSpec::constant(1.0));
    const Eigen::VectorXd z = Eigen::VectorXd::Zero(s->dim());
    const Eigen::VectorXd jz =
        s->stiffness() * z + s->analysis(p.v_samples.cwiseProduct(s->synth(z)));
    CHECK(jz.norm() == 0.0);
  }
}
