#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "superconv/aux_ops.hpp"
#include "superconv/config.hpp"
#include "superconv/csv.hpp"
#include "superconv/extension.hpp"
#include "superconv/log.hpp"
#include "superconv/manifest.hpp"
#include "superconv/plot.hpp"
#include "superconv/solver.hpp"
#include "superconv/study.hpp"
#include "superconv/transfer.hpp"
#include "superconv/version.hpp"

namespace fs = std::filesystem;
using namespace superconv;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNonConvergence = 2;
constexpr int kExitVerdictFailure = 3;
constexpr int kExitReferenceUnconverged = 4;

struct CommonArgs {
  std::string config_path;
  std::string out_dir = ".";
  bool plot = false;
  int threads = 1;
  unsigned seed = 0; // reserved; current data synthesis is deterministic
};

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot read config file '" + path + "'");
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

StudyConfig load_config(const CommonArgs& args, std::string* text_out) {
  const std::string text = slurp(args.config_path);
  if (text_out != nullptr) *text_out = text;
  StudyConfig cfg = parse_config(text);
  cfg.threads = args.threads;
  return cfg;
}

fs::path resolve_out(const CommonArgs& args, const std::string& name) {
  fs::create_directories(args.out_dir);
  return fs::path(args.out_dir) / name;
}

void print_verdicts(const RateReport& rep) {
  for (const Verdict& v : rep.verdicts) {
    std::printf("  %-12s fitted %8.3f", v.name.c_str(), v.fitted);
    if (v.asserted) {
      std::printf("  target %s%.3f (tol %.2f)  %s\n", v.two_sided ? "" : ">= ", v.target, v.tol,
                  v.pass ? "PASS" : "FAIL");
    } else {
      std::printf("  (informational)\n");
    }
  }
}

int study_exit_code(const StudyResult& result) {
  if (result.aborted) return kExitNonConvergence;
  if (!result.reference_ok) return kExitReferenceUnconverged;
  if (!result.report.all_asserted_pass) return kExitVerdictFailure;
  return kExitOk;
}

int cmd_study(const CommonArgs& args, bool diagnostics_only) {
  std::string text;
  StudyConfig cfg = load_config(args, &text);
  StudyResult result = run_study(cfg);

  std::printf("study: %s %s, %zu cases, reference %d (doubled check run included)\n",
              to_string(cfg.family), to_string(cfg.kind), cfg.case_sizes.size(),
              cfg.reference_size);
  std::printf("%-8s %-12s %-12s %-12s %-12s %-12s %-12s\n", "size", "e_std_l2", "e_std_h1",
              "e_best_h1", "e_sup_l2", "e_sup_h1", "iters");
  for (const CaseResult& c : result.cases)
    std::printf("%-8d %-12.3e %-12.3e %-12.3e %-12.3e %-12.3e %-12d\n", c.size, c.err.std_l2,
                c.err.std_h1, c.err.best_h1, c.err.sup_l2, c.err.sup_h1, c.iterations);

  std::printf("fitted slopes vs delta:");
  for (int i = 0; i < 6; ++i)
    std::printf(" %s=%.3f", result.report.fits[i].column.c_str(), result.report.fits[i].slope);
  std::printf("\n");
  std::printf("gains over e_best_h1: L2 %.3f, H1 %.3f (theory row: %s)\n", result.report.gain_l2,
              result.report.gain_h1, result.report.theory.label.c_str());
  print_verdicts(result.report);
  std::printf("reference: floor_h1 %.3e, smallest accepted e_std_h1 %.3e, perturbation %.3f%% -> %s\n",
              result.reference_floor_h1, result.smallest_accepted_std_h1,
              100.0 * result.max_ref_perturbation, result.reference_ok ? "accepted" : "REJECTED");
  std::printf("strict two-level protocol: %s\n", result.strict_protocol_ok ? "satisfied" : "not satisfied (reported only)");
  if (result.aborted) std::printf("ABORTED: %s\n", result.abort_reason.c_str());

  if (diagnostics_only) {
    std::printf("assumptions: max |u|_inf %.4f, max |Vtilde|_inf %.4f, min coercivity %.6f, "
                "uniformly bounded: %s\n",
                result.assumptions.max_linf_u, result.assumptions.max_linf_v_tilde,
                result.assumptions.min_coercivity,
                result.assumptions.uniformly_bounded ? "yes" : "no");
    if (result.aborted) return kExitNonConvergence;
    if (!result.reference_ok) return kExitReferenceUnconverged;
    return kExitOk;
  }

  const std::string csv_name = cfg.csv_path.empty() ? "results.csv" : cfg.csv_path;
  const fs::path csv_path = resolve_out(args, csv_name);
  emit_csv(result, csv_path.string());
  std::printf("wrote %s\n", csv_path.string().c_str());

  const fs::path manifest_path = resolve_out(args, "manifest.json");
  write_manifest(result, text, manifest_path.string());
  std::printf("wrote %s\n", manifest_path.string().c_str());

  if (args.plot || !cfg.plot_path.empty()) {
    const std::string plot_name = cfg.plot_path.empty() ? "rates.svg" : cfg.plot_path;
    const fs::path plot_path = resolve_out(args, plot_name);
    try {
      emit_plot(result, plot_path.string());
      std::printf("wrote %s\n", plot_path.string().c_str());
    } catch (const std::invalid_argument& e) {
      std::printf("plot skipped: %s\n", e.what());
    }
  }
  return study_exit_code(result);
}

int cmd_solve(const CommonArgs& args, int size_override) {
  StudyConfig cfg = load_config(args, nullptr);
  const int size = size_override > 0 ? size_override : cfg.reference_size;
  auto space = build_space(cfg.domain(), cfg.tag(size),
                           cfg.source ? QuadPolicy::for_data(cfg.potential, *cfg.source)
                                      : QuadPolicy::for_data(cfg.potential));
  Field u;
  if (cfg.kind == ProblemKind::Source) {
    SourceProblem p = SourceProblem::make(space, cfg.potential, *cfg.source, cfg.cubic_on);
    SourceSolution sol = solve_source(p, cfg.solver);
    u = sol.u;
    std::printf("solved %s: dim %d, energy %.16e, residual %.3e, %d iterations\n",
                cfg.tag(size).describe().c_str(), space->dim(), sol.energy, sol.residual,
                sol.iterations);
  } else {
    EigProblem p = EigProblem::make(space, cfg.potential);
    EigSolution sol = solve_eig(p, cfg.solver);
    u = sol.u;
    std::printf("solved %s: dim %d, energy %.16e, lambda %.16e, residual %.3e, %d iterations\n",
                cfg.tag(size).describe().c_str(), space->dim(), sol.energy, sol.lambda,
                sol.residual, sol.iterations);
  }
  const fs::path path = resolve_out(args, "solution.txt");
  std::ofstream f(path);
  f.precision(17);
  for (int i = 0; i < u.coeffs.size(); ++i) f << u.coeffs[i] << "\n";
  std::printf("wrote %s\n", path.string().c_str());
  return kExitOk;
}

int cmd_extend(const CommonArgs& args, int resolution, int legendre_degree) {
  using Fn = std::function<double(double)>;
  struct Probe {
    const char* name;
    Fn g;
  };
  const std::vector<Probe> family = {
      {"sin(pi x)", [](double x) { return std::sin(M_PI * x); }},
      {"sin(2 pi x)", [](double x) { return std::sin(2.0 * M_PI * x); }},
      {"1 - x^2", [](double x) { return 1.0 - x * x; }},
      {"(1 - x^2)^2", [](double x) { return (1.0 - x * x) * (1.0 - x * x); }},
      {"x (1 - x^2)", [](double x) { return x * (1.0 - x * x); }},
  };
  bool ok = true;
  std::ostringstream report;
  report << "odd periodic extension cross-check (resolution " << resolution << ", legendre N="
         << legendre_degree << ")\n";
  for (const Probe& probe : family) {
    const double err = dirichlet_agreement_h1(probe.g, resolution, legendre_degree);
    const bool pass = err <= 1e-10;
    ok = ok && pass;
    report << "  " << probe.name << ": H1 agreement " << err << (pass ? "  ok" : "  MISMATCH")
           << "\n";
  }
  std::fputs(report.str().c_str(), stdout);
  const fs::path path = resolve_out(args, "extension_report.txt");
  std::ofstream f(path);
  f << report.str();
  return ok ? kExitOk : kExitVerdictFailure;
}

int cmd_theory(const std::string& family, const std::string& problem, int degree, double rv,
               double sf) {
  BasisFamily fam;
  if (family == "fourier") {
    fam = BasisFamily::Fourier;
  } else if (family == "legendre") {
    fam = BasisFamily::Legendre;
  } else if (family == "fem") {
    fam = BasisFamily::FemLagrange;
  } else {
    std::fprintf(stderr, "unknown family '%s'\n", family.c_str());
    return kExitUsage;
  }
  const ProblemKind kind = problem == "eig" ? ProblemKind::Eigen : ProblemKind::Source;
  const TheoryRow row = theory_row(fam, degree, kind, rv, sf);
  std::printf("%s\n", row.label.c_str());
  auto show = [](const char* name, const std::optional<double>& v) {
    if (v)
      std::printf("  %-22s %.3f\n", name, *v);
    else
      std::printf("  %-22s (not asserted)\n", name);
  };
  show("standard L2 slope", row.std_l2);
  show("standard H1 slope", row.std_h1);
  show("superconv gain (L2)", row.gain_l2);
  show("superconv gain (H1)", row.gain_h1);
  return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"1D Galerkin solvers for cubic Schrodinger-type problems and a "
               "best-approximation superconvergence measurement harness"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  app.fallthrough();

  CommonArgs common;
  app.add_option("--config", common.config_path, "study configuration file");
  app.add_option("--out", common.out_dir, "output directory");
  app.add_flag("--plot", common.plot, "emit the log-log SVG chart");
  app.add_option("--threads", common.threads, "worker threads for study cases");
  app.add_option("--seed", common.seed, "reserved; data synthesis is deterministic");

  CLI::App* solve = app.add_subcommand("solve", "solve one problem and write coefficients");
  int solve_size = 0;
  solve->add_option("--size", solve_size, "resolution (defaults to the config reference)");

  CLI::App* study = app.add_subcommand("study", "run the full delta sweep with rate fits");
  CLI::App* check = app.add_subcommand("check", "run assumption/invariant diagnostics");
  CLI::App* extend = app.add_subcommand("extend", "odd periodic extension cross-check");
  int ext_resolution = 4096;
  int ext_legendre = 64;
  extend->add_option("--resolution", ext_resolution, "extension mode cutoff");
  extend->add_option("--legendre", ext_legendre, "degree of the direct solve");

  CLI::App* theory = app.add_subcommand("theory", "print the expected-rate table row");
  std::string th_family = "fourier", th_problem = "src";
  int th_degree = 1;
  double th_rv = std::numeric_limits<double>::infinity();
  double th_sf = std::numeric_limits<double>::infinity();
  theory->add_option("--family", th_family, "fourier|legendre|fem");
  theory->add_option("--problem", th_problem, "src|eig");
  theory->add_option("--degree", th_degree, "fem polynomial degree");
  theory->add_option("--rv", th_rv, "potential regularity index");
  theory->add_option("--sf", th_sf, "source regularity index");

  CLI11_PARSE(app, argc, argv);

  try {
    if (theory->parsed()) return cmd_theory(th_family, th_problem, th_degree, th_rv, th_sf);
    if (extend->parsed()) return cmd_extend(common, ext_resolution, ext_legendre);
    if (common.config_path.empty()) {
      std::fprintf(stderr, "error: --config is required for this subcommand\n");
      return kExitUsage;
    }
    if (solve->parsed()) return cmd_solve(common, solve_size);
    if (study->parsed()) return cmd_study(common, /*diagnostics_only=*/false);
    if (check->parsed()) return cmd_study(common, /*diagnostics_only=*/true);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitUsage;
  } catch (const NonConvergence& e) {
    std::fprintf(stderr, "solver did not converge (residual %.3e)\n", e.residual);
    return kExitNonConvergence;
  } catch (const NegativeCurvatureStall& e) {
    std::fprintf(stderr, "solver stalled: %s\n", e.what());
    return kExitNonConvergence;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  }
  return kExitUsage;
}
