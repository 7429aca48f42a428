#include "superconv/manifest.hpp"

#include <chrono>
#include <ctime>
#include <fstream>

#include <json.hpp>

#include "superconv/version.hpp"

namespace superconv {

namespace {

using nlohmann::json;

json to_json(const ErrorColumns& e) {
  json j;
  j["e_std_l2"] = e.std_l2;
  j["e_std_h1"] = e.std_h1;
  j["e_best_l2"] = e.best_l2;
  j["e_best_h1"] = e.best_h1;
  j["e_sup_l2"] = e.sup_l2;
  j["e_sup_h1"] = e.sup_h1;
  if (e.lambda_err) j["lambda_err"] = *e.lambda_err;
  if (e.cbar) j["cbar"] = *e.cbar;
  return j;
}

json finite_or_string(double v) {
  if (std::isfinite(v)) return v;
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return "nan";
}

std::string timestamp_utc() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

} // namespace

std::string render_manifest(const StudyResult& result, const std::string& config_text) {
  json j;
  j["tool"] = "superconv";
  j["version"] = kVersion;
  j["timestamp"] = timestamp_utc();
  j["config"] = config_text;

  json cases = json::array();
  for (const CaseResult& c : result.cases) {
    json jc;
    jc["size"] = c.size;
    jc["delta"] = c.delta;
    jc["dim"] = c.dim;
    jc["errors"] = to_json(c.err);
    jc["errors_vs_doubled_reference"] = to_json(c.err_check);
    jc["solver_residual"] = c.solver_residual;
    jc["iterations"] = c.iterations;
    jc["wall_ms"] = c.wall_ms;
    cases.push_back(jc);
  }
  j["cases"] = cases;

  json fits = json::array();
  for (const ColumnFit& f : result.report.fits) {
    json jf;
    jf["column"] = f.column;
    jf["slope"] = finite_or_string(f.slope);
    jf["fit_residual"] = f.fit_residual;
    jf["used_sizes"] = f.used_sizes;
    jf["collapsed"] = f.collapsed;
    fits.push_back(jf);
  }
  json report;
  report["fits"] = fits;
  report["gain_l2"] = finite_or_string(result.report.gain_l2);
  report["gain_h1"] = finite_or_string(result.report.gain_h1);
  report["lambda_slope"] = finite_or_string(result.report.lambda_slope);
  report["cbar_slope"] = finite_or_string(result.report.cbar_slope);
  report["theory_label"] = result.report.theory.label;
  if (result.report.theory.std_l2) report["theory_std_l2"] = *result.report.theory.std_l2;
  if (result.report.theory.std_h1) report["theory_std_h1"] = *result.report.theory.std_h1;
  if (result.report.theory.gain_l2) report["theory_gain_l2"] = *result.report.theory.gain_l2;
  if (result.report.theory.gain_h1) report["theory_gain_h1"] = *result.report.theory.gain_h1;
  json verdicts = json::array();
  for (const Verdict& v : result.report.verdicts) {
    json jv;
    jv["name"] = v.name;
    jv["fitted"] = finite_or_string(v.fitted);
    jv["target"] = v.target;
    jv["tol"] = v.tol;
    jv["two_sided"] = v.two_sided;
    jv["asserted"] = v.asserted;
    jv["pass"] = v.pass;
    verdicts.push_back(jv);
  }
  report["verdicts"] = verdicts;
  j["report"] = report;

  json assumptions;
  assumptions["max_linf_u"] = result.assumptions.max_linf_u;
  assumptions["max_linf_v_tilde"] = result.assumptions.max_linf_v_tilde;
  assumptions["min_coercivity"] = result.assumptions.min_coercivity;
  assumptions["uniformly_bounded"] = result.assumptions.uniformly_bounded;
  j["assumptions"] = assumptions;

  j["lambda_ref"] = result.lambda_ref;
  j["reference_floor_h1"] = result.reference_floor_h1;
  j["smallest_accepted_std_h1"] = result.smallest_accepted_std_h1;
  j["max_ref_perturbation"] = result.max_ref_perturbation;
  j["reference_ok"] = result.reference_ok;
  j["strict_protocol_ok"] = result.strict_protocol_ok;
  j["aborted"] = result.aborted;
  if (result.aborted) j["abort_reason"] = result.abort_reason;
  j["wall_ms_total"] = result.wall_ms_total;
  return j.dump(2) + "\n";
}

void write_manifest(const StudyResult& result, const std::string& config_text,
                    const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
  f << render_manifest(result, config_text);
  if (!f.good()) throw std::runtime_error("write to '" + path + "' failed");
}

} // namespace superconv
