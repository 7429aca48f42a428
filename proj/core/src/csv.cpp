#include "superconv/csv.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace superconv {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.16e", v);
  return buf;
}

} // namespace

std::string render_csv(const std::vector<CaseResult>& cases, ProblemKind kind) {
  if (cases.empty()) throw std::invalid_argument("no case results to serialize");
  std::string out =
      "delta,dim,e_std_l2,e_std_h1,e_best_l2,e_best_h1,e_sup_l2,e_sup_h1,lambda_err,cbar,"
      "iters,wall_ms\n";
  for (const CaseResult& c : cases) {
    out += fmt(c.delta);
    out += ',' + std::to_string(c.dim);
    out += ',' + fmt(c.err.std_l2);
    out += ',' + fmt(c.err.std_h1);
    out += ',' + fmt(c.err.best_l2);
    out += ',' + fmt(c.err.best_h1);
    out += ',' + fmt(c.err.sup_l2);
    out += ',' + fmt(c.err.sup_h1);
    out += ',';
    if (kind == ProblemKind::Eigen && c.err.lambda_err) out += fmt(*c.err.lambda_err);
    out += ',';
    if (kind == ProblemKind::Eigen && c.err.cbar) out += fmt(*c.err.cbar);
    out += ',' + std::to_string(c.iterations);
    out += ',' + fmt(c.wall_ms);
    out += '\n';
  }
  return out;
}

void emit_csv(const StudyResult& result, const std::string& path) {
  const std::string body = render_csv(result.cases, result.config.kind);
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
  f << body;
  if (!f.good()) throw std::runtime_error("write to '" + path + "' failed");
}

} // namespace superconv
