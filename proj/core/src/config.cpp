#include "superconv/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>
#include <sstream>
#include <vector>

namespace superconv {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

double to_double(const std::string& v, int line, const std::string& key) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError(ConfigErrorKind::TypeMismatch, line,
                      "line " + std::to_string(line) + ": key '" + key +
                          "' expects a number, got '" + v + "'");
  }
}

int to_int(const std::string& v, int line, const std::string& key) {
  const double d = to_double(v, line, key);
  const int i = static_cast<int>(d);
  if (static_cast<double>(i) != d)
    throw ConfigError(ConfigErrorKind::TypeMismatch, line,
                      "line " + std::to_string(line) + ": key '" + key +
                          "' expects an integer, got '" + v + "'");
  return i;
}

bool to_bool(const std::string& v, int line, const std::string& key) {
  if (v == "on" || v == "true" || v == "1") return true;
  if (v == "off" || v == "false" || v == "0") return false;
  throw ConfigError(ConfigErrorKind::TypeMismatch, line,
                    "line " + std::to_string(line) + ": key '" + key +
                        "' expects on/off, got '" + v + "'");
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

std::vector<int> to_int_list(std::string v, int line, const std::string& key) {
  v = trim(v);
  if (!v.empty() && v.front() == '[') {
    if (v.back() != ']')
      throw ConfigError(ConfigErrorKind::TypeMismatch, line,
                        "line " + std::to_string(line) + ": unbalanced list for '" + key + "'");
    v = v.substr(1, v.size() - 2);
  }
  std::vector<int> out;
  for (const std::string& tok : split(v, ','))
    if (!tok.empty()) out.push_back(to_int(tok, line, key));
  return out;
}

struct Entry {
  std::string value;
  int line = 0;
};

} // namespace

PotentialSpec parse_potential(const std::string& text) {
  const auto colon = text.find(':');
  const std::string kind = trim(text.substr(0, colon));
  const std::string rest = colon == std::string::npos ? "" : trim(text.substr(colon + 1));
  auto bad = [&](const std::string& msg) {
    return ConfigError(ConfigErrorKind::TypeMismatch, 0, "potential spec '" + text + "': " + msg);
  };

  std::map<std::string, std::string> kv;
  std::vector<std::string> bare;
  for (const std::string& tok : split(rest, ',')) {
    if (tok.empty()) continue;
    const auto eq = tok.find('=');
    if (eq == std::string::npos) {
      bare.push_back(tok);
    } else {
      kv[trim(tok.substr(0, eq))] = trim(tok.substr(eq + 1));
    }
  }
  auto num = [&](const std::string& s) {
    try {
      return std::stod(s);
    } catch (const std::exception&) {
      throw bad("'" + s + "' is not a number");
    }
  };

  PotentialSpec spec;
  if (kind == "const") {
    if (bare.size() != 1 || !kv.empty()) throw bad("expected const:<value>");
    spec = PotentialSpec::constant(num(bare[0]));
  } else if (kind == "trig") {
    if (!kv.count("r") || !kv.count("K") || !kv.count("vmin"))
      throw bad("expected trig:r=..,K=..,vmin=..");
    spec = PotentialSpec::trig_decay(num(kv["r"]), static_cast<int>(num(kv["K"])),
                                     num(kv["vmin"]));
    kv.erase("r");
    kv.erase("K");
    kv.erase("vmin");
    if (!bare.empty()) throw bad("unexpected bare values");
  } else if (kind == "poly") {
    if (bare.empty()) throw bad("expected poly:c0,c1,...");
    std::vector<double> coeffs;
    for (const std::string& b : bare) coeffs.push_back(num(b));
    spec = PotentialSpec::polynomial(std::move(coeffs));
  } else if (kind == "abspow") {
    if (kv.count("gamma")) {
      spec = PotentialSpec::abs_power(num(kv["gamma"]));
      kv.erase("gamma");
    } else if (bare.size() == 1) {
      spec = PotentialSpec::abs_power(num(bare[0]));
    } else {
      throw bad("expected abspow:<gamma>");
    }
  } else {
    throw bad("unknown potential kind '" + kind + "'");
  }
  if (kv.count("scale")) {
    spec.scale = num(kv["scale"]);
    kv.erase("scale");
  }
  if (!kv.empty()) throw bad("unknown parameter '" + kv.begin()->first + "'");
  return spec;
}

StudyConfig parse_config(const std::string& text) {
  static const std::map<std::string, std::vector<std::string>> kSchema = {
      {"problem", {"kind", "potential", "source", "cubic"}},
      {"space", {"basis", "degree"}},
      {"sweep", {"cases", "reference", "gain_tol", "std_tol"}},
      {"solver", {"tol", "max_iter", "algorithm"}},
      {"output", {"csv", "plot"}},
  };

  std::map<std::string, std::map<std::string, Entry>> sections;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = raw;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError(ConfigErrorKind::BadSection, lineno,
                          "line " + std::to_string(lineno) + ": unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (!kSchema.count(section))
        throw ConfigError(ConfigErrorKind::BadSection, lineno,
                          "line " + std::to_string(lineno) + ": unknown section [" + section +
                              "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(ConfigErrorKind::TypeMismatch, lineno,
                        "line " + std::to_string(lineno) + ": expected key = value");
    if (section.empty())
      throw ConfigError(ConfigErrorKind::BadSection, lineno,
                        "line " + std::to_string(lineno) + ": key outside any section");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto& allowed = kSchema.at(section);
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw ConfigError(ConfigErrorKind::UnknownKey, lineno,
                        "line " + std::to_string(lineno) + ": unknown key '" + key +
                            "' in section [" + section + "]");
    sections[section][key] = Entry{value, lineno};
  }

  auto get = [&](const std::string& sec, const std::string& key) -> const Entry* {
    auto s = sections.find(sec);
    if (s == sections.end()) return nullptr;
    auto k = s->second.find(key);
    if (k == s->second.end()) return nullptr;
    return &k->second;
  };
  auto require = [&](const std::string& sec, const std::string& key) -> const Entry& {
    const Entry* e = get(sec, key);
    if (e == nullptr)
      throw ConfigError(ConfigErrorKind::MissingRequired, 0,
                        "missing required key '" + key + "' in section [" + sec + "]");
    return *e;
  };

  StudyConfig cfg;
  {
    const Entry& kind = require("problem", "kind");
    if (kind.value == "src") {
      cfg.kind = ProblemKind::Source;
    } else if (kind.value == "eig") {
      cfg.kind = ProblemKind::Eigen;
    } else {
      throw ConfigError(ConfigErrorKind::TypeMismatch, kind.line,
                        "line " + std::to_string(kind.line) + ": kind must be src or eig");
    }
  }
  cfg.potential = parse_potential(require("problem", "potential").value);
  if (const Entry* e = get("problem", "source")) cfg.source = parse_potential(e->value);
  if (const Entry* e = get("problem", "cubic")) cfg.cubic_on = to_bool(e->value, e->line, "cubic");
  if (cfg.kind == ProblemKind::Source && !cfg.source)
    throw ConfigError(ConfigErrorKind::MissingRequired, 0,
                      "source studies require 'source' in section [problem]");

  {
    const Entry& basis = require("space", "basis");
    if (basis.value == "fourier") {
      cfg.family = BasisFamily::Fourier;
    } else if (basis.value == "legendre") {
      cfg.family = BasisFamily::Legendre;
    } else if (basis.value == "fem") {
      cfg.family = BasisFamily::FemLagrange;
    } else {
      throw ConfigError(ConfigErrorKind::TypeMismatch, basis.line,
                        "line " + std::to_string(basis.line) +
                            ": basis must be fourier, legendre or fem");
    }
    if (const Entry* e = get("space", "degree")) {
      cfg.fem_degree = to_int(e->value, e->line, "degree");
      if (cfg.family != BasisFamily::FemLagrange)
        throw ConfigError(ConfigErrorKind::UnknownKey, e->line,
                          "line " + std::to_string(e->line) +
                              ": degree only applies to the fem basis");
    }
  }

  {
    const Entry& cases = require("sweep", "cases");
    cfg.case_sizes = to_int_list(cases.value, cases.line, "cases");
    if (cfg.case_sizes.size() < 4)
      throw ConfigError(ConfigErrorKind::MissingRequired, cases.line,
                        "line " + std::to_string(cases.line) +
                            ": at least 4 cases are required for rate fitting");
    const Entry& ref = require("sweep", "reference");
    cfg.reference_size = to_int(ref.value, ref.line, "reference");
    if (const Entry* e = get("sweep", "gain_tol")) cfg.gain_tol = to_double(e->value, e->line, "gain_tol");
    if (const Entry* e = get("sweep", "std_tol")) cfg.std_tol = to_double(e->value, e->line, "std_tol");
  }

  if (const Entry* e = get("solver", "tol")) cfg.solver.tol = to_double(e->value, e->line, "tol");
  if (const Entry* e = get("solver", "max_iter"))
    cfg.solver.max_iter = to_int(e->value, e->line, "max_iter");
  if (const Entry* e = get("solver", "algorithm")) {
    if (e->value == "sobolev") {
      cfg.solver.algorithm = EigAlgorithm::SobolevGradient;
    } else if (e->value == "scf") {
      cfg.solver.algorithm = EigAlgorithm::Scf;
    } else {
      throw ConfigError(ConfigErrorKind::TypeMismatch, e->line,
                        "line " + std::to_string(e->line) +
                            ": algorithm must be sobolev or scf");
    }
  }

  if (const Entry* e = get("output", "csv")) cfg.csv_path = e->value;
  if (const Entry* e = get("output", "plot")) cfg.plot_path = e->value;
  return cfg;
}

std::string render_config(const StudyConfig& cfg) {
  std::ostringstream os;
  os.precision(17);
  os << "[problem]\n";
  os << "kind = " << to_string(cfg.kind) << "\n";
  os << "potential = " << cfg.potential.describe() << "\n";
  if (cfg.source) os << "source = " << cfg.source->describe() << "\n";
  if (!cfg.cubic_on) os << "cubic = off\n";
  os << "\n[space]\n";
  os << "basis = " << to_string(cfg.family) << "\n";
  if (cfg.family == BasisFamily::FemLagrange) os << "degree = " << cfg.fem_degree << "\n";
  os << "\n[sweep]\n";
  os << "cases = [";
  for (std::size_t i = 0; i < cfg.case_sizes.size(); ++i) {
    if (i) os << ", ";
    os << cfg.case_sizes[i];
  }
  os << "]\n";
  os << "reference = " << cfg.reference_size << "\n";
  if (cfg.gain_tol > 0.0) os << "gain_tol = " << cfg.gain_tol << "\n";
  if (cfg.std_tol != 0.3) os << "std_tol = " << cfg.std_tol << "\n";
  os << "\n[solver]\n";
  os << "tol = " << cfg.solver.tol << "\n";
  os << "max_iter = " << cfg.solver.max_iter << "\n";
  if (cfg.solver.algorithm == EigAlgorithm::Scf) os << "algorithm = scf\n";
  if (!cfg.csv_path.empty() || !cfg.plot_path.empty()) {
    os << "\n[output]\n";
    if (!cfg.csv_path.empty()) os << "csv = " << cfg.csv_path << "\n";
    if (!cfg.plot_path.empty()) os << "plot = " << cfg.plot_path << "\n";
  }
  return os.str();
}

} // namespace superconv
