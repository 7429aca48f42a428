#include "superconv/plot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace superconv {

namespace {

struct Series {
  std::string name;
  std::string color;
  std::vector<std::pair<double, double>> points; // (delta, error)
  double slope = std::numeric_limits<double>::quiet_NaN();
};

std::string fmt(double v, int prec = 2) {
  std::ostringstream os;
  os.precision(prec);
  os << std::fixed << v;
  return os.str();
}

} // namespace

std::string render_plot_svg(const StudyResult& result) {
  const std::vector<CaseResult>& cases = result.cases;
  if (cases.size() < 2) throw std::invalid_argument("plot needs at least two cases");

  static const char* kColors[6] = {"#1f77b4", "#ff7f0e", "#2ca02c",
                                   "#d62728", "#9467bd", "#8c564b"};
  std::vector<Series> series;
  std::vector<std::string> skipped;
  for (int idx = 0; idx < 6; ++idx) {
    Series s;
    s.name = kColumnNames[idx];
    s.color = kColors[idx];
    for (const CaseResult& c : cases) {
      const double v = column_value(c.err, idx);
      if (std::isfinite(v) && v > 1e-16) s.points.emplace_back(c.delta, v);
    }
    if (idx < static_cast<int>(result.report.fits.size()))
      s.slope = result.report.fits[idx].slope;
    if (s.points.size() < 2) {
      skipped.push_back(s.name + " (at the measurement floor)");
      continue;
    }
    series.push_back(std::move(s));
  }
  if (series.empty()) throw std::invalid_argument("all error columns are degenerate");

  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const Series& s : series) {
    for (const auto& [d, e] : s.points) {
      xmin = std::min(xmin, std::log10(d));
      xmax = std::max(xmax, std::log10(d));
      ymin = std::min(ymin, std::log10(e));
      ymax = std::max(ymax, std::log10(e));
    }
  }
  if (xmax - xmin < 1e-12) xmax = xmin + 1.0;
  if (ymax - ymin < 1e-12) ymax = ymin + 1.0;

  const double W = 760, H = 520, L = 70, R = 190, T = 40, B = 50;
  auto px = [&](double lx) { return L + (lx - xmin) / (xmax - xmin) * (W - L - R); };
  auto py = [&](double ly) { return H - B - (ly - ymin) / (ymax - ymin) * (H - T - B); };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
     << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
  os << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
  os << "<text x=\"" << L << "\" y=\"24\" font-family=\"monospace\" font-size=\"14\">"
     << "error vs delta (log-log), " << to_string(result.config.family) << " "
     << to_string(result.config.kind) << "</text>\n";

  // Axes and decade ticks.
  os << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B
     << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B
     << "\" stroke=\"black\"/>\n";
  for (int d = static_cast<int>(std::ceil(xmin)); d <= static_cast<int>(std::floor(xmax)); ++d) {
    os << "<line x1=\"" << px(d) << "\" y1=\"" << H - B << "\" x2=\"" << px(d) << "\" y2=\""
       << H - B + 5 << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << px(d) - 14 << "\" y=\"" << H - B + 20
       << "\" font-family=\"monospace\" font-size=\"11\">1e" << d << "</text>\n";
  }
  for (int d = static_cast<int>(std::ceil(ymin)); d <= static_cast<int>(std::floor(ymax)); ++d) {
    os << "<line x1=\"" << L - 5 << "\" y1=\"" << py(d) << "\" x2=\"" << L << "\" y2=\"" << py(d)
       << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << 8 << "\" y=\"" << py(d) + 4
       << "\" font-family=\"monospace\" font-size=\"11\">1e" << d << "</text>\n";
  }

  double legend_y = T + 10;
  for (const Series& s : series) {
    std::ostringstream path;
    for (std::size_t i = 0; i < s.points.size(); ++i) {
      const double x = px(std::log10(s.points[i].first));
      const double y = py(std::log10(s.points[i].second));
      path << (i == 0 ? "M" : "L") << x << " " << y << " ";
      os << "<circle cx=\"" << x << "\" cy=\"" << y << "\" r=\"3\" fill=\"" << s.color
         << "\"/>\n";
    }
    os << "<path d=\"" << path.str() << "\" fill=\"none\" stroke=\"" << s.color
       << "\" stroke-width=\"1.5\"/>\n";
    os << "<text x=\"" << W - R + 12 << "\" y=\"" << legend_y
       << "\" font-family=\"monospace\" font-size=\"12\" fill=\"" << s.color << "\">" << s.name;
    if (std::isfinite(s.slope))
      os << " fit " << fmt(s.slope);
    else if (std::isinf(s.slope))
      os << " (floor)";
    os << "</text>\n";
    legend_y += 18;
  }

  // Theory guide lines through the finest point of the matching series.
  auto guide = [&](const std::string& col, double slope, const std::string& label) {
    const Series* s = nullptr;
    for (const Series& cand : series)
      if (cand.name == col) s = &cand;
    if (s == nullptr || !std::isfinite(slope)) return;
    const auto& fine = s->points.back();
    const double lx1 = std::log10(fine.first), ly1 = std::log10(fine.second);
    const double lx0 = lx1 + std::min(1.0, xmax - lx1 + 0.2);
    const double ly0 = ly1 + slope * (lx0 - lx1);
    os << "<line x1=\"" << px(lx0) << "\" y1=\"" << py(ly0) << "\" x2=\"" << px(lx1)
       << "\" y2=\"" << py(ly1) << "\" stroke=\"" << s->color
       << "\" stroke-dasharray=\"5,4\" stroke-width=\"1\"/>\n";
    os << "<text x=\"" << W - R + 12 << "\" y=\"" << legend_y
       << "\" font-family=\"monospace\" font-size=\"11\" fill=\"" << s->color << "\">" << label
       << " " << fmt(slope, 2) << "</text>\n";
    legend_y += 16;
  };
  const TheoryRow& th = result.report.theory;
  if (th.std_l2) guide("e_std_l2", *th.std_l2, "theory std_l2");
  if (th.std_h1) guide("e_std_h1", *th.std_h1, "theory std_h1");
  const ColumnFit best_h1 = result.report.fits.size() > 3 ? result.report.fits[3] : ColumnFit{};
  if (th.gain_l2 && std::isfinite(best_h1.slope))
    guide("e_sup_l2", best_h1.slope + *th.gain_l2, "theory sup_l2");
  if (th.gain_h1 && std::isfinite(best_h1.slope))
    guide("e_sup_h1", best_h1.slope + *th.gain_h1, "theory sup_h1");

  double note_y = H - B + 36;
  for (const std::string& note : skipped) {
    os << "<text x=\"" << L << "\" y=\"" << note_y
       << "\" font-family=\"monospace\" font-size=\"11\" fill=\"#666\">skipped: " << note
       << "</text>\n";
    note_y += 14;
  }
  os << "</svg>\n";
  return os.str();
}

void emit_plot(const StudyResult& result, const std::string& path) {
  const std::string body = render_plot_svg(result);
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
  f << body;
  if (!f.good()) throw std::runtime_error("write to '" + path + "' failed");
}

} // namespace superconv
