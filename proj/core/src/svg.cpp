#include "fasthcs/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <tuple>

namespace fasthcs::io {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Frame {
  double left, top, width, height;
  double xmax, ymax;
  double x(double v) const { return left + std::min(v, xmax) / xmax * width; }
  double y(double v) const { return top + height - std::min(v, ymax) / ymax * height; }
};

double nice_max(double v) {
  if (!(v > 0.0) || !std::isfinite(v)) return 1.0;
  const double mag = std::pow(10.0, std::floor(std::log10(v)));
  for (double step : {1.0, 2.0, 2.5, 5.0, 10.0}) {
    if (step * mag >= v) return step * mag;
  }
  return 10.0 * mag;
}

void axes(std::string& out, const Frame& f, const std::string& xlabel,
          const std::string& ylabel) {
  out += "<rect x=\"" + num(f.left) + "\" y=\"" + num(f.top) + "\" width=\"" +
         num(f.width) + "\" height=\"" + num(f.height) +
         "\" fill=\"none\" stroke=\"#333\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double xv = f.xmax * k / 4.0;
    const double yv = f.ymax * k / 4.0;
    out += "<text x=\"" + num(f.x(xv)) + "\" y=\"" + num(f.top + f.height + 14) +
           "\" font-size=\"10\" text-anchor=\"middle\">" + num(xv) + "</text>\n";
    out += "<text x=\"" + num(f.left - 4) + "\" y=\"" + num(f.y(yv) + 3) +
           "\" font-size=\"10\" text-anchor=\"end\">" + num(yv) + "</text>\n";
  }
  out += "<text x=\"" + num(f.left + f.width / 2) + "\" y=\"" + num(f.top + f.height + 30) +
         "\" font-size=\"12\" text-anchor=\"middle\">" + escape(xlabel) + "</text>\n";
  out += "<text x=\"" + num(f.left - 36) + "\" y=\"" + num(f.top + f.height / 2) +
         "\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 " +
         num(f.left - 36) + " " + num(f.top + f.height / 2) + ")\">" + escape(ylabel) +
         "</text>\n";
}

}  // namespace

std::string diagnostic_svg(const DiagnosticReport& report,
                           const std::optional<std::vector<RowLabel>>& labels,
                           const std::string& title) {
  double xmax = 1.0;
  double ymax = 1.0;
  for (Index i = 0; i < report.scaled_sd.size(); ++i) {
    if (std::isfinite(report.scaled_sd(i))) xmax = std::max(xmax, report.scaled_sd(i));
    if (std::isfinite(report.scaled_od(i))) ymax = std::max(ymax, report.scaled_od(i));
  }
  const Frame f{60, 40, 520, 380, nice_max(xmax * 1.05), nice_max(ymax * 1.05)};

  std::string out =
      "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"480\" "
      "viewBox=\"0 0 640 480\">\n"
      "<rect width=\"640\" height=\"480\" fill=\"white\"/>\n";
  out += "<text x=\"320\" y=\"22\" font-size=\"14\" text-anchor=\"middle\">" +
         escape(title) + "</text>\n";
  axes(out, f, "scaled score distance", "scaled orthogonal distance");
  out += "<line class=\"cutoff\" x1=\"" + num(f.x(1.0)) + "\" y1=\"" + num(f.top) +
         "\" x2=\"" + num(f.x(1.0)) + "\" y2=\"" + num(f.top + f.height) +
         "\" stroke=\"#999\" stroke-dasharray=\"4 3\"/>\n";
  out += "<line class=\"cutoff\" x1=\"" + num(f.left) + "\" y1=\"" + num(f.y(1.0)) +
         "\" x2=\"" + num(f.left + f.width) + "\" y2=\"" + num(f.y(1.0)) +
         "\" stroke=\"#999\" stroke-dasharray=\"4 3\"/>\n";
  for (Index i = 0; i < report.scaled_sd.size(); ++i) {
    const bool outlier =
        labels && (*labels)[static_cast<std::size_t>(i)] == RowLabel::Outlier;
    out += "<circle class=\"obs\" data-index=\"" + std::to_string(i) + "\" cx=\"" +
           num(f.x(report.scaled_sd(i))) + "\" cy=\"" + num(f.y(report.scaled_od(i))) +
           "\" r=\"3\" fill=\"none\" stroke=\"" + (outlier ? "#e08a2c" : "#1f3f8f") +
           "\"/>\n";
  }
  out += "</svg>\n";
  return out;
}

std::string bias_panels_svg(const std::vector<sim::SummaryRow>& summary) {
  using Key = std::tuple<Index, Index, double, int>;
  std::map<Key, std::vector<const sim::SummaryRow*>> panels;
  for (const auto& row : summary) {
    if (row.statistic != "bias") continue;
    panels[{row.cell.p, row.cell.q, row.cell.epsilon, static_cast<int>(row.cell.config)}]
        .push_back(&row);
  }

  const int cols = std::max<int>(1, std::min<int>(3, static_cast<int>(panels.size())));
  const int rows = static_cast<int>((panels.size() + cols - 1) / cols);
  const double pw = 300, ph = 240;
  const double width = cols * pw;
  const double height = std::max(1, rows) * ph + 30;

  std::string out =
      "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width) + "\" height=\"" +
      num(height) + "\" viewBox=\"0 0 " + num(width) + " " + num(height) + "\">\n"
      "<rect width=\"" + num(width) + "\" height=\"" + num(height) + "\" fill=\"white\"/>\n";

  const char* colours[] = {"#c0392b", "#2471a3", "#229954", "#7d3c98"};
  int idx = 0;
  for (const auto& [key, rowsv] : panels) {
    const double ox = (idx % cols) * pw;
    const double oy = (idx / cols) * ph + 30;
    ++idx;
    double numax = 0.0;
    double ymax = 0.0;
    for (const auto* r : rowsv) {
      numax = std::max(numax, r->cell.nu);
      for (double v : {r->median, r->p75}) {
        if (std::isfinite(v)) ymax = std::max(ymax, v);
      }
    }
    const Frame f{ox + 50, oy + 20, pw - 70, ph - 70, nice_max(numax), nice_max(ymax * 1.05)};
    const auto& first = *rowsv.front();
    out += "<text x=\"" + num(ox + pw / 2) + "\" y=\"" + num(oy + 12) +
           "\" font-size=\"11\" text-anchor=\"middle\">p=" + std::to_string(first.cell.p) +
           " q=" + std::to_string(first.cell.q) + " eps=" + num(first.cell.epsilon) + " " +
           std::string(sim::to_string(first.cell.config)) + "</text>\n";
    axes(out, f, "nu", "bias");

    std::map<int, std::vector<const sim::SummaryRow*>> by_method;
    for (const auto* r : rowsv) by_method[static_cast<int>(r->method)].push_back(r);
    for (auto& [m, pts] : by_method) {
      std::sort(pts.begin(), pts.end(),
                [](const auto* a, const auto* b) { return a->cell.nu < b->cell.nu; });
      const char* colour = colours[m % 4];
      std::string med, p75;
      for (const auto* r : pts) {
        med += num(f.x(r->cell.nu)) + "," + num(f.y(r->median)) + " ";
        p75 += num(f.x(r->cell.nu)) + "," + num(f.y(r->p75)) + " ";
      }
      const std::string name(sim::to_string(static_cast<sim::Method>(m)));
      out += "<polyline class=\"median " + name + "\" points=\"" + med +
             "\" fill=\"none\" stroke=\"" + colour + "\" stroke-width=\"1.5\"/>\n";
      out += "<polyline class=\"p75 " + name + "\" points=\"" + p75 +
             "\" fill=\"none\" stroke=\"" + colour + "\" stroke-dasharray=\"2 3\"/>\n";
    }
  }

  // Legend.
  double lx = 10;
  for (int m = 0; m < 2; ++m) {
    const std::string name(sim::to_string(static_cast<sim::Method>(m)));
    out += "<line x1=\"" + num(lx) + "\" y1=\"12\" x2=\"" + num(lx + 20) +
           "\" y2=\"12\" stroke=\"" + colours[m] + "\" stroke-width=\"2\"/>\n";
    out += "<text x=\"" + num(lx + 24) + "\" y=\"16\" font-size=\"11\">" + name + "</text>\n";
    lx += 100;
  }
  out += "</svg>\n";
  return out;
}

}  // namespace fasthcs::io
