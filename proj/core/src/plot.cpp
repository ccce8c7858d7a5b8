#include "ggmeval/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <set>
#include <sstream>

#include "ggmeval/common.hpp"
#include "ggmeval/harness.hpp"

namespace ggmeval {

namespace {

constexpr int kGridPoints = 64;
constexpr double kPanelHeight = 260.0;
constexpr double kPlotTop = 40.0;
constexpr double kPlotHeight = 180.0;
constexpr double kLeft = 60.0;
constexpr double kGroupWidth = 80.0;
constexpr double kHalfWidth = 30.0;

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

}  // namespace

double silverman_bandwidth(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n < 2) return 0.0;
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  const double sd = std::sqrt(var / static_cast<double>(n - 1));
  std::vector<double> copy(values.begin(), values.end());
  const double iqr = quantile(copy, 0.75) - quantile(copy, 0.25);
  double spread = sd;
  if (iqr > 0.0) spread = std::min(sd, iqr / 1.34);
  if (!(spread > 0.0)) return 0.0;
  return 0.9 * spread * std::pow(static_cast<double>(n), -0.2);
}

ViolinShape violin_shape(std::span<const double> values) {
  if (values.empty()) throw ArgumentError("violin_shape: no values");
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  ViolinShape s;
  s.median = quantile(v, 0.5);
  s.q1 = quantile(v, 0.25);
  s.q3 = quantile(v, 0.75);
  const double iqr = s.q3 - s.q1;
  const double lo_fence = s.q1 - 1.5 * iqr;
  const double hi_fence = s.q3 + 1.5 * iqr;
  s.whisker_low = *std::find_if(v.begin(), v.end(),
                                [&](double x) { return x >= lo_fence; });
  s.whisker_high = *std::find_if(v.rbegin(), v.rend(),
                                 [&](double x) { return x <= hi_fence; });
  s.bandwidth = silverman_bandwidth(v);
  if (s.bandwidth > 0.0) {
    const double h = s.bandwidth;
    const double norm =
        1.0 / (static_cast<double>(v.size()) * h * std::sqrt(2.0 * std::numbers::pi));
    const double lo = std::max(-1.0, v.front() - 3.0 * h);
    const double hi = std::min(1.0, v.back() + 3.0 * h);
    for (int i = 0; i < kGridPoints; ++i) {
      const double y = lo + (hi - lo) * i / (kGridPoints - 1);
      double d = 0.0;
      for (double x : v) d += std::exp(-0.5 * ((y - x) / h) * ((y - x) / h));
      s.density.emplace_back(y, d * norm);
    }
  }
  return s;
}

std::string render_violin_svg(std::span<const ReportGroup> groups) {
  std::vector<std::string> panels;
  std::set<std::string> extractors;
  for (const ReportGroup& g : groups) {
    if (std::find(panels.begin(), panels.end(), g.perturbation) == panels.end()) {
      panels.push_back(g.perturbation);
    }
    extractors.insert(g.extractor);
  }
  std::size_t max_groups = 1;
  for (const std::string& p : panels) {
    std::size_t c = 0;
    for (const ReportGroup& g : groups) c += g.perturbation == p;
    max_groups = std::max(max_groups, c);
  }
  const double width = kLeft + kGroupWidth * static_cast<double>(max_groups) + 20.0;
  const double height = kPanelHeight * static_cast<double>(std::max<std::size_t>(1, panels.size()));

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width)
      << "\" height=\"" << num(height) << "\" viewBox=\"0 0 " << num(width)
      << ' ' << num(height) << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  for (std::size_t p = 0; p < panels.size(); ++p) {
    const double top = kPanelHeight * static_cast<double>(p) + kPlotTop;
    auto y_of = [&](double rho) {
      return top + (1.0 - rho) / 2.0 * kPlotHeight;
    };
    svg << "<g class=\"panel\" data-perturbation=\"" << escape(panels[p]) << "\">\n";
    svg << "<text x=\"" << num(kLeft) << "\" y=\"" << num(top - 16)
        << "\" font-size=\"13\">" << escape(panels[p]) << "</text>\n";
    for (double tick : {-1.0, -0.5, 0.0, 0.5, 1.0}) {
      svg << "<line class=\"grid\" x1=\"" << num(kLeft) << "\" x2=\""
          << num(width - 10) << "\" y1=\"" << num(y_of(tick)) << "\" y2=\""
          << num(y_of(tick)) << "\" stroke=\"#dddddd\"/>\n";
      svg << "<text x=\"" << num(kLeft - 6) << "\" y=\"" << num(y_of(tick) + 4)
          << "\" text-anchor=\"end\">" << num(tick) << "</text>\n";
    }
    std::size_t slot = 0;
    for (const ReportGroup& g : groups) {
      if (g.perturbation != panels[p]) continue;
      const double cx = kLeft + kGroupWidth * (static_cast<double>(slot) + 0.5);
      ++slot;
      const ViolinShape s = violin_shape(g.values);
      svg << "<g class=\"violin\" data-extractor=\"" << escape(g.extractor)
          << "\" data-metric=\"" << escape(g.metric) << "\">\n";
      if (!s.density.empty()) {
        double peak = 0.0;
        for (const auto& [y, d] : s.density) peak = std::max(peak, d);
        std::ostringstream path;
        for (std::size_t i = 0; i < s.density.size(); ++i) {
          const auto& [y, d] = s.density[i];
          path << (i == 0 ? "M" : "L") << num(cx + kHalfWidth * d / peak) << ','
               << num(y_of(y)) << ' ';
        }
        for (std::size_t i = s.density.size(); i-- > 0;) {
          const auto& [y, d] = s.density[i];
          path << 'L' << num(cx - kHalfWidth * d / peak) << ',' << num(y_of(y))
               << ' ';
        }
        path << 'Z';
        svg << "<path class=\"density\" d=\"" << path.str()
            << "\" fill=\"#8fd19e\" stroke=\"#2e7d32\"/>\n";
      } else {
        svg << "<line class=\"degenerate\" x1=\"" << num(cx - kHalfWidth)
            << "\" x2=\"" << num(cx + kHalfWidth) << "\" y1=\""
            << num(y_of(s.median)) << "\" y2=\"" << num(y_of(s.median))
            << "\" stroke=\"#2e7d32\"/>\n";
      }
      svg << "<line class=\"whisker\" x1=\"" << num(cx) << "\" x2=\"" << num(cx)
          << "\" y1=\"" << num(y_of(s.whisker_high)) << "\" y2=\""
          << num(y_of(s.whisker_low)) << "\" stroke=\"black\"/>\n";
      svg << "<rect class=\"iqr\" x=\"" << num(cx - 3) << "\" y=\""
          << num(y_of(s.q3)) << "\" width=\"6\" height=\""
          << num(y_of(s.q1) - y_of(s.q3)) << "\" fill=\"black\"/>\n";
      for (double v : g.values) {
        svg << "<circle class=\"point\" cx=\"" << num(cx + 10) << "\" cy=\""
            << num(y_of(v)) << "\" r=\"1.5\" fill=\"#555555\"/>\n";
      }
      svg << "<circle class=\"median\" cx=\"" << num(cx) << "\" cy=\""
          << num(y_of(s.median)) << "\" r=\"3\" fill=\"white\" stroke=\"black\"/>\n";
      const std::string label =
          extractors.size() > 1 ? g.extractor + ":" + g.metric : g.metric;
      svg << "<text x=\"" << num(cx) << "\" y=\"" << num(top + kPlotHeight + 16)
          << "\" text-anchor=\"middle\">" << escape(label) << "</text>\n";
      svg << "</g>\n";
    }
    svg << "</g>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace ggmeval
