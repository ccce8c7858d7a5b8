#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ggmeval/report.hpp"

namespace ggmeval {

// Silverman's rule: 0.9 * min(sd, IQR / 1.34) * n^(-1/5), using whichever
// spread is positive. Zero for constant data.
double silverman_bandwidth(std::span<const double> values);

struct ViolinShape {
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
  double whisker_low = 0.0;   // lowest value >= q1 - 1.5 IQR
  double whisker_high = 0.0;  // highest value <= q3 + 1.5 IQR
  double bandwidth = 0.0;
  // (y, density) samples of the Gaussian KDE over [-1, 1]; empty when the
  // bandwidth is zero.
  std::vector<std::pair<double, double>> density;
};

ViolinShape violin_shape(std::span<const double> values);

// One panel per perturbation, one violin per (extractor, metric) group, y
// axis = Spearman coefficient in [-1, 1]. Output is byte-deterministic.
std::string render_violin_svg(std::span<const ReportGroup> groups);

}  // namespace ggmeval
