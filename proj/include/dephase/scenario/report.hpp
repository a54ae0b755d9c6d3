#pragma once

// Pointwise comparison of a candidate curve (analytic) against a reference
// (numerical quadrature).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "dephase/error.hpp"

namespace dephase::scenario {

using ParameterTuple = std::vector<std::pair<std::string, double>>;

struct ComparisonReport {
  double max_abs_dev = 0.0;
  double max_rel_dev = 0.0;
  ParameterTuple worst_point;
  double tolerance = 0.0;
  bool pass = true;
  std::size_t points = 0;
};

// Relative deviations are taken against max(|reference|, floor x peak),
// with the peak over the series, so zero crossings of odd or vanishing
// curves do not dominate.
inline constexpr double kRelativeFloor = 1e-3;

class Comparison {
 public:
  explicit Comparison(double tolerance) { report_.tolerance = tolerance; }

  void add_series(const std::string& label, const std::vector<ParameterTuple>& points,
                  const std::vector<double>& reference, const std::vector<double>& candidate) {
    if (points.size() != reference.size() || reference.size() != candidate.size()) {
      throw Error("comparison series '" + label + "' has mismatched lengths");
    }
    double peak = 0.0;
    for (double r : reference) peak = std::max(peak, std::abs(r));
    const double floor = kRelativeFloor * peak;
    for (std::size_t i = 0; i < reference.size(); ++i) {
      const double abs_dev = std::abs(candidate[i] - reference[i]);
      const double scale = std::max(std::abs(reference[i]), floor);
      const double rel_dev = scale > 0.0 ? abs_dev / scale : (abs_dev > 0.0 ? INFINITY : 0.0);
      report_.max_abs_dev = std::max(report_.max_abs_dev, abs_dev);
      if (report_.points == 0 || rel_dev > report_.max_rel_dev) {
        report_.max_rel_dev = rel_dev;
        // The series label carries the reference value at the worst point.
        report_.worst_point = points[i];
        report_.worst_point.insert(report_.worst_point.begin(), {label, reference[i]});
      }
      ++report_.points;
    }
  }

  ComparisonReport finish() const {
    ComparisonReport r = report_;
    r.pass = r.max_rel_dev <= r.tolerance;
    return r;
  }

 private:
  ComparisonReport report_;
};

inline std::string describe(const ParameterTuple& point) {
  std::string out = "(";
  for (std::size_t i = 0; i < point.size(); ++i) {
    if (i) out += ", ";
    out += point[i].first + "=" + std::to_string(point[i].second);
  }
  return out + ")";
}

}  // namespace dephase::scenario
