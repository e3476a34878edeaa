#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "trailscape/errors.hpp"

namespace trailscape {

// Logistic activation/smoothing: f(x) = 1 / (1 + exp(-steepness * (x - threshold))).
struct SigmoidParams {
  double steepness = 10.0;
  double threshold = 0.5;
};

inline double sigmoid(double x, const SigmoidParams& p) noexcept {
  return 1.0 / (1.0 + std::exp(-p.steepness * (x - p.threshold)));
}

// Double-sigmoid soft discretization. Two (steepness, inflection) pairs;
// averaging them yields plateaus near 0, 1/2 and 1 when the inflections are
// spread across the unit interval.
struct ClumpParams {
  double alpha = 80.0;   // steepness of the lower sigmoid
  double beta = 0.33;    // inflection of the lower sigmoid
  double gamma = 80.0;   // steepness of the upper sigmoid
  double lambda = 0.66;  // inflection of the upper sigmoid

  // Keeps beta <= lambda by swapping whole (steepness, inflection) pairs.
  ClumpParams canonical() const noexcept {
    if (beta > lambda) return {gamma, lambda, alpha, beta};
    return *this;
  }
};

inline double clump(double x, const ClumpParams& p) noexcept {
  return 0.5 * (sigmoid(x, {p.alpha, p.beta}) + sigmoid(x, {p.gamma, p.lambda}));
}

// (x - min) / (max - min). A constant series maps to all zeros: no variation
// means no signal, and it keeps the division defined.
inline std::vector<double> minmax_normalize(std::span<const double> series) {
  if (series.empty()) throw invalid_parameter("minmax_normalize: empty series");
  const auto [lo_it, hi_it] = std::minmax_element(series.begin(), series.end());
  const double lo = *lo_it, hi = *hi_it;
  std::vector<double> out(series.size(), 0.0);
  if (hi > lo) {
    const double scale = 1.0 / (hi - lo);
    for (std::size_t i = 0; i < series.size(); ++i) out[i] = (series[i] - lo) * scale;
  }
  return out;
}

inline std::vector<double> smooth(std::span<const double> series, const SigmoidParams& p) {
  std::vector<double> out(series.size());
  for (std::size_t i = 0; i < series.size(); ++i) out[i] = sigmoid(series[i], p);
  return out;
}

inline std::vector<double> clump_series(std::span<const double> series, const ClumpParams& p) {
  std::vector<double> out(series.size());
  for (std::size_t i = 0; i < series.size(); ++i) out[i] = clump(series[i], p);
  return out;
}

}  // namespace trailscape
