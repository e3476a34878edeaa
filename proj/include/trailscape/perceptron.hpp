#pragma once

#include <algorithm>
#include <chrono>
#include <span>
#include <tuple>
#include <vector>

#include "trailscape/de.hpp"
#include "trailscape/errors.hpp"
#include "trailscape/srf.hpp"
#include "trailscape/trail.hpp"

namespace trailscape {

// Similarity-weighted mean of the archetype ranks 1..N. Undefined when no
// field activates; the caller decides the fallback.
inline double activity_level(std::span<const double> similarities) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < similarities.size(); ++i) {
    num += similarities[i] * static_cast<double>(i + 1);
    den += similarities[i];
  }
  if (den <= 0.0) throw no_activation("activity_level: all similarities are zero");
  return num / den;
}

struct ActivityLevelSeries {
  std::chrono::sys_days day{};
  std::vector<double> levels;  // each in [1, archetype count]
};

// Bank of seven trained receptive fields in increasing-activity order,
// combined per window into one activity level.
class StigmergicPerceptron {
 public:
  StigmergicPerceptron(std::vector<Srf> srfs, int window_hop)
      : srfs_(std::move(srfs)), window_hop_(window_hop) {
    if (srfs_.empty()) throw invalid_parameter("StigmergicPerceptron: no receptive fields");
    if (window_hop_ < 1) throw invalid_parameter("StigmergicPerceptron: hop must be >= 1");
    std::sort(srfs_.begin(), srfs_.end(),
              [](const Srf& a, const Srf& b) { return a.archetype().rank < b.archetype().rank; });
    for (std::size_t i = 1; i < srfs_.size(); ++i) {
      if (srfs_[i].window_length() != srfs_[0].window_length()) {
        throw invalid_parameter("StigmergicPerceptron: mixed window lengths");
      }
    }
  }

  int window_length() const noexcept { return srfs_[0].window_length(); }
  int window_hop() const noexcept { return window_hop_; }
  const std::vector<Srf>& srfs() const noexcept { return srfs_; }

  std::vector<double> window_similarities(std::span<const double> window) const {
    std::vector<double> s(srfs_.size());
    for (std::size_t i = 0; i < srfs_.size(); ++i) s[i] = srfs_[i].similarity(window);
    return s;
  }

  // Slides the window across one day of normalized samples. Windows where no
  // field activates repeat the previous level (midpoint of the rank range at
  // the start of the series).
  std::vector<double> characterize(std::span<const double> samples) const {
    const int wl = window_length();
    if (static_cast<int>(samples.size()) < wl) {
      throw invalid_parameter("characterize: fewer samples than one window");
    }
    const int count = (static_cast<int>(samples.size()) - wl) / window_hop_ + 1;
    std::vector<double> levels;
    levels.reserve(static_cast<std::size_t>(count));
    double fallback = (1.0 + static_cast<double>(srfs_.size())) / 2.0;
    for (int w = 0; w < count; ++w) {
      const auto window = samples.subspan(static_cast<std::size_t>(w) * window_hop_,
                                          static_cast<std::size_t>(wl));
      double level;
      try {
        level = activity_level(window_similarities(window));
      } catch (const no_activation&) {
        level = fallback;
      }
      levels.push_back(level);
      fallback = level;
    }
    return levels;
  }

  ActivityLevelSeries characterize_day(std::chrono::sys_days day,
                                       std::span<const double> samples) const {
    return {day, characterize(samples)};
  }

 private:
  std::vector<Srf> srfs_;
  int window_hop_;
};

// ---------------------------------------------------------------------------
// Day-similarity receptive field: treats one day's activity-level series as
// the archetype and scores another day against it. No clumping stage; levels
// are brought to the unit value axis by dividing by the archetype count.
// ---------------------------------------------------------------------------

struct DaySimilarityParams {
  double mark_width = 0.1;
  double evaporation = 0.1;
  SigmoidParams activation{20.0, 0.5};

  void validate() const {
    if (!(mark_width > 0.0) || !(evaporation >= 0.0) ||
        !std::isfinite(activation.steepness) || !std::isfinite(activation.threshold)) {
      throw invalid_parameter("DaySimilarityParams: out-of-range parameters");
    }
  }
};

class DaySimilaritySrf {
 public:
  explicit DaySimilaritySrf(DaySimilarityParams params, int level_count = kArchetypeCount,
                            Grid1D grid = Grid1D{})
      : params_(params), level_scale_(1.0 / level_count), grid_(grid) {
    params_.validate();
    if (level_count < 1) throw invalid_parameter("DaySimilaritySrf: level_count must be >= 1");
  }

  const DaySimilarityParams& params() const noexcept { return params_; }

  Trail1D level_trail(std::span<const double> levels) const {
    std::vector<double> scaled(levels.size());
    for (std::size_t i = 0; i < levels.size(); ++i) scaled[i] = levels[i] * level_scale_;
    return trail_of_series(scaled, {params_.mark_width, params_.evaporation, 1.0, grid_});
  }

  double similarity(std::span<const double> a, std::span<const double> b) const {
    if (a.size() != b.size()) {
      throw invalid_parameter("DaySimilaritySrf: series length mismatch");
    }
    return sigmoid(jaccard(level_trail(a), level_trail(b)), params_.activation);
  }

  double similarity(const ActivityLevelSeries& a, const ActivityLevelSeries& b) const {
    return similarity(std::span<const double>(a.levels), std::span<const double>(b.levels));
  }

 private:
  DaySimilarityParams params_;
  double level_scale_;
  Grid1D grid_;
};

// Training set for the day-similarity field: activity-level series are stored
// once and pairs reference them by index, so each candidate parameter set
// builds every trail exactly once.
struct DayPairSet {
  std::vector<std::vector<double>> series;
  std::vector<std::tuple<int, int, double>> pairs;  // (series a, series b, target)
};

struct DaySimilarityBounds {
  double width_lo = 0.01, width_hi = 0.5;
  double delta_lo = 1e-3, delta_hi = 1.0;
  double steepness_lo = 1.0, steepness_hi = 100.0;
  double threshold_lo = 0.0, threshold_hi = 1.0;
};

inline double day_similarity_fitness(const DaySimilarityParams& params, const DayPairSet& data,
                                     int level_count = kArchetypeCount, Grid1D grid = Grid1D{}) {
  if (data.pairs.empty()) throw invalid_parameter("day_similarity_fitness: no pairs");
  const DaySimilaritySrf srf(params, level_count, grid);
  std::vector<Trail1D> trails;
  trails.reserve(data.series.size());
  for (const auto& s : data.series) trails.push_back(srf.level_trail(s));
  double sum = 0.0;
  for (const auto& [ia, ib, target] : data.pairs) {
    const double s =
        sigmoid(jaccard(trails[static_cast<std::size_t>(ia)], trails[static_cast<std::size_t>(ib)]),
                params.activation);
    const double e = s - target;
    sum += e * e;
  }
  return sum / static_cast<double>(data.pairs.size());
}

inline DaySimilarityParams train_day_similarity(const DayPairSet& data, DeConfig de,
                                                const DaySimilarityBounds& bounds = {},
                                                int level_count = kArchetypeCount,
                                                Grid1D grid = Grid1D{}) {
  de.bounds = {{bounds.width_lo, bounds.width_hi},
               {bounds.delta_lo, bounds.delta_hi},
               {bounds.steepness_lo, bounds.steepness_hi},
               {bounds.threshold_lo, bounds.threshold_hi}};
  const auto decode = [](std::span<const double> g) {
    return DaySimilarityParams{g[0], g[1], {g[2], g[3]}};
  };
  const auto result = differential_evolution(
      [&](const std::vector<double>& genome) {
        return day_similarity_fitness(decode(genome), data, level_count, grid);
      },
      de);
  return decode(result.best);
}

}  // namespace trailscape
