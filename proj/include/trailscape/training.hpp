#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <vector>

#include "trailscape/de.hpp"
#include "trailscape/errors.hpp"
#include "trailscape/srf.hpp"

namespace trailscape {

// A sample window with its target similarity: 1 if it exhibits the archetypal
// behavior, 0 otherwise.
struct LabeledWindow {
  std::vector<double> window;
  double target = 0.0;
};

struct EvaporationInterval {
  double delta_min = 0.0;
  double delta_max = 0.0;
};

// Search-space bounds for the non-evaporation parameters, plus the sweep grid
// for the evaporation rate. Statically assigned from the [0, 1] activity
// domain.
struct SrfTrainingOptions {
  DeConfig de{};                       // bounds filled per phase
  double delta_lo = 1e-3;
  double delta_hi = 1.0;
  int sweep_points = 50;               // log-spaced evaporation sweep
  double steepness_lo = 1.0, steepness_hi = 100.0;
  double threshold_lo = 0.0, threshold_hi = 1.0;
  double width_lo = 0.01, width_hi = 0.5;
  Grid1D grid{};
};

// Fixed parameter assignment used while only the evaporation rate is swept.
inline SrfParams sweep_base_params() {
  return SrfParams{{80.0, 0.33, 80.0, 0.66}, 0.1, 0.1, {20.0, 0.5}};
}

// Mean squared error between computed and target similarities.
inline double srf_fitness(const SrfParams& params, const Archetype& archetype,
                          std::span<const LabeledWindow> dataset, Grid1D grid = Grid1D{}) {
  if (dataset.empty()) throw invalid_parameter("srf_fitness: empty dataset");
  const Srf srf(params, archetype, grid);
  double sum = 0.0;
  for (const auto& lw : dataset) {
    const double s = srf.similarity(lw.window);
    const double e = s - lw.target;
    sum += e * e;
  }
  return sum / static_cast<double>(dataset.size());
}

namespace detail {
// 8-gene decode: [clump steepness/inflection pairs, mark width, evaporation,
// activation steepness/threshold]. Inflections are kept ordered by swapping
// whole sigmoid pairs.
inline SrfParams decode_srf_genome(std::span<const double> g) {
  SrfParams p;
  p.clump = ClumpParams{g[0], g[1], g[2], g[3]}.canonical();
  p.mark_width = g[4];
  p.evaporation = g[5];
  p.activation = {g[6], g[7]};
  return p;
}

inline std::vector<std::array<double, 2>> srf_genome_bounds(const SrfTrainingOptions& opt,
                                                            const EvaporationInterval& delta) {
  return {{opt.steepness_lo, opt.steepness_hi}, {opt.threshold_lo, opt.threshold_hi},
          {opt.steepness_lo, opt.steepness_hi}, {opt.threshold_lo, opt.threshold_hi},
          {opt.width_lo, opt.width_hi},         {delta.delta_min, delta.delta_max},
          {opt.steepness_lo, opt.steepness_hi}, {opt.threshold_lo, opt.threshold_hi}};
}

// Nearest-rank percentile of unsorted values.
inline double percentile(std::vector<double> values, double q) {
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  const std::size_t rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(n)));
  return values[std::min(n - 1, rank > 0 ? rank - 1 : 0)];
}
}  // namespace detail

// Percentile-selection rule shared with constructed-sweep tests: the span of
// the points whose quality exceeds the sweep's 90th percentile. Ties are
// included only when nothing lies strictly above, so a flat sweep selects the
// whole range. The interval always contains the best-quality point.
inline EvaporationInterval select_quality_interval(std::span<const double> deltas,
                                                   std::span<const double> quality) {
  if (deltas.size() != quality.size() || deltas.size() < 10) {
    throw invalid_parameter("select_quality_interval: need >= 10 matched sweep points");
  }
  const double p90 = detail::percentile({quality.begin(), quality.end()}, 0.90);
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  bool any_strict = false;
  for (std::size_t k = 0; k < deltas.size(); ++k) {
    if (quality[k] > p90) {
      any_strict = true;
      lo = std::min(lo, deltas[k]);
      hi = std::max(hi, deltas[k]);
    }
  }
  if (!any_strict) {
    for (std::size_t k = 0; k < deltas.size(); ++k) {
      if (quality[k] >= p90) {
        lo = std::min(lo, deltas[k]);
        hi = std::max(hi, deltas[k]);
      }
    }
  }
  return {lo, hi};
}

// Global training: sweep the evaporation rate over a log-spaced grid with the
// other parameters fixed, score each point by quality = -MSE, and take the
// above-90th-percentile span.
inline EvaporationInterval global_training(const Archetype& archetype,
                                           std::span<const LabeledWindow> dataset,
                                           const SrfTrainingOptions& opt = {}) {
  if (opt.sweep_points < 10) throw invalid_parameter("global_training: need >= 10 sweep points");
  if (!(opt.delta_lo > 0.0 && opt.delta_lo <= opt.delta_hi)) {
    throw invalid_parameter("global_training: malformed delta bounds");
  }
  const double log_lo = std::log(opt.delta_lo);
  const double log_hi = std::log(opt.delta_hi);
  std::vector<double> deltas(static_cast<std::size_t>(opt.sweep_points));
  std::vector<double> quality(static_cast<std::size_t>(opt.sweep_points));
  for (int k = 0; k < opt.sweep_points; ++k) {
    const double t = opt.sweep_points > 1 ? static_cast<double>(k) / (opt.sweep_points - 1) : 0.0;
    const double delta = std::exp(log_lo + t * (log_hi - log_lo));
    SrfParams p = sweep_base_params();
    p.evaporation = delta;
    deltas[static_cast<std::size_t>(k)] = delta;
    quality[static_cast<std::size_t>(k)] = -srf_fitness(p, archetype, dataset, opt.grid);
  }
  return select_quality_interval(deltas, quality);
}

// Local training: full 8-parameter DE with the evaporation rate bounded to the
// interval found by the global phase.
inline SrfParams local_training(const Archetype& archetype, std::span<const LabeledWindow> dataset,
                                const EvaporationInterval& interval,
                                const SrfTrainingOptions& opt = {}) {
  DeConfig de = opt.de;
  de.bounds = detail::srf_genome_bounds(opt, interval);
  const auto result = differential_evolution(
      [&](const std::vector<double>& genome) {
        return srf_fitness(detail::decode_srf_genome(genome), archetype, dataset, opt.grid);
      },
      de);
  return detail::decode_srf_genome(result.best);
}

// Desk-scale stand-in for hand-labeled windows: perturbed copies of the target
// archetype as positives, perturbed copies of the remaining archetypes as
// negatives. Perturbation = uniform amplitude noise clamped to [0, 1] plus a
// circular time shift.
inline std::vector<LabeledWindow> synthesize_training_set(
    const Archetype& target, std::span<const Archetype> all_archetypes, int n, double noise_amp,
    int max_shift, std::uint64_t rng_seed) {
  if (n < 1) throw invalid_parameter("synthesize_training_set: n must be >= 1");
  if (!(noise_amp >= 0.0) || !std::isfinite(noise_amp)) {
    throw invalid_parameter("synthesize_training_set: noise_amp must be >= 0");
  }
  const int len = static_cast<int>(target.tmpl.size());
  if (max_shift < 0 || max_shift >= len) {
    throw invalid_parameter("synthesize_training_set: max_shift out of range");
  }

  std::mt19937_64 rng(rng_seed);
  std::uniform_real_distribution<double> noise(-noise_amp, noise_amp);
  std::uniform_int_distribution<int> shift(-max_shift, max_shift);

  auto perturb = [&](const std::vector<double>& tmpl) {
    const int k = max_shift > 0 ? shift(rng) : 0;
    std::vector<double> out(tmpl.size());
    for (int i = 0; i < len; ++i) {
      const int src = ((i - k) % len + len) % len;
      double v = tmpl[static_cast<std::size_t>(src)];
      if (noise_amp > 0.0) v += noise(rng);
      out[static_cast<std::size_t>(i)] = std::clamp(v, 0.0, 1.0);
    }
    return out;
  };

  std::vector<LabeledWindow> out;
  out.reserve(static_cast<std::size_t>(2 * n));
  for (int i = 0; i < n; ++i) out.push_back({perturb(target.tmpl), 1.0});

  std::vector<const Archetype*> others;
  for (const auto& a : all_archetypes) {
    if (a.name != target.name) others.push_back(&a);
  }
  if (others.empty()) throw invalid_parameter("synthesize_training_set: no negative archetypes");
  for (int i = 0; i < n; ++i) {
    const Archetype& neg = *others[static_cast<std::size_t>(i) % others.size()];
    out.push_back({perturb(neg.tmpl), 0.0});
  }
  return out;
}

// Global then local phase for one receptive field.
inline SrfParams train_srf(const Archetype& archetype, std::span<const LabeledWindow> dataset,
                           const SrfTrainingOptions& opt = {}) {
  const EvaporationInterval interval = global_training(archetype, dataset, opt);
  return local_training(archetype, dataset, interval, opt);
}

}  // namespace trailscape
