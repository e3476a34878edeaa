#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "trailscape/errors.hpp"

namespace trailscape {

// rand/1/bin differential evolution over box bounds.
struct DeConfig {
  int population = 20;
  double differential_weight = 0.5;  // F
  double crossover = 0.9;            // CR
  int generations = 100;
  std::vector<std::array<double, 2>> bounds;  // per-dimension {lo, hi}
  std::uint64_t rng_seed = 0;

  void validate() const {
    if (population < 4) throw invalid_parameter("DeConfig: population must be >= 4");
    if (!(differential_weight > 0.0 && differential_weight <= 2.0)) {
      throw invalid_parameter("DeConfig: differential_weight must be in (0, 2]");
    }
    if (!(crossover >= 0.0 && crossover <= 1.0)) {
      throw invalid_parameter("DeConfig: crossover must be in [0, 1]");
    }
    if (generations < 1) throw invalid_parameter("DeConfig: generations must be >= 1");
    if (bounds.empty()) throw invalid_parameter("DeConfig: bounds must be non-empty");
    for (const auto& b : bounds) {
      if (!(b[0] <= b[1]) || !std::isfinite(b[0]) || !std::isfinite(b[1])) {
        throw invalid_parameter("DeConfig: malformed bound");
      }
    }
  }
};

struct DeResult {
  std::vector<double> best;
  double best_fitness = 0.0;
  std::vector<double> best_per_generation;  // non-increasing by construction
};

template <typename Objective>
DeResult differential_evolution(Objective&& objective, const DeConfig& config) {
  config.validate();
  const int dims = static_cast<int>(config.bounds.size());
  const int np = config.population;
  std::mt19937_64 rng(config.rng_seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  auto clip = [&](double v, int d) {
    const auto& b = config.bounds[static_cast<std::size_t>(d)];
    return std::min(std::max(v, b[0]), b[1]);
  };

  std::vector<std::vector<double>> pop(static_cast<std::size_t>(np),
                                       std::vector<double>(static_cast<std::size_t>(dims)));
  std::vector<double> fit(static_cast<std::size_t>(np));
  for (int i = 0; i < np; ++i) {
    for (int d = 0; d < dims; ++d) {
      const auto& b = config.bounds[static_cast<std::size_t>(d)];
      pop[static_cast<std::size_t>(i)][static_cast<std::size_t>(d)] = b[0] + unit(rng) * (b[1] - b[0]);
    }
    fit[static_cast<std::size_t>(i)] = objective(pop[static_cast<std::size_t>(i)]);
  }

  int best_idx = 0;
  for (int i = 1; i < np; ++i) {
    if (fit[static_cast<std::size_t>(i)] < fit[static_cast<std::size_t>(best_idx)]) best_idx = i;
  }

  DeResult result;
  result.best_per_generation.reserve(static_cast<std::size_t>(config.generations));

  std::uniform_int_distribution<int> pick(0, np - 1);
  std::uniform_int_distribution<int> pick_dim(0, dims - 1);
  std::vector<double> trial(static_cast<std::size_t>(dims));

  for (int gen = 0; gen < config.generations; ++gen) {
    for (int i = 0; i < np; ++i) {
      int r1, r2, r3;
      do { r1 = pick(rng); } while (r1 == i);
      do { r2 = pick(rng); } while (r2 == i || r2 == r1);
      do { r3 = pick(rng); } while (r3 == i || r3 == r1 || r3 == r2);

      const int forced = pick_dim(rng);
      for (int d = 0; d < dims; ++d) {
        const bool cross = unit(rng) < config.crossover || d == forced;
        const std::size_t du = static_cast<std::size_t>(d);
        if (cross) {
          const double mutant = pop[static_cast<std::size_t>(r1)][du] +
                                config.differential_weight *
                                    (pop[static_cast<std::size_t>(r2)][du] -
                                     pop[static_cast<std::size_t>(r3)][du]);
          trial[du] = clip(mutant, d);
        } else {
          trial[du] = pop[static_cast<std::size_t>(i)][du];
        }
      }

      const double trial_fit = objective(trial);
      if (trial_fit <= fit[static_cast<std::size_t>(i)]) {
        pop[static_cast<std::size_t>(i)] = trial;
        fit[static_cast<std::size_t>(i)] = trial_fit;
        if (trial_fit < fit[static_cast<std::size_t>(best_idx)]) best_idx = i;
      }
    }
    result.best_per_generation.push_back(fit[static_cast<std::size_t>(best_idx)]);
  }

  result.best = pop[static_cast<std::size_t>(best_idx)];
  result.best_fitness = fit[static_cast<std::size_t>(best_idx)];
  return result;
}

}  // namespace trailscape
