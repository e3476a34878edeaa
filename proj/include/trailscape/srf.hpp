#pragma once

#include <array>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "trailscape/errors.hpp"
#include "trailscape/trail.hpp"
#include "trailscape/transforms.hpp"

namespace trailscape {

// Ideal activity segment for one hotspot behavior. Ranks order the seven
// behaviors by increasing activity, 1 = lowest.
struct Archetype {
  std::string name;
  std::vector<double> tmpl;
  int rank = 0;
};

inline constexpr int kArchetypeCount = 7;
inline constexpr int kDefaultWindowLength = 72;  // 6 h of 5-minute samples

namespace detail {
inline std::vector<double> constant_segment(int n, double v) {
  return std::vector<double>(static_cast<std::size_t>(n), v);
}
inline std::vector<double> linear_segment(int n, double from, double to) {
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] = from + (to - from) * (n > 1 ? static_cast<double>(i) / (n - 1) : 0.0);
  }
  return out;
}
}  // namespace detail

// Built-in templates. Constant levels for the steady behaviors, linear ramps
// for the transitions; overridable from CSV.
inline std::array<Archetype, kArchetypeCount> builtin_archetypes(int window_length = kDefaultWindowLength) {
  if (window_length < 2) throw invalid_parameter("builtin_archetypes: window too short");
  using detail::constant_segment;
  using detail::linear_segment;
  return {{
      {"Asleep", constant_segment(window_length, 0.1), 1},
      {"Falling", linear_segment(window_length, 0.5, 0.1), 2},
      {"Awakening", linear_segment(window_length, 0.1, 0.5), 3},
      {"Flow", constant_segment(window_length, 0.5), 4},
      {"Chill", linear_segment(window_length, 0.9, 0.5), 5},
      {"Rise", linear_segment(window_length, 0.5, 0.9), 6},
      {"RushHour", constant_segment(window_length, 0.9), 7},
  }};
}

inline int archetype_rank(const std::string& name) {
  static const std::array<const char*, kArchetypeCount> names = {
      "Asleep", "Falling", "Awakening", "Flow", "Chill", "Rise", "RushHour"};
  for (int i = 0; i < kArchetypeCount; ++i) {
    if (name == names[static_cast<std::size_t>(i)]) return i + 1;
  }
  throw invalid_parameter("unknown archetype name: " + name);
}

// The eight tunable parameters of a receptive field.
struct SrfParams {
  ClumpParams clump{};
  double mark_width = 0.1;   // epsilon
  double evaporation = 0.1;  // delta
  SigmoidParams activation{20.0, 0.5};

  void validate() const {
    for (double v : {clump.alpha, clump.beta, clump.gamma, clump.lambda, mark_width,
                     evaporation, activation.steepness, activation.threshold}) {
      if (!std::isfinite(v)) throw invalid_parameter("SrfParams: non-finite parameter");
    }
    if (mark_width <= 0.0) throw invalid_parameter("SrfParams: mark_width must be > 0");
    if (evaporation < 0.0) throw invalid_parameter("SrfParams: evaporation must be >= 0");
  }
};

// Stigmergic Receptive Field: clump -> mark -> trail -> similarity ->
// activation, scoring how much a sample window resembles one archetype.
// Immutable after construction; the archetype trail is precomputed with the
// same parameters that process incoming windows.
class Srf {
 public:
  Srf(SrfParams params, Archetype archetype, Grid1D grid = Grid1D{})
      : params_(std::move(params)), archetype_(std::move(archetype)), grid_(grid),
        archetype_trail_(grid) {
    params_.validate();
    if (archetype_.tmpl.empty()) throw invalid_parameter("Srf: empty archetype template");
    rebuild_archetype_trail();
  }

  const SrfParams& params() const noexcept { return params_; }
  const Archetype& archetype() const noexcept { return archetype_; }
  const Trail1D& archetype_trail() const noexcept { return archetype_trail_; }
  int window_length() const noexcept { return static_cast<int>(archetype_.tmpl.size()); }

  void set_params(SrfParams params) {
    params.validate();
    params_ = std::move(params);
    rebuild_archetype_trail();
  }

  double similarity(std::span<const double> window) const {
    if (window.size() != archetype_.tmpl.size()) {
      throw invalid_parameter("Srf::similarity: window length != template length");
    }
    const Trail1D window_trail = trail_of_series(
        clump_series(window, params_.clump),
        {params_.mark_width, params_.evaporation, 1.0, grid_});
    return sigmoid(jaccard(archetype_trail_, window_trail), params_.activation);
  }

 private:
  void rebuild_archetype_trail() {
    archetype_trail_ = trail_of_series(
        clump_series(archetype_.tmpl, params_.clump),
        {params_.mark_width, params_.evaporation, 1.0, grid_});
  }

  SrfParams params_;
  Archetype archetype_;
  Grid1D grid_;
  Trail1D archetype_trail_;
};

}  // namespace trailscape
