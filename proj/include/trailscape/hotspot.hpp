#pragma once

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <map>
#include <numbers>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "trailscape/errors.hpp"
#include "trailscape/trail.hpp"
#include "trailscape/transforms.hpp"

namespace trailscape {

inline constexpr int kMinutesPerDay = 1440;
inline constexpr int kBinMinutes = 5;
inline constexpr int kStepsPerDay = kMinutesPerDay / kBinMinutes;  // 288

enum class EventKind { Pickup, Dropoff };

// One positioning sample in projected planar coordinates (feet), timestamped
// in civil minutes since the epoch.
struct PositioningEvent {
  std::int64_t minute = 0;
  double x = 0.0;
  double y = 0.0;
  int passengers = 1;
  EventKind kind = EventKind::Pickup;

  std::int64_t step() const noexcept { return minute / kBinMinutes; }
  std::chrono::sys_days day() const noexcept {
    return std::chrono::sys_days{std::chrono::days{minute / kMinutesPerDay}};
  }
};

// ---------------------------------------------------------------------------
// Local planar frame: equirectangular projection about the bounding-box
// center, in feet, so cell sizes have a physical meaning.
// ---------------------------------------------------------------------------

struct BBox {
  double lon_min = 0.0, lon_max = 1.0;
  double lat_min = 0.0, lat_max = 1.0;

  void validate() const {
    if (!(lon_min < lon_max) || !(lat_min < lat_max)) {
      throw invalid_parameter("BBox: malformed bounds");
    }
  }
};

class Projection {
 public:
  explicit Projection(const BBox& box) : box_(box) {
    box.validate();
    lon0_ = (box.lon_min + box.lon_max) / 2.0;
    lat0_ = (box.lat_min + box.lat_max) / 2.0;
    const double rad = std::numbers::pi / 180.0;
    ft_per_deg_lat_ = kEarthRadiusFt * rad;
    ft_per_deg_lon_ = kEarthRadiusFt * rad * std::cos(lat0_ * rad);
  }

  std::pair<double, double> to_plane(double lon, double lat) const noexcept {
    return {(lon - lon0_) * ft_per_deg_lon_, (lat - lat0_) * ft_per_deg_lat_};
  }

  std::pair<double, double> to_lonlat(double x, double y) const noexcept {
    return {lon0_ + x / ft_per_deg_lon_, lat0_ + y / ft_per_deg_lat_};
  }

  Grid2D make_grid(int nx, int ny) const {
    const auto [x0, y0] = to_plane(box_.lon_min, box_.lat_min);
    const auto [x1, y1] = to_plane(box_.lon_max, box_.lat_max);
    return Grid2D{x0, x1, y0, y1, nx, ny};
  }

  const BBox& bbox() const noexcept { return box_; }

 private:
  static constexpr double kEarthRadiusFt = 20902230.97;  // 6371 km
  BBox box_;
  double lon0_, lat0_;
  double ft_per_deg_lon_, ft_per_deg_lat_;
};

// ---------------------------------------------------------------------------
// Spatiotemporal binning: passenger sums per (cell, 5-minute step), min-max
// normalized over the whole bin tensor.
// ---------------------------------------------------------------------------

struct BinnedEvents {
  Grid2D grid{};
  std::int64_t first_step = 0;
  std::int64_t last_step = 0;
  // Sparse per-step cell values, keyed by absolute step index.
  std::map<std::int64_t, std::vector<std::pair<int, double>>> steps;
  std::size_t dropped_out_of_bounds = 0;
};

inline BinnedEvents bin_events(std::span<const PositioningEvent> events, const Grid2D& grid) {
  grid.validate();
  BinnedEvents bins;
  bins.grid = grid;
  std::map<std::int64_t, std::unordered_map<int, double>> raw;
  bool any = false;
  for (const auto& e : events) {
    const int cell = grid.cell_of(e.x, e.y);
    if (cell < 0) {
      ++bins.dropped_out_of_bounds;
      continue;
    }
    raw[e.step()][cell] += static_cast<double>(e.passengers);
    any = true;
  }
  if (!any) return bins;

  bins.first_step = raw.begin()->first;
  bins.last_step = raw.rbegin()->first;

  // The conceptual bin tensor covers every (cell, step); untouched bins hold
  // zero, so min-max normalization reduces to dividing by the maximum unless
  // literally every bin is occupied.
  double vmax = 0.0, vmin = std::numeric_limits<double>::infinity();
  std::size_t occupied = 0;
  for (const auto& [step, cells] : raw) {
    occupied += cells.size();
    for (const auto& [cell, v] : cells) {
      vmax = std::max(vmax, v);
      vmin = std::min(vmin, v);
    }
  }
  const std::size_t total_bins = static_cast<std::size_t>(grid.cell_count()) *
                                 static_cast<std::size_t>(bins.last_step - bins.first_step + 1);
  if (occupied < total_bins) vmin = 0.0;
  const double range = vmax - vmin;

  for (auto& [step, cells] : raw) {
    auto& out = bins.steps[step];
    out.reserve(cells.size());
    for (const auto& [cell, v] : cells) {
      out.emplace_back(cell, range > 0.0 ? (v - vmin) / range : 0.0);
    }
    std::sort(out.begin(), out.end());
  }
  return bins;
}

// ---------------------------------------------------------------------------
// Daily time slots. Night wraps around midnight.
// ---------------------------------------------------------------------------

enum class TimeSlot { EarlyMorning, Morning, AfternoonEvening, Night };

inline constexpr std::array<TimeSlot, 4> kAllTimeSlots = {
    TimeSlot::EarlyMorning, TimeSlot::Morning, TimeSlot::AfternoonEvening, TimeSlot::Night};

inline const char* time_slot_name(TimeSlot s) {
  switch (s) {
    case TimeSlot::EarlyMorning: return "early_morning";
    case TimeSlot::Morning: return "morning";
    case TimeSlot::AfternoonEvening: return "afternoon_evening";
    case TimeSlot::Night: return "night";
  }
  return "?";
}

// Hour-of-day membership: 3-8, 9-14, 15-20, 21-2.
inline bool slot_contains_hour(TimeSlot s, int hour) {
  switch (s) {
    case TimeSlot::EarlyMorning: return hour >= 3 && hour <= 8;
    case TimeSlot::Morning: return hour >= 9 && hour <= 14;
    case TimeSlot::AfternoonEvening: return hour >= 15 && hour <= 20;
    case TimeSlot::Night: return hour >= 21 || hour <= 2;
  }
  return false;
}

inline TimeSlot slot_of_hour(int hour) {
  for (TimeSlot s : kAllTimeSlots) {
    if (slot_contains_hour(s, hour)) return s;
  }
  throw invalid_parameter("slot_of_hour: hour out of range");
}

// Builds one slot's trail: visit the slot's 5-minute steps in time order,
// evaporate, then release a truncated cone per active bin with height equal
// to the smoothed bin value.
inline Trail2D slot_trail(const BinnedEvents& bins, TimeSlot slot, const SigmoidParams& smoothing,
                          double mark_base_radius, double delta) {
  Trail2D trail(bins.grid);
  if (bins.steps.empty()) return trail;
  for (std::int64_t step = bins.first_step; step <= bins.last_step; ++step) {
    const int hour = static_cast<int>((step * kBinMinutes) % kMinutesPerDay) / 60;
    if (!slot_contains_hour(slot, hour)) continue;
    trail.evaporate(delta);
    const auto it = bins.steps.find(step);
    if (it == bins.steps.end()) continue;
    for (const auto& [cell, value] : it->second) {
      const double height = sigmoid(value, smoothing);
      if (height <= 1e-12) continue;
      const int i = cell % bins.grid.nx;
      const int j = cell / bins.grid.nx;
      trail.deposit(Mark2D{bins.grid.x_center(i), bins.grid.y_center(j), mark_base_radius, height});
    }
  }
  return trail;
}

// ---------------------------------------------------------------------------
// Hotspot extraction: per-slot relevance thresholding, slot overlap, and
// 8-connected component labeling.
// ---------------------------------------------------------------------------

struct Hotspot {
  std::string id;                // "A", "B", ... by descending total intensity
  std::vector<int> cells;        // sorted grid cell ids
  double centroid_x = 0.0;       // planar feet
  double centroid_y = 0.0;
  double total_intensity = 0.0;  // summed over cells and slots

  bool contains_cell(int cell) const {
    return std::binary_search(cells.begin(), cells.end(), cell);
  }
};

namespace detail {
// Nearest-rank quantile of the nonzero intensities of a trail.
inline double nonzero_quantile(const Trail2D& trail, double q) {
  std::vector<double> nz;
  for (double v : trail.intensity()) {
    if (v > 0.0) nz.push_back(v);
  }
  if (nz.empty()) return std::numeric_limits<double>::infinity();
  std::sort(nz.begin(), nz.end());
  const std::size_t rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(nz.size())));
  return nz[std::min(nz.size() - 1, rank > 0 ? rank - 1 : 0)];
}

inline std::string hotspot_label(std::size_t index) {
  std::string s;
  std::size_t n = index;
  do {
    s.insert(s.begin(), static_cast<char>('A' + n % 26));
    n = n / 26;
  } while (n-- > 0);
  return s;
}
}  // namespace detail

inline std::vector<Hotspot> extract_hotspots(std::span<const Trail2D> slot_trails,
                                             double relevance_quantile, int min_slots,
                                             int min_area) {
  if (slot_trails.empty()) throw invalid_parameter("extract_hotspots: no slot trails");
  const Grid2D& grid = slot_trails[0].grid();
  for (const auto& t : slot_trails) {
    if (!(t.grid() == grid)) throw incompatible_grids("extract_hotspots: mixed grids");
  }
  if (!(relevance_quantile >= 0.0 && relevance_quantile <= 1.0)) {
    throw invalid_parameter("extract_hotspots: relevance_quantile outside [0, 1]");
  }
  if (min_slots < 1 || min_slots > static_cast<int>(slot_trails.size())) {
    throw invalid_parameter("extract_hotspots: min_slots out of range");
  }

  const int cell_count = grid.cell_count();
  std::vector<int> relevant_count(static_cast<std::size_t>(cell_count), 0);
  for (const auto& trail : slot_trails) {
    const double threshold = detail::nonzero_quantile(trail, relevance_quantile);
    for (int c = 0; c < cell_count; ++c) {
      if (trail.cell(c) >= threshold) relevant_count[static_cast<std::size_t>(c)] += 1;
    }
  }

  std::vector<char> keep(static_cast<std::size_t>(cell_count), 0);
  for (int c = 0; c < cell_count; ++c) {
    keep[static_cast<std::size_t>(c)] = relevant_count[static_cast<std::size_t>(c)] >= min_slots;
  }

  // 8-connected flood fill over kept cells.
  std::vector<int> component(static_cast<std::size_t>(cell_count), -1);
  std::vector<std::vector<int>> groups;
  for (int start = 0; start < cell_count; ++start) {
    if (!keep[static_cast<std::size_t>(start)] || component[static_cast<std::size_t>(start)] >= 0) {
      continue;
    }
    const int group_id = static_cast<int>(groups.size());
    groups.emplace_back();
    std::deque<int> frontier{start};
    component[static_cast<std::size_t>(start)] = group_id;
    while (!frontier.empty()) {
      const int c = frontier.front();
      frontier.pop_front();
      groups.back().push_back(c);
      const int ci = c % grid.nx, cj = c / grid.nx;
      for (int dj = -1; dj <= 1; ++dj) {
        for (int di = -1; di <= 1; ++di) {
          if (di == 0 && dj == 0) continue;
          const int ni = ci + di, nj = cj + dj;
          if (ni < 0 || ni >= grid.nx || nj < 0 || nj >= grid.ny) continue;
          const int nc = nj * grid.nx + ni;
          if (keep[static_cast<std::size_t>(nc)] && component[static_cast<std::size_t>(nc)] < 0) {
            component[static_cast<std::size_t>(nc)] = group_id;
            frontier.push_back(nc);
          }
        }
      }
    }
  }

  std::vector<Hotspot> hotspots;
  for (auto& cells : groups) {
    if (static_cast<int>(cells.size()) < min_area) continue;
    std::sort(cells.begin(), cells.end());
    Hotspot h;
    h.cells = std::move(cells);
    for (int c : h.cells) {
      h.centroid_x += grid.x_center(c % grid.nx);
      h.centroid_y += grid.y_center(c / grid.nx);
      for (const auto& trail : slot_trails) h.total_intensity += trail.cell(c);
    }
    h.centroid_x /= static_cast<double>(h.cells.size());
    h.centroid_y /= static_cast<double>(h.cells.size());
    hotspots.push_back(std::move(h));
  }

  std::sort(hotspots.begin(), hotspots.end(), [](const Hotspot& a, const Hotspot& b) {
    if (a.total_intensity != b.total_intensity) return a.total_intensity > b.total_intensity;
    return a.cells[0] < b.cells[0];
  });
  for (std::size_t i = 0; i < hotspots.size(); ++i) hotspots[i].id = detail::hotspot_label(i);
  return hotspots;
}

// ---------------------------------------------------------------------------
// Per-hotspot activity series.
// ---------------------------------------------------------------------------

struct DayActivity {
  std::chrono::sys_days day{};
  std::vector<double> samples;  // one per 5-minute step
  bool empty_day = false;       // no events fell inside the hotspot
};

// Raw passenger sums per 5-minute step for every day in [first_day,
// first_day + n_days), then min-max normalized over the whole period so
// day-to-day magnitude differences survive.
inline std::vector<DayActivity> hotspot_series(std::span<const PositioningEvent> events,
                                               const Hotspot& hotspot, const Grid2D& grid,
                                               std::chrono::sys_days first_day, int n_days) {
  if (n_days < 1) throw invalid_parameter("hotspot_series: n_days must be >= 1");
  const std::int64_t day0 = first_day.time_since_epoch().count();
  std::vector<double> raw(static_cast<std::size_t>(n_days) * kStepsPerDay, 0.0);
  for (const auto& e : events) {
    const std::int64_t d = e.minute / kMinutesPerDay - day0;
    if (d < 0 || d >= n_days) continue;
    const int cell = grid.cell_of(e.x, e.y);
    if (cell < 0 || !hotspot.contains_cell(cell)) continue;
    const std::int64_t idx = d * kStepsPerDay + (e.minute % kMinutesPerDay) / kBinMinutes;
    raw[static_cast<std::size_t>(idx)] += static_cast<double>(e.passengers);
  }

  const auto normalized = minmax_normalize(raw);
  std::vector<DayActivity> out(static_cast<std::size_t>(n_days));
  for (int d = 0; d < n_days; ++d) {
    auto& day = out[static_cast<std::size_t>(d)];
    day.day = first_day + std::chrono::days{d};
    const auto begin = normalized.begin() + static_cast<std::ptrdiff_t>(d) * kStepsPerDay;
    day.samples.assign(begin, begin + kStepsPerDay);
    const auto raw_begin = raw.begin() + static_cast<std::ptrdiff_t>(d) * kStepsPerDay;
    day.empty_day = std::all_of(raw_begin, raw_begin + kStepsPerDay,
                                [](double v) { return v == 0.0; });
  }
  return out;
}

}  // namespace trailscape
