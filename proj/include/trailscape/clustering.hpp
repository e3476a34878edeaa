#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "trailscape/errors.hpp"
#include "trailscape/perceptron.hpp"

namespace trailscape {

struct SimilarityMatrix {
  std::vector<std::chrono::sys_days> days;
  std::vector<std::vector<double>> values;  // symmetric, unit diagonal
};

// All-pairs day similarity over a training set of activity-level series.
inline SimilarityMatrix build_similarity_matrix(std::span<const ActivityLevelSeries> days,
                                                const DaySimilaritySrf& srf) {
  if (days.size() < 2) throw invalid_parameter("build_similarity_matrix: need >= 2 days");
  for (const auto& d : days) {
    if (d.levels.size() != days[0].levels.size()) {
      throw invalid_parameter("build_similarity_matrix: day series length mismatch");
    }
  }
  const std::size_t n = days.size();
  SimilarityMatrix m;
  m.days.reserve(n);
  for (const auto& d : days) m.days.push_back(d.day);
  m.values.assign(n, std::vector<double>(n, 1.0));
  std::vector<Trail1D> trails;
  trails.reserve(n);
  for (const auto& d : days) trails.push_back(srf.level_trail(d.levels));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double s = sigmoid(jaccard(trails[i], trails[j]), srf.params().activation);
      m.values[i][j] = s;
      m.values[j][i] = s;
    }
  }
  return m;
}

// ---------------------------------------------------------------------------
// Fuzzy c-means on feature rows. The relational case embeds each day as its
// similarity-matrix row.
// ---------------------------------------------------------------------------

struct FcmConfig {
  int clusters = 3;
  double fuzzifier = 2.0;  // m
  double tolerance = 1e-6;
  int max_iterations = 300;
  std::uint64_t rng_seed = 0;

  void validate() const {
    if (clusters < 2) throw invalid_parameter("FcmConfig: clusters must be >= 2");
    if (!(fuzzifier > 1.0)) throw invalid_parameter("FcmConfig: fuzzifier must be > 1");
    if (!(tolerance > 0.0)) throw invalid_parameter("FcmConfig: tolerance must be > 0");
    if (max_iterations < 1) throw invalid_parameter("FcmConfig: max_iterations must be >= 1");
  }
};

struct ClusterModel {
  std::vector<std::vector<double>> centroids;
  double fuzzifier = 2.0;
  std::vector<std::vector<double>> memberships;   // per training row
  std::vector<double> objective_history;          // non-increasing
  std::vector<std::string> cluster_names;         // filled by name_clusters
};

namespace detail {

inline double sq_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

// Membership update from squared distances. Rows coincident with a centroid
// get full membership there (split evenly if several coincide).
inline std::vector<double> memberships_from_distances(std::span<const double> d2, double m) {
  const std::size_t c = d2.size();
  std::vector<double> u(c, 0.0);
  std::size_t zeros = 0;
  for (double d : d2) {
    if (d <= 0.0) ++zeros;
  }
  if (zeros > 0) {
    for (std::size_t k = 0; k < c; ++k) {
      if (d2[k] <= 0.0) u[k] = 1.0 / static_cast<double>(zeros);
    }
    return u;
  }
  const double expo = 1.0 / (m - 1.0);
  for (std::size_t k = 0; k < c; ++k) {
    double sum = 0.0;
    for (std::size_t j = 0; j < c; ++j) sum += std::pow(d2[k] / d2[j], expo);
    u[k] = 1.0 / sum;
  }
  return u;
}

}  // namespace detail

inline ClusterModel fcm_fit(const std::vector<std::vector<double>>& rows, const FcmConfig& config) {
  config.validate();
  const std::size_t n = rows.size();
  const std::size_t c = static_cast<std::size_t>(config.clusters);
  if (n < c) throw invalid_parameter("fcm_fit: fewer rows than clusters");
  const std::size_t dims = rows[0].size();
  for (const auto& r : rows) {
    if (r.size() != dims) throw invalid_parameter("fcm_fit: ragged rows");
  }

  ClusterModel model;
  model.fuzzifier = config.fuzzifier;
  model.memberships.assign(n, std::vector<double>(c, 0.0));

  // Random unit-sum memberships to start.
  std::mt19937_64 rng(config.rng_seed);
  std::uniform_real_distribution<double> unit(1e-3, 1.0);
  for (auto& u : model.memberships) {
    double sum = 0.0;
    for (auto& v : u) {
      v = unit(rng);
      sum += v;
    }
    for (auto& v : u) v /= sum;
  }

  model.centroids.assign(c, std::vector<double>(dims, 0.0));
  std::vector<double> d2(c);
  double prev_objective = std::numeric_limits<double>::infinity();

  for (int iter = 0; iter < config.max_iterations; ++iter) {
    // Centroids: fuzzified-membership-weighted means of the rows.
    for (std::size_t k = 0; k < c; ++k) {
      std::fill(model.centroids[k].begin(), model.centroids[k].end(), 0.0);
      double wsum = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double w = std::pow(model.memberships[i][k], config.fuzzifier);
        wsum += w;
        for (std::size_t d = 0; d < dims; ++d) model.centroids[k][d] += w * rows[i][d];
      }
      if (wsum > 0.0) {
        for (std::size_t d = 0; d < dims; ++d) model.centroids[k][d] /= wsum;
      }
    }

    // Memberships and objective.
    double objective = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < c; ++k) d2[k] = detail::sq_distance(rows[i], model.centroids[k]);
      model.memberships[i] = detail::memberships_from_distances(d2, config.fuzzifier);
      for (std::size_t k = 0; k < c; ++k) {
        objective += std::pow(model.memberships[i][k], config.fuzzifier) * d2[k];
      }
    }
    model.objective_history.push_back(objective);
    if (std::abs(prev_objective - objective) < config.tolerance) break;
    prev_objective = objective;
  }
  return model;
}

inline ClusterModel fcm_fit(const SimilarityMatrix& matrix, const FcmConfig& config) {
  return fcm_fit(matrix.values, config);
}

// Membership of a new row against frozen centroids.
inline std::vector<double> membership_of(const ClusterModel& model, std::span<const double> row) {
  std::vector<double> d2(model.centroids.size());
  for (std::size_t k = 0; k < model.centroids.size(); ++k) {
    if (row.size() != model.centroids[k].size()) {
      throw invalid_parameter("membership_of: row dimension mismatch");
    }
    d2[k] = detail::sq_distance(row, model.centroids[k]);
  }
  return detail::memberships_from_distances(d2, model.fuzzifier);
}

// Extraneousness Index: half the L1 distance between two unit-sum membership
// vectors, so the result stays in [0, 1].
inline double extraneousness_index(std::span<const double> u_day,
                                   std::span<const double> u_expected) {
  if (u_day.size() != u_expected.size() || u_day.empty()) {
    throw invalid_parameter("extraneousness_index: membership size mismatch");
  }
  double sum_day = 0.0, sum_exp = 0.0;
  for (std::size_t k = 0; k < u_day.size(); ++k) {
    sum_day += u_day[k];
    sum_exp += u_expected[k];
  }
  if (std::abs(sum_day - 1.0) > 1e-6 || std::abs(sum_exp - 1.0) > 1e-6) {
    throw invalid_parameter("extraneousness_index: memberships must sum to 1");
  }
  double l1 = 0.0;
  for (std::size_t k = 0; k < u_day.size(); ++k) l1 += std::abs(u_day[k] - u_expected[k]);
  return l1 / 2.0;
}

// ---------------------------------------------------------------------------
// Behavioral day classes and the calendar ground truth.
// ---------------------------------------------------------------------------

enum class DayClass { Working, Entertainment, Leisure };

inline const char* day_class_name(DayClass c) {
  switch (c) {
    case DayClass::Working: return "Working";
    case DayClass::Entertainment: return "Entertainment";
    case DayClass::Leisure: return "Leisure";
  }
  return "?";
}

// Mon-Thu Working, Fri-Sat Entertainment, Sun Leisure.
inline DayClass calendar_class(std::chrono::sys_days day) {
  const std::chrono::weekday wd{day};
  const unsigned iso = wd.iso_encoding();  // Mon = 1 .. Sun = 7
  if (iso <= 4) return DayClass::Working;
  if (iso <= 6) return DayClass::Entertainment;
  return DayClass::Leisure;
}

// Names each cluster by the calendar class its highest-membership days mostly
// carry; the 3x3 assignment is chosen to maximize agreement.
inline std::vector<DayClass> name_clusters(ClusterModel& model,
                                           std::span<const std::chrono::sys_days> days) {
  const std::size_t c = model.centroids.size();
  if (days.size() != model.memberships.size()) {
    throw invalid_parameter("name_clusters: day count mismatch");
  }
  std::vector<std::vector<int>> counts(c, std::vector<int>(3, 0));
  for (std::size_t i = 0; i < days.size(); ++i) {
    const auto& u = model.memberships[i];
    const std::size_t k = static_cast<std::size_t>(
        std::max_element(u.begin(), u.end()) - u.begin());
    counts[k][static_cast<std::size_t>(calendar_class(days[i]))] += 1;
  }

  std::vector<int> classes(c);
  if (c == 3) {
    // Exhaustive assignment over the 6 permutations.
    static constexpr int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                        {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    int best_score = -1;
    for (const auto& p : perms) {
      int score = 0;
      for (std::size_t k = 0; k < 3; ++k) score += counts[k][static_cast<std::size_t>(p[k])];
      if (score > best_score) {
        best_score = score;
        for (std::size_t k = 0; k < 3; ++k) classes[k] = p[k];
      }
    }
  } else {
    for (std::size_t k = 0; k < c; ++k) {
      classes[k] = static_cast<int>(
          std::max_element(counts[k].begin(), counts[k].end()) - counts[k].begin());
    }
  }

  std::vector<DayClass> out(c);
  model.cluster_names.resize(c);
  for (std::size_t k = 0; k < c; ++k) {
    out[k] = static_cast<DayClass>(classes[k]);
    model.cluster_names[k] = day_class_name(out[k]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Unexpected-pattern detection.
// ---------------------------------------------------------------------------

struct AnomalyReport {
  std::chrono::sys_days date{};
  double ei = 0.0;
  int expected_cluster = 0;
  bool flagged = false;
  double threshold = 0.0;
};

// Flags every day whose index exceeds the training-set maximum; reports are
// sorted by index descending, ties by date.
inline std::vector<AnomalyReport> detect_unexpected(std::vector<AnomalyReport> reports,
                                                    double training_max_ei) {
  for (auto& r : reports) {
    r.threshold = training_max_ei;
    r.flagged = r.ei > training_max_ei;
  }
  std::sort(reports.begin(), reports.end(), [](const AnomalyReport& a, const AnomalyReport& b) {
    if (a.ei != b.ei) return a.ei > b.ei;
    return a.date < b.date;
  });
  return reports;
}

}  // namespace trailscape
