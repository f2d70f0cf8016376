#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "corrbench/corruptions.hpp"
#include "corrbench/error.hpp"
#include "corrbench/tables.hpp"

namespace corrbench {

struct Category {
  int id = 0;
  std::vector<std::string> corruptions;
  friend bool operator==(const Category&, const Category&) = default;
};

/// Disjoint cover of a corruption set by non-empty categories.
class CategoryPartition {
 public:
  CategoryPartition() = default;
  /// Throws Error(InconsistentInput) for an empty category, a repeated
  /// corruption or a repeated category id.
  explicit CategoryPartition(std::vector<Category> categories);

  /// Builds categories from one label per id. Category ids are assigned
  /// 1, 2, ... in order of first appearance along `ids`.
  static CategoryPartition from_labels(std::span<const std::string> ids, std::span<const int> labels);

  const std::vector<Category>& categories() const noexcept { return categories_; }
  std::size_t size() const noexcept { return categories_.size(); }
  std::size_t corruption_count() const noexcept { return index_.size(); }

  /// Index into categories() of the category holding `corruption_id`.
  std::optional<std::size_t> find(std::string_view corruption_id) const;
  /// As find(), throwing Error(UnknownCorruption).
  std::size_t category_index(std::string_view corruption_id) const;

  /// Number of corruptions per category, in categories() order.
  std::vector<std::size_t> sizes() const;

  /// Category index for each id; throws Error(InconsistentInput) unless the
  /// partition covers exactly `ids`.
  std::vector<std::size_t> labels_for(std::span<const std::string> ids) const;

  /// Groups a roster by family hint, families in enum order.
  static CategoryPartition by_family(const Roster& roster);

  friend bool operator==(const CategoryPartition& a, const CategoryPartition& b) {
    return a.categories_ == b.categories_;
  }

 private:
  std::vector<Category> categories_;
  std::unordered_map<std::string, std::size_t> index_;
};

struct ClusterConfig {
  int k_min = 2;
  int k_max = 10;
  double threshold = 0.5;
  int restarts = 100;
  int max_iters = 300;
  std::uint64_t seed = 0;

  /// Throws Error(InvalidConfig) unless 2 <= k_min <= k_max <= point_count,
  /// threshold in (0, 1), restarts >= 1 and max_iters >= 1.
  void validate(std::size_t point_count) const;
};

/// One Lloyd run from a k-means++ start.
struct KMeansRun {
  std::vector<int> labels;
  double inertia = 0.0;
  /// Within-cluster sum of squares after each assignment step.
  std::vector<double> inertia_trace;
  int iterations = 0;
  /// False when a cluster ended up empty.
  bool ok = false;
};

/// Single seeded run over `count` points of dimension `dim`, stored row-major.
KMeansRun kmeans_run(std::span<const double> points, std::size_t count, std::size_t dim, int k, int max_iters,
                     std::uint64_t seed);

/// Clusters the matrix rows into k categories: Euclidean k-means with
/// k-means++ starts, `config.restarts` seeded runs, lowest inertia wins
/// (ties go to the earlier restart). Throws Error(InvalidK) and
/// Error(ClusteringFailed) if every restart leaves a cluster empty.
CategoryPartition kmeans_cluster(const OverlapMatrix& matrix, int k, const ClusterConfig& config);

struct PairStats {
  double mean_scc = 0.0;
  double mean_dcc = 0.0;
  std::size_t scc_pairs = 0;
  std::size_t dcc_pairs = 0;
  /// Pairs dropped because one of the vectors was constant.
  std::size_t skipped_pairs = 0;
};

/// Mean Pearson correlation between overlap row-vectors over same-category
/// and different-category pairs. Throws Error(NoSccPairs) when every
/// category is a singleton.
PairStats partition_pair_stats(const OverlapMatrix& matrix, const CategoryPartition& partition);

/// Same averaging over per-corruption robustness vectors (one value per
/// model). Vectors must share a length >= 3.
PairStats empirical_category_validation(const std::map<std::string, std::vector<double>>& robustness_vectors,
                                        const CategoryPartition& partition);

struct MinKResult {
  int k = 0;
  CategoryPartition partition;
  PairStats stats;
  /// (k, mean SCC correlation) for every k tried.
  std::vector<std::pair<int, double>> trace;
};

class ThresholdNotReached : public Error {
 public:
  ThresholdNotReached(int best_k, double best_score, std::vector<std::pair<int, double>> trace);
  int best_k() const noexcept { return best_k_; }
  double best_score() const noexcept { return best_score_; }
  const std::vector<std::pair<int, double>>& trace() const noexcept { return trace_; }

 private:
  int best_k_;
  double best_score_;
  std::vector<std::pair<int, double>> trace_;
};

/// Smallest k in [k_min, k_max] whose clustering has a mean SCC correlation
/// strictly above the threshold. Throws ThresholdNotReached.
MinKResult find_min_k(const OverlapMatrix& matrix, const ClusterConfig& config);

}  // namespace corrbench
