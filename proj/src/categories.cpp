#include "corrbench/categories.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "corrbench/metrics.hpp"
#include "corrbench/rng.hpp"
#include "corrbench/simd/kernels.hpp"

namespace corrbench {

CategoryPartition::CategoryPartition(std::vector<Category> categories) : categories_(std::move(categories)) {
  std::set<int> ids;
  for (std::size_t c = 0; c < categories_.size(); ++c) {
    const Category& cat = categories_[c];
    if (cat.corruptions.empty()) {
      throw Error(ErrorCode::InconsistentInput, "category " + std::to_string(cat.id) + " is empty");
    }
    if (!ids.insert(cat.id).second) {
      throw Error(ErrorCode::InconsistentInput, "category id " + std::to_string(cat.id) + " repeated");
    }
    for (const std::string& id : cat.corruptions) {
      if (!index_.emplace(id, c).second) {
        throw Error(ErrorCode::InconsistentInput, "corruption '" + id + "' is in more than one category");
      }
    }
  }
}

CategoryPartition CategoryPartition::from_labels(std::span<const std::string> ids, std::span<const int> labels) {
  if (ids.size() != labels.size()) throw Error(ErrorCode::LengthMismatch, "one label per corruption id required");
  std::map<int, std::size_t> order;
  std::vector<Category> cats;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    auto [it, inserted] = order.emplace(labels[i], cats.size());
    if (inserted) cats.push_back(Category{static_cast<int>(cats.size()) + 1, {}});
    cats[it->second].corruptions.push_back(ids[i]);
  }
  return CategoryPartition(std::move(cats));
}

CategoryPartition CategoryPartition::by_family(const Roster& roster) {
  std::map<Family, std::vector<std::string>> groups;
  for (const CorruptionSpec& spec : roster) groups[spec.family_hint].push_back(spec.id);
  std::vector<Category> cats;
  for (auto& [family, ids] : groups) cats.push_back(Category{static_cast<int>(cats.size()) + 1, std::move(ids)});
  return CategoryPartition(std::move(cats));
}

std::optional<std::size_t> CategoryPartition::find(std::string_view corruption_id) const {
  auto it = index_.find(std::string(corruption_id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t CategoryPartition::category_index(std::string_view corruption_id) const {
  if (auto c = find(corruption_id)) return *c;
  throw Error(ErrorCode::UnknownCorruption, "'" + std::string(corruption_id) + "' is not in any category");
}

std::vector<std::size_t> CategoryPartition::sizes() const {
  std::vector<std::size_t> out;
  out.reserve(categories_.size());
  for (const Category& c : categories_) out.push_back(c.corruptions.size());
  return out;
}

std::vector<std::size_t> CategoryPartition::labels_for(std::span<const std::string> ids) const {
  if (ids.size() != index_.size()) {
    throw Error(ErrorCode::InconsistentInput, "partition covers " + std::to_string(index_.size()) +
                                                  " corruptions, expected " + std::to_string(ids.size()));
  }
  std::vector<std::size_t> out;
  out.reserve(ids.size());
  for (const std::string& id : ids) {
    auto c = find(id);
    if (!c) throw Error(ErrorCode::InconsistentInput, "corruption '" + id + "' is not covered by the partition");
    out.push_back(*c);
  }
  return out;
}

void ClusterConfig::validate(std::size_t point_count) const {
  const auto c = static_cast<long long>(point_count);
  if (k_min < 2 || k_min > k_max || k_max > c) {
    throw Error(ErrorCode::InvalidConfig, "need 2 <= kmin <= kmax <= " + std::to_string(point_count) + ", got kmin=" +
                                              std::to_string(k_min) + " kmax=" + std::to_string(k_max));
  }
  if (!(threshold > 0.0 && threshold < 1.0)) throw Error(ErrorCode::InvalidConfig, "threshold must be in (0, 1)");
  if (restarts < 1) throw Error(ErrorCode::InvalidConfig, "restarts must be >= 1");
  if (max_iters < 1) throw Error(ErrorCode::InvalidConfig, "max_iters must be >= 1");
}

namespace {

struct Points {
  std::span<const double> data;
  std::size_t count;
  std::size_t dim;
  std::span<const double> operator[](std::size_t i) const { return data.subspan(i * dim, dim); }
};

std::vector<double> kmeanspp_init(const Points& pts, int k, Rng& rng) {
  std::vector<double> centers;
  centers.reserve(static_cast<std::size_t>(k) * pts.dim);
  const auto first = static_cast<std::size_t>(rng.below(pts.count));
  centers.insert(centers.end(), pts[first].begin(), pts[first].end());
  std::vector<double> nearest(pts.count);
  for (std::size_t i = 0; i < pts.count; ++i) nearest[i] = simd::squared_distance(pts[i], pts[first]);
  for (int c = 1; c < k; ++c) {
    double total = 0.0;
    for (double d : nearest) total += d;
    std::size_t pick = 0;
    if (total > 0.0) {
      const double target = rng.uniform() * total;
      double acc = 0.0;
      pick = pts.count - 1;
      for (std::size_t i = 0; i < pts.count; ++i) {
        acc += nearest[i];
        if (acc > target && nearest[i] > 0.0) {
          pick = i;
          break;
        }
      }
    } else {
      pick = static_cast<std::size_t>(rng.below(pts.count));
    }
    const std::span<const double> chosen = pts[pick];
    centers.insert(centers.end(), chosen.begin(), chosen.end());
    for (std::size_t i = 0; i < pts.count; ++i) nearest[i] = std::min(nearest[i], simd::squared_distance(pts[i], chosen));
  }
  return centers;
}

}  // namespace

KMeansRun kmeans_run(std::span<const double> points, std::size_t count, std::size_t dim, int k, int max_iters,
                     std::uint64_t seed) {
  const Points pts{points, count, dim};
  const auto kk = static_cast<std::size_t>(k);
  Rng rng(seed);
  std::vector<double> centers = kmeanspp_init(pts, k, rng);
  auto center = [&](std::size_t c) { return std::span<const double>(centers).subspan(c * dim, dim); };

  KMeansRun run;
  run.labels.assign(count, -1);
  std::vector<std::size_t> members(kk);
  for (int iter = 0; iter < max_iters; ++iter) {
    bool changed = false;
    double inertia = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
      int best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < kk; ++c) {
        const double d = simd::squared_distance(pts[i], center(c));
        if (d < best_d) {
          best_d = d;
          best = static_cast<int>(c);
        }
      }
      inertia += best_d;
      if (run.labels[i] != best) {
        run.labels[i] = best;
        changed = true;
      }
    }
    run.inertia_trace.push_back(inertia);
    run.iterations = iter + 1;
    if (!changed && iter > 0) break;

    std::fill(centers.begin(), centers.end(), 0.0);
    std::fill(members.begin(), members.end(), 0);
    for (std::size_t i = 0; i < count; ++i) {
      const auto c = static_cast<std::size_t>(run.labels[i]);
      ++members[c];
      const std::span<const double> p = pts[i];
      for (std::size_t d = 0; d < dim; ++d) centers[c * dim + d] += p[d];
    }
    if (std::find(members.begin(), members.end(), std::size_t{0}) != members.end()) {
      run.ok = false;
      run.inertia = std::numeric_limits<double>::infinity();
      return run;
    }
    for (std::size_t c = 0; c < kk; ++c) {
      const double inv = 1.0 / static_cast<double>(members[c]);
      for (std::size_t d = 0; d < dim; ++d) centers[c * dim + d] *= inv;
    }
  }
  // Inertia against the centroids of the final assignment.
  double inertia = 0.0;
  for (std::size_t i = 0; i < count; ++i) inertia += simd::squared_distance(pts[i], center(static_cast<std::size_t>(run.labels[i])));
  run.inertia = inertia;
  run.ok = true;
  return run;
}

CategoryPartition kmeans_cluster(const OverlapMatrix& matrix, int k, const ClusterConfig& config) {
  const std::size_t n = matrix.size();
  if (k < 2 || static_cast<std::size_t>(k) > n) {
    throw Error(ErrorCode::InvalidK, "k=" + std::to_string(k) + " outside [2, " + std::to_string(n) + "]");
  }
  if (config.restarts < 1 || config.max_iters < 1) {
    throw Error(ErrorCode::InvalidConfig, "restarts and max_iters must be >= 1");
  }
  std::optional<KMeansRun> best;
  for (int r = 0; r < config.restarts; ++r) {
    KMeansRun run = kmeans_run(matrix.values(), n, n, k, config.max_iters,
                               substream_seed(config.seed, static_cast<std::uint64_t>(r)));
    if (!run.ok) continue;
    if (!best || run.inertia < best->inertia) best = std::move(run);
  }
  if (!best) {
    throw Error(ErrorCode::ClusteringFailed,
                "every restart left an empty cluster for k=" + std::to_string(k));
  }
  return CategoryPartition::from_labels(matrix.ids(), best->labels);
}

namespace {

// Averages pairwise correlations of `vectors[i]` split by category label.
PairStats pair_stats(const std::vector<std::span<const double>>& vectors, const std::vector<std::size_t>& labels) {
  std::vector<double> scc;
  std::vector<double> dcc;
  PairStats stats;
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    for (std::size_t j = i + 1; j < vectors.size(); ++j) {
      double r = 0.0;
      try {
        r = pearson(vectors[i], vectors[j]);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::ZeroVariance) throw;
        ++stats.skipped_pairs;
        continue;
      }
      (labels[i] == labels[j] ? scc : dcc).push_back(r);
    }
  }
  stats.scc_pairs = scc.size();
  stats.dcc_pairs = dcc.size();
  stats.mean_scc = compensated_mean(scc);
  stats.mean_dcc = compensated_mean(dcc);
  return stats;
}

void require_scc_pairs(const CategoryPartition& partition) {
  const std::vector<std::size_t> sizes = partition.sizes();
  if (std::all_of(sizes.begin(), sizes.end(), [](std::size_t s) { return s < 2; })) {
    throw Error(ErrorCode::NoSccPairs, "every category is a singleton");
  }
}

}  // namespace

PairStats partition_pair_stats(const OverlapMatrix& matrix, const CategoryPartition& partition) {
  const std::vector<std::size_t> labels = partition.labels_for(matrix.ids());
  require_scc_pairs(partition);
  std::vector<std::span<const double>> rows;
  rows.reserve(matrix.size());
  for (std::size_t i = 0; i < matrix.size(); ++i) rows.push_back(matrix.row(i));
  return pair_stats(rows, labels);
}

PairStats empirical_category_validation(const std::map<std::string, std::vector<double>>& robustness_vectors,
                                        const CategoryPartition& partition) {
  std::vector<std::string> ids;
  std::vector<std::span<const double>> vectors;
  for (const auto& [id, v] : robustness_vectors) {
    if (v.size() != robustness_vectors.begin()->second.size()) {
      throw Error(ErrorCode::LengthMismatch, "robustness vector of '" + id + "' has a different length");
    }
    if (v.size() < 3) throw Error(ErrorCode::InsufficientSamples, "robustness vectors need at least 3 models");
    ids.push_back(id);
    vectors.push_back(v);
  }
  const std::vector<std::size_t> labels = partition.labels_for(ids);
  require_scc_pairs(partition);
  return pair_stats(vectors, labels);
}

ThresholdNotReached::ThresholdNotReached(int best_k, double best_score, std::vector<std::pair<int, double>> trace)
    : Error(ErrorCode::ThresholdNotReached,
            "no k reached the SCC threshold; best k=" + std::to_string(best_k) + " with mean SCC correlation " +
                format_double(best_score)),
      best_k_(best_k),
      best_score_(best_score),
      trace_(std::move(trace)) {}

MinKResult find_min_k(const OverlapMatrix& matrix, const ClusterConfig& config) {
  config.validate(matrix.size());
  std::vector<std::pair<int, double>> trace;
  int best_k = config.k_min;
  double best_score = -std::numeric_limits<double>::infinity();
  for (int k = config.k_min; k <= config.k_max; ++k) {
    CategoryPartition partition = kmeans_cluster(matrix, k, config);
    PairStats stats;
    try {
      stats = partition_pair_stats(matrix, partition);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NoSccPairs) throw;
      trace.emplace_back(k, std::numeric_limits<double>::quiet_NaN());
      continue;
    }
    trace.emplace_back(k, stats.mean_scc);
    if (stats.mean_scc > best_score) {
      best_score = stats.mean_scc;
      best_k = k;
    }
    if (stats.mean_scc > config.threshold) return MinKResult{k, std::move(partition), stats, std::move(trace)};
  }
  throw ThresholdNotReached(best_k, best_score, std::move(trace));
}

}  // namespace corrbench
