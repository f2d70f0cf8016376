#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "corrbench/benchmarks.hpp"
#include "corrbench/categories.hpp"
#include "corrbench/tables.hpp"

namespace corrbench {

/// Mean residual robustness of a model over the benchmark's corruptions.
/// Throws Error(EmptyBenchmark) and Error(MissingAccuracy).
double benchmark_robustness(const AccuracyTable& table, std::string_view model_id, const Benchmark& benchmark);

struct BenchmarkCorrelation {
  std::string benchmark_id;
  double r = 0.0;
  double p_value = 1.0;
  /// Constant robustness vector; r and p_value are NaN and the entry does
  /// not enter the means.
  bool excluded = false;
};

struct RobustnessReport {
  std::string natural_id;
  std::vector<std::string> models;
  double mean_r = 0.0;
  double mean_p_value = 0.0;
  std::vector<BenchmarkCorrelation> benchmarks;
  std::size_t excluded = 0;
};

/// Models holding both a clean and a `natural_id` accuracy, sorted.
std::vector<std::string> models_with_natural(const AccuracyTable& table, std::string_view natural_id);

/// Pearson correlation, across models, between residual
/// robustness on `natural_id` and robustness on each benchmark, averaged
/// over the group. Throws Error(InsufficientSamples) with fewer than three
/// models, Error(ZeroVariance) for a constant natural vector or when every
/// benchmark is excluded, and Error(MissingAccuracy).
RobustnessReport natural_correlation(std::span<const Benchmark> group, const AccuracyTable& table,
                                     std::string_view natural_id);

struct SyntheticCohortConfig {
  int models = 21;
  int categories = 6;
  /// Standard deviation of each model's per-category skill.
  double skill_spread = 0.05;
  /// Observation noise added to every corruption accuracy.
  double noise = 0.03;
  /// Observation noise added to the natural-distribution accuracy.
  double natural_noise = 0.01;
  double base_drop = 0.3;
  double clean_lo = 0.70;
  double clean_hi = 0.85;
  /// Category weights of the natural distribution; empty means uniform.
  std::vector<double> natural_weights;
  std::string natural_id = "natural";
  std::string model_prefix = "model_";
  std::uint64_t seed = 0;

  /// Throws Error(InvalidConfig).
  void validate() const;
  /// natural_weights, or uniform weights when empty.
  std::vector<double> weights() const;
};

/// Latent-factor model cohort. Model m has clean accuracy U(clean_lo,
/// clean_hi) and skill s[m][g] ~ N(0, skill_spread) per category g:
///
///   acc(m, c)       = clean - (base_drop - s[m][cat(c)]) + N(0, noise)
///   acc(m, natural) = clean - sum_g w_g (base_drop - s[m][g]) + N(0, natural_noise)
///
/// clamped to [0, 1]. config.categories must equal partition.size().
AccuracyTable simulate_cohort(const SyntheticCohortConfig& config, const CategoryPartition& partition);

struct OverlapStudyConfig {
  double within_lo = 0.10;
  double within_hi = 0.90;
  double across_lo = 0.00;
  double across_hi = 0.25;
  std::string standard_id = "standard";
  std::string augmented_prefix = "aug_";
  std::uint64_t seed = 0;

  void validate() const;
};

struct OverlapStudy {
  AccuracyTable table;
  ModelManifest manifest;
  /// Symmetric transfer matrix the accuracies were built from.
  OverlapMatrix transfer;
};

/// Accuracies of a standard model and one augmented model per corruption
/// whose overlap matrix equals a planted transfer matrix: uniform within
/// [within_lo, within_hi] for same-category pairs and [across_lo, across_hi]
/// otherwise. Corruptions are taken in partition order.
OverlapStudy simulate_overlap_study(const OverlapStudyConfig& config, const CategoryPartition& partition);

struct TrendCell {
  int n = 0;
  int k = 0;
  double mean_r = 0.0;
  double mean_p_value = 0.0;
  std::size_t benchmarks = 0;
};

struct TrendBucket {
  int tenths = 0;
  double mean_r = 0.0;
  std::size_t benchmarks = 0;
};

struct TrendReport {
  std::vector<TrendCell> cells;
  std::vector<TrendBucket> buckets;
  std::size_t truncated_chains = 0;
};

struct TrendConfig {
  std::vector<std::pair<int, int>> cells = {{2, 3}, {3, 2}, {6, 1}, {4, 3}, {6, 2}, {6, 3}};
  int count = 200;
  int sweep_n = 6;
  int sweep_k = 2;
  int sweep_steps = 5;
  std::string natural_id = "natural";
  std::uint64_t seed = 0;
};

/// Mean correlation per (n, k) cell, plus the std sweep: a balanced
/// (sweep_n, sweep_k) group and its substitution chains, bucketed by
/// rounded balance std.
TrendReport trend_report(const CategoryPartition& partition, const AccuracyTable& cohort, const TrendConfig& config);

}  // namespace corrbench
