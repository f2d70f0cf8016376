#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "corrbench/categories.hpp"
#include "corrbench/rng.hpp"
#include "corrbench/tables.hpp"

namespace corrbench {

struct Benchmark {
  std::string id;
  /// Distinct corruption ids, kept sorted.
  std::vector<std::string> corruptions;
  int n = 0;  // categories represented at generation
  int k = 0;  // representatives per category at generation
  std::uint64_t seed = 0;
  /// One "removed->added" entry per substitution.
  std::vector<std::string> lineage;

  std::size_t size() const noexcept { return corruptions.size(); }
  friend bool operator==(const Benchmark&, const Benchmark&) = default;
};

struct GenerationParams {
  int n = 1;
  int k = 1;
  int count = 1;
  std::uint64_t seed = 0;

  /// Throws Error(InvalidConfig) for n, k or count below 1.
  void validate() const;
};

/// One benchmark: n distinct categories drawn uniformly from
/// those holding at least k corruptions, then k distinct corruptions drawn
/// uniformly from each. Throws Error(InfeasibleParams).
Benchmark generate_benchmark(const CategoryPartition& partition, int n, int k, Rng& rng);

/// Number of distinct (n, k) benchmarks, saturating at UINT64_MAX.
std::uint64_t count_distinct_benchmarks(const CategoryPartition& partition, int n, int k);

/// Attempts generate_group makes before giving up.
std::uint64_t generation_retry_budget(int count);

/// `count` pairwise-distinct benchmarks, rejection-sampling duplicates from a
/// single stream seeded with params.seed. Ids are "b0000", "b0001", ...
/// Throws Error(InfeasibleParams) or Error(NotEnoughDistinctBenchmarks),
/// the latter up front when count exceeds count_distinct_benchmarks and
/// otherwise once the retry budget runs out.
std::vector<Benchmark> generate_group(const CategoryPartition& partition, const GenerationParams& params);

/// Representative count of each represented category, in partition order.
std::vector<int> representative_counts(const Benchmark& benchmark, const CategoryPartition& partition);

/// Population standard deviation of representative_counts. Throws
/// Error(EmptyBenchmark) and Error(UnknownCorruption).
double balance_std(const Benchmark& benchmark, const CategoryPartition& partition);
double population_std(std::span<const int> counts);

/// Reporting bucket of a std value, in tenths (0.57735 -> 6).
int std_bucket(double std_value);

struct Substitution {
  std::string removed;
  std::string added;
  friend bool operator==(const Substitution&, const Substitution&) = default;
};

/// Every (removed, added) pair that keeps the represented categories, does
/// not duplicate a corruption and strictly raises balance_std. In benchmark
/// order of the removed corruption, then partition order of the added one.
std::vector<Substitution> valid_substitutions(const Benchmark& benchmark, const CategoryPartition& partition);

/// Applies one substitution drawn uniformly from valid_substitutions.
/// Throws Error(NoValidSubstitution).
Benchmark substitute(const Benchmark& benchmark, const CategoryPartition& partition, Rng& rng);

struct ChainResult {
  /// For each input in order, the benchmark after each completed step.
  std::vector<Benchmark> benchmarks;
  /// (input id, completed steps) for chains that ran out of valid moves.
  std::vector<std::pair<std::string, int>> truncated;
};

/// `steps` sequential substitutions per input benchmark, chain i drawing from
/// substream_seed(seed, i). Outputs are named "<id>.s<step>". steps == 0
/// returns the group unchanged. Throws Error(InvalidConfig) for steps < 0.
ChainResult substitution_chains(std::span<const Benchmark> group, int steps, const CategoryPartition& partition,
                                std::uint64_t seed);

struct Selection {
  std::size_t index = 0;
  double score = 0.0;
  /// Mean same-category overlap per group member; NaN when it has none.
  std::vector<double> scores;
  std::size_t excluded = 0;
};

/// Mean overlap over the unordered same-category pairs of a benchmark, or
/// NaN without any.
double scc_overlap(const Benchmark& benchmark, const OverlapMatrix& matrix, const CategoryPartition& partition);

/// Member with the least mean same-category overlap; ties go to the
/// lexicographically smaller corruption list. Throws
/// Error(NoScorableBenchmark) when no member has a same-category pair.
Selection select_min_scc_overlap(std::span<const Benchmark> group, const OverlapMatrix& matrix,
                                 const CategoryPartition& partition);

}  // namespace corrbench
