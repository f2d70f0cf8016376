#include "corrbench/benchmarks.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>

#include "corrbench/metrics.hpp"

namespace corrbench {

void GenerationParams::validate() const {
  if (n < 1) throw Error(ErrorCode::InvalidConfig, "n must be >= 1");
  if (k < 1) throw Error(ErrorCode::InvalidConfig, "k must be >= 1");
  if (count < 1) throw Error(ErrorCode::InvalidConfig, "count must be >= 1");
}

namespace {

std::vector<std::size_t> eligible_categories(const CategoryPartition& partition, int n, int k) {
  if (n < 1 || k < 1) throw Error(ErrorCode::InvalidConfig, "n and k must be >= 1");
  std::vector<std::size_t> eligible;
  const std::vector<std::size_t> sizes = partition.sizes();
  for (std::size_t c = 0; c < sizes.size(); ++c) {
    if (sizes[c] >= static_cast<std::size_t>(k)) eligible.push_back(c);
  }
  if (eligible.size() < static_cast<std::size_t>(n)) {
    throw Error(ErrorCode::InfeasibleParams, "only " + std::to_string(eligible.size()) +
                                                 " categories hold at least k=" + std::to_string(k) +
                                                 " corruptions, n=" + std::to_string(n) + " requested");
  }
  return eligible;
}

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t out = 0;
  return __builtin_mul_overflow(a, b, &out) ? std::numeric_limits<std::uint64_t>::max() : out;
}

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t out = 0;
  return __builtin_add_overflow(a, b, &out) ? std::numeric_limits<std::uint64_t>::max() : out;
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t out = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    // out * (n - k + i) / i is exact at every step; saturate on overflow.
    const std::uint64_t next = sat_mul(out, n - k + i);
    if (next == std::numeric_limits<std::uint64_t>::max()) return next;
    out = next / i;
  }
  return out;
}

bool is_sorted_unique(const std::vector<std::string>& ids) {
  return std::adjacent_find(ids.begin(), ids.end(), std::greater_equal<>()) == ids.end();
}

}  // namespace

Benchmark generate_benchmark(const CategoryPartition& partition, int n, int k, Rng& rng) {
  const std::vector<std::size_t> eligible = eligible_categories(partition, n, k);
  Benchmark bench;
  bench.n = n;
  bench.k = k;
  for (std::size_t pick : rng.sample_indices(eligible.size(), static_cast<std::size_t>(n))) {
    const Category& cat = partition.categories()[eligible[pick]];
    for (std::size_t member : rng.sample_indices(cat.corruptions.size(), static_cast<std::size_t>(k))) {
      bench.corruptions.push_back(cat.corruptions[member]);
    }
  }
  std::sort(bench.corruptions.begin(), bench.corruptions.end());
  return bench;
}

std::uint64_t count_distinct_benchmarks(const CategoryPartition& partition, int n, int k) {
  const std::vector<std::size_t> eligible = eligible_categories(partition, n, k);
  const std::vector<std::size_t> sizes = partition.sizes();
  // Elementary symmetric polynomial of degree n over C(size, k).
  std::vector<std::uint64_t> e(static_cast<std::size_t>(n) + 1, 0);
  e[0] = 1;
  for (std::size_t c : eligible) {
    const std::uint64_t ways = binomial(sizes[c], static_cast<std::uint64_t>(k));
    for (std::size_t j = e.size() - 1; j >= 1; --j) e[j] = sat_add(e[j], sat_mul(e[j - 1], ways));
  }
  return e.back();
}

std::uint64_t generation_retry_budget(int count) {
  return std::max<std::uint64_t>(10000, 100 * static_cast<std::uint64_t>(std::max(count, 0)));
}

std::vector<Benchmark> generate_group(const CategoryPartition& partition, const GenerationParams& params) {
  params.validate();
  const std::uint64_t available = count_distinct_benchmarks(partition, params.n, params.k);
  if (static_cast<std::uint64_t>(params.count) > available) {
    throw Error(ErrorCode::NotEnoughDistinctBenchmarks,
                std::to_string(params.count) + " benchmarks requested but only " + std::to_string(available) +
                    " distinct (n=" + std::to_string(params.n) + ", k=" + std::to_string(params.k) + ") exist");
  }
  Rng rng(params.seed);
  std::set<std::vector<std::string>> seen;
  std::vector<Benchmark> group;
  group.reserve(static_cast<std::size_t>(params.count));
  const std::uint64_t budget = generation_retry_budget(params.count);
  for (std::uint64_t attempt = 0; group.size() < static_cast<std::size_t>(params.count); ++attempt) {
    if (attempt == budget) {
      throw Error(ErrorCode::NotEnoughDistinctBenchmarks,
                  "found " + std::to_string(group.size()) + " distinct benchmarks in " + std::to_string(budget) +
                      " attempts, " + std::to_string(params.count) + " requested");
    }
    Benchmark bench = generate_benchmark(partition, params.n, params.k, rng);
    if (!seen.insert(bench.corruptions).second) continue;
    char id[32];
    std::snprintf(id, sizeof id, "b%04zu", group.size());
    bench.id = id;
    bench.seed = params.seed;
    group.push_back(std::move(bench));
  }
  return group;
}

std::vector<int> representative_counts(const Benchmark& benchmark, const CategoryPartition& partition) {
  std::vector<int> per_category(partition.size(), 0);
  for (const std::string& id : benchmark.corruptions) ++per_category[partition.category_index(id)];
  std::vector<int> counts;
  for (int c : per_category) {
    if (c > 0) counts.push_back(c);
  }
  return counts;
}

double population_std(std::span<const int> counts) {
  if (counts.empty()) throw Error(ErrorCode::EmptyBenchmark, "no representative counts");
  double mean = 0.0;
  for (int c : counts) mean += c;
  mean /= static_cast<double>(counts.size());
  double ss = 0.0;
  for (int c : counts) ss += (c - mean) * (c - mean);
  return std::sqrt(ss / static_cast<double>(counts.size()));
}

double balance_std(const Benchmark& benchmark, const CategoryPartition& partition) {
  if (benchmark.corruptions.empty()) throw Error(ErrorCode::EmptyBenchmark, "benchmark '" + benchmark.id + "' is empty");
  return population_std(representative_counts(benchmark, partition));
}

int std_bucket(double std_value) { return static_cast<int>(std::lround(std_value * 10.0)); }

std::vector<Substitution> valid_substitutions(const Benchmark& benchmark, const CategoryPartition& partition) {
  std::vector<int> count(partition.size(), 0);
  std::set<std::string, std::less<>> present(benchmark.corruptions.begin(), benchmark.corruptions.end());
  for (const std::string& id : benchmark.corruptions) ++count[partition.category_index(id)];

  // Moving one representative from category a to category b keeps the
  // represented set iff count[a] >= 2 and count[b] >= 1, and raises the sum
  // of squared counts (hence std, at fixed size and mean) iff count[b] >= count[a].
  std::vector<Substitution> out;
  for (const std::string& removed : benchmark.corruptions) {
    const std::size_t a = partition.category_index(removed);
    if (count[a] < 2) continue;
    for (std::size_t b = 0; b < partition.size(); ++b) {
      if (b == a || count[b] < 1 || count[b] < count[a]) continue;
      for (const std::string& added : partition.categories()[b].corruptions) {
        if (!present.contains(added)) out.push_back({removed, added});
      }
    }
  }
  return out;
}

Benchmark substitute(const Benchmark& benchmark, const CategoryPartition& partition, Rng& rng) {
  const std::vector<Substitution> moves = valid_substitutions(benchmark, partition);
  if (moves.empty()) {
    throw Error(ErrorCode::NoValidSubstitution, "benchmark '" + benchmark.id + "' admits no substitution");
  }
  const Substitution& move = moves[static_cast<std::size_t>(rng.below(moves.size()))];

  Benchmark out = benchmark;
  std::replace(out.corruptions.begin(), out.corruptions.end(), move.removed, move.added);
  std::sort(out.corruptions.begin(), out.corruptions.end());
  out.lineage.push_back(move.removed + "->" + move.added);

  // Post-conditions, checked directly rather than trusted from the enumeration.
  const std::vector<int> before = representative_counts(benchmark, partition);
  const std::vector<int> after = representative_counts(out, partition);
  auto represented = [&](const Benchmark& b) {
    std::set<std::size_t> cats;
    for (const std::string& id : b.corruptions) cats.insert(partition.category_index(id));
    return cats;
  };
  if (!is_sorted_unique(out.corruptions) || out.size() != benchmark.size() ||
      represented(out) != represented(benchmark) || !(population_std(after) > population_std(before))) {
    throw Error(ErrorCode::InconsistentInput, "substitution " + move.removed + "->" + move.added +
                                                  " broke a substitution condition");
  }
  return out;
}

ChainResult substitution_chains(std::span<const Benchmark> group, int steps, const CategoryPartition& partition,
                                std::uint64_t seed) {
  if (steps < 0) throw Error(ErrorCode::InvalidConfig, "steps must be >= 0");
  ChainResult result;
  if (steps == 0) {
    result.benchmarks.assign(group.begin(), group.end());
    return result;
  }
  result.benchmarks.reserve(group.size() * static_cast<std::size_t>(steps));
  for (std::size_t i = 0; i < group.size(); ++i) {
    Rng rng(substream_seed(seed, i));
    Benchmark current = group[i];
    for (int step = 1; step <= steps; ++step) {
      try {
        current = substitute(current, partition, rng);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::NoValidSubstitution) throw;
        result.truncated.emplace_back(group[i].id, step - 1);
        break;
      }
      current.id = group[i].id + ".s" + std::to_string(step);
      current.seed = seed;
      result.benchmarks.push_back(current);
    }
  }
  return result;
}

double scc_overlap(const Benchmark& benchmark, const OverlapMatrix& matrix, const CategoryPartition& partition) {
  std::vector<double> values;
  for (std::size_t i = 0; i < benchmark.size(); ++i) {
    const std::string& a = benchmark.corruptions[i];
    const std::size_t ca = partition.category_index(a);
    const std::size_t ia = matrix.index_of(a);
    for (std::size_t j = i + 1; j < benchmark.size(); ++j) {
      const std::string& b = benchmark.corruptions[j];
      if (partition.category_index(b) == ca) values.push_back(matrix(ia, matrix.index_of(b)));
    }
  }
  return compensated_mean(values);
}

Selection select_min_scc_overlap(std::span<const Benchmark> group, const OverlapMatrix& matrix,
                                 const CategoryPartition& partition) {
  Selection sel;
  sel.scores.reserve(group.size());
  bool found = false;
  for (std::size_t i = 0; i < group.size(); ++i) {
    const double score = scc_overlap(group[i], matrix, partition);
    sel.scores.push_back(score);
    if (std::isnan(score)) {
      ++sel.excluded;
      continue;
    }
    if (!found || score < sel.score ||
        (score == sel.score && group[i].corruptions < group[sel.index].corruptions)) {
      sel.index = i;
      sel.score = score;
      found = true;
    }
  }
  if (!found) {
    throw Error(ErrorCode::NoScorableBenchmark, "no benchmark in the group has two corruptions of one category");
  }
  return sel;
}

}  // namespace corrbench
