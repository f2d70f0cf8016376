#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "corrbench/benchmarks.hpp"
#include "corrbench/error.hpp"
#include "oracles.hpp"

using namespace corrbench;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::InconsistentInput;
}

const CategoryPartition& families() {
  static const CategoryPartition p = CategoryPartition::by_family(list_corruptions());
  return p;
}

Benchmark bench_of(std::vector<std::string> ids) {
  Benchmark b;
  b.id = "t";
  std::sort(ids.begin(), ids.end());
  b.corruptions = std::move(ids);
  return b;
}

std::vector<int> sorted_counts(const Benchmark& b, const CategoryPartition& p) {
  std::vector<int> c = representative_counts(b, p);
  std::sort(c.begin(), c.end());
  return c;
}

std::set<std::size_t> represented(const Benchmark& b, const CategoryPartition& p) {
  std::set<std::size_t> out;
  for (const auto& id : b.corruptions) out.insert(p.category_index(id));
  return out;
}

}  // namespace

TEST_SUITE("benchmarks") {

TEST_CASE("generated benchmarks have the requested structure") {
  Rng rng(1);
  for (auto [n, k] : std::vector<std::pair<int, int>>{{6, 3}, {1, 1}, {2, 3}, {3, 2}, {6, 1}, {4, 3}}) {
    for (int rep = 0; rep < 50; ++rep) {
      const Benchmark b = generate_benchmark(families(), n, k, rng);
      CHECK(b.size() == static_cast<std::size_t>(n * k));
      CHECK(representative_counts(b, families()) == std::vector<int>(n, k));
      CHECK(balance_std(b, families()) == 0.0);
      CHECK(std::is_sorted(b.corruptions.begin(), b.corruptions.end()));
      CHECK(std::adjacent_find(b.corruptions.begin(), b.corruptions.end()) == b.corruptions.end());
    }
  }
}

TEST_CASE("category choice is close to uniform") {
  Rng rng(2);
  std::vector<int> hits(6, 0);
  for (int i = 0; i < 6000; ++i) ++hits[families().category_index(generate_benchmark(families(), 1, 1, rng).corruptions[0])];
  for (int h : hits) CHECK(std::abs(h - 1000) < 120);
}

TEST_CASE("infeasible parameters") {
  Rng rng(0);
  CHECK(code_of([&] { generate_benchmark(families(), 7, 1, rng); }) == ErrorCode::InfeasibleParams);
  CHECK(code_of([&] { generate_benchmark(families(), 1, 10, rng); }) == ErrorCode::InfeasibleParams);
  // Only the 9-corruption family can host k = 8.
  CHECK(generate_benchmark(families(), 1, 8, rng).size() == 8);
  CHECK(code_of([&] { generate_benchmark(families(), 2, 8, rng); }) == ErrorCode::InfeasibleParams);
  CHECK(code_of([] { generate_group(families(), GenerationParams{0, 1, 1, 0}); }) == ErrorCode::InvalidConfig);
}

TEST_CASE("distinct benchmark counting") {
  const CategoryPartition p({{1, {"a1", "a2"}}, {2, {"b1", "b2", "b3"}}});
  CHECK(count_distinct_benchmarks(p, 1, 2) == 1 + 3);
  CHECK(count_distinct_benchmarks(p, 2, 1) == 2 * 3);
  CHECK(count_distinct_benchmarks(p, 1, 3) == 1);
  CHECK(count_distinct_benchmarks(families(), 6, 1) == 6ull * 6 * 7 * 6 * 6 * 9);

  CHECK(generate_group(p, GenerationParams{1, 2, 4, 3}).size() == 4);
  CHECK(code_of([&] { generate_group(p, GenerationParams{1, 2, 5, 3}); }) == ErrorCode::NotEnoughDistinctBenchmarks);
}

TEST_CASE("groups are pairwise distinct and reproducible") {
  const GenerationParams params{6, 2, 1000, 77};
  const auto a = generate_group(families(), params);
  const auto b = generate_group(families(), params);
  REQUIRE(a.size() == 1000);
  CHECK(a == b);
  std::set<std::vector<std::string>> sets;
  for (const auto& x : a) sets.insert(x.corruptions);
  CHECK(sets.size() == 1000);
  CHECK(a.front().id == "b0000");
  CHECK(a.back().id == "b0999");
  CHECK(generate_group(families(), GenerationParams{6, 2, 10, 78}) != generate_group(families(), GenerationParams{6, 2, 10, 77}));
}

TEST_CASE("population std of representative counts") {
  CHECK(population_std(std::vector<int>{2, 2, 2, 2, 2, 2}) == 0.0);
  CHECK(population_std(std::vector<int>{3, 2, 2, 2, 2, 1}) == doctest::Approx(0.57735026919).epsilon(1e-10));
  CHECK(population_std(std::vector<int>{3, 3, 2, 2, 1, 1}) == doctest::Approx(0.81649658093).epsilon(1e-10));
  CHECK(population_std(std::vector<int>{7, 1, 1, 1, 1, 1}) == doctest::Approx(2.2360679775).epsilon(1e-10));
  CHECK(population_std(std::vector<int>{3, 1}) == 1.0);
  CHECK(std_bucket(0.57735) == 6);
  CHECK(std_bucket(0.8165) == 8);
  CHECK(std_bucket(2.2361) == 22);
  CHECK(code_of([] { population_std(std::vector<int>{}); }) == ErrorCode::EmptyBenchmark);
}

TEST_CASE("balance std of a concrete benchmark") {
  // Three noise corruptions and one color corruption.
  const Benchmark b = bench_of({"gaussian_noise", "iso_noise", "multiplicative_noise", "color_jitter"});
  CHECK(balance_std(b, families()) == 1.0);
  CHECK(code_of([] { balance_std(Benchmark{}, families()); }) == ErrorCode::EmptyBenchmark);
  CHECK(code_of([] { balance_std(bench_of({"fog"}), families()); }) == ErrorCode::UnknownCorruption);
}

TEST_CASE("valid substitutions match a brute-force enumeration") {
  Rng rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    Benchmark b = generate_benchmark(families(), 6, 2, rng);
    for (int s = 0; s < trial % 4; ++s) b = substitute(b, families(), rng);
    const double before = balance_std(b, families());

    std::set<std::pair<std::string, std::string>> expected;
    for (const auto& removed : b.corruptions) {
      for (const auto& spec : list_corruptions()) {
        if (std::binary_search(b.corruptions.begin(), b.corruptions.end(), spec.id)) continue;
        Benchmark next = b;
        std::replace(next.corruptions.begin(), next.corruptions.end(), removed, spec.id);
        if (represented(next, families()) == represented(b, families()) && balance_std(next, families()) > before) {
          expected.emplace(removed, spec.id);
        }
      }
    }
    std::set<std::pair<std::string, std::string>> got;
    for (const auto& m : valid_substitutions(b, families())) got.emplace(m.removed, m.added);
    CHECK(got == expected);
  }
}

TEST_CASE("one substitution from a balanced benchmark") {
  Rng rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    const Benchmark b = generate_benchmark(families(), 6, 2, rng);
    const Benchmark s = substitute(b, families(), rng);
    CHECK(sorted_counts(s, families()) == std::vector<int>{1, 2, 2, 2, 2, 3});
    CHECK(balance_std(s, families()) == doctest::Approx(0.57735026919).epsilon(1e-10));
    CHECK(s.lineage.size() == 1);
    CHECK(s.size() == b.size());
  }
}

TEST_CASE("substitution chains strictly raise std") {
  const auto group = generate_group(families(), GenerationParams{6, 2, 100, 3});
  const ChainResult chains = substitution_chains(group, 5, families(), 9);
  CHECK(chains.benchmarks.size() + 5 * chains.truncated.size() >= 500);
  std::set<int> buckets;
  std::map<std::string, double> last;
  for (const auto& g : group) last[g.id] = 0.0;
  for (const auto& b : chains.benchmarks) {
    const std::string parent = b.id.substr(0, b.id.find('.'));
    const double s = balance_std(b, families());
    CHECK(s > last[parent]);
    last[parent] = s;
    buckets.insert(std_bucket(s));
  }
  const std::set<int> allowed = {6, 8, 10, 12, 14, 15, 18, 22};
  for (int bucket : buckets) CHECK(allowed.count(bucket) == 1);
  CHECK(substitution_chains(group, 5, families(), 9).benchmarks == chains.benchmarks);
}

TEST_CASE("chain edge cases") {
  const auto group = generate_group(families(), GenerationParams{6, 2, 5, 3});
  CHECK(substitution_chains(group, 0, families(), 1).benchmarks == group);
  CHECK(code_of([&] { substitution_chains(group, -1, families(), 1); }) == ErrorCode::InvalidConfig);

  const CategoryPartition p({{1, {"a1", "a2", "a3", "a4"}}, {2, {"b1"}}});
  const Benchmark stuck = bench_of({"a1", "a2", "a3", "b1"});
  CHECK(valid_substitutions(stuck, p).empty());
  Rng rng(0);
  CHECK(code_of([&] { substitute(stuck, p, rng); }) == ErrorCode::NoValidSubstitution);
  const std::vector<Benchmark> one = {stuck};
  const ChainResult r = substitution_chains(one, 3, p, 0);
  CHECK(r.benchmarks.empty());
  REQUIRE(r.truncated.size() == 1);
  CHECK(r.truncated[0].second == 0);

  // [2, 1]: removing b1 drops its category and the b side has nothing left
  // to add.
  const Benchmark small = bench_of({"a1", "a2", "b1"});
  CHECK(valid_substitutions(small, p).empty());
}

TEST_CASE("min-SCC-overlap selection") {
  const CategoryPartition p({{1, {"a1", "a2", "a3"}}, {2, {"b1", "b2", "b3"}}});
  std::vector<double> v(36, 0.0);
  OverlapMatrix m({"a1", "a2", "a3", "b1", "b2", "b3"}, v);
  auto set = [&](int i, int j, double x) { m(i, j) = m(j, i) = x; };
  set(0, 1, 0.9);
  set(3, 4, 0.9);
  set(1, 2, 0.2);
  set(4, 5, 0.2);
  const std::vector<Benchmark> group = {bench_of({"a1", "a2", "b1", "b2"}), bench_of({"a2", "a3", "b2", "b3"})};
  const Selection s = select_min_scc_overlap(group, m, p);
  CHECK(s.index == 1);
  CHECK(s.score == doctest::Approx(0.2));

  CHECK(select_min_scc_overlap(std::span(group.data(), 1), m, p).index == 0);

  // Tie: both score 0; the lexicographically smaller list wins.
  const std::vector<Benchmark> tie = {bench_of({"a1", "a3", "b3"}), bench_of({"a1", "a3", "b1"})};
  CHECK(select_min_scc_overlap(tie, m, p).index == 1);

  const std::vector<Benchmark> singles = {bench_of({"a1", "b1"})};
  CHECK(code_of([&] { select_min_scc_overlap(singles, m, p); }) == ErrorCode::NoScorableBenchmark);
  const std::vector<Benchmark> mixed = {bench_of({"a1", "b1"}), bench_of({"a1", "a2"})};
  const Selection sm = select_min_scc_overlap(mixed, m, p);
  CHECK(sm.index == 1);
  CHECK(sm.excluded == 1);
  CHECK(std::isnan(sm.scores[0]));
}

TEST_CASE("selection is the exhaustive argmin on a planted matrix") {
  const auto planted = oracle::planted_roster_matrix(6);
  const CategoryPartition p = CategoryPartition::from_labels(planted.matrix.ids(), planted.labels);
  const auto group = generate_group(p, GenerationParams{6, 3, 100, 12});
  const Selection s = select_min_scc_overlap(group, planted.matrix, p);
  for (const auto& b : group) {
    double total = 0;
    int pairs = 0;
    for (std::size_t i = 0; i < b.size(); ++i)
      for (std::size_t j = i + 1; j < b.size(); ++j)
        if (p.category_index(b.corruptions[i]) == p.category_index(b.corruptions[j])) {
          total += planted.matrix(planted.matrix.index_of(b.corruptions[i]), planted.matrix.index_of(b.corruptions[j]));
          ++pairs;
        }
    CHECK(s.score <= total / pairs + 1e-12);
  }
}

}
