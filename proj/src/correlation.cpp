#include "corrbench/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <unordered_map>

#include "corrbench/metrics.hpp"
#include "corrbench/rng.hpp"

namespace corrbench {

double benchmark_robustness(const AccuracyTable& table, std::string_view model_id, const Benchmark& benchmark) {
  if (benchmark.corruptions.empty()) throw Error(ErrorCode::EmptyBenchmark, "benchmark '" + benchmark.id + "' is empty");
  std::vector<double> residuals;
  residuals.reserve(benchmark.size());
  for (const std::string& c : benchmark.corruptions) residuals.push_back(residual_robustness(table, model_id, c));
  return compensated_mean(residuals);
}

std::vector<std::string> models_with_natural(const AccuracyTable& table, std::string_view natural_id) {
  std::vector<std::string> out;
  for (const std::string& m : table.models()) {
    if (table.contains(m, kClean) && table.contains(m, natural_id)) out.push_back(m);
  }
  return out;
}

RobustnessReport natural_correlation(std::span<const Benchmark> group, const AccuracyTable& table,
                                     std::string_view natural_id) {
  RobustnessReport report;
  report.natural_id = std::string(natural_id);
  report.models = models_with_natural(table, natural_id);
  const std::vector<std::string>& models = report.models;
  if (models.size() < 3) {
    throw Error(ErrorCode::InsufficientSamples, std::to_string(models.size()) + " models have clean and '" +
                                                    std::string(natural_id) + "' accuracies, at least 3 required");
  }

  std::vector<double> natural;
  natural.reserve(models.size());
  for (const std::string& m : models) natural.push_back(residual_robustness(table, m, natural_id));
  if (std::all_of(natural.begin(), natural.end(), [&](double v) { return v == natural.front(); })) {
    throw Error(ErrorCode::ZeroVariance, "residual robustness on '" + std::string(natural_id) + "' is constant");
  }

  // Residuals per corruption across models, computed once per corruption.
  std::unordered_map<std::string, std::vector<double>> residuals;
  auto residuals_of = [&](const std::string& c) -> const std::vector<double>& {
    auto it = residuals.find(c);
    if (it != residuals.end()) return it->second;
    std::vector<double> v;
    v.reserve(models.size());
    for (const std::string& m : models) v.push_back(residual_robustness(table, m, c));
    return residuals.emplace(c, std::move(v)).first->second;
  };

  std::vector<double> rs;
  std::vector<double> ps;
  std::vector<double> scores(models.size());
  std::vector<double> per_model;
  for (const Benchmark& bench : group) {
    if (bench.corruptions.empty()) throw Error(ErrorCode::EmptyBenchmark, "benchmark '" + bench.id + "' is empty");
    std::vector<const std::vector<double>*> cols;
    cols.reserve(bench.size());
    for (const std::string& c : bench.corruptions) cols.push_back(&residuals_of(c));
    for (std::size_t m = 0; m < models.size(); ++m) {
      per_model.clear();
      for (const auto* col : cols) per_model.push_back((*col)[m]);
      scores[m] = compensated_mean(per_model);
    }
    BenchmarkCorrelation entry{bench.id, 0.0, 0.0, false};
    try {
      entry.r = pearson(natural, scores);
      entry.p_value = pearson_p_value(entry.r, models.size());
      rs.push_back(entry.r);
      ps.push_back(entry.p_value);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::ZeroVariance) throw;
      entry.r = entry.p_value = std::numeric_limits<double>::quiet_NaN();
      entry.excluded = true;
      ++report.excluded;
    }
    report.benchmarks.push_back(std::move(entry));
  }
  if (rs.empty()) {
    throw Error(ErrorCode::ZeroVariance, "every benchmark has a constant robustness vector");
  }
  report.mean_r = compensated_mean(rs);
  report.mean_p_value = compensated_mean(ps);
  return report;
}

void SyntheticCohortConfig::validate() const {
  if (models < 3) throw Error(ErrorCode::InvalidConfig, "cohort needs at least 3 models");
  if (categories < 1) throw Error(ErrorCode::InvalidConfig, "cohort needs at least 1 category");
  if (!(skill_spread >= 0.0) || !(noise >= 0.0) || !(natural_noise >= 0.0)) {
    throw Error(ErrorCode::InvalidConfig, "skill spread and noise levels must be >= 0");
  }
  if (!(clean_lo <= clean_hi) || clean_lo < 0.0 || clean_hi > 1.0) {
    throw Error(ErrorCode::InvalidConfig, "clean accuracy range must lie in [0, 1]");
  }
  if (!natural_weights.empty()) {
    if (natural_weights.size() != static_cast<std::size_t>(categories)) {
      throw Error(ErrorCode::InvalidConfig, "one natural weight per category required");
    }
    double total = 0.0;
    for (double w : natural_weights) {
      if (!(w >= 0.0)) throw Error(ErrorCode::InvalidConfig, "natural weights must be non-negative");
      total += w;
    }
    if (std::fabs(total - 1.0) > 1e-9) throw Error(ErrorCode::InvalidConfig, "natural weights must sum to 1");
  }
  if (natural_id.empty() || natural_id == kClean) throw Error(ErrorCode::InvalidConfig, "invalid natural id");
}

std::vector<double> SyntheticCohortConfig::weights() const {
  if (!natural_weights.empty()) return natural_weights;
  return std::vector<double>(static_cast<std::size_t>(categories), 1.0 / categories);
}

namespace {

std::string numbered(const std::string& prefix, int index) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%02d", index);
  return prefix + buf;
}

double clamp_unit(double v) { return std::clamp(v, 0.0, 1.0); }

}  // namespace

AccuracyTable simulate_cohort(const SyntheticCohortConfig& config, const CategoryPartition& partition) {
  config.validate();
  if (partition.size() != static_cast<std::size_t>(config.categories)) {
    throw Error(ErrorCode::InvalidConfig, "cohort configured for " + std::to_string(config.categories) +
                                              " categories, partition has " + std::to_string(partition.size()));
  }
  const std::vector<double> w = config.weights();
  AccuracyTable table;
  for (int m = 0; m < config.models; ++m) {
    Rng rng(substream_seed(config.seed, static_cast<std::uint64_t>(m)));
    const std::string id = numbered(config.model_prefix, m + 1);
    const double clean = rng.uniform(config.clean_lo, config.clean_hi);
    std::vector<double> skill(partition.size());
    for (double& s : skill) s = rng.normal(0.0, config.skill_spread);

    table.set(id, std::string(kClean), clean);
    for (std::size_t g = 0; g < partition.size(); ++g) {
      const double drop = config.base_drop - skill[g];
      for (const std::string& c : partition.categories()[g].corruptions) {
        table.set(id, c, clamp_unit(clean - drop + rng.normal(0.0, config.noise)));
      }
    }
    double natural_drop = 0.0;
    for (std::size_t g = 0; g < partition.size(); ++g) natural_drop += w[g] * (config.base_drop - skill[g]);
    table.set(id, config.natural_id, clamp_unit(clean - natural_drop + rng.normal(0.0, config.natural_noise)));
  }
  return table;
}

void OverlapStudyConfig::validate() const {
  auto range_ok = [](double lo, double hi) { return 0.0 <= lo && lo <= hi && hi <= 1.0; };
  if (!range_ok(within_lo, within_hi) || !range_ok(across_lo, across_hi)) {
    throw Error(ErrorCode::InvalidConfig, "transfer ranges must satisfy 0 <= lo <= hi <= 1");
  }
  if (standard_id.empty() || augmented_prefix.empty()) throw Error(ErrorCode::InvalidConfig, "empty model name");
}

OverlapStudy simulate_overlap_study(const OverlapStudyConfig& config, const CategoryPartition& partition) {
  config.validate();
  std::vector<std::string> ids;
  std::vector<std::size_t> label;
  for (std::size_t g = 0; g < partition.size(); ++g) {
    for (const std::string& c : partition.categories()[g].corruptions) {
      ids.push_back(c);
      label.push_back(g);
    }
  }
  const std::size_t n = ids.size();
  Rng rng(config.seed);

  OverlapMatrix transfer(ids);
  for (std::size_t i = 0; i < n; ++i) {
    transfer(i, i) = 1.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double t = label[i] == label[j] ? rng.uniform(config.within_lo, config.within_hi)
                                            : rng.uniform(config.across_lo, config.across_hi);
      transfer(i, j) = transfer(j, i) = t;
    }
  }
  // Standard-model robustness ratio and the gain augmentation brings on the
  // augmented corruption itself. Other corruptions gain transfer * gain.
  std::vector<double> base(n);
  std::vector<double> gain(n);
  for (std::size_t c = 0; c < n; ++c) {
    base[c] = rng.uniform(0.4, 0.7);
    gain[c] = (1.0 - base[c]) * rng.uniform(0.4, 0.8);
  }

  OverlapStudy study;
  study.manifest.add(config.standard_id, ModelRole::standard());
  const double std_clean = rng.uniform(0.70, 0.85);
  study.table.set(config.standard_id, std::string(kClean), std_clean);
  for (std::size_t c = 0; c < n; ++c) study.table.set(config.standard_id, ids[c], std_clean * base[c]);
  for (std::size_t i = 0; i < n; ++i) {
    const std::string model = config.augmented_prefix + ids[i];
    study.manifest.add(model, ModelRole::augmented(ids[i]));
    const double clean = rng.uniform(0.70, 0.85);
    study.table.set(model, std::string(kClean), clean);
    for (std::size_t c = 0; c < n; ++c) study.table.set(model, ids[c], clean * (base[c] + transfer(i, c) * gain[c]));
  }
  study.transfer = std::move(transfer);
  return study;
}

TrendReport trend_report(const CategoryPartition& partition, const AccuracyTable& cohort, const TrendConfig& config) {
  TrendReport report;
  for (std::size_t ci = 0; ci < config.cells.size(); ++ci) {
    const auto [n, k] = config.cells[ci];
    const GenerationParams params{n, k, config.count, substream_seed(config.seed, ci)};
    const std::vector<Benchmark> group = generate_group(partition, params);
    const RobustnessReport r = natural_correlation(group, cohort, config.natural_id);
    report.cells.push_back(TrendCell{n, k, r.mean_r, r.mean_p_value, group.size() - r.excluded});
  }

  const GenerationParams sweep{config.sweep_n, config.sweep_k, config.count, substream_seed(config.seed, 1000)};
  std::vector<Benchmark> all = generate_group(partition, sweep);
  ChainResult chains = substitution_chains(all, config.sweep_steps, partition, substream_seed(config.seed, 1001));
  report.truncated_chains = chains.truncated.size();
  all.insert(all.end(), std::make_move_iterator(chains.benchmarks.begin()),
             std::make_move_iterator(chains.benchmarks.end()));
  const RobustnessReport r = natural_correlation(all, cohort, config.natural_id);

  std::map<int, std::vector<double>> by_bucket;
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (r.benchmarks[i].excluded) continue;
    by_bucket[std_bucket(balance_std(all[i], partition))].push_back(r.benchmarks[i].r);
  }
  for (const auto& [tenths, values] : by_bucket) {
    report.buckets.push_back(TrendBucket{tenths, compensated_mean(values), values.size()});
  }
  return report;
}

}  // namespace corrbench
