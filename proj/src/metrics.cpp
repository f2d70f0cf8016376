#include "corrbench/metrics.hpp"

#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

#include "corrbench/error.hpp"
#include "corrbench/simd/kernels.hpp"

namespace corrbench {

double residual_robustness(const AccuracyTable& table, std::string_view model_id, std::string_view distribution_id) {
  return table.at(model_id, kClean) - table.at(model_id, distribution_id);
}

double robustness_ratio(const AccuracyTable& table, std::string_view model_id, std::string_view corruption_id) {
  const double clean = table.at(model_id, kClean);
  const double corrupted = table.at(model_id, corruption_id);
  if (clean == 0.0) {
    throw Error(ErrorCode::DegenerateCleanAccuracy, "model '" + std::string(model_id) + "' has zero clean accuracy");
  }
  return corrupted / clean;
}

double overlap_score(double r_m1_c2, double r_std_c2, double r_m2_c2, double r_m2_c1, double r_std_c1,
                     double r_m1_c1) {
  const double denom_c2 = r_m2_c2 - r_std_c2;
  const double denom_c1 = r_m1_c1 - r_std_c1;
  if (std::fabs(denom_c2) <= kOverlapEpsilon || std::fabs(denom_c1) <= kOverlapEpsilon) {
    throw Error(ErrorCode::DegenerateBaseline,
                "augmented model is no more robust than the standard model on its own corruption");
  }
  const double transfer = 0.5 * ((r_m1_c2 - r_std_c2) / denom_c2 + (r_m2_c1 - r_std_c1) / denom_c1);
  return std::max(0.0, transfer);
}

OverlapMatrix build_overlap_matrix(const AccuracyTable& table, const ModelManifest& manifest,
                                   std::span<const std::string> corruption_ids) {
  const std::size_t n = corruption_ids.size();
  const std::string& standard = manifest.standard_model();
  std::vector<std::string> augmented;
  augmented.reserve(n);
  for (const std::string& id : corruption_ids) augmented.push_back(manifest.augmented_model(id));

  // ratio[m][c]: row m = augmented model index, plus the standard model last.
  std::vector<double> ratio((n + 1) * n);
  for (std::size_t m = 0; m <= n; ++m) {
    const std::string& model = m < n ? augmented[m] : standard;
    for (std::size_t c = 0; c < n; ++c) ratio[m * n + c] = robustness_ratio(table, model, corruption_ids[c]);
  }
  auto r = [&](std::size_t m, std::size_t c) { return ratio[m * n + c]; };

  OverlapMatrix matrix(std::vector<std::string>(corruption_ids.begin(), corruption_ids.end()));
  for (std::size_t i = 0; i < n; ++i) {
    matrix(i, i) = 1.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      double score = 0.0;
      try {
        score = overlap_score(r(i, j), r(n, j), r(j, j), r(j, i), r(n, i), r(i, i));
      } catch (const Error& e) {
        throw Error(e.code(), "pair (" + corruption_ids[i] + ", " + corruption_ids[j] + "): " + e.what());
      }
      score = std::min(score, 1.0);
      matrix(i, j) = score;
      matrix(j, i) = score;
    }
  }
  return matrix;
}

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw Error(ErrorCode::LengthMismatch,
                "pearson inputs have lengths " + std::to_string(x.size()) + " and " + std::to_string(y.size()));
  }
  const std::size_t n = x.size();
  if (n < 3) throw Error(ErrorCode::InsufficientSamples, "pearson needs at least 3 samples");
  auto constant = [](std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [&](double e) { return e == v.front(); });
  };
  if (constant(x) || constant(y)) throw Error(ErrorCode::ZeroVariance, "pearson input is constant");

  const double mx = simd::sum(x) / static_cast<double>(n);
  const double my = simd::sum(y) / static_cast<double>(n);
  const simd::CenteredMoments m = simd::centered_moments(x, y, mx, my);
  if (m.sxx <= 0.0 || m.syy <= 0.0) throw Error(ErrorCode::ZeroVariance, "pearson input has zero variance");
  return std::clamp(m.sxy / std::sqrt(m.sxx * m.syy), -1.0, 1.0);
}

double pearson_p_value(double r, std::size_t n_samples) {
  if (n_samples < 3) throw Error(ErrorCode::InsufficientSamples, "p-value needs at least 3 samples");
  if (!(std::fabs(r) <= 1.0)) throw Error(ErrorCode::InconsistentInput, "correlation outside [-1, 1]");
  if (std::fabs(r) == 1.0) return 0.0;
  const double dof = static_cast<double>(n_samples - 2);
  const double t = std::fabs(r) * std::sqrt(dof / (1.0 - r * r));
  const boost::math::students_t dist(dof);
  return std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(dist, t)));
}

double mean_flip_rate(const PredictionSequences& sequences) {
  if (sequences.empty()) throw Error(ErrorCode::InvalidSequences, "no prediction sequences");
  std::vector<double> rates;
  rates.reserve(sequences.size());
  for (std::size_t s = 0; s < sequences.size(); ++s) {
    const auto& seq = sequences[s];
    if (seq.size() < 2) {
      throw Error(ErrorCode::InvalidSequences, "sequence " + std::to_string(s) + " has fewer than 2 frames");
    }
    std::size_t flips = 0;
    for (std::size_t t = 0; t + 1 < seq.size(); ++t) flips += seq[t] != seq[t + 1] ? 1 : 0;
    rates.push_back(static_cast<double>(flips) / static_cast<double>(seq.size() - 1));
  }
  return compensated_mean(rates);
}

double compensated_mean(std::span<const double> values) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  double sum = 0.0;
  double comp = 0.0;
  for (double v : values) {
    const double t = sum + v;
    comp += std::fabs(sum) >= std::fabs(v) ? (sum - t) + v : (v - t) + sum;
    sum = t;
  }
  return (sum + comp) / static_cast<double>(values.size());
}

}  // namespace corrbench
