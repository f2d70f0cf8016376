#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "corrbench/tables.hpp"

namespace corrbench {

/// A_clean - A_dist for one model. Negative when the distribution is
/// easier than i.i.d. samples. Throws Error(MissingAccuracy).
double residual_robustness(const AccuracyTable& table, std::string_view model_id, std::string_view distribution_id);

/// A_corrupted / A_clean. Throws Error(DegenerateCleanAccuracy) when
/// A_clean is 0 and Error(MissingAccuracy).
double robustness_ratio(const AccuracyTable& table, std::string_view model_id, std::string_view corruption_id);

/// Denominators within this distance of zero cannot be scored.
inline constexpr double kOverlapEpsilon = 1e-9;

/// Overlapping score between corruptions c1 and c2 from the robustness
/// ratios of the model augmented with c1 (m1), the model augmented with c2
/// (m2) and the standard model:
///
///   max{0, 1/2 [ (r_m1_c2 - r_std_c2) / (r_m2_c2 - r_std_c2)
///              + (r_m2_c1 - r_std_c1) / (r_m1_c1 - r_std_c1) ]}
///
/// The raw value is not clamped above; build_overlap_matrix clamps to 1.
/// Throws Error(DegenerateBaseline) when a denominator is within
/// kOverlapEpsilon of zero.
double overlap_score(double r_m1_c2, double r_std_c2, double r_m2_c2, double r_m2_c1, double r_std_c1,
                     double r_m1_c1);

/// Overlap scores for every pair of `corruption_ids`, clamped to [0, 1]
/// with a unit diagonal. Errors name the offending pair.
OverlapMatrix build_overlap_matrix(const AccuracyTable& table, const ModelManifest& manifest,
                                   std::span<const std::string> corruption_ids);

/// Pearson product-moment correlation. Requires equal lengths >= 3 and
/// non-constant inputs; throws Error(LengthMismatch),
/// Error(InsufficientSamples) or Error(ZeroVariance).
double pearson(std::span<const double> x, std::span<const double> y);

/// Two-sided p-value of `r` under the null hypothesis of zero correlation,
/// from Student's t with n - 2 degrees of freedom. |r| = 1 gives 0.
/// Throws Error(InsufficientSamples) for n < 3.
double pearson_p_value(double r, std::size_t n_samples);

/// Label sequences of one model over perturbation sequences.
using PredictionSequences = std::vector<std::vector<std::int64_t>>;

/// Mean over sequences of the fraction of consecutive frames whose
/// prediction changes. Unnormalized. Throws Error(InvalidSequences) for an
/// empty set or a sequence shorter than 2.
double mean_flip_rate(const PredictionSequences& sequences);

/// Neumaier-compensated mean; NaN for an empty input.
double compensated_mean(std::span<const double> values);

}  // namespace corrbench
