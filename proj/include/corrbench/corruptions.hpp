#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "corrbench/image.hpp"

namespace corrbench {

/// Perceptual family a corruption was designed for. Advisory only: the
/// categories used downstream come from clustering overlap scores.
enum class Family { noise, blur, spatial, lighting, artifact, color, other };

std::string_view to_string(Family family) noexcept;

struct CorruptionSpec {
  std::string id;
  Family family_hint = Family::other;
  /// Kernel-specific parameters. Missing keys fall back to the roster
  /// defaults; unknown keys are rejected.
  std::map<std::string, double> params;
  /// 0 is the identity, 1 the strongest setting.
  double severity = 0.5;
};

using Roster = std::vector<CorruptionSpec>;

inline constexpr std::string_view kRosterVersion = "corrbench-roster-v1";

/// The built-in 40-corruption roster. Every entry carries its default
/// parameters and its canonical severity. The order defines the row and
/// column order of every overlap matrix.
///
///   noise     gaussian_noise shot_noise iso_noise multiplicative_noise
///             salt_and_pepper speckle_noise
///   blur      gaussian_blur motion_blur defocus_blur zoom_blur glass_blur
///             median_blur
///   spatial   rotation translation shear scale elastic_transform
///             perspective grid_distortion
///   lighting  brightness_increase brightness_decrease contrast_increase
///             contrast_decrease gamma shadow
///   artifact  jpeg_compression pixelate posterize dither coarse_dropout
///             downscale
///   color     hue_shift saturation channel_shuffle channel_dropout
///             grayscale color_jitter solarize invert sepia
const Roster& list_corruptions();

/// Roster entry for `id`; throws Error(UnknownCorruption).
const CorruptionSpec& find_corruption(std::string_view id);

/// Applies `spec` to `image`. Output has the same shape; identical
/// arguments give byte-identical output. Stochastic kernels draw every
/// random number from a stream seeded with `seed`.
///
/// Throws Error(UnknownCorruption), Error(InvalidSeverity) for severity
/// outside [0, 1] and Error(InvalidConfig) for unknown parameter names.
Image apply_corruption(const Image& image, const CorruptionSpec& spec, std::uint64_t seed);

/// Per-file seed for dataset generation.
///
/// FNV-1a (64-bit) over: the 8 little-endian bytes of `global_seed`, a 0x1F
/// separator, the bytes of `corruption_id`, 0x1F, the bytes of `image_key`;
/// the digest is then passed through the SplitMix64 finalizer.
std::uint64_t derive_seed(std::uint64_t global_seed, std::string_view corruption_id, std::string_view image_key);

}  // namespace corrbench
