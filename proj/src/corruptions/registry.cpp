#include <algorithm>
#include <cstring>
#include <unordered_map>

#include "corrbench/corruptions.hpp"
#include "corrbench/error.hpp"
#include "raster.hpp"

namespace corrbench {

std::string_view to_string(Family family) noexcept {
  switch (family) {
    case Family::noise: return "noise";
    case Family::blur: return "blur";
    case Family::spatial: return "spatial";
    case Family::lighting: return "lighting";
    case Family::artifact: return "artifact";
    case Family::color: return "color";
    case Family::other: return "other";
  }
  return "other";
}

namespace {

using detail::KernelFn;

struct Entry {
  CorruptionSpec spec;
  KernelFn kernel;
};

// Spatial-scale parameters (*_frac) are fractions of the shorter image side
// (or the longer side for motion blur length) so kernels behave the same
// across resolutions. The last field is the canonical severity.
std::vector<Entry> build_entries() {
  using F = Family;
  namespace d = detail;
  auto e = [](const char* id, F family, KernelFn fn, std::map<std::string, double> params, double severity) {
    return Entry{CorruptionSpec{id, family, std::move(params), severity}, fn};
  };
  return {
      e("gaussian_noise", F::noise, d::gaussian_noise, {{"sigma_max", 0.3}}, 0.5),
      e("shot_noise", F::noise, d::shot_noise, {{"photons", 8.0}}, 0.5),
      e("iso_noise", F::noise, d::iso_noise, {{"intensity", 0.2}, {"color_shift", 0.06}}, 0.5),
      e("multiplicative_noise", F::noise, d::multiplicative_noise, {{"amplitude", 0.8}}, 0.5),
      e("salt_and_pepper", F::noise, d::salt_and_pepper, {{"amount", 0.2}}, 0.5),
      e("speckle_noise", F::noise, d::speckle_noise, {{"sigma_max", 0.8}}, 0.5),

      e("gaussian_blur", F::blur, d::gaussian_blur_kernel, {{"sigma_frac", 0.025}}, 0.5),
      e("motion_blur", F::blur, d::motion_blur, {{"length_frac", 0.12}}, 0.5),
      e("defocus_blur", F::blur, d::defocus_blur, {{"radius_frac", 0.04}}, 0.5),
      e("zoom_blur", F::blur, d::zoom_blur, {{"max_zoom", 0.3}, {"steps", 8.0}}, 0.5),
      e("glass_blur", F::blur, d::glass_blur, {{"sigma_frac", 0.006}, {"delta_frac", 0.015}, {"iterations", 2.0}},
        0.5),
      e("median_blur", F::blur, d::median_blur, {{"radius_frac", 0.02}}, 0.5),

      e("rotation", F::spatial, d::rotation, {{"max_degrees", 40.0}}, 0.5),
      e("translation", F::spatial, d::translation, {{"max_frac", 0.25}}, 0.5),
      e("shear", F::spatial, d::shear, {{"max_shear", 0.6}}, 0.5),
      e("scale", F::spatial, d::scale, {{"max_zoom", 0.8}}, 0.5),
      e("elastic_transform", F::spatial, d::elastic_transform, {{"alpha_frac", 0.06}, {"sigma_frac", 0.05}}, 0.5),
      e("perspective", F::spatial, d::perspective, {{"max_frac", 0.2}}, 0.5),
      e("grid_distortion", F::spatial, d::grid_distortion, {{"cells", 5.0}, {"distort_limit", 0.6}}, 0.5),

      e("brightness_increase", F::lighting, d::brightness_increase, {{"delta_max", 0.6}}, 0.5),
      e("brightness_decrease", F::lighting, d::brightness_decrease, {{"delta_max", 0.6}}, 0.5),
      e("contrast_increase", F::lighting, d::contrast_increase, {{"gain_max", 3.0}}, 0.5),
      e("contrast_decrease", F::lighting, d::contrast_decrease, {{"reduction_max", 0.9}}, 0.5),
      e("gamma", F::lighting, d::gamma, {{"gamma_max", 4.0}}, 0.5),
      e("shadow", F::lighting, d::shadow, {{"darkness", 0.85}, {"edge_frac", 0.08}}, 0.6),

      e("jpeg_compression", F::artifact, d::jpeg_compression, {{"min_quality", 2.0}}, 0.8),
      e("pixelate", F::artifact, d::pixelate, {{"block_frac", 0.08}}, 0.5),
      e("posterize", F::artifact, d::posterize, {{"min_bits", 1.0}}, 0.6),
      e("dither", F::artifact, d::dither, {{"min_levels", 2.0}}, 0.7),
      e("coarse_dropout", F::artifact, d::coarse_dropout, {{"max_holes", 10.0}, {"hole_frac", 0.12}}, 0.5),
      e("downscale", F::artifact, d::downscale, {{"min_scale", 0.1}}, 0.6),

      e("hue_shift", F::color, d::hue_shift, {{"max_degrees", 180.0}}, 0.5),
      e("saturation", F::color, d::saturation, {{"gain_max", 4.0}}, 0.5),
      e("channel_shuffle", F::color, d::channel_shuffle, {}, 1.0),
      e("channel_dropout", F::color, d::channel_dropout, {}, 1.0),
      e("grayscale", F::color, d::grayscale, {}, 1.0),
      e("color_jitter", F::color, d::color_jitter,
        {{"brightness", 0.5}, {"contrast", 0.5}, {"saturation", 0.8}, {"hue", 0.2}}, 0.7),
      e("solarize", F::color, d::solarize, {{"min_threshold", 0.25}}, 0.5),
      e("invert", F::color, d::invert, {}, 0.8),
      e("sepia", F::color, d::sepia, {}, 1.0),
  };
}

struct Registry {
  std::vector<Entry> entries = build_entries();
  Roster roster;
  std::unordered_map<std::string_view, std::size_t> index;

  Registry() {
    roster.reserve(entries.size());
    for (const Entry& entry : entries) roster.push_back(entry.spec);
    for (std::size_t i = 0; i < entries.size(); ++i) index.emplace(entries[i].spec.id, i);
  }

  const Entry& lookup(std::string_view id) const {
    auto it = index.find(id);
    if (it == index.end()) throw Error(ErrorCode::UnknownCorruption, "'" + std::string(id) + "' is not in the roster");
    return entries[it->second];
  }
};

const Registry& registry() {
  static const Registry r;
  return r;
}

}  // namespace

const Roster& list_corruptions() { return registry().roster; }

const CorruptionSpec& find_corruption(std::string_view id) { return registry().lookup(id).spec; }

Image apply_corruption(const Image& image, const CorruptionSpec& spec, std::uint64_t seed) {
  image.validate();
  const Entry& entry = registry().lookup(spec.id);
  if (!(spec.severity >= 0.0 && spec.severity <= 1.0)) {
    throw Error(ErrorCode::InvalidSeverity, spec.id + ": severity " + std::to_string(spec.severity) +
                                                " outside [0, 1]");
  }
  std::map<std::string, double> params = entry.spec.params;
  for (const auto& [name, value] : spec.params) {
    if (!params.contains(name)) {
      throw Error(ErrorCode::InvalidConfig, spec.id + ": unknown parameter '" + name + "'");
    }
    params[name] = value;
  }
  if (spec.severity == 0.0) return image;

  detail::Raster raster = detail::to_raster(image);
  Rng rng(seed);
  entry.kernel(raster, detail::Params(std::move(params)), spec.severity, rng);
  return detail::to_image(raster);
}

std::uint64_t derive_seed(std::uint64_t global_seed, std::string_view corruption_id, std::string_view image_key) {
  constexpr std::uint64_t kOffset = 0xCBF29CE484222325ULL;
  constexpr std::uint64_t kPrime = 0x100000001B3ULL;
  std::uint64_t h = kOffset;
  auto feed = [&h](unsigned char byte) {
    h ^= byte;
    h *= kPrime;
  };
  for (int i = 0; i < 8; ++i) feed(static_cast<unsigned char>(global_seed >> (8 * i)));
  feed(0x1F);
  for (char c : corruption_id) feed(static_cast<unsigned char>(c));
  feed(0x1F);
  for (char c : image_key) feed(static_cast<unsigned char>(c));
  return mix64(h);
}

}  // namespace corrbench
