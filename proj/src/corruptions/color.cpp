// Color distortions. Discrete transforms (channel shuffle, channel dropout,
// grayscale, invert, sepia) are blended with the original by severity.

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "corrbench/simd/kernels.hpp"
#include "raster.hpp"

namespace corrbench::detail {
namespace {

template <class Fn>
void blend_with(Raster& img, double severity, Fn&& transform) {
  std::vector<float> target(img.size());
  for (std::size_t i = 0; i < target.size(); i += 3) transform(img.px.data() + i, target.data() + i);
  simd::lerp(img.px, target, static_cast<float>(severity));
}

void rotate_hue(Raster& img, double turns) {
  for (std::size_t i = 0; i < img.size(); i += 3) {
    float h, s, v;
    rgb_to_hsv(img.px.data() + i, h, s, v);
    hsv_to_rgb(h + static_cast<float>(turns), s, v, img.px.data() + i);
  }
}

void scale_saturation(Raster& img, double factor) {
  for (std::size_t i = 0; i < img.size(); i += 3) {
    float* p = img.px.data() + i;
    const float gray = luma(p);
    for (int c = 0; c < 3; ++c) p[c] = gray + (p[c] - gray) * static_cast<float>(factor);
  }
}

}  // namespace

void hue_shift(Raster& img, const Params& p, double severity, Rng&) {
  rotate_hue(img, severity * p.get("max_degrees") / 360.0);
}

void saturation(Raster& img, const Params& p, double severity, Rng&) {
  scale_saturation(img, 1.0 + severity * p.get("gain_max"));
}

void channel_shuffle(Raster& img, const Params&, double severity, Rng& rng) {
  static constexpr std::array<std::array<int, 3>, 5> kPermutations = {
      {{0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};
  const auto& perm = kPermutations[static_cast<std::size_t>(rng.below(kPermutations.size()))];
  blend_with(img, severity, [&](const float* src, float* dst) {
    for (int c = 0; c < 3; ++c) dst[c] = src[perm[static_cast<std::size_t>(c)]];
  });
}

void channel_dropout(Raster& img, const Params&, double severity, Rng& rng) {
  const auto dropped = static_cast<int>(rng.below(3));
  blend_with(img, severity, [&](const float* src, float* dst) {
    for (int c = 0; c < 3; ++c) dst[c] = c == dropped ? 0.0f : src[c];
  });
}

void grayscale(Raster& img, const Params&, double severity, Rng&) {
  blend_with(img, severity, [](const float* src, float* dst) { dst[0] = dst[1] = dst[2] = luma(src); });
}

// Random brightness, contrast, saturation and hue factors, applied in that order.
void color_jitter(Raster& img, const Params& p, double severity, Rng& rng) {
  const double brightness = 1.0 + severity * p.get("brightness") * rng.uniform(-1.0, 1.0);
  const double contrast = 1.0 + severity * p.get("contrast") * rng.uniform(-1.0, 1.0);
  const double sat = 1.0 + severity * p.get("saturation") * rng.uniform(-1.0, 1.0);
  const double hue = severity * p.get("hue") * rng.uniform(-1.0, 1.0);
  simd::affine(img.px, static_cast<float>(brightness), 0.0f);
  simd::clamp_unit(img.px);
  const double m = mean_luma(img);
  simd::affine(img.px, static_cast<float>(contrast), static_cast<float>(m * (1.0 - contrast)));
  simd::clamp_unit(img.px);
  scale_saturation(img, sat);
  simd::clamp_unit(img.px);
  rotate_hue(img, hue);
}

// Inverts samples above a threshold that drops from 1 as severity grows.
void solarize(Raster& img, const Params& p, double severity, Rng&) {
  const float threshold = static_cast<float>(1.0 - severity * (1.0 - p.get("min_threshold")));
  for (float& v : img.px) {
    if (v > threshold) v = 1.0f - v;
  }
}

void invert(Raster& img, const Params&, double severity, Rng&) {
  blend_with(img, severity, [](const float* src, float* dst) {
    for (int c = 0; c < 3; ++c) dst[c] = 1.0f - src[c];
  });
}

void sepia(Raster& img, const Params&, double severity, Rng&) {
  blend_with(img, severity, [](const float* src, float* dst) {
    const float r = src[0], g = src[1], b = src[2];
    dst[0] = std::min(1.0f, 0.393f * r + 0.769f * g + 0.189f * b);
    dst[1] = std::min(1.0f, 0.349f * r + 0.686f * g + 0.168f * b);
    dst[2] = std::min(1.0f, 0.272f * r + 0.534f * g + 0.131f * b);
  });
}

}  // namespace corrbench::detail
