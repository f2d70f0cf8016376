#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "corrbench/simd/kernels.hpp"
#include "raster.hpp"

namespace corrbench::detail {

void brightness_increase(Raster& img, const Params& p, double severity, Rng&) {
  simd::affine(img.px, 1.0f, static_cast<float>(severity * p.get("delta_max")));
}

void brightness_decrease(Raster& img, const Params& p, double severity, Rng&) {
  simd::affine(img.px, 1.0f, static_cast<float>(-severity * p.get("delta_max")));
}

namespace {

// Stretch about the mean luma: x -> (x - m) * gain + m.
void stretch_about_mean(Raster& img, double gain) {
  const double m = mean_luma(img);
  simd::affine(img.px, static_cast<float>(gain), static_cast<float>(m * (1.0 - gain)));
}

}  // namespace

void contrast_increase(Raster& img, const Params& p, double severity, Rng&) {
  stretch_about_mean(img, 1.0 + severity * p.get("gain_max"));
}

void contrast_decrease(Raster& img, const Params& p, double severity, Rng&) {
  stretch_about_mean(img, 1.0 - severity * p.get("reduction_max"));
}

void gamma(Raster& img, const Params& p, double severity, Rng&) {
  const float exponent = static_cast<float>(1.0 + severity * (p.get("gamma_max") - 1.0));
  for (float& v : img.px) v = std::pow(std::max(v, 0.0f), exponent);
}

// Darkens the half-plane on one side of a random line through the image,
// with a soft edge.
void shadow(Raster& img, const Params& p, double severity, Rng& rng) {
  const double px = rng.uniform(0.25, 0.75) * img.width;
  const double py = rng.uniform(0.25, 0.75) * img.height;
  const double theta = rng.uniform(0.0, 2.0 * std::numbers::pi);
  const double nx = std::cos(theta);
  const double ny = std::sin(theta);
  const double softness = std::max(1.0, p.get("edge_frac") * img.min_dim());
  const double darkness = severity * p.get("darkness");
  std::vector<float> factor(img.size());
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      const double d = (x - px) * nx + (y - py) * ny;
      const double t = std::clamp(0.5 + d / softness, 0.0, 1.0);
      const double mask = t * t * (3.0 - 2.0 * t);
      const auto f = static_cast<float>(1.0 - darkness * mask);
      float* dst = factor.data() + (static_cast<std::size_t>(y) * img.width + x) * 3;
      dst[0] = dst[1] = dst[2] = f;
    }
  }
  simd::multiply(img.px, factor);
}

}  // namespace corrbench::detail
