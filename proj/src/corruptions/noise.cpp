// Additive and multiplicative noise. Every kernel draws its random field
// independently of severity and scales it afterwards, so a fixed seed gives
// a noise pattern whose amplitude grows with severity.

#include <cmath>
#include <vector>

#include "corrbench/simd/kernels.hpp"
#include "raster.hpp"

namespace corrbench::detail {

void gaussian_noise(Raster& img, const Params& p, double severity, Rng& rng) {
  std::vector<float> noise(img.size());
  for (float& v : noise) v = static_cast<float>(rng.normal());
  simd::add_scaled(img.px, noise, static_cast<float>(severity * p.get("sigma_max")));
}

// Signal-dependent noise: std grows with sqrt(intensity / photons).
void shot_noise(Raster& img, const Params& p, double severity, Rng& rng) {
  const double photons = p.get("photons");
  std::vector<float> noise(img.size());
  for (std::size_t i = 0; i < noise.size(); ++i) {
    const double z = rng.normal();
    noise[i] = static_cast<float>(std::sqrt(std::max(0.0f, img.px[i]) / photons) * z);
  }
  simd::add_scaled(img.px, noise, static_cast<float>(severity));
}

// Camera sensor noise: a luminance component shared by the three channels
// plus independent per-channel color noise.
void iso_noise(Raster& img, const Params& p, double severity, Rng& rng) {
  const double intensity = p.get("intensity");
  const double color_shift = p.get("color_shift");
  std::vector<float> noise(img.size());
  for (std::size_t i = 0; i < noise.size(); i += 3) {
    const double lum = rng.normal() * intensity;
    for (std::size_t c = 0; c < 3; ++c) noise[i + c] = static_cast<float>(lum + rng.normal() * color_shift);
  }
  simd::add_scaled(img.px, noise, static_cast<float>(severity));
}

void multiplicative_noise(Raster& img, const Params& p, double severity, Rng& rng) {
  const double amplitude = p.get("amplitude");
  std::vector<float> noise(img.size());
  for (std::size_t i = 0; i < noise.size(); i += 3) {
    const double u = rng.uniform(-1.0, 1.0) * amplitude;
    for (std::size_t c = 0; c < 3; ++c) noise[i + c] = static_cast<float>(img.px[i + c] * u);
  }
  simd::add_scaled(img.px, noise, static_cast<float>(severity));
}

void salt_and_pepper(Raster& img, const Params& p, double severity, Rng& rng) {
  const double amount = p.get("amount") * severity;
  const std::size_t pixels = static_cast<std::size_t>(img.width) * img.height;
  for (std::size_t i = 0; i < pixels; ++i) {
    const double u = rng.uniform();
    const float value = rng.coin() ? 1.0f : 0.0f;
    if (u < amount) {
      for (std::size_t c = 0; c < 3; ++c) img.px[i * 3 + c] = value;
    }
  }
}

void speckle_noise(Raster& img, const Params& p, double severity, Rng& rng) {
  const double sigma = p.get("sigma_max");
  std::vector<float> noise(img.size());
  for (std::size_t i = 0; i < noise.size(); ++i) noise[i] = static_cast<float>(rng.normal() * sigma);
  simd::multiply(noise, img.px);
  simd::add_scaled(img.px, noise, static_cast<float>(severity));
}

}  // namespace corrbench::detail
