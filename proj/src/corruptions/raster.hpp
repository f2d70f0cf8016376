#pragma once
// Internal float raster and the sampling/filtering helpers shared by the
// corruption kernels. All pixel values are in unit-interval floats; the
// final quantization back to 8 bits clamps.

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "corrbench/image.hpp"
#include "corrbench/rng.hpp"

namespace corrbench::detail {

struct Raster {
  int width = 0;
  int height = 0;
  std::vector<float> px;  // RGB interleaved

  Raster() = default;
  Raster(int w, int h) : width(w), height(h), px(static_cast<std::size_t>(w) * h * 3, 0.0f) {}

  std::size_t size() const noexcept { return px.size(); }
  std::size_t row_stride() const noexcept { return static_cast<std::size_t>(width) * 3; }
  int min_dim() const noexcept { return width < height ? width : height; }

  float* pixel(int x, int y) { return px.data() + (static_cast<std::size_t>(y) * width + x) * 3; }
  const float* pixel(int x, int y) const { return px.data() + (static_cast<std::size_t>(y) * width + x) * 3; }

  std::span<float> row(int y) { return {px.data() + static_cast<std::size_t>(y) * row_stride(), row_stride()}; }
  std::span<const float> row(int y) const {
    return {px.data() + static_cast<std::size_t>(y) * row_stride(), row_stride()};
  }
};

Raster to_raster(const Image& image);
Image to_image(const Raster& raster);

/// Kernel parameters after merging the caller's overrides into the roster defaults.
class Params {
 public:
  explicit Params(std::map<std::string, double> values) : values_(std::move(values)) {}
  double get(const std::string& name) const;

 private:
  std::map<std::string, double> values_;
};

using KernelFn = void (*)(Raster& img, const Params& params, double severity, Rng& rng);

/// Reflection without edge repetition (-1 -> 1, n -> n - 2).
int reflect(int i, int n) noexcept;

/// Bilinear sample at continuous coordinates (pixel centers at integers)
/// with reflection padding.
void sample_bilinear(const Raster& src, double x, double y, float* out) noexcept;

/// Geometric warp: out(x, y) = src(map(x, y)).
template <class Map>
Raster warp(const Raster& src, Map&& map) {
  Raster out(src.width, src.height);
  for (int y = 0; y < src.height; ++y) {
    for (int x = 0; x < src.width; ++x) {
      double sx = 0.0;
      double sy = 0.0;
      map(static_cast<double>(x), static_cast<double>(y), sx, sy);
      sample_bilinear(src, sx, sy, out.pixel(x, y));
    }
  }
  return out;
}

/// Normalized 1-D Gaussian taps, radius ceil(3 sigma), at least 1.
std::vector<float> gaussian_taps(double sigma);

/// Separable convolution with reflection padding; `taps` has odd length.
void convolve_separable(Raster& img, std::span<const float> taps);

void gaussian_blur(Raster& img, double sigma);

/// Per-channel separable blur of a single-channel field.
void blur_field(std::vector<float>& field, int width, int height, double sigma);

/// Mean Rec.601 luma.
double mean_luma(const Raster& img) noexcept;

inline float luma(const float* p) noexcept { return 0.299f * p[0] + 0.587f * p[1] + 0.114f * p[2]; }

void rgb_to_hsv(const float* rgb, float& h, float& s, float& v) noexcept;
void hsv_to_rgb(float h, float s, float v, float* rgb) noexcept;

/// Resamples one axis by area averaging (shrinking) or bilinear
/// interpolation (growing) to `new_width` x `new_height`.
Raster resize_area(const Raster& src, int new_width, int new_height);
Raster resize_bilinear(const Raster& src, int new_width, int new_height);

// Kernel families, registered in registry.cpp.
void gaussian_noise(Raster&, const Params&, double, Rng&);
void shot_noise(Raster&, const Params&, double, Rng&);
void iso_noise(Raster&, const Params&, double, Rng&);
void multiplicative_noise(Raster&, const Params&, double, Rng&);
void salt_and_pepper(Raster&, const Params&, double, Rng&);
void speckle_noise(Raster&, const Params&, double, Rng&);

void gaussian_blur_kernel(Raster&, const Params&, double, Rng&);
void motion_blur(Raster&, const Params&, double, Rng&);
void defocus_blur(Raster&, const Params&, double, Rng&);
void zoom_blur(Raster&, const Params&, double, Rng&);
void glass_blur(Raster&, const Params&, double, Rng&);
void median_blur(Raster&, const Params&, double, Rng&);

void rotation(Raster&, const Params&, double, Rng&);
void translation(Raster&, const Params&, double, Rng&);
void shear(Raster&, const Params&, double, Rng&);
void scale(Raster&, const Params&, double, Rng&);
void elastic_transform(Raster&, const Params&, double, Rng&);
void perspective(Raster&, const Params&, double, Rng&);
void grid_distortion(Raster&, const Params&, double, Rng&);

void brightness_increase(Raster&, const Params&, double, Rng&);
void brightness_decrease(Raster&, const Params&, double, Rng&);
void contrast_increase(Raster&, const Params&, double, Rng&);
void contrast_decrease(Raster&, const Params&, double, Rng&);
void gamma(Raster&, const Params&, double, Rng&);
void shadow(Raster&, const Params&, double, Rng&);

void jpeg_compression(Raster&, const Params&, double, Rng&);
void pixelate(Raster&, const Params&, double, Rng&);
void posterize(Raster&, const Params&, double, Rng&);
void dither(Raster&, const Params&, double, Rng&);
void coarse_dropout(Raster&, const Params&, double, Rng&);
void downscale(Raster&, const Params&, double, Rng&);

void hue_shift(Raster&, const Params&, double, Rng&);
void saturation(Raster&, const Params&, double, Rng&);
void channel_shuffle(Raster&, const Params&, double, Rng&);
void channel_dropout(Raster&, const Params&, double, Rng&);
void grayscale(Raster&, const Params&, double, Rng&);
void color_jitter(Raster&, const Params&, double, Rng&);
void solarize(Raster&, const Params&, double, Rng&);
void invert(Raster&, const Params&, double, Rng&);
void sepia(Raster&, const Params&, double, Rng&);

}  // namespace corrbench::detail
