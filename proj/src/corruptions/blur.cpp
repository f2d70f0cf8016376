#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "corrbench/simd/kernels.hpp"
#include "raster.hpp"

namespace corrbench::detail {
namespace {

// 2-D convolution with an arbitrary stencil and reflection padding.
struct StencilTap {
  int dx;
  int dy;
  float weight;
};

Raster convolve_stencil(const Raster& src, const std::vector<StencilTap>& taps) {
  Raster out(src.width, src.height);
  for (int y = 0; y < src.height; ++y) {
    for (int x = 0; x < src.width; ++x) {
      float acc[3] = {0.0f, 0.0f, 0.0f};
      for (const StencilTap& t : taps) {
        const float* p = src.pixel(reflect(x + t.dx, src.width), reflect(y + t.dy, src.height));
        for (int c = 0; c < 3; ++c) acc[c] += t.weight * p[c];
      }
      std::copy_n(acc, 3, out.pixel(x, y));
    }
  }
  return out;
}

}  // namespace

void gaussian_blur_kernel(Raster& img, const Params& p, double severity, Rng&) {
  gaussian_blur(img, severity * p.get("sigma_frac") * img.min_dim());
}

// Averages bilinear samples along a segment of random orientation.
void motion_blur(Raster& img, const Params& p, double severity, Rng& rng) {
  const double angle = rng.uniform(0.0, std::numbers::pi);
  const double length = severity * p.get("length_frac") * std::max(img.width, img.height);
  const int samples = std::max(2, static_cast<int>(std::ceil(length)) + 1);
  const double ux = std::cos(angle);
  const double uy = std::sin(angle);
  const Raster src = img;
  Raster acc(img.width, img.height);
  Raster shifted(img.width, img.height);
  const float weight = 1.0f / static_cast<float>(samples);
  for (int s = 0; s < samples; ++s) {
    const double offset = length * (static_cast<double>(s) / (samples - 1) - 0.5);
    shifted = warp(src, [&](double x, double y, double& sx, double& sy) {
      sx = x + offset * ux;
      sy = y + offset * uy;
    });
    simd::add_scaled(acc.px, shifted.px, weight);
  }
  img = std::move(acc);
}

// Anti-aliased disk stencil.
void defocus_blur(Raster& img, const Params& p, double severity, Rng&) {
  const double radius = severity * p.get("radius_frac") * img.min_dim();
  const int extent = static_cast<int>(std::ceil(radius + 0.5));
  std::vector<StencilTap> taps;
  double total = 0.0;
  for (int dy = -extent; dy <= extent; ++dy) {
    for (int dx = -extent; dx <= extent; ++dx) {
      const double dist = std::sqrt(static_cast<double>(dx * dx + dy * dy));
      const double w = std::clamp(radius + 0.5 - dist, 0.0, 1.0);
      if (w > 0.0) {
        taps.push_back({dx, dy, static_cast<float>(w)});
        total += w;
      }
    }
  }
  for (StencilTap& t : taps) t.weight = static_cast<float>(t.weight / total);
  img = convolve_stencil(img, taps);
}

// Mean of progressively zoomed copies about the image center.
void zoom_blur(Raster& img, const Params& p, double severity, Rng&) {
  const int steps = static_cast<int>(p.get("steps"));
  const double max_zoom = severity * p.get("max_zoom");
  const double cx = (img.width - 1) / 2.0;
  const double cy = (img.height - 1) / 2.0;
  const Raster src = img;
  Raster acc(img.width, img.height);
  const float weight = 1.0f / static_cast<float>(steps);
  for (int s = 0; s < steps; ++s) {
    const double zoom = 1.0 + max_zoom * s / std::max(1, steps - 1);
    const Raster zoomed = warp(src, [&](double x, double y, double& sx, double& sy) {
      sx = cx + (x - cx) / zoom;
      sy = cy + (y - cy) / zoom;
    });
    simd::add_scaled(acc.px, zoomed.px, weight);
  }
  img = std::move(acc);
}

// Blur, then locally shuffle pixels, then blur again.
void glass_blur(Raster& img, const Params& p, double severity, Rng& rng) {
  const double sigma = severity * p.get("sigma_frac") * img.min_dim();
  const int delta = static_cast<int>(std::lround(severity * p.get("delta_frac") * img.min_dim()));
  const int iterations = static_cast<int>(p.get("iterations"));
  gaussian_blur(img, sigma);
  for (int it = 0; it < iterations && delta > 0; ++it) {
    for (int y = 0; y < img.height; ++y) {
      for (int x = 0; x < img.width; ++x) {
        const int dx = static_cast<int>(rng.below(static_cast<std::uint64_t>(2 * delta + 1))) - delta;
        const int dy = static_cast<int>(rng.below(static_cast<std::uint64_t>(2 * delta + 1))) - delta;
        const int nx = std::clamp(x + dx, 0, img.width - 1);
        const int ny = std::clamp(y + dy, 0, img.height - 1);
        std::swap_ranges(img.pixel(x, y), img.pixel(x, y) + 3, img.pixel(nx, ny));
      }
    }
  }
  gaussian_blur(img, sigma);
}

void median_blur(Raster& img, const Params& p, double severity, Rng&) {
  const int radius = std::max(1, static_cast<int>(std::lround(severity * p.get("radius_frac") * img.min_dim())));
  const Raster src = img;
  std::vector<float> window;
  window.reserve(static_cast<std::size_t>((2 * radius + 1) * (2 * radius + 1)));
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      for (int c = 0; c < 3; ++c) {
        window.clear();
        for (int dy = -radius; dy <= radius; ++dy) {
          for (int dx = -radius; dx <= radius; ++dx) {
            window.push_back(src.pixel(reflect(x + dx, img.width), reflect(y + dy, img.height))[c]);
          }
        }
        auto mid = window.begin() + static_cast<std::ptrdiff_t>(window.size() / 2);
        std::nth_element(window.begin(), mid, window.end());
        img.pixel(x, y)[c] = *mid;
      }
    }
  }
}

}  // namespace corrbench::detail
