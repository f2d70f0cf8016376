#include "raster.hpp"

#include <algorithm>
#include <cmath>

#include "corrbench/error.hpp"
#include "corrbench/simd/kernels.hpp"

namespace corrbench::detail {

Raster to_raster(const Image& image) {
  Raster r(image.width, image.height);
  simd::u8_to_unit(image.data, r.px);
  return r;
}

Image to_image(const Raster& raster) {
  Image img(raster.width, raster.height);
  simd::unit_to_u8(raster.px, img.data);
  return img;
}

double Params::get(const std::string& name) const {
  auto it = values_.find(name);
  if (it == values_.end()) throw Error(ErrorCode::InvalidConfig, "kernel parameter '" + name + "' is not defined");
  return it->second;
}

int reflect(int i, int n) noexcept {
  if (n == 1) return 0;
  const int period = 2 * (n - 1);
  i %= period;
  if (i < 0) i += period;
  return i < n ? i : period - i;
}

void sample_bilinear(const Raster& src, double x, double y, float* out) noexcept {
  const double fx0 = std::floor(x);
  const double fy0 = std::floor(y);
  const auto wx = static_cast<float>(x - fx0);
  const auto wy = static_cast<float>(y - fy0);
  // Coordinates far outside the image are folded before the int cast.
  const auto clamp_big = [](double v) { return static_cast<int>(std::clamp(v, -1.0e6, 1.0e6)); };
  const int x0 = clamp_big(fx0);
  const int y0 = clamp_big(fy0);
  const int xa = reflect(x0, src.width);
  const int xb = reflect(x0 + 1, src.width);
  const int ya = reflect(y0, src.height);
  const int yb = reflect(y0 + 1, src.height);
  const float* p00 = src.pixel(xa, ya);
  const float* p10 = src.pixel(xb, ya);
  const float* p01 = src.pixel(xa, yb);
  const float* p11 = src.pixel(xb, yb);
  for (int c = 0; c < 3; ++c) {
    const float top = p00[c] + (p10[c] - p00[c]) * wx;
    const float bottom = p01[c] + (p11[c] - p01[c]) * wx;
    out[c] = top + (bottom - top) * wy;
  }
}

std::vector<float> gaussian_taps(double sigma) {
  const int radius = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
  std::vector<double> w(static_cast<std::size_t>(2 * radius + 1));
  double total = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    const double v = sigma > 0.0 ? std::exp(-0.5 * (i * i) / (sigma * sigma)) : (i == 0 ? 1.0 : 0.0);
    w[static_cast<std::size_t>(i + radius)] = v;
    total += v;
  }
  std::vector<float> taps(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) taps[i] = static_cast<float>(w[i] / total);
  return taps;
}

void convolve_separable(Raster& img, std::span<const float> taps) {
  const int radius = static_cast<int>(taps.size() / 2);
  const std::size_t stride = img.row_stride();

  // Horizontal: each tap is one scaled add over a shifted padded row.
  Raster tmp(img.width, img.height);
  std::vector<float> padded(static_cast<std::size_t>(img.width + 2 * radius) * 3);
  for (int y = 0; y < img.height; ++y) {
    const std::span<const float> src = img.row(y);
    for (int x = -radius; x < img.width + radius; ++x) {
      const int sx = reflect(x, img.width);
      std::copy_n(src.data() + static_cast<std::size_t>(sx) * 3, 3,
                  padded.data() + static_cast<std::size_t>(x + radius) * 3);
    }
    std::span<float> dst = tmp.row(y);
    for (std::size_t t = 0; t < taps.size(); ++t) {
      simd::add_scaled(dst, std::span<const float>(padded.data() + t * 3, stride), taps[t]);
    }
  }

  // Vertical: whole rows are the vector operands.
  for (int y = 0; y < img.height; ++y) {
    std::span<float> dst = img.row(y);
    std::fill(dst.begin(), dst.end(), 0.0f);
    for (std::size_t t = 0; t < taps.size(); ++t) {
      const int sy = reflect(y + static_cast<int>(t) - radius, img.height);
      simd::add_scaled(dst, tmp.row(sy), taps[t]);
    }
  }
}

void gaussian_blur(Raster& img, double sigma) {
  if (sigma <= 0.0) return;
  const std::vector<float> taps = gaussian_taps(sigma);
  convolve_separable(img, taps);
}

void blur_field(std::vector<float>& field, int width, int height, double sigma) {
  if (sigma <= 0.0) return;
  const std::vector<float> taps = gaussian_taps(sigma);
  const int radius = static_cast<int>(taps.size() / 2);
  std::vector<float> tmp(field.size(), 0.0f);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      float acc = 0.0f;
      for (int t = -radius; t <= radius; ++t) {
        acc += taps[static_cast<std::size_t>(t + radius)] *
               field[static_cast<std::size_t>(y) * width + reflect(x + t, width)];
      }
      tmp[static_cast<std::size_t>(y) * width + x] = acc;
    }
  }
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      float acc = 0.0f;
      for (int t = -radius; t <= radius; ++t) {
        acc += taps[static_cast<std::size_t>(t + radius)] *
               tmp[static_cast<std::size_t>(reflect(y + t, height)) * width + x];
      }
      field[static_cast<std::size_t>(y) * width + x] = acc;
    }
  }
}

double mean_luma(const Raster& img) noexcept {
  double total = 0.0;
  const std::size_t n = static_cast<std::size_t>(img.width) * img.height;
  for (std::size_t i = 0; i < n; ++i) total += luma(img.px.data() + i * 3);
  return total / static_cast<double>(n);
}

void rgb_to_hsv(const float* rgb, float& h, float& s, float& v) noexcept {
  const float r = rgb[0], g = rgb[1], b = rgb[2];
  const float mx = std::max({r, g, b});
  const float mn = std::min({r, g, b});
  const float delta = mx - mn;
  v = mx;
  s = mx > 0.0f ? delta / mx : 0.0f;
  if (delta <= 0.0f) {
    h = 0.0f;
    return;
  }
  float hue;
  if (mx == r) {
    hue = (g - b) / delta;
  } else if (mx == g) {
    hue = 2.0f + (b - r) / delta;
  } else {
    hue = 4.0f + (r - g) / delta;
  }
  hue /= 6.0f;
  if (hue < 0.0f) hue += 1.0f;
  h = hue;
}

void hsv_to_rgb(float h, float s, float v, float* rgb) noexcept {
  h = h - std::floor(h);
  const float scaled = h * 6.0f;
  const int sector = std::min(5, static_cast<int>(scaled));
  const float f = scaled - static_cast<float>(sector);
  const float p = v * (1.0f - s);
  const float q = v * (1.0f - s * f);
  const float t = v * (1.0f - s * (1.0f - f));
  switch (sector) {
    case 0: rgb[0] = v, rgb[1] = t, rgb[2] = p; break;
    case 1: rgb[0] = q, rgb[1] = v, rgb[2] = p; break;
    case 2: rgb[0] = p, rgb[1] = v, rgb[2] = t; break;
    case 3: rgb[0] = p, rgb[1] = q, rgb[2] = v; break;
    case 4: rgb[0] = t, rgb[1] = p, rgb[2] = v; break;
    default: rgb[0] = v, rgb[1] = p, rgb[2] = q; break;
  }
}

namespace {

struct Tap {
  int index;
  float weight;
};

// Area-coverage weights for shrinking `from` samples to `to` samples.
std::vector<std::vector<Tap>> area_weights(int from, int to) {
  std::vector<std::vector<Tap>> out(static_cast<std::size_t>(to));
  const double scale = static_cast<double>(from) / to;
  for (int i = 0; i < to; ++i) {
    const double lo = i * scale;
    const double hi = (i + 1) * scale;
    for (int j = static_cast<int>(std::floor(lo)); j < std::min(from, static_cast<int>(std::ceil(hi))); ++j) {
      const double overlap = std::min(hi, j + 1.0) - std::max(lo, static_cast<double>(j));
      if (overlap > 0.0) out[static_cast<std::size_t>(i)].push_back({j, static_cast<float>(overlap / scale)});
    }
  }
  return out;
}

std::vector<std::vector<Tap>> bilinear_weights(int from, int to) {
  std::vector<std::vector<Tap>> out(static_cast<std::size_t>(to));
  const double scale = static_cast<double>(from) / to;
  for (int i = 0; i < to; ++i) {
    const double src = std::clamp((i + 0.5) * scale - 0.5, 0.0, static_cast<double>(from - 1));
    const int j0 = static_cast<int>(std::floor(src));
    const int j1 = std::min(j0 + 1, from - 1);
    const auto w1 = static_cast<float>(src - j0);
    out[static_cast<std::size_t>(i)] = {{j0, 1.0f - w1}, {j1, w1}};
  }
  return out;
}

Raster resample(const Raster& src, const std::vector<std::vector<Tap>>& wx, const std::vector<std::vector<Tap>>& wy) {
  const int nw = static_cast<int>(wx.size());
  const int nh = static_cast<int>(wy.size());
  Raster horiz(nw, src.height);
  for (int y = 0; y < src.height; ++y) {
    for (int x = 0; x < nw; ++x) {
      float* dst = horiz.pixel(x, y);
      for (const Tap& t : wx[static_cast<std::size_t>(x)]) {
        const float* p = src.pixel(t.index, y);
        for (int c = 0; c < 3; ++c) dst[c] += t.weight * p[c];
      }
    }
  }
  Raster out(nw, nh);
  for (int y = 0; y < nh; ++y) {
    std::span<float> dst = out.row(y);
    for (const Tap& t : wy[static_cast<std::size_t>(y)]) simd::add_scaled(dst, horiz.row(t.index), t.weight);
  }
  return out;
}

}  // namespace

Raster resize_area(const Raster& src, int new_width, int new_height) {
  return resample(src, area_weights(src.width, new_width), area_weights(src.height, new_height));
}

Raster resize_bilinear(const Raster& src, int new_width, int new_height) {
  return resample(src, bilinear_weights(src.width, new_width), bilinear_weights(src.height, new_height));
}

}  // namespace corrbench::detail
