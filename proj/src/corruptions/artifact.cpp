#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "raster.hpp"

namespace corrbench::detail {
namespace {

// Baseline JPEG quantization tables (ITU T.81 Annex K), row-major.
constexpr std::array<int, 64> kLumaTable = {
    16, 11, 10, 16, 24,  40,  51,  61,  12, 12, 14, 19, 26,  58,  60,  55,  14, 13, 16, 24, 40,  57,
    69, 56, 14, 17, 22,  29,  51,  87,  80, 62, 18, 22, 37,  56,  68,  109, 103, 77, 24, 35, 55, 64,
    81, 104, 113, 92, 49, 64, 78, 87, 103, 121, 120, 101, 72, 92, 95, 98, 112, 100, 103, 99};
constexpr std::array<int, 64> kChromaTable = {
    17, 18, 24, 47, 99, 99, 99, 99, 18, 21, 26, 66, 99, 99, 99, 99, 24, 26, 56, 99, 99, 99,
    99, 99, 47, 66, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99,
    99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99};

// IJG quality scaling.
std::array<double, 64> scaled_table(const std::array<int, 64>& base, int quality) {
  quality = std::clamp(quality, 1, 100);
  const int scale = quality < 50 ? 5000 / quality : 200 - 2 * quality;
  std::array<double, 64> out{};
  for (std::size_t i = 0; i < 64; ++i) out[i] = std::clamp((base[i] * scale + 50) / 100, 1, 255);
  return out;
}

struct DctBasis {
  std::array<double, 64> c{};  // c[u * 8 + x]
  DctBasis() {
    for (int u = 0; u < 8; ++u) {
      const double alpha = u == 0 ? std::sqrt(0.125) : 0.5;
      for (int x = 0; x < 8; ++x) {
        c[static_cast<std::size_t>(u * 8 + x)] = alpha * std::cos((2 * x + 1) * u * std::numbers::pi / 16.0);
      }
    }
  }
};

// Quantize one 8x8 block in place: forward DCT, round(coef / q) * q, inverse DCT.
void quantize_block(std::array<double, 64>& block, const std::array<double, 64>& table, const DctBasis& basis) {
  std::array<double, 64> tmp{};
  std::array<double, 64> coef{};
  for (int y = 0; y < 8; ++y) {
    for (int u = 0; u < 8; ++u) {
      double acc = 0.0;
      for (int x = 0; x < 8; ++x) acc += basis.c[static_cast<std::size_t>(u * 8 + x)] * block[static_cast<std::size_t>(y * 8 + x)];
      tmp[static_cast<std::size_t>(y * 8 + u)] = acc;
    }
  }
  for (int v = 0; v < 8; ++v) {
    for (int u = 0; u < 8; ++u) {
      double acc = 0.0;
      for (int y = 0; y < 8; ++y) acc += basis.c[static_cast<std::size_t>(v * 8 + y)] * tmp[static_cast<std::size_t>(y * 8 + u)];
      const double q = table[static_cast<std::size_t>(v * 8 + u)];
      coef[static_cast<std::size_t>(v * 8 + u)] = std::round(acc / q) * q;
    }
  }
  for (int v = 0; v < 8; ++v) {
    for (int x = 0; x < 8; ++x) {
      double acc = 0.0;
      for (int u = 0; u < 8; ++u) acc += basis.c[static_cast<std::size_t>(u * 8 + x)] * coef[static_cast<std::size_t>(v * 8 + u)];
      tmp[static_cast<std::size_t>(v * 8 + x)] = acc;
    }
  }
  for (int y = 0; y < 8; ++y) {
    for (int x = 0; x < 8; ++x) {
      double acc = 0.0;
      for (int v = 0; v < 8; ++v) acc += basis.c[static_cast<std::size_t>(v * 8 + y)] * tmp[static_cast<std::size_t>(v * 8 + x)];
      block[static_cast<std::size_t>(y * 8 + x)] = acc;
    }
  }
}

}  // namespace

// JPEG's lossy stage without entropy coding: YCbCr, 8x8 DCT, quantization
// with IJG-scaled tables, and back. Quality falls linearly with severity.
void jpeg_compression(Raster& img, const Params& p, double severity, Rng&) {
  const int quality = static_cast<int>(std::lround(100.0 - severity * (100.0 - p.get("min_quality"))));
  const std::array<std::array<double, 64>, 3> tables = {scaled_table(kLumaTable, quality),
                                                         scaled_table(kChromaTable, quality),
                                                         scaled_table(kChromaTable, quality)};
  static const DctBasis basis;
  const int w = img.width;
  const int h = img.height;
  std::vector<double> planes[3];
  for (auto& plane : planes) plane.resize(static_cast<std::size_t>(w) * h);
  for (std::size_t i = 0; i < planes[0].size(); ++i) {
    const double r = img.px[i * 3] * 255.0;
    const double g = img.px[i * 3 + 1] * 255.0;
    const double b = img.px[i * 3 + 2] * 255.0;
    planes[0][i] = 0.299 * r + 0.587 * g + 0.114 * b - 128.0;
    planes[1][i] = -0.168736 * r - 0.331264 * g + 0.5 * b;
    planes[2][i] = 0.5 * r - 0.418688 * g - 0.081312 * b;
  }
  std::array<double, 64> block{};
  for (int c = 0; c < 3; ++c) {
    std::vector<double>& plane = planes[c];
    for (int by = 0; by < h; by += 8) {
      for (int bx = 0; bx < w; bx += 8) {
        // Partial edge blocks are padded by edge replication.
        for (int y = 0; y < 8; ++y) {
          for (int x = 0; x < 8; ++x) {
            const int sx = std::min(bx + x, w - 1);
            const int sy = std::min(by + y, h - 1);
            block[static_cast<std::size_t>(y * 8 + x)] = plane[static_cast<std::size_t>(sy) * w + sx];
          }
        }
        quantize_block(block, tables[static_cast<std::size_t>(c)], basis);
        for (int y = 0; y < 8 && by + y < h; ++y) {
          for (int x = 0; x < 8 && bx + x < w; ++x) {
            plane[static_cast<std::size_t>(by + y) * w + (bx + x)] = block[static_cast<std::size_t>(y * 8 + x)];
          }
        }
      }
    }
  }
  for (std::size_t i = 0; i < planes[0].size(); ++i) {
    const double yy = planes[0][i] + 128.0;
    const double cb = planes[1][i];
    const double cr = planes[2][i];
    img.px[i * 3] = static_cast<float>((yy + 1.402 * cr) / 255.0);
    img.px[i * 3 + 1] = static_cast<float>((yy - 0.344136 * cb - 0.714136 * cr) / 255.0);
    img.px[i * 3 + 2] = static_cast<float>((yy + 1.772 * cb) / 255.0);
  }
}

void pixelate(Raster& img, const Params& p, double severity, Rng&) {
  const int block = 1 + static_cast<int>(std::lround(severity * p.get("block_frac") * img.min_dim()));
  if (block <= 1) return;
  for (int by = 0; by < img.height; by += block) {
    for (int bx = 0; bx < img.width; bx += block) {
      const int ex = std::min(bx + block, img.width);
      const int ey = std::min(by + block, img.height);
      double acc[3] = {0.0, 0.0, 0.0};
      for (int y = by; y < ey; ++y) {
        for (int x = bx; x < ex; ++x) {
          for (int c = 0; c < 3; ++c) acc[c] += img.pixel(x, y)[c];
        }
      }
      const double count = static_cast<double>((ex - bx) * (ey - by));
      for (int y = by; y < ey; ++y) {
        for (int x = bx; x < ex; ++x) {
          for (int c = 0; c < 3; ++c) img.pixel(x, y)[c] = static_cast<float>(acc[c] / count);
        }
      }
    }
  }
}

// Keeps the top `bits` bits of each 8-bit sample.
void posterize(Raster& img, const Params& p, double severity, Rng&) {
  const int bits = std::max(1, 8 - static_cast<int>(std::lround(severity * (8.0 - p.get("min_bits")))));
  const int mask = (0xFF << (8 - bits)) & 0xFF;
  for (float& v : img.px) {
    const int q = static_cast<int>(std::floor(std::clamp(v, 0.0f, 1.0f) * 255.0f + 0.5f));
    v = static_cast<float>(q & mask) / 255.0f;
  }
}

// Floyd-Steinberg error diffusion to a reduced number of levels per channel.
void dither(Raster& img, const Params& p, double severity, Rng&) {
  const double levels_exp = 8.0 - severity * (8.0 - std::log2(p.get("min_levels")));
  const int levels = std::max(2, static_cast<int>(std::lround(std::exp2(levels_exp))));
  const float steps = static_cast<float>(levels - 1);
  const int w = img.width;
  const int h = img.height;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      for (int c = 0; c < 3; ++c) {
        float& v = img.pixel(x, y)[c];
        const float old = std::clamp(v, 0.0f, 1.0f);
        const float q = std::round(old * steps) / steps;
        const float err = old - q;
        v = q;
        if (x + 1 < w) img.pixel(x + 1, y)[c] += err * (7.0f / 16.0f);
        if (y + 1 < h) {
          if (x > 0) img.pixel(x - 1, y + 1)[c] += err * (3.0f / 16.0f);
          img.pixel(x, y + 1)[c] += err * (5.0f / 16.0f);
          if (x + 1 < w) img.pixel(x + 1, y + 1)[c] += err * (1.0f / 16.0f);
        }
      }
    }
  }
}

// Black rectangular holes. Positions for the maximum hole count are drawn
// up front, so raising severity only adds holes.
void coarse_dropout(Raster& img, const Params& p, double severity, Rng& rng) {
  const int max_holes = static_cast<int>(p.get("max_holes"));
  const int holes = static_cast<int>(std::ceil(severity * max_holes));
  const int size = std::max(1, static_cast<int>(std::lround(p.get("hole_frac") * img.min_dim())));
  std::vector<std::array<int, 2>> origins(static_cast<std::size_t>(max_holes));
  for (auto& o : origins) {
    o[0] = static_cast<int>(rng.below(static_cast<std::uint64_t>(std::max(1, img.width - size + 1))));
    o[1] = static_cast<int>(rng.below(static_cast<std::uint64_t>(std::max(1, img.height - size + 1))));
  }
  for (int i = 0; i < holes; ++i) {
    const auto& o = origins[static_cast<std::size_t>(i)];
    for (int y = o[1]; y < std::min(img.height, o[1] + size); ++y) {
      for (int x = o[0]; x < std::min(img.width, o[0] + size); ++x) std::fill_n(img.pixel(x, y), 3, 0.0f);
    }
  }
}

// Area downsampling followed by bilinear upsampling to the original size.
void downscale(Raster& img, const Params& p, double severity, Rng&) {
  const double factor = 1.0 - severity * (1.0 - p.get("min_scale"));
  const int w = std::max(1, static_cast<int>(std::lround(img.width * factor)));
  const int h = std::max(1, static_cast<int>(std::lround(img.height * factor)));
  if (w == img.width && h == img.height) return;
  img = resize_bilinear(resize_area(img, w, h), img.width, img.height);
}

}  // namespace corrbench::detail
