#include "corrbench/simd/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace corrbench::simd {
namespace {

void u8_to_unit(const std::uint8_t* src, float* dst, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] = static_cast<float>(src[i]) / 255.0f;
}

void unit_to_u8(const float* src, std::uint8_t* dst, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const float v = std::min(std::max(src[i], 0.0f), 1.0f) * 255.0f + 0.5f;
    dst[i] = static_cast<std::uint8_t>(std::floor(v));
  }
}

void affine(float* x, float scale, float offset, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] = x[i] * scale + offset;
}

void lerp(float* dst, const float* src, float t, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] = dst[i] + (src[i] - dst[i]) * t;
}

void add_scaled(float* dst, const float* src, float s, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] = dst[i] + src[i] * s;
}

void multiply(float* dst, const float* src, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] = dst[i] * src[i];
}

void clamp_unit(float* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] = std::min(std::max(x[i], 0.0f), 1.0f);
}

double sum(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i];
  return acc;
}

double squared_distance(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

CenteredMoments centered_moments(const double* x, const double* y, double mean_x, double mean_y,
                                 std::size_t n) {
  CenteredMoments m;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mean_x;
    const double dy = y[i] - mean_y;
    m.sxx += dx * dx;
    m.syy += dy * dy;
    m.sxy += dx * dy;
  }
  return m;
}

constexpr KernelTable kScalar{
    Isa::scalar, u8_to_unit, unit_to_u8, affine,           lerp, add_scaled, multiply, clamp_unit,
    sum,         squared_distance,        centered_moments,
};

}  // namespace

const KernelTable& scalar_kernels() noexcept { return kScalar; }

}  // namespace corrbench::simd
