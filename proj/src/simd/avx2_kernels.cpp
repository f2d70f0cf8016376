// Compiled with -mavx2 (and without -mfma). Only reached after a runtime
// CPU check in dispatch.cpp.

#include "corrbench/simd/kernels.hpp"

#include <immintrin.h>

#include <algorithm>
#include <cmath>
#include <cstring>

namespace corrbench::simd {
namespace {

// Operand order of max/min matches the scalar std::max/std::min expressions
// exactly, including for signed zeros and NaN.
inline __m256 clamp01(__m256 v) {
  const __m256 zero = _mm256_setzero_ps();
  const __m256 one = _mm256_set1_ps(1.0f);
  return _mm256_min_ps(one, _mm256_max_ps(zero, v));
}

void u8_to_unit(const std::uint8_t* src, float* dst, std::size_t n) {
  const __m256 denom = _mm256_set1_ps(255.0f);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m128i bytes = _mm_loadl_epi64(reinterpret_cast<const __m128i*>(src + i));
    const __m256 f = _mm256_cvtepi32_ps(_mm256_cvtepu8_epi32(bytes));
    _mm256_storeu_ps(dst + i, _mm256_div_ps(f, denom));
  }
  for (; i < n; ++i) dst[i] = static_cast<float>(src[i]) / 255.0f;
}

void unit_to_u8(const float* src, std::uint8_t* dst, std::size_t n) {
  const __m256 scale = _mm256_set1_ps(255.0f);
  const __m256 half = _mm256_set1_ps(0.5f);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256 v = clamp01(_mm256_loadu_ps(src + i));
    v = _mm256_floor_ps(_mm256_add_ps(_mm256_mul_ps(v, scale), half));
    const __m256i q = _mm256_cvttps_epi32(v);
    const __m128i lo = _mm256_castsi256_si128(q);
    const __m128i hi = _mm256_extracti128_si256(q, 1);
    const __m128i words = _mm_packus_epi32(lo, hi);
    const __m128i bytes = _mm_packus_epi16(words, words);
    _mm_storel_epi64(reinterpret_cast<__m128i*>(dst + i), bytes);
  }
  for (; i < n; ++i) {
    const float v = std::min(std::max(src[i], 0.0f), 1.0f) * 255.0f + 0.5f;
    dst[i] = static_cast<std::uint8_t>(std::floor(v));
  }
}

void affine(float* x, float scale, float offset, std::size_t n) {
  const __m256 s = _mm256_set1_ps(scale);
  const __m256 o = _mm256_set1_ps(offset);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    _mm256_storeu_ps(x + i, _mm256_add_ps(_mm256_mul_ps(_mm256_loadu_ps(x + i), s), o));
  }
  for (; i < n; ++i) x[i] = x[i] * scale + offset;
}

void lerp(float* dst, const float* src, float t, std::size_t n) {
  const __m256 tv = _mm256_set1_ps(t);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256 d = _mm256_loadu_ps(dst + i);
    const __m256 s = _mm256_loadu_ps(src + i);
    _mm256_storeu_ps(dst + i, _mm256_add_ps(d, _mm256_mul_ps(_mm256_sub_ps(s, d), tv)));
  }
  for (; i < n; ++i) dst[i] = dst[i] + (src[i] - dst[i]) * t;
}

void add_scaled(float* dst, const float* src, float s, std::size_t n) {
  const __m256 sv = _mm256_set1_ps(s);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256 d = _mm256_loadu_ps(dst + i);
    _mm256_storeu_ps(dst + i, _mm256_add_ps(d, _mm256_mul_ps(_mm256_loadu_ps(src + i), sv)));
  }
  for (; i < n; ++i) dst[i] = dst[i] + src[i] * s;
}

void multiply(float* dst, const float* src, std::size_t n) {
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    _mm256_storeu_ps(dst + i, _mm256_mul_ps(_mm256_loadu_ps(dst + i), _mm256_loadu_ps(src + i)));
  }
  for (; i < n; ++i) dst[i] = dst[i] * src[i];
}

void clamp_unit(float* x, std::size_t n) {
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) _mm256_storeu_ps(x + i, clamp01(_mm256_loadu_ps(x + i)));
  for (; i < n; ++i) x[i] = std::min(std::max(x[i], 0.0f), 1.0f);
}

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

double sum(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
  double total = hsum(acc);
  for (; i < n; ++i) total += x[i];
  return total;
}

double squared_distance(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc = _mm256_add_pd(acc, _mm256_mul_pd(d, d));
  }
  double total = hsum(acc);
  for (; i < n; ++i) {
    const double d = a[i] - b[i];
    total += d * d;
  }
  return total;
}

CenteredMoments centered_moments(const double* x, const double* y, double mean_x, double mean_y,
                                 std::size_t n) {
  const __m256d mx = _mm256_set1_pd(mean_x);
  const __m256d my = _mm256_set1_pd(mean_y);
  __m256d sxx = _mm256_setzero_pd();
  __m256d syy = _mm256_setzero_pd();
  __m256d sxy = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(x + i), mx);
    const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(y + i), my);
    sxx = _mm256_add_pd(sxx, _mm256_mul_pd(dx, dx));
    syy = _mm256_add_pd(syy, _mm256_mul_pd(dy, dy));
    sxy = _mm256_add_pd(sxy, _mm256_mul_pd(dx, dy));
  }
  CenteredMoments m{hsum(sxx), hsum(syy), hsum(sxy)};
  for (; i < n; ++i) {
    const double dx = x[i] - mean_x;
    const double dy = y[i] - mean_y;
    m.sxx += dx * dx;
    m.syy += dy * dy;
    m.sxy += dx * dy;
  }
  return m;
}

constexpr KernelTable kAvx2{
    Isa::avx2, u8_to_unit, unit_to_u8, affine,           lerp, add_scaled, multiply, clamp_unit,
    sum,       squared_distance,        centered_moments,
};

}  // namespace

const KernelTable* avx2_table_impl() noexcept { return &kAvx2; }

}  // namespace corrbench::simd
