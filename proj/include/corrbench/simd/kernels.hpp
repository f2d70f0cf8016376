#pragma once
// Data-parallel inner loops, one table per instruction set.
//
// Elementwise float kernels produce bit-identical results on every ISA
// (same operation order, no fused multiply-add). Double reductions use
// several accumulators in the vector variants and agree with the scalar
// reference to rounding error only.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace corrbench::simd {

enum class Isa { scalar, avx2 };

std::string_view to_string(Isa isa) noexcept;

struct CenteredMoments {
  double sxx = 0.0;
  double syy = 0.0;
  double sxy = 0.0;
};

struct KernelTable {
  Isa isa;
  // dst[i] = src[i] / 255
  void (*u8_to_unit)(const std::uint8_t* src, float* dst, std::size_t n);
  // dst[i] = floor(clamp(src[i], 0, 1) * 255 + 0.5)
  void (*unit_to_u8)(const float* src, std::uint8_t* dst, std::size_t n);
  // x[i] = x[i] * scale + offset
  void (*affine)(float* x, float scale, float offset, std::size_t n);
  // dst[i] = dst[i] + (src[i] - dst[i]) * t
  void (*lerp)(float* dst, const float* src, float t, std::size_t n);
  // dst[i] = dst[i] + src[i] * s
  void (*add_scaled)(float* dst, const float* src, float s, std::size_t n);
  // dst[i] = dst[i] * src[i]
  void (*multiply)(float* dst, const float* src, std::size_t n);
  // x[i] = clamp(x[i], 0, 1)
  void (*clamp_unit)(float* x, std::size_t n);

  double (*sum)(const double* x, std::size_t n);
  double (*squared_distance)(const double* a, const double* b, std::size_t n);
  CenteredMoments (*centered_moments)(const double* x, const double* y, double mean_x, double mean_y,
                                      std::size_t n);
};

/// Scalar reference table; always available.
const KernelTable& scalar_kernels() noexcept;

/// AVX2 table, or nullptr when the build or the CPU lacks AVX2.
const KernelTable* avx2_kernels() noexcept;

/// Best ISA supported by the running CPU. Honors CORRBENCH_ISA=scalar|avx2
/// when set to a supported value.
Isa detect_isa() noexcept;

/// Table for the currently selected ISA (detect_isa() until set_isa is called).
const KernelTable& active() noexcept;

/// Select an ISA for the whole process. Throws std::invalid_argument if the
/// CPU or the build does not support it.
void set_isa(Isa isa);

Isa active_isa() noexcept;

// Span front-ends over active().

void u8_to_unit(std::span<const std::uint8_t> src, std::span<float> dst);
void unit_to_u8(std::span<const float> src, std::span<std::uint8_t> dst);
void affine(std::span<float> x, float scale, float offset);
void lerp(std::span<float> dst, std::span<const float> src, float t);
void add_scaled(std::span<float> dst, std::span<const float> src, float s);
void multiply(std::span<float> dst, std::span<const float> src);
void clamp_unit(std::span<float> x);
double sum(std::span<const double> x);
double squared_distance(std::span<const double> a, std::span<const double> b);
CenteredMoments centered_moments(std::span<const double> x, std::span<const double> y, double mean_x,
                                 double mean_y);

}  // namespace corrbench::simd
