#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "corrbench/simd/kernels.hpp"

namespace corrbench::simd {

#if defined(CORRBENCH_HAVE_AVX2)
const KernelTable* avx2_table_impl() noexcept;
#endif

namespace {

bool cpu_has_avx2() noexcept {
#if defined(CORRBENCH_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

std::atomic<const KernelTable*>& selected() {
  static std::atomic<const KernelTable*> table{nullptr};
  return table;
}

const KernelTable& table_for(Isa isa) {
  if (isa == Isa::avx2) {
    if (const KernelTable* t = avx2_kernels()) return *t;
    throw std::invalid_argument("AVX2 kernels are not available on this CPU or build");
  }
  return scalar_kernels();
}

}  // namespace

std::string_view to_string(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
  }
  return "unknown";
}

const KernelTable* avx2_kernels() noexcept {
#if defined(CORRBENCH_HAVE_AVX2)
  if (cpu_has_avx2()) return avx2_table_impl();
#endif
  return nullptr;
}

Isa detect_isa() noexcept {
  if (const char* env = std::getenv("CORRBENCH_ISA")) {
    const std::string want(env);
    if (want == "scalar") return Isa::scalar;
    if (want == "avx2" && avx2_kernels() != nullptr) return Isa::avx2;
  }
  return avx2_kernels() != nullptr ? Isa::avx2 : Isa::scalar;
}

const KernelTable& active() noexcept {
  const KernelTable* t = selected().load(std::memory_order_acquire);
  if (t == nullptr) {
    t = detect_isa() == Isa::avx2 ? avx2_kernels() : &scalar_kernels();
    selected().store(t, std::memory_order_release);
  }
  return *t;
}

void set_isa(Isa isa) { selected().store(&table_for(isa), std::memory_order_release); }

Isa active_isa() noexcept { return active().isa; }

namespace {
void require_same(std::size_t a, std::size_t b) {
  if (a != b) throw std::invalid_argument("simd: span length mismatch");
}
}  // namespace

void u8_to_unit(std::span<const std::uint8_t> src, std::span<float> dst) {
  require_same(src.size(), dst.size());
  active().u8_to_unit(src.data(), dst.data(), src.size());
}

void unit_to_u8(std::span<const float> src, std::span<std::uint8_t> dst) {
  require_same(src.size(), dst.size());
  active().unit_to_u8(src.data(), dst.data(), src.size());
}

void affine(std::span<float> x, float scale, float offset) {
  active().affine(x.data(), scale, offset, x.size());
}

void lerp(std::span<float> dst, std::span<const float> src, float t) {
  require_same(src.size(), dst.size());
  active().lerp(dst.data(), src.data(), t, dst.size());
}

void add_scaled(std::span<float> dst, std::span<const float> src, float s) {
  require_same(src.size(), dst.size());
  active().add_scaled(dst.data(), src.data(), s, dst.size());
}

void multiply(std::span<float> dst, std::span<const float> src) {
  require_same(src.size(), dst.size());
  active().multiply(dst.data(), src.data(), dst.size());
}

void clamp_unit(std::span<float> x) { active().clamp_unit(x.data(), x.size()); }

double sum(std::span<const double> x) { return active().sum(x.data(), x.size()); }

double squared_distance(std::span<const double> a, std::span<const double> b) {
  require_same(a.size(), b.size());
  return active().squared_distance(a.data(), b.data(), a.size());
}

CenteredMoments centered_moments(std::span<const double> x, std::span<const double> y, double mean_x,
                                 double mean_y) {
  require_same(x.size(), y.size());
  return active().centered_moments(x.data(), y.data(), mean_x, mean_y, x.size());
}

}  // namespace corrbench::simd
