#include <doctest.h>

#include <cmath>
#include <map>
#include <random>
#include <set>

#include "corrbench/corruptions.hpp"
#include "corrbench/error.hpp"
#include "oracles.hpp"

using namespace corrbench;

namespace {

CorruptionSpec at_severity(std::string_view id, double severity) {
  CorruptionSpec spec = find_corruption(id);
  spec.severity = severity;
  return spec;
}

double mean(const Image& img) {
  double s = 0;
  for (auto v : img.data) s += v;
  return s / img.data.size();
}

double variance(const Image& img) {
  const double m = mean(img);
  double s = 0;
  for (auto v : img.data) s += (v - m) * (v - m);
  return s / img.data.size();
}

double mean_abs_diff(const Image& a, const Image& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.data.size(); ++i) s += std::abs(int(a.data[i]) - int(b.data[i]));
  return s / a.data.size();
}

// Texture centered on mid-gray.
Image mid_gray_texture() {
  Image img(32, 32);
  for (int y = 0; y < 32; ++y)
    for (int x = 0; x < 32; ++x)
      for (int c = 0; c < 3; ++c) img.at(x, y, c) = static_cast<std::uint8_t>(128 + ((x + y) % 2 ? 40 : -40));
  return img;
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::InconsistentInput;
}

}  // namespace

TEST_SUITE("corruptions") {

TEST_CASE("roster holds 40 distinct corruptions across six families") {
  const Roster& roster = list_corruptions();
  REQUIRE(roster.size() == 40);
  std::set<std::string> ids;
  std::map<Family, int> families;
  for (const auto& spec : roster) {
    ids.insert(spec.id);
    ++families[spec.family_hint];
    CHECK(spec.severity > 0.0);
    CHECK(spec.severity <= 1.0);
  }
  CHECK(ids.size() == 40);
  CHECK(families.size() == 6);
  CHECK(roster.front().id == "gaussian_noise");
  CHECK(roster.back().id == "sepia");
}

TEST_CASE("severity 0 is the identity for every kernel") {
  for (const Image& img : oracle::fixture_images()) {
    for (const auto& spec : list_corruptions()) {
      INFO(spec.id);
      CHECK(apply_corruption(img, at_severity(spec.id, 0.0), 99) == img);
    }
  }
}

TEST_CASE("kernels are deterministic and shape preserving") {
  for (const Image& img : oracle::fixture_images()) {
    for (const auto& spec : list_corruptions()) {
      INFO(spec.id, " ", img.width, "x", img.height);
      const Image a = apply_corruption(img, spec, 5);
      const Image b = apply_corruption(img, spec, 5);
      CHECK(a == b);
      CHECK(a.width == img.width);
      CHECK(a.height == img.height);
      CHECK(a.data.size() == img.data.size());
    }
  }
}

TEST_CASE("stochastic kernels depend on the seed") {
  const Image img = oracle::fixture_images()[0];
  for (const char* id : {"gaussian_noise", "shot_noise", "salt_and_pepper", "elastic_transform", "coarse_dropout"}) {
    INFO(id);
    CHECK(apply_corruption(img, find_corruption(id), 1) != apply_corruption(img, find_corruption(id), 2));
  }
}

TEST_CASE("noise strength grows with severity") {
  const Image img = mid_gray_texture();
  const double lo = mean_abs_diff(img, apply_corruption(img, at_severity("gaussian_noise", 0.2), 3));
  const double mid = mean_abs_diff(img, apply_corruption(img, at_severity("gaussian_noise", 0.5), 3));
  const double hi = mean_abs_diff(img, apply_corruption(img, at_severity("gaussian_noise", 1.0), 3));
  CHECK(lo < mid);
  CHECK(mid < hi);
}

TEST_CASE("lighting kernels move brightness and contrast the right way") {
  const Image img = mid_gray_texture();
  CHECK(mean(apply_corruption(img, find_corruption("brightness_increase"), 0)) > mean(img));
  CHECK(mean(apply_corruption(img, find_corruption("brightness_decrease"), 0)) < mean(img));
  CHECK(variance(apply_corruption(img, find_corruption("contrast_decrease"), 0)) < variance(img));
  CHECK(variance(apply_corruption(img, find_corruption("contrast_increase"), 0)) > variance(img));
}

TEST_CASE("blur lowers the variance of pixel noise") {
  Image img(32, 32);
  std::mt19937 gen(11);
  for (auto& v : img.data) v = static_cast<std::uint8_t>(gen() % 256);
  for (std::string id : {"gaussian_blur", "defocus_blur", "motion_blur", "median_blur"}) {
    INFO(id);
    CHECK(variance(apply_corruption(img, at_severity(id, 1.0), 0)) < variance(img));
  }
}

TEST_CASE("color kernels at full severity") {
  const Image img = oracle::fixture_images()[0];
  const Image gray = apply_corruption(img, at_severity("grayscale", 1.0), 0);
  for (int y = 0; y < gray.height; ++y)
    for (int x = 0; x < gray.width; ++x) {
      CHECK(gray.at(x, y, 0) == gray.at(x, y, 1));
      CHECK(gray.at(x, y, 1) == gray.at(x, y, 2));
    }
  const Image inv = apply_corruption(img, at_severity("invert", 1.0), 0);
  for (std::size_t i = 0; i < img.data.size(); ++i) CHECK(int(inv.data[i]) == 255 - int(img.data[i]));
  CHECK(apply_corruption(inv, at_severity("invert", 1.0), 0) == img);
}

TEST_CASE("argument errors") {
  const Image img = oracle::fixture_images()[3];
  CHECK(code_of([&] { find_corruption("fog"); }) == ErrorCode::UnknownCorruption);
  CHECK(code_of([&] { apply_corruption(img, at_severity("gamma", 1.5), 0); }) == ErrorCode::InvalidSeverity);
  CHECK(code_of([&] { apply_corruption(img, at_severity("gamma", -0.1), 0); }) == ErrorCode::InvalidSeverity);
  CorruptionSpec spec = find_corruption("gamma");
  spec.params["bogus"] = 1.0;
  CHECK(code_of([&] { apply_corruption(img, spec, 0); }) == ErrorCode::InvalidConfig);
  CHECK(code_of([&] { apply_corruption(Image{}, find_corruption("gamma"), 0); }) == ErrorCode::InvalidImage);
}

TEST_CASE("derive_seed matches an independent FNV-1a and SplitMix64 computation") {
  CHECK(derive_seed(0, "gaussian_noise", "a.png") == 5639821486095215253ULL);
  CHECK(derive_seed(123456789, "motion_blur", "dir/img_01.jpg") == 8135467177219204640ULL);
  CHECK(derive_seed(1, "a", "bc") != derive_seed(1, "ab", "c"));
}

}
