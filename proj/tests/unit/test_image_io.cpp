#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <string>

#include "corrbench/error.hpp"
#include "corrbench/image.hpp"
#include "oracles.hpp"

using namespace corrbench;
namespace fs = std::filesystem;

namespace {

// 2x2 RGB PNG: red, green / blue, (10, 20, 30).
constexpr const char* kRgbPng =
    "89504e470d0a1a0a0000000d4948445200000002000000020802000000fdd49a730000001649444154789c63f8cfc0c0f09f818181e13f"
    "97881c001a58033a82e0ab530000000049454e44ae426082";
// 2x1 gray+alpha PNG: (100, opaque), (200, alpha 128).
constexpr const char* kGrayAlphaPng =
    "89504e470d0a1a0a0000000d49484452000000020000000108040000005e2bb7010000000d49444154789c6348f97fa2010006a202acc902"
    "256f0000000049454e44ae426082";

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "corrbench_image_io";
  fs::create_directories(dir);
  return dir / name;
}

void write_bytes(const fs::path& p, const std::string& bytes) { std::ofstream(p, std::ios::binary) << bytes; }

std::string from_hex(const std::string& hex) {
  std::string out;
  for (std::size_t i = 0; i < hex.size(); i += 2) out.push_back(static_cast<char>(std::stoi(hex.substr(i, 2), nullptr, 16)));
  return out;
}

}  // namespace

TEST_SUITE("image_io") {

TEST_CASE("decodes an RGB PNG") {
  const fs::path p = scratch("rgb.png");
  write_bytes(p, from_hex(kRgbPng));
  const Image img = image_io::read(p);
  REQUIRE(img.width == 2);
  REQUIRE(img.height == 2);
  CHECK(img.data == std::vector<std::uint8_t>{255, 0, 0, 0, 255, 0, 0, 0, 255, 10, 20, 30});
}

TEST_CASE("expands gray and composites alpha over black") {
  const fs::path p = scratch("la.png");
  write_bytes(p, from_hex(kGrayAlphaPng));
  const Image img = image_io::read(p);
  REQUIRE(img.width == 2);
  CHECK(img.at(0, 0, 0) == 100);
  CHECK(img.at(0, 0, 2) == 100);
  CHECK(img.at(1, 0, 0) < 200);
  CHECK(img.at(1, 0, 0) == img.at(1, 0, 1));
}

TEST_CASE("PNG round trip is lossless") {
  for (const Image& img : oracle::fixture_images()) {
    const fs::path p = scratch("rt.png");
    image_io::write(img, p);
    CHECK(image_io::read(p) == img);
  }
}

TEST_CASE("JPEG round trip keeps shape and stays close") {
  const Image img = oracle::fixture_images()[0];
  const fs::path p = scratch("rt.jpg");
  image_io::write(img, p);
  const Image back = image_io::read(p);
  REQUIRE(back.width == img.width);
  REQUIRE(back.height == img.height);
  double err = 0;
  for (std::size_t i = 0; i < img.data.size(); ++i) err += std::abs(int(img.data[i]) - int(back.data[i]));
  CHECK(err / img.data.size() < 12.0);
}

TEST_CASE("format errors") {
  const fs::path junk = scratch("junk.png");
  write_bytes(junk, "not an image at all");
  CHECK_THROWS_AS(image_io::read(junk), Error);
  try {
    image_io::read(junk);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DecodeError);
  }

  const fs::path bmp = scratch("x.png");
  write_bytes(bmp, std::string("BM") + std::string(60, '\0'));
  try {
    image_io::read(bmp);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnsupportedFormat);
  }

  const fs::path truncated = scratch("trunc.png");
  write_bytes(truncated, from_hex(kRgbPng).substr(0, 40));
  CHECK_THROWS_AS(image_io::read(truncated), Error);

  CHECK_THROWS_AS(image_io::format_for("a.gif"), Error);
  CHECK(image_io::format_for("A.JPEG") == image_io::Format::jpeg);
  CHECK_THROWS_AS(image_io::read(scratch("missing.png").string() + ".none"), Error);
}

TEST_CASE("invalid image buffers are rejected") {
  CHECK_THROWS_AS(Image(0, 3), Error);
  Image img(2, 2);
  img.data.pop_back();
  CHECK_THROWS_AS(img.validate(), Error);
}

}
