#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <vector>

namespace corrbench {

/// 8-bit RGB raster, row-major, channels interleaved.
struct Image {
  static constexpr int kChannels = 3;

  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> data;

  Image() = default;
  Image(int w, int h);
  Image(int w, int h, std::vector<std::uint8_t> samples);

  std::size_t sample_count() const noexcept {
    return static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * kChannels;
  }

  std::uint8_t& at(int x, int y, int c) { return data[index(x, y, c)]; }
  std::uint8_t at(int x, int y, int c) const { return data[index(x, y, c)]; }

  /// Throws Error(InvalidImage) unless dimensions are positive and the
  /// buffer holds exactly width * height * 3 samples.
  void validate() const;

  friend bool operator==(const Image&, const Image&) = default;

 private:
  std::size_t index(int x, int y, int c) const noexcept {
    return (static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x)) *
               kChannels +
           static_cast<std::size_t>(c);
  }
};

namespace image_io {

/// Quality used for every JPEG this library writes.
inline constexpr int kJpegQuality = 95;

enum class Format { png, jpeg };

/// Reads a PNG or JPEG file into RGB. Grayscale is expanded, alpha is
/// composited over black. The format is sniffed from the file contents.
Image read(const std::filesystem::path& path);

/// Writes PNG or JPEG depending on the extension (.png, .jpg, .jpeg).
void write(const Image& image, const std::filesystem::path& path);

/// Format implied by a file extension, case-insensitive. Throws
/// Error(UnsupportedFormat) for anything else.
Format format_for(const std::filesystem::path& path);

bool is_supported_extension(const std::filesystem::path& path);

}  // namespace image_io
}  // namespace corrbench
