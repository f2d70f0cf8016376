#include <png.h>
// jpeglib.h needs stdio declarations first.
#include <cstdio>
#include <jpeglib.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <csetjmp>
#include <cstring>
#include <fstream>
#include <string>

#include "corrbench/error.hpp"
#include "corrbench/image.hpp"

namespace corrbench {

Image::Image(int w, int h) : width(w), height(h) {
  if (w <= 0 || h <= 0) throw Error(ErrorCode::InvalidImage, "dimensions must be positive");
  data.assign(sample_count(), 0);
}

Image::Image(int w, int h, std::vector<std::uint8_t> samples) : width(w), height(h), data(std::move(samples)) {
  validate();
}

void Image::validate() const {
  if (width <= 0 || height <= 0) throw Error(ErrorCode::InvalidImage, "dimensions must be positive");
  if (data.size() != sample_count()) {
    throw Error(ErrorCode::InvalidImage, "expected " + std::to_string(sample_count()) + " samples, got " +
                                             std::to_string(data.size()));
  }
}

namespace image_io {
namespace {

std::string lower_extension(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext;
}

std::vector<unsigned char> slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

bool starts_with(const std::vector<unsigned char>& bytes, std::initializer_list<unsigned char> magic) {
  return bytes.size() >= magic.size() && std::equal(magic.begin(), magic.end(), bytes.begin());
}

bool is_other_image_format(const std::vector<unsigned char>& b) {
  return starts_with(b, {'B', 'M'}) || starts_with(b, {'G', 'I', 'F', '8'}) ||
         starts_with(b, {'I', 'I', 0x2A, 0x00}) || starts_with(b, {'M', 'M', 0x00, 0x2A}) ||
         (starts_with(b, {'R', 'I', 'F', 'F'}) && b.size() >= 12 && std::memcmp(b.data() + 8, "WEBP", 4) == 0);
}

Image decode_png(const std::vector<unsigned char>& bytes, const std::filesystem::path& path) {
  png_image png{};
  png.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&png, bytes.data(), bytes.size())) {
    throw Error(ErrorCode::DecodeError, path.string() + ": " + png.message);
  }
  png.format = PNG_FORMAT_RGB;
  if (png.width == 0 || png.height == 0 || png.width > 1u << 15 || png.height > 1u << 15) {
    png_image_free(&png);
    throw Error(ErrorCode::DecodeError, path.string() + ": unsupported dimensions");
  }
  Image img(static_cast<int>(png.width), static_cast<int>(png.height));
  const png_color black{0, 0, 0};
  if (!png_image_finish_read(&png, &black, img.data.data(), 0, nullptr)) {
    throw Error(ErrorCode::DecodeError, path.string() + ": " + png.message);
  }
  return img;
}

struct JpegErrorManager {
  jpeg_error_mgr base;
  std::jmp_buf jump;
  char message[JMSG_LENGTH_MAX];
};

void jpeg_error_exit(j_common_ptr cinfo) {
  auto* err = reinterpret_cast<JpegErrorManager*>(cinfo->err);
  (*cinfo->err->format_message)(cinfo, err->message);
  std::longjmp(err->jump, 1);
}

// Only trivially destructible locals between setjmp and longjmp; the output
// buffer is owned by the caller.
bool run_jpeg_decode(jpeg_decompress_struct* cinfo, JpegErrorManager* err, const std::vector<unsigned char>& bytes,
                     std::vector<std::uint8_t>* out, int* width, int* height) {
  if (setjmp(err->jump)) return false;
  jpeg_create_decompress(cinfo);
  jpeg_mem_src(cinfo, bytes.data(), static_cast<unsigned long>(bytes.size()));
  jpeg_read_header(cinfo, TRUE);
  cinfo->out_color_space = JCS_RGB;
  cinfo->dct_method = JDCT_ISLOW;
  jpeg_start_decompress(cinfo);
  *width = static_cast<int>(cinfo->output_width);
  *height = static_cast<int>(cinfo->output_height);
  const std::size_t stride = static_cast<std::size_t>(*width) * Image::kChannels;
  out->resize(stride * static_cast<std::size_t>(*height));
  while (cinfo->output_scanline < cinfo->output_height) {
    JSAMPROW row = out->data() + static_cast<std::size_t>(cinfo->output_scanline) * stride;
    jpeg_read_scanlines(cinfo, &row, 1);
  }
  jpeg_finish_decompress(cinfo);
  return true;
}

Image decode_jpeg(const std::vector<unsigned char>& bytes, const std::filesystem::path& path) {
  jpeg_decompress_struct cinfo{};
  JpegErrorManager err{};
  cinfo.err = jpeg_std_error(&err.base);
  err.base.error_exit = jpeg_error_exit;
  std::vector<std::uint8_t> samples;
  int width = 0;
  int height = 0;
  const bool ok = run_jpeg_decode(&cinfo, &err, bytes, &samples, &width, &height);
  jpeg_destroy_decompress(&cinfo);
  if (!ok) throw Error(ErrorCode::DecodeError, path.string() + ": " + err.message);
  return Image(width, height, std::move(samples));
}

void encode_png(const Image& image, const std::filesystem::path& path) {
  png_image png{};
  png.version = PNG_IMAGE_VERSION;
  png.width = static_cast<png_uint_32>(image.width);
  png.height = static_cast<png_uint_32>(image.height);
  png.format = PNG_FORMAT_RGB;
  if (!png_image_write_to_file(&png, path.c_str(), 0, image.data.data(), 0, nullptr)) {
    throw Error(ErrorCode::IoError, path.string() + ": " + png.message);
  }
}

void encode_jpeg(const Image& image, const std::filesystem::path& path) {
  std::FILE* file = std::fopen(path.c_str(), "wb");
  if (file == nullptr) throw Error(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
  jpeg_compress_struct cinfo{};
  JpegErrorManager err{};
  cinfo.err = jpeg_std_error(&err.base);
  err.base.error_exit = jpeg_error_exit;
  if (setjmp(err.jump)) {
    jpeg_destroy_compress(&cinfo);
    std::fclose(file);
    throw Error(ErrorCode::IoError, path.string() + ": " + err.message);
  }
  jpeg_create_compress(&cinfo);
  jpeg_stdio_dest(&cinfo, file);
  cinfo.image_width = static_cast<JDIMENSION>(image.width);
  cinfo.image_height = static_cast<JDIMENSION>(image.height);
  cinfo.input_components = Image::kChannels;
  cinfo.in_color_space = JCS_RGB;
  jpeg_set_defaults(&cinfo);
  cinfo.dct_method = JDCT_ISLOW;
  jpeg_set_quality(&cinfo, kJpegQuality, TRUE);
  jpeg_start_compress(&cinfo, TRUE);
  const std::size_t stride = static_cast<std::size_t>(image.width) * Image::kChannels;
  while (cinfo.next_scanline < cinfo.image_height) {
    auto* row = const_cast<JSAMPROW>(image.data.data() + static_cast<std::size_t>(cinfo.next_scanline) * stride);
    jpeg_write_scanlines(&cinfo, &row, 1);
  }
  jpeg_finish_compress(&cinfo);
  jpeg_destroy_compress(&cinfo);
  std::fclose(file);
}

}  // namespace

bool is_supported_extension(const std::filesystem::path& path) {
  const std::string ext = lower_extension(path);
  return ext == ".png" || ext == ".jpg" || ext == ".jpeg";
}

Format format_for(const std::filesystem::path& path) {
  const std::string ext = lower_extension(path);
  if (ext == ".png") return Format::png;
  if (ext == ".jpg" || ext == ".jpeg") return Format::jpeg;
  throw Error(ErrorCode::UnsupportedFormat, path.string() + ": extension '" + ext + "' is not PNG or JPEG");
}

Image read(const std::filesystem::path& path) {
  const std::vector<unsigned char> bytes = slurp(path);
  if (starts_with(bytes, {0x89, 'P', 'N', 'G', 0x0D, 0x0A, 0x1A, 0x0A})) return decode_png(bytes, path);
  if (starts_with(bytes, {0xFF, 0xD8, 0xFF})) return decode_jpeg(bytes, path);
  if (is_other_image_format(bytes)) {
    throw Error(ErrorCode::UnsupportedFormat, path.string() + ": only PNG and JPEG are supported");
  }
  throw Error(ErrorCode::DecodeError, path.string() + ": not a PNG or JPEG stream");
}

void write(const Image& image, const std::filesystem::path& path) {
  image.validate();
  switch (format_for(path)) {
    case Format::png: encode_png(image, path); break;
    case Format::jpeg: encode_jpeg(image, path); break;
  }
}

}  // namespace image_io
}  // namespace corrbench
