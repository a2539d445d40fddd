#include "tnfin/image.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <memory>

#include <jpeglib.h>

#include "tnfin/errors.hpp"

namespace tnfin::glcm {

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const std::filesystem::path& path, const char* mode) {
  FilePtr file(std::fopen(path.c_str(), mode));
  if (!file) {
    throw DataError("cannot open image file: " + path.string());
  }
  return file;
}

RawImage load_png(const std::filesystem::path& path, std::FILE* file) {
  png_structp png =
      png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw DataError("png reader setup failed for: " + path.string());
  }
  RawImage image;
  std::vector<png_bytep> rows;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw DataError("undecodable png file: " + path.string());
  }
  png_init_io(png, file);
  png_read_info(png, info);

  // Normalize everything to 8-bit gray or RGB.
  png_set_strip_16(png);
  png_set_packing(png);
  const png_byte color = png_get_color_type(png, info);
  if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color == PNG_COLOR_TYPE_GRAY && png_get_bit_depth(png, info) < 8) {
    png_set_expand_gray_1_2_4_to_8(png);
  }
  png_set_strip_alpha(png);
  png_read_update_info(png, info);

  image.width = png_get_image_width(png, info);
  image.height = png_get_image_height(png, info);
  image.channels = png_get_channels(png, info);
  image.pixels.resize(image.width * image.height * image.channels);
  rows.resize(image.height);
  for (std::size_t r = 0; r < image.height; ++r) {
    rows[r] = image.pixels.data() + r * image.width * image.channels;
  }
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return image;
}

struct JpegErrorHandler {
  jpeg_error_mgr mgr;
  std::jmp_buf jump;
};

void jpeg_error_exit(j_common_ptr cinfo) {
  auto* handler = reinterpret_cast<JpegErrorHandler*>(cinfo->err);
  std::longjmp(handler->jump, 1);
}

RawImage load_jpeg(const std::filesystem::path& path, std::FILE* file) {
  jpeg_decompress_struct cinfo{};
  JpegErrorHandler handler{};
  cinfo.err = jpeg_std_error(&handler.mgr);
  handler.mgr.error_exit = jpeg_error_exit;
  if (setjmp(handler.jump)) {
    jpeg_destroy_decompress(&cinfo);
    throw DataError("undecodable jpeg file: " + path.string());
  }
  jpeg_create_decompress(&cinfo);
  jpeg_stdio_src(&cinfo, file);
  jpeg_read_header(&cinfo, TRUE);
  jpeg_start_decompress(&cinfo);

  RawImage image;
  image.width = cinfo.output_width;
  image.height = cinfo.output_height;
  image.channels = cinfo.output_components;
  image.pixels.resize(image.width * image.height * image.channels);
  const std::size_t stride = image.width * image.channels;
  while (cinfo.output_scanline < cinfo.output_height) {
    JSAMPROW row = image.pixels.data() + cinfo.output_scanline * stride;
    jpeg_read_scanlines(&cinfo, &row, 1);
  }
  jpeg_finish_decompress(&cinfo);
  jpeg_destroy_decompress(&cinfo);
  return image;
}

}  // namespace

RawImage load_image(const std::filesystem::path& path) {
  FilePtr file = open_file(path, "rb");
  unsigned char magic[4] = {0, 0, 0, 0};
  const std::size_t got = std::fread(magic, 1, sizeof magic, file.get());
  std::rewind(file.get());
  if (got >= 4 && magic[0] == 0x89 && magic[1] == 'P' && magic[2] == 'N' &&
      magic[3] == 'G') {
    return load_png(path, file.get());
  }
  if (got >= 3 && magic[0] == 0xFF && magic[1] == 0xD8 && magic[2] == 0xFF) {
    return load_jpeg(path, file.get());
  }
  throw DataError("unsupported image format (not png/jpeg): " + path.string());
}

void write_png(const std::filesystem::path& path, const RawImage& image) {
  if (image.channels != 1 && image.channels != 3) {
    throw ConfigError("write_png: only gray or RGB images supported");
  }
  if (image.pixels.size() != image.width * image.height * image.channels) {
    throw ConfigError("write_png: pixel buffer size mismatch");
  }
  FilePtr file = open_file(path, "wb");
  png_structp png =
      png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_write_struct(&png, &info);
    throw DataError("png writer setup failed for: " + path.string());
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw DataError("png write failed: " + path.string());
  }
  png_init_io(png, file.get());
  png_set_IHDR(png, info, static_cast<png_uint_32>(image.width),
               static_cast<png_uint_32>(image.height), 8,
               image.channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  const std::size_t stride = image.width * image.channels;
  for (std::size_t r = 0; r < image.height; ++r) {
    png_write_row(png, const_cast<png_bytep>(image.pixels.data() + r * stride));
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

GrayImage preprocess(const RawImage& image, const PreprocessOptions& options) {
  if (image.width == 0 || image.height == 0 || image.pixels.empty()) {
    throw DataError("preprocess: empty image");
  }
  if (options.side == 0 || options.levels < 2 || options.levels > 256) {
    throw ConfigError("preprocess: side must be > 0 and levels in [2, 256]");
  }

  // Channel-average grayscale.
  std::vector<double> gray(image.width * image.height);
  for (std::size_t r = 0; r < image.height; ++r) {
    for (std::size_t c = 0; c < image.width; ++c) {
      double sum = 0.0;
      for (std::size_t ch = 0; ch < image.channels; ++ch) {
        sum += image.at(r, c, ch);
      }
      gray[r * image.width + c] = sum / static_cast<double>(image.channels);
    }
  }

  // Bilinear resize with pixel-center sampling.
  const std::size_t side = options.side;
  std::vector<double> resized(side * side);
  const double sx = static_cast<double>(image.width) / static_cast<double>(side);
  const double sy = static_cast<double>(image.height) / static_cast<double>(side);
  for (std::size_t r = 0; r < side; ++r) {
    const double fy =
        std::clamp((static_cast<double>(r) + 0.5) * sy - 0.5, 0.0,
                   static_cast<double>(image.height - 1));
    const auto y0 = static_cast<std::size_t>(std::floor(fy));
    const std::size_t y1 = std::min(y0 + 1, image.height - 1);
    const double wy = fy - static_cast<double>(y0);
    for (std::size_t c = 0; c < side; ++c) {
      const double fx =
          std::clamp((static_cast<double>(c) + 0.5) * sx - 0.5, 0.0,
                     static_cast<double>(image.width - 1));
      const auto x0 = static_cast<std::size_t>(std::floor(fx));
      const std::size_t x1 = std::min(x0 + 1, image.width - 1);
      const double wx = fx - static_cast<double>(x0);
      const double top = gray[y0 * image.width + x0] * (1.0 - wx) +
                         gray[y0 * image.width + x1] * wx;
      const double bottom = gray[y1 * image.width + x0] * (1.0 - wx) +
                            gray[y1 * image.width + x1] * wx;
      resized[r * side + c] = top * (1.0 - wy) + bottom * wy;
    }
  }

  GrayImage out;
  out.width = side;
  out.height = side;
  out.levels = options.levels;
  out.pixels.resize(side * side);
  const double scale = static_cast<double>(options.levels) / 256.0;
  for (std::size_t i = 0; i < resized.size(); ++i) {
    const auto level = static_cast<long>(std::floor(resized[i] * scale));
    out.pixels[i] = static_cast<std::uint8_t>(std::clamp(
        level, 0L, static_cast<long>(options.levels) - 1));
  }
  return out;
}

}  // namespace tnfin::glcm
