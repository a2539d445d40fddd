#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

namespace tnfin::glcm {

/// Decoded 8-bit image, interleaved channels (1 = gray, 3 = RGB).
struct RawImage {
  std::size_t width = 0;
  std::size_t height = 0;
  std::size_t channels = 1;
  std::vector<std::uint8_t> pixels;  // row-major, width*height*channels

  std::uint8_t at(std::size_t row, std::size_t col, std::size_t ch) const {
    return pixels[(row * width + col) * channels + ch];
  }
};

/// Grayscale image quantized to `levels` gray levels; every pixel is in
/// [0, levels-1].
struct GrayImage {
  std::size_t width = 0;
  std::size_t height = 0;
  std::size_t levels = 8;
  std::vector<std::uint8_t> pixels;  // row-major

  std::uint8_t at(std::size_t row, std::size_t col) const {
    return pixels[row * width + col];
  }
};

struct PreprocessOptions {
  std::size_t side = 224;  // resize target (square)
  std::size_t levels = 8;  // quantization levels
};

/// Decodes a PNG or JPEG file (dispatch on magic bytes). Throws DataError
/// naming the path on undecodable input.
RawImage load_image(const std::filesystem::path& path);

/// Writes an 8-bit grayscale or RGB PNG.
void write_png(const std::filesystem::path& path, const RawImage& image);

/// Grayscale conversion (channel average), bilinear resize to side x side,
/// then quantization: level = floor(gray * levels / 256), clamped.
GrayImage preprocess(const RawImage& image, const PreprocessOptions& options = {});

}  // namespace tnfin::glcm
