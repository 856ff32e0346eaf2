#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "roast/common.hpp"

namespace roast {

// 8x8 quantization steps in natural (row-major) order.
class QuantTable {
 public:
  QuantTable() { steps_.fill(1); }

  // Custom table; quality_factor is 0 when the table did not come from build_qtable.
  explicit QuantTable(const std::array<int, kBlockSize>& steps, int quality_factor = 0);

  int operator[](int index) const { return steps_[index]; }
  int at(int row, int col) const { return steps_[block_index(row, col)]; }
  const std::array<int, kBlockSize>& steps() const { return steps_; }
  int quality_factor() const { return quality_factor_; }

  static QuantTable uniform(int step);

  friend bool operator==(const QuantTable& a, const QuantTable& b) { return a.steps_ == b.steps_; }

 private:
  std::array<int, kBlockSize> steps_{};
  int quality_factor_ = 0;
};

// ITU T.81 Annex K luminance table scaled with the IJG quality formula.
QuantTable build_qtable(int quality_factor);

// Quantized DCT coefficients of a single-component image.
class CoefficientImage {
 public:
  CoefficientImage() = default;
  CoefficientImage(int width, int height, QuantTable qtable);

  int width() const { return width_; }
  int height() const { return height_; }
  int blocks_wide() const { return blocks_wide_; }
  int blocks_high() const { return blocks_high_; }
  int block_count() const { return blocks_wide_ * blocks_high_; }

  const QuantTable& qtable() const { return qtable_; }
  void set_qtable(const QuantTable& q) { qtable_ = q; }

  CoefBlock& block(int index) { return blocks_[index]; }
  const CoefBlock& block(int index) const { return blocks_[index]; }
  CoefBlock& block(int bx, int by) { return blocks_[by * blocks_wide_ + bx]; }
  const CoefBlock& block(int bx, int by) const { return blocks_[by * blocks_wide_ + bx]; }

  std::vector<CoefBlock>& blocks() { return blocks_; }
  const std::vector<CoefBlock>& blocks() const { return blocks_; }

  // Flat coefficient access, index = block * 64 + u * 8 + v.
  int coef(std::size_t flat) const { return blocks_[flat / kBlockSize][flat % kBlockSize]; }
  void set_coef(std::size_t flat, int value) { blocks_[flat / kBlockSize][flat % kBlockSize] = value; }
  std::size_t coef_count() const { return blocks_.size() * kBlockSize; }

  friend bool operator==(const CoefficientImage& a, const CoefficientImage& b) {
    return a.width_ == b.width_ && a.height_ == b.height_ && a.qtable_ == b.qtable_ &&
           a.blocks_ == b.blocks_;
  }

 private:
  int width_ = 0;
  int height_ = 0;
  int blocks_wide_ = 0;
  int blocks_high_ = 0;
  QuantTable qtable_;
  std::vector<CoefBlock> blocks_;
};

// 8-bit grayscale raster of the true (unpadded) image size.
class PixelImage {
 public:
  PixelImage() = default;
  PixelImage(int width, int height, std::uint8_t fill = 0)
      : width_(width), height_(height), pixels_(static_cast<std::size_t>(width) * height, fill) {}

  int width() const { return width_; }
  int height() const { return height_; }
  std::uint8_t& at(int x, int y) { return pixels_[static_cast<std::size_t>(y) * width_ + x]; }
  std::uint8_t at(int x, int y) const { return pixels_[static_cast<std::size_t>(y) * width_ + x]; }
  std::span<const std::uint8_t> data() const { return pixels_; }
  std::span<std::uint8_t> data() { return pixels_; }

  friend bool operator==(const PixelImage&, const PixelImage&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> pixels_;
};

CoefficientImage decode_jpeg(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> encode_jpeg(const CoefficientImage& img);

CoefficientImage read_jpeg(const std::filesystem::path& path);
void write_jpeg(const CoefficientImage& img, const std::filesystem::path& path);

// pixels = round(TRU(IDCT(D x Q)) + 128), cropped to the true image size.
PixelImage decode_to_pixels(const CoefficientImage& img);

void write_pgm(const PixelImage& img, const std::filesystem::path& path);
PixelImage read_pgm(const std::filesystem::path& path);

// Number of nonzero AC coefficients.
std::size_t count_nzac(const CoefficientImage& img);

}  // namespace roast
