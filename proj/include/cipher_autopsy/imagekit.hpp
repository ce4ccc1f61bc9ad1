#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "cipher_autopsy/algebra.hpp"

namespace cipher_autopsy {

inline constexpr std::size_t kDefaultImageSide = 256;

/// 8-bit grayscale raster stored row-major. Immutable once built.
class GrayImage {
public:
  GrayImage() = default;
  GrayImage(std::size_t width, std::size_t height, std::uint8_t fill = 0);
  /// Throws Error(BadDimensions) if pixels.size() != width * height.
  GrayImage(std::size_t width, std::size_t height, std::vector<std::uint8_t> pixels);

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }
  std::size_t pixel_count() const noexcept { return pixels_.size(); }
  bool empty() const noexcept { return pixels_.empty(); }

  std::span<const std::uint8_t> pixels() const noexcept { return pixels_; }
  std::uint8_t at(std::size_t x, std::size_t y) const noexcept { return pixels_[y * width_ + x]; }

  friend bool operator==(const GrayImage &, const GrayImage &) = default;

private:
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  std::vector<std::uint8_t> pixels_;
};

// Canonical block order shared by every cipher and attack: row-major scanline,
// consecutive non-overlapping groups of four pixels.

/// Throws Error(BadDimensions) unless the pixel count is a multiple of 4.
std::vector<Block> blocks_of(const GrayImage &img);
/// Inverse of blocks_of. Throws Error(BadDimensions) if 4 * blocks != width * height.
GrayImage unblocks(std::span<const Block> blocks, std::size_t width, std::size_t height);

/// Applies `fn(block_index, block)` to every block, index counted from 0.
template <typename Fn>
GrayImage map_blocks(const GrayImage &img, Fn &&fn) {
  std::vector<Block> blocks = blocks_of(img);
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    blocks[i] = fn(i, blocks[i]);
  }
  return unblocks(blocks, img.width(), img.height());
}

// PGM codec. Reads binary P5 and ASCII P2 with maxval 255 (comments allowed);
// writes canonical binary P5 with no comments.
GrayImage read_pgm(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> write_pgm(const GrayImage &img);
GrayImage load_pgm(const std::filesystem::path &path);
void save_pgm(const std::filesystem::path &path, const GrayImage &img);

// Deterministic generators for the demonstration images.

/// Alternating 0/255 cells, top-left cell black. `cell` must divide `side`
/// and be a multiple of 4, otherwise Error(BadCellSize).
GrayImage gen_checkerboard(std::size_t cell = 32, std::size_t side = kDefaultImageSide);

/// Synthetic line drawing: white background, a few filled shapes and
/// one-pixel strokes in at most four gray levels.
GrayImage gen_drawing(std::uint64_t seed, std::size_t side = kDefaultImageSide);

/// Uniform random bytes.
GrayImage gen_noise(std::uint64_t seed, std::size_t width = kDefaultImageSide,
                    std::size_t height = kDefaultImageSide);

GrayImage gen_constant(std::uint8_t value, std::size_t width = kDefaultImageSide,
                       std::size_t height = kDefaultImageSide);

/// Stand-in for a natural photograph: smooth low-frequency gradients plus
/// mild sensor-style noise, concentrated in the middle of the gray range.
GrayImage gen_photo(std::uint64_t seed, std::size_t side = kDefaultImageSide);

} // namespace cipher_autopsy
