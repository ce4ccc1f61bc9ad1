#include "cipher_autopsy/imagekit.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <numbers>
#include <string>

#include "cipher_autopsy/error.hpp"
#include "cipher_autopsy/rng.hpp"

namespace cipher_autopsy {

GrayImage::GrayImage(std::size_t width, std::size_t height, std::uint8_t fill)
    : width_(width), height_(height), pixels_(width * height, fill) {}

GrayImage::GrayImage(std::size_t width, std::size_t height, std::vector<std::uint8_t> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  if (pixels_.size() != width_ * height_) {
    throw Error(ErrorCode::BadDimensions, "pixel buffer does not match width * height");
  }
}

std::vector<Block> blocks_of(const GrayImage &img) {
  if (img.pixel_count() % 4 != 0) {
    throw Error(ErrorCode::BadDimensions, "pixel count is not a multiple of 4");
  }
  const auto px = img.pixels();
  std::vector<Block> blocks(px.size() / 4);
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    std::copy_n(px.begin() + static_cast<std::ptrdiff_t>(4 * i), 4, blocks[i].begin());
  }
  return blocks;
}

GrayImage unblocks(std::span<const Block> blocks, std::size_t width, std::size_t height) {
  if (blocks.size() * 4 != width * height) {
    throw Error(ErrorCode::BadDimensions, "block count does not cover width * height");
  }
  std::vector<std::uint8_t> px;
  px.reserve(blocks.size() * 4);
  for (const Block &b : blocks) {
    px.insert(px.end(), b.begin(), b.end());
  }
  return GrayImage(width, height, std::move(px));
}

// ---------------------------------------------------------------------------
// PGM
// ---------------------------------------------------------------------------

namespace {

class PgmCursor {
public:
  explicit PgmCursor(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      const auto c = bytes_[pos_];
      if (c == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n' && bytes_[pos_] != '\r') {
          ++pos_;
        }
      } else if (std::isspace(c)) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  // Returns false at end of input.
  bool read_number(std::uint64_t &out, ErrorCode on_garbage) {
    skip_space_and_comments();
    if (pos_ >= bytes_.size()) {
      return false;
    }
    if (!std::isdigit(bytes_[pos_])) {
      throw Error(on_garbage, "expected a decimal number in PGM data");
    }
    std::uint64_t value = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      value = value * 10 + (bytes_[pos_] - '0');
      if (value > 0xFFFFFFFFULL) {
        throw Error(on_garbage, "number too large in PGM data");
      }
      ++pos_;
    }
    out = value;
    return true;
  }

  std::uint64_t header_number() {
    std::uint64_t v = 0;
    if (!read_number(v, ErrorCode::MalformedHeader)) {
      throw Error(ErrorCode::MalformedHeader, "PGM header ends early");
    }
    return v;
  }

  std::size_t pos() const noexcept { return pos_; }
  void advance(std::size_t n) noexcept { pos_ += n; }
  std::size_t remaining() const noexcept { return bytes_.size() - pos_; }
  std::uint8_t peek() const noexcept { return bytes_[pos_]; }

private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

} // namespace

GrayImage read_pgm(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '5' && bytes[1] != '2')) {
    throw Error(ErrorCode::MalformedHeader, "not a P5 or P2 PGM file");
  }
  const bool binary = bytes[1] == '5';
  PgmCursor cur(bytes);
  cur.advance(2);
  if (cur.remaining() == 0 || !std::isspace(cur.peek())) {
    throw Error(ErrorCode::MalformedHeader, "missing whitespace after magic number");
  }
  const std::uint64_t width = cur.header_number();
  const std::uint64_t height = cur.header_number();
  const std::uint64_t maxval = cur.header_number();
  if (maxval != 255) {
    throw Error(ErrorCode::UnsupportedMaxval, "only maxval 255 is supported, got " + std::to_string(maxval));
  }
  const std::size_t count = width * height;
  std::vector<std::uint8_t> px(count);

  if (binary) {
    if (cur.remaining() == 0 || !std::isspace(cur.peek())) {
      throw Error(ErrorCode::MalformedHeader, "missing whitespace after maxval");
    }
    cur.advance(1);
    if (cur.remaining() < count) {
      throw Error(ErrorCode::TruncatedData, "PGM raster shorter than width * height");
    }
    std::copy_n(bytes.begin() + static_cast<std::ptrdiff_t>(cur.pos()), count, px.begin());
  } else {
    for (std::size_t i = 0; i < count; ++i) {
      std::uint64_t v = 0;
      if (!cur.read_number(v, ErrorCode::MalformedHeader)) {
        throw Error(ErrorCode::TruncatedData, "PGM raster shorter than width * height");
      }
      if (v > maxval) {
        throw Error(ErrorCode::MalformedHeader, "sample exceeds maxval");
      }
      px[i] = static_cast<std::uint8_t>(v);
    }
  }
  return GrayImage(width, height, std::move(px));
}

std::vector<std::uint8_t> write_pgm(const GrayImage &img) {
  const std::string header =
      "P5 " + std::to_string(img.width()) + " " + std::to_string(img.height()) + " 255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  const auto px = img.pixels();
  out.insert(out.end(), px.begin(), px.end());
  return out;
}

GrayImage load_pgm(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::Io, "cannot open " + path.string());
  }
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return read_pgm(bytes);
}

void save_pgm(const std::filesystem::path &path, const GrayImage &img) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(ErrorCode::Io, "cannot write " + path.string());
  }
  const auto bytes = write_pgm(img);
  out.write(reinterpret_cast<const char *>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) {
    throw Error(ErrorCode::Io, "write failed for " + path.string());
  }
}

// ---------------------------------------------------------------------------
// Generators
// ---------------------------------------------------------------------------

GrayImage gen_checkerboard(std::size_t cell, std::size_t side) {
  if (cell == 0 || cell % 4 != 0 || side % cell != 0) {
    throw Error(ErrorCode::BadCellSize, "cell must be a nonzero multiple of 4 dividing the side");
  }
  std::vector<std::uint8_t> px(side * side);
  for (std::size_t y = 0; y < side; ++y) {
    for (std::size_t x = 0; x < side; ++x) {
      px[y * side + x] = ((x / cell + y / cell) % 2 == 0) ? 0 : 255;
    }
  }
  return GrayImage(side, side, std::move(px));
}

namespace {

class Canvas {
public:
  Canvas(std::size_t side, std::uint8_t background) : side_(side), px_(side * side, background) {}

  void plot(long x, long y, std::uint8_t v) {
    if (x >= 0 && y >= 0 && x < static_cast<long>(side_) && y < static_cast<long>(side_)) {
      px_[static_cast<std::size_t>(y) * side_ + static_cast<std::size_t>(x)] = v;
    }
  }

  void fill_rect(long x0, long y0, long w, long h, std::uint8_t v) {
    for (long y = y0; y < y0 + h; ++y) {
      for (long x = x0; x < x0 + w; ++x) {
        plot(x, y, v);
      }
    }
  }

  void fill_ellipse(long cx, long cy, long rx, long ry, std::uint8_t v) {
    for (long y = cy - ry; y <= cy + ry; ++y) {
      for (long x = cx - rx; x <= cx + rx; ++x) {
        const double dx = static_cast<double>(x - cx) / static_cast<double>(rx);
        const double dy = static_cast<double>(y - cy) / static_cast<double>(ry);
        if (dx * dx + dy * dy <= 1.0) {
          plot(x, y, v);
        }
      }
    }
  }

  // Bresenham.
  void line(long x0, long y0, long x1, long y1, std::uint8_t v) {
    const long dx = std::abs(x1 - x0);
    const long dy = -std::abs(y1 - y0);
    const long sx = x0 < x1 ? 1 : -1;
    const long sy = y0 < y1 ? 1 : -1;
    long err = dx + dy;
    for (;;) {
      plot(x0, y0, v);
      if (x0 == x1 && y0 == y1) {
        break;
      }
      const long e2 = 2 * err;
      if (e2 >= dy) {
        err += dy;
        x0 += sx;
      }
      if (e2 <= dx) {
        err += dx;
        y0 += sy;
      }
    }
  }

  GrayImage finish() && { return GrayImage(side_, side_, std::move(px_)); }

private:
  std::size_t side_;
  std::vector<std::uint8_t> px_;
};

} // namespace

GrayImage gen_drawing(std::uint64_t seed, std::size_t side) {
  constexpr std::uint8_t kBackground = 255;
  constexpr std::array<std::uint8_t, 3> kInks = {0, 80, 160};

  SplitMix64 rng(seed ^ 0xD7A3'11C0'5EEDULL);
  const auto s = static_cast<long>(side);
  auto coord = [&](long lo, long hi) { return lo + static_cast<long>(rng.below(static_cast<std::uint64_t>(hi - lo))); };
  auto ink = [&] { return kInks[rng.below(kInks.size())]; };

  Canvas canvas(side, kBackground);
  // Sizes scale with the side so the background share stays above 90 %.
  const long unit = std::max<long>(s / 32, 1);
  for (int i = 0; i < 3; ++i) {
    const long w = coord(3 * unit / 2, 7 * unit / 2);
    const long h = coord(3 * unit / 2, 7 * unit / 2);
    const long x = coord(0, s - w);
    const long y = coord(0, s - h);
    canvas.fill_rect(x, y, w, h, ink());
  }
  for (int i = 0; i < 2; ++i) {
    const long rx = coord(unit, 2 * unit);
    const long ry = coord(unit, 2 * unit);
    const long cx = coord(rx, s - rx);
    const long cy = coord(ry, s - ry);
    canvas.fill_ellipse(cx, cy, rx, ry, ink());
  }
  for (int i = 0; i < 5; ++i) {
    const long x0 = coord(0, s);
    const long y0 = coord(0, s);
    // Draws are sequenced explicitly; argument evaluation order is unspecified.
    const long x1 = coord(0, s);
    const long y1 = coord(0, s);
    const std::uint8_t v = ink();
    switch (i % 3) {
    case 0: canvas.line(x0, y0, x1, y0, v); break;
    case 1: canvas.line(x0, y0, x0, y1, v); break;
    default: canvas.line(x0, y0, x1, y1, v); break;
    }
  }
  return std::move(canvas).finish();
}

GrayImage gen_noise(std::uint64_t seed, std::size_t width, std::size_t height) {
  SplitMix64 rng(seed);
  std::vector<std::uint8_t> px(width * height);
  for (auto &p : px) {
    p = rng.next_byte();
  }
  return GrayImage(width, height, std::move(px));
}

GrayImage gen_constant(std::uint8_t value, std::size_t width, std::size_t height) {
  return GrayImage(width, height, value);
}

GrayImage gen_photo(std::uint64_t seed, std::size_t side) {
  SplitMix64 rng(seed ^ 0x9A07'0F1E'7715ULL);
  auto unit = [&] { return static_cast<double>(rng.next() >> 11) * 0x1.0p-53; };

  // A handful of random low-frequency plane waves.
  struct Wave {
    double fx, fy, phase, amp;
  };
  std::array<Wave, 6> waves{};
  double amp_total = 0.0;
  for (auto &w : waves) {
    w = {unit() * 4.0 - 2.0, unit() * 4.0 - 2.0, unit() * 2.0 * std::numbers::pi, 0.5 + unit()};
    amp_total += w.amp;
  }
  const double tilt = unit() * 2.0 - 1.0;

  std::vector<std::uint8_t> px(side * side);
  const double n = static_cast<double>(side);
  for (std::size_t y = 0; y < side; ++y) {
    for (std::size_t x = 0; x < side; ++x) {
      const double u = static_cast<double>(x) / n;
      const double v = static_cast<double>(y) / n;
      double field = 0.0;
      for (const auto &w : waves) {
        field += w.amp * std::sin(2.0 * std::numbers::pi * (w.fx * u + w.fy * v) + w.phase);
      }
      field /= amp_total;
      // Triangular noise in [-12, 12].
      const double n1 = unit();
      const double n2 = unit();
      const double noise = 12.0 * (n1 - n2);
      const double value = 124.0 + 150.0 * field + 25.0 * tilt * (u - 0.5) + noise;
      px[y * side + x] = static_cast<std::uint8_t>(std::clamp(std::lround(value), 0L, 255L));
    }
  }
  return GrayImage(side, side, std::move(px));
}

} // namespace cipher_autopsy
