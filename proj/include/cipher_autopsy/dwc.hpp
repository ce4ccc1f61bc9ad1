#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

#include "cipher_autopsy/algebra.hpp"
#include "cipher_autopsy/imagekit.hpp"

namespace cipher_autopsy {

struct DwcKey {
  std::uint8_t value = 0;

  std::string to_hex() const;
  /// Throws Error(BadKey) unless the text is exactly two hex digits.
  static DwcKey from_hex(std::string_view hex);

  friend bool operator==(const DwcKey &, const DwcKey &) = default;
};

/// AES SubBytes permutation and its inverse.
struct SBox {
  std::array<std::uint8_t, 256> forward{};
  std::array<std::uint8_t, 256> inverse{};
};

/// AES MixColumns matrix (circulant 02 03 01 01) and its inverse
/// (circulant 0E 0B 0D 09), applied to a single column.
struct ColumnMatrix {
  Mat4 m;
  Mat4 m_inv;
};

/// Built from gf_inv (0 -> 0) followed by the AES affine map.
SBox build_sbox();
ColumnMatrix build_column_matrix();

/// Process-wide instances, built once on first use.
const SBox &sbox();
const ColumnMatrix &column_matrix();

/// Keyless core transform: S-box on bytes 0, 1 and 3 (byte 2 passes through),
/// then the column matrix over GF(2^8).
Block ct(const Block &p) noexcept;
Block ct_inv(const Block &c) noexcept;

/// Byte 0 of a block is the most significant byte of its 32-bit word.
constexpr std::uint32_t pack_block(const Block &b) noexcept {
  return (std::uint32_t{b[0]} << 24) | (std::uint32_t{b[1]} << 16) | (std::uint32_t{b[2]} << 8) |
         std::uint32_t{b[3]};
}

constexpr Block unpack_block(std::uint32_t w) noexcept {
  return {static_cast<std::uint8_t>(w >> 24), static_cast<std::uint8_t>(w >> 16),
          static_cast<std::uint8_t>(w >> 8), static_cast<std::uint8_t>(w)};
}

/// Whitening word for block counter i (1-based): i XOR ((k XOR lsb(i)) << 24).
constexpr std::uint32_t counter_mask(std::uint32_t i, DwcKey key) noexcept {
  const std::uint32_t top = static_cast<std::uint32_t>(key.value ^ (i & 0xFFu));
  return i ^ (top << 24);
}

/// C_i = CT(P_i ^ mask(i, k)) for i = 1..n. Throws Error(BadDimensions)
/// unless the pixel count is a multiple of 4.
GrayImage dwc_encrypt(const GrayImage &img, DwcKey key);
/// P_i = CT^-1(C_i) ^ mask(i, k).
GrayImage dwc_decrypt(const GrayImage &img, DwcKey key);

} // namespace cipher_autopsy
