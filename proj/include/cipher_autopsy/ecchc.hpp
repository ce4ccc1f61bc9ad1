#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

#include "cipher_autopsy/algebra.hpp"
#include "cipher_autopsy/imagekit.hpp"

namespace cipher_autopsy {

/// The 2x2 key K together with its self-inverse expansion
/// K_m = [[K, I-K], [I+K, -K]] (mod 256).
struct HillKey {
  Mat2 k;
  Mat4 km;

  /// Canonical bytes (k11, k12, k21, k22).
  std::array<std::uint8_t, 4> bytes() const noexcept;
  /// Eight lowercase hex digits "k11k12k21k22".
  std::string to_hex() const;

  static HillKey from_bytes(const std::array<std::uint8_t, 4> &bytes) noexcept;
  /// Throws Error(BadKey) unless the text is exactly eight hex digits.
  static HillKey from_hex(std::string_view hex);

  friend bool operator==(const HillKey &, const HillKey &) = default;
};

HillKey expand_key(const Mat2 &k) noexcept;

inline Block ecchc_encrypt_block(const Block &p, const HillKey &key) noexcept {
  return mat4_vec_mod256(key.km, p);
}

/// ECB over the canonical block order. Throws Error(BadDimensions) unless both
/// sides are even.
GrayImage ecchc_encrypt(const GrayImage &img, const HillKey &key);
/// Same map as encryption, since K_m * K_m = I.
GrayImage ecchc_decrypt(const GrayImage &img, const HillKey &key);

} // namespace cipher_autopsy
