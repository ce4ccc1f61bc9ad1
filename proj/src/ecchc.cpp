#include "cipher_autopsy/ecchc.hpp"

#include "cipher_autopsy/error.hpp"
#include "hex.hpp"

namespace cipher_autopsy {

std::array<std::uint8_t, 4> HillKey::bytes() const noexcept {
  return {k.at(0, 0), k.at(0, 1), k.at(1, 0), k.at(1, 1)};
}

std::string HillKey::to_hex() const { return detail::encode_hex(bytes()); }

HillKey HillKey::from_bytes(const std::array<std::uint8_t, 4> &bytes) noexcept {
  Mat2 k;
  k.entries = bytes;
  return expand_key(k);
}

HillKey HillKey::from_hex(std::string_view hex) {
  const auto decoded = hex.size() == 8 ? detail::decode_hex(hex) : std::nullopt;
  if (!decoded) {
    throw Error(ErrorCode::BadKey, "ECCHC key must be 8 hex digits (k11k12k21k22)");
  }
  return from_bytes({(*decoded)[0], (*decoded)[1], (*decoded)[2], (*decoded)[3]});
}

HillKey expand_key(const Mat2 &k) noexcept {
  HillKey key{k, {}};
  for (std::size_t r = 0; r < 2; ++r) {
    for (std::size_t c = 0; c < 2; ++c) {
      const std::uint8_t kij = k.at(r, c);
      const std::uint8_t id = r == c ? 1 : 0;
      key.km.at(r, c) = kij;                                                  // K
      key.km.at(r, c + 2) = static_cast<std::uint8_t>(id - kij);              // I - K
      key.km.at(r + 2, c) = static_cast<std::uint8_t>(id + kij);              // I + K
      key.km.at(r + 2, c + 2) = static_cast<std::uint8_t>(-static_cast<int>(kij)); // -K
    }
  }
  return key;
}

GrayImage ecchc_encrypt(const GrayImage &img, const HillKey &key) {
  if (img.width() % 2 != 0 || img.height() % 2 != 0) {
    throw Error(ErrorCode::BadDimensions, "ECCHC needs even width and height");
  }
  return map_blocks(img, [&key](std::size_t, const Block &p) { return ecchc_encrypt_block(p, key); });
}

GrayImage ecchc_decrypt(const GrayImage &img, const HillKey &key) { return ecchc_encrypt(img, key); }

} // namespace cipher_autopsy
