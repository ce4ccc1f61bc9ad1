#include "cipher_autopsy/dwc.hpp"

#include "cipher_autopsy/error.hpp"
#include "hex.hpp"

namespace cipher_autopsy {

std::string DwcKey::to_hex() const { return detail::encode_hex(std::span<const std::uint8_t>(&value, 1)); }

DwcKey DwcKey::from_hex(std::string_view hex) {
  const auto decoded = hex.size() == 2 ? detail::decode_hex(hex) : std::nullopt;
  if (!decoded) {
    throw Error(ErrorCode::BadKey, "DWC key must be 2 hex digits");
  }
  return DwcKey{(*decoded)[0]};
}

namespace {

std::uint8_t rotl8(std::uint8_t x, unsigned s) noexcept {
  return static_cast<std::uint8_t>((x << s) | (x >> (8 - s)));
}

Mat4 circulant(std::array<std::uint8_t, 4> row) noexcept {
  Mat4 m;
  for (std::size_t r = 0; r < 4; ++r) {
    for (std::size_t c = 0; c < 4; ++c) {
      m.at(r, c) = row[(c + 4 - r) % 4];
    }
  }
  return m;
}

// Full multiplication table; ct/ct_inv run for every block of every candidate
// key during brute force.
struct GfMulTable {
  std::array<std::array<std::uint8_t, 256>, 256> t{};
  GfMulTable() {
    for (unsigned a = 0; a < 256; ++a) {
      for (unsigned b = 0; b < 256; ++b) {
        t[a][b] = gf_mul(static_cast<GfByte>(a), static_cast<GfByte>(b));
      }
    }
  }
};

const GfMulTable &mul_table() {
  static const GfMulTable table;
  return table;
}

Block gf_mat4_vec_fast(const Mat4 &m, const Block &v) noexcept {
  const auto &t = mul_table().t;
  Block out{};
  for (std::size_t r = 0; r < 4; ++r) {
    out[r] = static_cast<std::uint8_t>(t[m.at(r, 0)][v[0]] ^ t[m.at(r, 1)][v[1]] ^ t[m.at(r, 2)][v[2]] ^
                                       t[m.at(r, 3)][v[3]]);
  }
  return out;
}

} // namespace

SBox build_sbox() {
  SBox s;
  for (unsigned x = 0; x < 256; ++x) {
    const std::uint8_t b = x == 0 ? 0 : gf_inv(static_cast<GfByte>(x));
    s.forward[x] = static_cast<std::uint8_t>(b ^ rotl8(b, 1) ^ rotl8(b, 2) ^ rotl8(b, 3) ^ rotl8(b, 4) ^ 0x63);
  }
  for (unsigned x = 0; x < 256; ++x) {
    s.inverse[s.forward[x]] = static_cast<std::uint8_t>(x);
  }
  return s;
}

ColumnMatrix build_column_matrix() {
  return ColumnMatrix{circulant({0x02, 0x03, 0x01, 0x01}), circulant({0x0E, 0x0B, 0x0D, 0x09})};
}

const SBox &sbox() {
  static const SBox s = build_sbox();
  return s;
}

const ColumnMatrix &column_matrix() {
  static const ColumnMatrix m = build_column_matrix();
  return m;
}

Block ct(const Block &p) noexcept {
  const auto &s = sbox().forward;
  return gf_mat4_vec_fast(column_matrix().m, {s[p[0]], s[p[1]], p[2], s[p[3]]});
}

Block ct_inv(const Block &c) noexcept {
  const auto &si = sbox().inverse;
  const Block v = gf_mat4_vec_fast(column_matrix().m_inv, c);
  return {si[v[0]], si[v[1]], v[2], si[v[3]]};
}

GrayImage dwc_encrypt(const GrayImage &img, DwcKey key) {
  return map_blocks(img, [key](std::size_t idx, const Block &p) {
    const auto i = static_cast<std::uint32_t>(idx + 1);
    return ct(unpack_block(pack_block(p) ^ counter_mask(i, key)));
  });
}

GrayImage dwc_decrypt(const GrayImage &img, DwcKey key) {
  return map_blocks(img, [key](std::size_t idx, const Block &c) {
    const auto i = static_cast<std::uint32_t>(idx + 1);
    return unpack_block(pack_block(ct_inv(c)) ^ counter_mask(i, key));
  });
}

} // namespace cipher_autopsy
