#include "doctest.h"

#include <set>

#include "cipher_autopsy/dwc.hpp"
#include "cipher_autopsy/error.hpp"
#include "cipher_autopsy/rng.hpp"

using namespace cipher_autopsy;

namespace {

Block random_block(SplitMix64 &rng) {
  return {rng.next_byte(), rng.next_byte(), rng.next_byte(), rng.next_byte()};
}

// Scalar two-step evaluation straight from the definition.
Block ct_reference(const Block &p) {
  static constexpr int kM[4][4] = {{2, 3, 1, 1}, {1, 2, 3, 1}, {1, 1, 2, 3}, {3, 1, 1, 2}};
  const auto &s = sbox().forward;
  const Block v = {s[p[0]], s[p[1]], p[2], s[p[3]]};
  Block out{};
  for (int r = 0; r < 4; ++r) {
    GfByte acc = 0;
    for (int c = 0; c < 4; ++c) {
      acc ^= gf_mul(static_cast<GfByte>(kM[r][c]), v[c]);
    }
    out[r] = acc;
  }
  return out;
}

} // namespace

TEST_CASE("S-box") {
  const SBox s = build_sbox();
  // First row of the published AES S-box.
  const std::array<std::uint8_t, 16> row0 = {0x63, 0x7c, 0x77, 0x7b, 0xf2, 0x6b, 0x6f, 0xc5,
                                             0x30, 0x01, 0x67, 0x2b, 0xfe, 0xd7, 0xab, 0x76};
  for (std::size_t i = 0; i < row0.size(); ++i) {
    CHECK(s.forward[i] == row0[i]);
  }
  CHECK(s.forward[0x53] == 0xED);
  CHECK(s.forward[0xFF] == 0x16);
  CHECK(std::set<std::uint8_t>(s.forward.begin(), s.forward.end()).size() == 256);
  for (unsigned x = 0; x < 256; ++x) {
    CHECK(s.inverse[s.forward[x]] == x);
  }
  CHECK(s.inverse[0x63] == 0x00);
}

TEST_CASE("column matrix and its inverse") {
  const ColumnMatrix cm = build_column_matrix();
  for (std::size_t r = 0; r < 4; ++r) {
    for (std::size_t c = 0; c < 4; ++c) {
      GfByte acc = 0;
      for (std::size_t k = 0; k < 4; ++k) {
        acc ^= gf_mul(cm.m.at(r, k), cm.m_inv.at(k, c));
      }
      CHECK(acc == (r == c ? 1 : 0));
    }
  }
  CHECK(cm.m.at(0, 0) == 0x02);
  CHECK(cm.m.at(0, 1) == 0x03);
  CHECK(cm.m.at(3, 0) == 0x03);
  CHECK(cm.m_inv.at(0, 1) == 0x0B);
  CHECK(cm.m_inv.at(1, 0) == 0x09);
}

TEST_CASE("ct fixtures") {
  CHECK(ct({0, 0, 0, 0}) == Block{0x00, 0xC6, 0xA5, 0x00});
  CHECK(ct_inv({0x00, 0xC6, 0xA5, 0x00}) == Block{0, 0, 0, 0});
  CHECK(ct({0x01, 0, 0, 0x01}) == Block{0x21, 0xC6, 0x9B, 0x1F});
}

TEST_CASE("ct matches the scalar reference and inverts") {
  SplitMix64 rng(41);
  for (int t = 0; t < 1000; ++t) {
    const Block p = random_block(rng);
    CHECK(ct(p) == ct_reference(p));
    CHECK(ct_inv(ct(p)) == p);
    CHECK(ct(ct_inv(p)) == p);
  }
  for (unsigned v = 0; v < 256; ++v) {
    const Block p = {0x12, 0x34, static_cast<std::uint8_t>(v), 0x56};
    CHECK(ct_inv(ct(p)) == p);
  }
}

TEST_CASE("byte 2 bypasses the S-box") {
  SplitMix64 rng(42);
  const ColumnMatrix cm = build_column_matrix();
  for (int t = 0; t < 500; ++t) {
    const Block p = random_block(rng);
    const std::uint8_t delta = rng.next_byte();
    Block q = p;
    q[2] ^= delta;
    const Block lhs = ct(p);
    const Block rhs = ct(q);
    const Block expected = gf_mat4_vec(cm.m, {0, 0, delta, 0});
    for (int i = 0; i < 4; ++i) {
      CHECK((lhs[i] ^ rhs[i]) == expected[i]);
    }
  }
}

TEST_CASE("block word packing puts byte 0 on top") {
  CHECK(pack_block({0x11, 0x22, 0x33, 0x44}) == 0x11223344u);
  CHECK(unpack_block(0xA1B2C3D4u) == Block{0xA1, 0xB2, 0xC3, 0xD4});
  CHECK(counter_mask(1, DwcKey{0}) == 0x01000001u);
  CHECK(counter_mask(0x1234, DwcKey{0xFF}) == ((0xFFu ^ 0x34u) << 24 | 0x1234u));
}

TEST_CASE("counter masks are distinct for every block of a 256x256 image") {
  for (unsigned k : {0u, 0x5Au, 0xFFu}) {
    std::set<std::uint32_t> masks;
    for (std::uint32_t i = 1; i <= 16384; ++i) {
      masks.insert(counter_mask(i, DwcKey{static_cast<std::uint8_t>(k)}));
    }
    CHECK(masks.size() == 16384);
  }
}

TEST_CASE("DwcKey hex") {
  CHECK(DwcKey::from_hex("a5").value == 0xA5);
  CHECK(DwcKey{0x0F}.to_hex() == "0f");
  CHECK_THROWS_AS(DwcKey::from_hex("a"), Error);
  CHECK_THROWS_AS(DwcKey::from_hex("a5f"), Error);
  CHECK_THROWS_AS(DwcKey::from_hex("g0"), Error);
}

TEST_CASE("dwc image encryption") {
  SUBCASE("first block of an all-zero image under key 0") {
    const GrayImage zero = gen_constant(0, 16, 16);
    const auto blocks = blocks_of(dwc_encrypt(zero, DwcKey{0}));
    CHECK(blocks[0] == ct({0x01, 0, 0, 0x01}));
    CHECK(dwc_decrypt(dwc_encrypt(zero, DwcKey{0x3C}), DwcKey{0x3C}) == zero);
  }
  SUBCASE("round trip under every key") {
    SplitMix64 rng(43);
    for (unsigned k = 0; k < 256; ++k) {
      const DwcKey key{static_cast<std::uint8_t>(k)};
      const GrayImage img = gen_noise(rng.next(), 16, 16);
      CHECK(dwc_decrypt(dwc_encrypt(img, key), key) == img);
    }
  }
  SUBCASE("counter breaks ECB repetition") {
    const GrayImage board = gen_checkerboard();
    const auto c = blocks_of(dwc_encrypt(board, DwcKey{7}));
    SplitMix64 rng(44);
    for (int t = 0; t < 2000; ++t) {
      const std::size_t i = rng.below(c.size());
      const std::size_t j = rng.below(c.size());
      if (i != j) {
        CHECK(c[i] != c[j]);
      }
    }
  }
  SUBCASE("a wrong key only corrupts byte 0, by k XOR k'") {
    SplitMix64 rng(45);
    for (int t = 0; t < 50; ++t) {
      const GrayImage img = gen_noise(rng.next(), 32, 32);
      const DwcKey k{rng.next_byte()};
      const DwcKey wrong{rng.next_byte()};
      const auto plain = blocks_of(img);
      const auto guess = blocks_of(dwc_decrypt(dwc_encrypt(img, k), wrong));
      for (std::size_t i = 0; i < plain.size(); ++i) {
        CHECK((plain[i][0] ^ guess[i][0]) == (k.value ^ wrong.value));
        CHECK(plain[i][1] == guess[i][1]);
        CHECK(plain[i][2] == guess[i][2]);
        CHECK(plain[i][3] == guess[i][3]);
      }
    }
  }
  SUBCASE("pixel count must be a multiple of 4") {
    CHECK_THROWS_AS(dwc_encrypt(GrayImage(3, 3), DwcKey{1}), Error);
    CHECK_NOTHROW(dwc_encrypt(GrayImage(3, 4), DwcKey{1}));
  }
}
