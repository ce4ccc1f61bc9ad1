#include "doctest.h"

#include <array>
#include <cstdint>
#include <vector>

#include "cipher_autopsy/algebra.hpp"
#include "cipher_autopsy/error.hpp"
#include "cipher_autopsy/rng.hpp"

using namespace cipher_autopsy;

namespace {

// Independent GF(2^8) multiply via log/antilog tables over the generator 0x03.
struct LogTables {
  std::array<std::uint8_t, 512> exp{};
  std::array<int, 256> log{};
  LogTables() {
    unsigned x = 1;
    for (int i = 0; i < 255; ++i) {
      exp[i] = static_cast<std::uint8_t>(x);
      log[x] = i;
      unsigned x2 = x << 1;
      if (x2 & 0x100) {
        x2 ^= 0x11B;
      }
      x = (x2 ^ x) & 0xFF; // x * 3
    }
    for (int i = 255; i < 512; ++i) {
      exp[i] = exp[i - 255];
    }
  }
  std::uint8_t mul(std::uint8_t a, std::uint8_t b) const {
    if (a == 0 || b == 0) {
      return 0;
    }
    return exp[log[a] + log[b]];
  }
};

Mat4 random_mat4(SplitMix64 &rng) {
  Mat4 m;
  for (auto &e : m.entries) {
    e = rng.next_byte();
  }
  return m;
}

Block random_block(SplitMix64 &rng) {
  return {rng.next_byte(), rng.next_byte(), rng.next_byte(), rng.next_byte()};
}

ErrorCode code_of(auto &&fn) {
  try {
    fn();
  } catch (const Error &e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::Io;
}

} // namespace

TEST_CASE("gf_add is XOR") {
  CHECK(gf_add(0x00, 0x00) == 0x00);
  CHECK(gf_add(0xAB, 0xAB) == 0x00);
  CHECK(gf_add(0x57, 0x83) == 0xD4);
}

TEST_CASE("gf_mul basic values") {
  for (unsigned x = 0; x < 256; ++x) {
    CHECK(gf_mul(static_cast<GfByte>(x), 0x01) == x);
    CHECK(gf_mul(static_cast<GfByte>(x), 0x00) == 0);
  }
  CHECK(gf_mul(0x57, 0x83) == 0xC1);
}

TEST_CASE("gf_mul agrees with the log/antilog oracle on all pairs") {
  const LogTables tables;
  int mismatches = 0;
  for (unsigned a = 0; a < 256; ++a) {
    for (unsigned b = 0; b < 256; ++b) {
      if (gf_mul(static_cast<GfByte>(a), static_cast<GfByte>(b)) !=
          tables.mul(static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(b))) {
        ++mismatches;
      }
    }
  }
  CHECK(mismatches == 0);
}

TEST_CASE("gf field axioms on random samples") {
  SplitMix64 rng(11);
  for (int i = 0; i < 2000; ++i) {
    const GfByte a = rng.next_byte(), b = rng.next_byte(), c = rng.next_byte();
    CHECK(gf_mul(a, gf_mul(b, c)) == gf_mul(gf_mul(a, b), c));
    CHECK(gf_mul(a, gf_add(b, c)) == gf_add(gf_mul(a, b), gf_mul(a, c)));
    CHECK(gf_mul(a, b) == gf_mul(b, a));
  }
}

TEST_CASE("gf_inv") {
  CHECK(gf_inv(0x01) == 0x01);
  CHECK(gf_inv(0x53) == 0xCA);
  CHECK(code_of([] { gf_inv(0x00); }) == ErrorCode::ZeroInverse);
  for (unsigned a = 1; a < 256; ++a) {
    CHECK(gf_mul(static_cast<GfByte>(a), gf_inv(static_cast<GfByte>(a))) == 0x01);
  }
}

TEST_CASE("Z/256 units are exactly the odd bytes") {
  for (unsigned a = 0; a < 256; ++a) {
    bool has_inverse = false;
    for (unsigned b = 0; b < 256; ++b) {
      has_inverse = has_inverse || ((a * b) & 0xFF) == 1;
    }
    CHECK(has_inverse == ((a & 1u) == 1));
    if (a & 1u) {
      CHECK(((a * mod256_inv(static_cast<ModByte>(a))) & 0xFF) == 1);
    } else {
      CHECK(code_of([a] { mod256_inv(static_cast<ModByte>(a)); }) == ErrorCode::ZeroInverse);
    }
  }
}

TEST_CASE("mat4_vec_mod256") {
  SplitMix64 rng(5);
  const Block v = random_block(rng);
  CHECK(mat4_vec_mod256(Mat4::identity(), v) == v);
  CHECK(mat4_vec_mod256(Mat4{}, v) == Block{0, 0, 0, 0});

  SUBCASE("matches a wide-integer reference") {
    for (int t = 0; t < 1000; ++t) {
      const Mat4 m = random_mat4(rng);
      const Block x = random_block(rng);
      Block expected{};
      for (int r = 0; r < 4; ++r) {
        std::uint64_t wide = 0;
        for (int c = 0; c < 4; ++c) {
          wide += std::uint64_t{m.at(r, c)} * x[c];
        }
        expected[r] = static_cast<std::uint8_t>(wide % 256);
      }
      CHECK(mat4_vec_mod256(m, x) == expected);
    }
  }

  SUBCASE("linear over Z/256") {
    for (int t = 0; t < 1000; ++t) {
      const Mat4 m = random_mat4(rng);
      const Block v1 = random_block(rng);
      const Block v2 = random_block(rng);
      Block sum{};
      for (int i = 0; i < 4; ++i) {
        sum[i] = static_cast<std::uint8_t>(v1[i] + v2[i]);
      }
      const Block lhs = mat4_vec_mod256(m, sum);
      const Block r1 = mat4_vec_mod256(m, v1);
      const Block r2 = mat4_vec_mod256(m, v2);
      for (int i = 0; i < 4; ++i) {
        CHECK(lhs[i] == static_cast<std::uint8_t>(r1[i] + r2[i]));
      }
    }
  }
}

TEST_CASE("matrix product is associative with identity as neutral element") {
  SplitMix64 rng(6);
  for (int t = 0; t < 500; ++t) {
    const Mat4 a = random_mat4(rng), b = random_mat4(rng), c = random_mat4(rng);
    CHECK(mat_mul_mod256(a, mat_mul_mod256(b, c)) == mat_mul_mod256(mat_mul_mod256(a, b), c));
    CHECK(mat_mul_mod256(a, Mat4::identity()) == a);
    CHECK(mat_mul_mod256(Mat4::identity(), a) == a);
  }
}

TEST_CASE("solve_k_rows_mod256 examples") {
  const std::vector<LinearEq2> identity = {{1, 0, 17}, {0, 1, 200}};
  CHECK(solve_k_rows_mod256(identity) == std::pair<ModByte, ModByte>{17, 200});

  const std::vector<LinearEq2> even = {{2, 0, 4}, {0, 2, 6}};
  CHECK(code_of([&] { solve_k_rows_mod256(even); }) == ErrorCode::Underdetermined);

  const std::vector<LinearEq2> single = {{3, 5, 7}};
  CHECK(code_of([&] { solve_k_rows_mod256(single); }) == ErrorCode::Underdetermined);

  const std::vector<LinearEq2> conflicting = {{1, 0, 1}, {0, 1, 2}, {1, 1, 4}};
  CHECK(code_of([&] { solve_k_rows_mod256(conflicting); }) == ErrorCode::Inconsistent);

  const std::vector<LinearEq2> zero_row = {{0, 0, 1}, {1, 0, 0}, {0, 1, 0}};
  CHECK(code_of([&] { solve_k_rows_mod256(zero_row); }) == ErrorCode::Inconsistent);
}

TEST_CASE("solve_k_rows_mod256 recovers planted solutions") {
  SplitMix64 rng(7);
  int solved = 0;
  for (int t = 0; t < 1000; ++t) {
    const ModByte k = rng.next_byte();
    const ModByte l = rng.next_byte();
    std::vector<LinearEq2> eqs;
    for (int i = 0; i < 4; ++i) {
      const ModByte a = rng.next_byte();
      const ModByte b = rng.next_byte();
      eqs.push_back({a, b, static_cast<ModByte>(k * a + l * b)});
    }
    bool any_odd = false;
    for (std::size_t i = 0; i < eqs.size(); ++i) {
      for (std::size_t j = i + 1; j < eqs.size(); ++j) {
        any_odd = any_odd || ((eqs[i].a * eqs[j].b - eqs[j].a * eqs[i].b) & 1) != 0;
      }
    }
    if (!any_odd) {
      CHECK(code_of([&] { solve_k_rows_mod256(eqs); }) == ErrorCode::Underdetermined);
      continue;
    }
    CHECK(solve_k_rows_mod256(eqs) == std::pair<ModByte, ModByte>{k, l});
    ++solved;

    // Exhaustive cross-check on a subset: the planted pair is the only solution.
    if (t % 50 == 0) {
      int solutions = 0;
      for (unsigned kk = 0; kk < 256; ++kk) {
        for (unsigned ll = 0; ll < 256; ++ll) {
          bool ok = true;
          for (const auto &e : eqs) {
            ok = ok && static_cast<ModByte>(kk * e.a + ll * e.b) == e.rhs;
          }
          solutions += ok ? 1 : 0;
        }
      }
      CHECK(solutions == 1);
    }
  }
  // P(no odd-determinant pair among 4 random rows) = 1/256 + 3(1/16 - 1/256) ~ 0.18.
  CHECK(solved > 750);
}

TEST_CASE("gf_mat4_vec with the identity") {
  SplitMix64 rng(8);
  const Block v = random_block(rng);
  CHECK(gf_mat4_vec(Mat4::identity(), v) == v);
}
