#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>

namespace cipher_autopsy {

/// Element of GF(2^8) reduced by x^8 + x^4 + x^3 + x + 1 (0x11B).
using GfByte = std::uint8_t;
/// Element of the ring Z/256.
using ModByte = std::uint8_t;
/// Four-byte column vector, the block unit of both ciphers.
using Block = std::array<std::uint8_t, 4>;

inline constexpr unsigned kGfReduction = 0x11B;

constexpr GfByte gf_add(GfByte a, GfByte b) noexcept {
  return static_cast<GfByte>(a ^ b);
}

/// Carry-less shift-and-add multiply with reduction folded into each step.
constexpr GfByte gf_mul(GfByte a, GfByte b) noexcept {
  unsigned acc = 0;
  unsigned x = a;
  for (unsigned y = b; y != 0; y >>= 1) {
    if (y & 1u) {
      acc ^= x;
    }
    x <<= 1;
    if (x & 0x100u) {
      x ^= kGfReduction;
    }
  }
  return static_cast<GfByte>(acc);
}

/// Throws Error(ZeroInverse) for 0.
GfByte gf_inv(GfByte a);

/// Inverse of an odd element of Z/256. Throws Error(ZeroInverse) for even input.
ModByte mod256_inv(ModByte a);

/// Square matrix of bytes, row-major. Arithmetic helpers below reduce mod 256.
template <std::size_t N> struct ByteMatrix {
  std::array<std::uint8_t, N * N> entries{};

  static constexpr std::size_t size = N;

  constexpr std::uint8_t &at(std::size_t row, std::size_t col) noexcept {
    return entries[row * N + col];
  }
  constexpr std::uint8_t at(std::size_t row, std::size_t col) const noexcept {
    return entries[row * N + col];
  }

  static constexpr ByteMatrix identity() noexcept {
    ByteMatrix m;
    for (std::size_t i = 0; i < N; ++i) {
      m.at(i, i) = 1;
    }
    return m;
  }

  friend constexpr bool operator==(const ByteMatrix &, const ByteMatrix &) = default;
};

using Mat2 = ByteMatrix<2>;
using Mat4 = ByteMatrix<4>;

template <std::size_t N>
constexpr ByteMatrix<N> mat_mul_mod256(const ByteMatrix<N> &lhs, const ByteMatrix<N> &rhs) noexcept {
  ByteMatrix<N> out;
  for (std::size_t r = 0; r < N; ++r) {
    for (std::size_t c = 0; c < N; ++c) {
      std::uint8_t acc = 0;
      for (std::size_t k = 0; k < N; ++k) {
        acc = static_cast<std::uint8_t>(acc + lhs.at(r, k) * rhs.at(k, c));
      }
      out.at(r, c) = acc;
    }
  }
  return out;
}

constexpr Block mat4_vec_mod256(const Mat4 &m, const Block &v) noexcept {
  Block out{};
  for (std::size_t r = 0; r < 4; ++r) {
    std::uint8_t acc = 0;
    for (std::size_t c = 0; c < 4; ++c) {
      acc = static_cast<std::uint8_t>(acc + m.at(r, c) * v[c]);
    }
    out[r] = acc;
  }
  return out;
}

/// Matrix-vector product over GF(2^8).
Block gf_mat4_vec(const Mat4 &m, const Block &v) noexcept;

/// One equation k*a + l*b = rhs (mod 256) in the unknowns (k, l).
struct LinearEq2 {
  ModByte a = 0;
  ModByte b = 0;
  ModByte rhs = 0;
};

/// Solves a system of LinearEq2 for (k, l). Uniqueness over Z/256 holds exactly
/// when some equation pair has an odd determinant; the first such pair fixes
/// the solution via the adjugate and every equation is then checked.
///
/// Throws Error(Underdetermined) when no pair has an odd determinant and
/// Error(Inconsistent) when the equations cannot be satisfied together.
std::pair<ModByte, ModByte> solve_k_rows_mod256(std::span<const LinearEq2> eqs);

} // namespace cipher_autopsy
