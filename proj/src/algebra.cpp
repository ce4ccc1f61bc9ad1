#include "cipher_autopsy/algebra.hpp"

#include "cipher_autopsy/error.hpp"

namespace cipher_autopsy {

GfByte gf_inv(GfByte a) {
  if (a == 0) {
    throw Error(ErrorCode::ZeroInverse, "0 has no inverse in GF(2^8)");
  }
  // a^254 = a^-1 since the multiplicative group has order 255.
  GfByte result = 1;
  GfByte base = a;
  for (unsigned e = 254; e != 0; e >>= 1) {
    if (e & 1u) {
      result = gf_mul(result, base);
    }
    base = gf_mul(base, base);
  }
  return result;
}

ModByte mod256_inv(ModByte a) {
  if ((a & 1u) == 0) {
    throw Error(ErrorCode::ZeroInverse, "even elements are not units of Z/256");
  }
  // Newton iteration: each step doubles the number of correct low bits.
  std::uint8_t x = a; // correct to 3 bits for odd a
  for (int i = 0; i < 3; ++i) {
    x = static_cast<std::uint8_t>(x * (2 - a * x));
  }
  return x;
}

Block gf_mat4_vec(const Mat4 &m, const Block &v) noexcept {
  Block out{};
  for (std::size_t r = 0; r < 4; ++r) {
    GfByte acc = 0;
    for (std::size_t c = 0; c < 4; ++c) {
      acc ^= gf_mul(m.at(r, c), v[c]);
    }
    out[r] = acc;
  }
  return out;
}

std::pair<ModByte, ModByte> solve_k_rows_mod256(std::span<const LinearEq2> eqs) {
  for (const LinearEq2 &eq : eqs) {
    if (eq.a == 0 && eq.b == 0 && eq.rhs != 0) {
      throw Error(ErrorCode::Inconsistent, "equation 0 = nonzero");
    }
  }

  for (std::size_t i = 0; i < eqs.size(); ++i) {
    for (std::size_t j = i + 1; j < eqs.size(); ++j) {
      const LinearEq2 &e1 = eqs[i];
      const LinearEq2 &e2 = eqs[j];
      const auto det = static_cast<std::uint8_t>(e1.a * e2.b - e2.a * e1.b);
      if ((det & 1u) == 0) {
        continue;
      }
      const std::uint8_t det_inv = mod256_inv(det);
      const auto k = static_cast<std::uint8_t>(det_inv * (e2.b * e1.rhs - e1.b * e2.rhs));
      const auto l = static_cast<std::uint8_t>(det_inv * (e1.a * e2.rhs - e2.a * e1.rhs));
      for (const LinearEq2 &eq : eqs) {
        if (static_cast<std::uint8_t>(k * eq.a + l * eq.b) != eq.rhs) {
          throw Error(ErrorCode::Inconsistent, "equations admit no common solution");
        }
      }
      return {k, l};
    }
  }
  throw Error(ErrorCode::Underdetermined, "no equation pair has an odd determinant");
}

} // namespace cipher_autopsy
