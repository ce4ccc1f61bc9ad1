#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "cipher_autopsy/algebra.hpp"

namespace cipher_autopsy {

/// Short Weierstrass curve y^2 = x^3 + a*x + b over F_q with a generator of
/// prime order. Field elements are kept in [0, q).
struct CurveParams {
  std::int64_t q = 0;
  std::int64_t a = 0;
  std::int64_t b = 0;
  std::int64_t gx = 0;
  std::int64_t gy = 0;
  std::int64_t order_p = 0;

  /// Throws Error(InvalidCurve) unless q is an odd prime below 2^31, the curve
  /// is nonsingular, G lies on it, order_p is prime and order_p * G is infinity.
  void validate() const;

  /// Desk-scale default: q = 2053, y^2 = x^3 + 2, G = (1, 111), |E| = 2137.
  /// First hit of the search "primes q > 2048 ascending, then a >= 0, then
  /// b >= 1, accept the first nonsingular curve with prime point count >= 257";
  /// G is the point with the smallest x, then the smallest y.
  static CurveParams demo();

  /// One `name=value` line per field, decimal, in declaration order.
  std::string to_text() const;
  /// Accepts the format above; blank lines and `#` comments are skipped.
  static CurveParams from_text(std::string_view text);

  friend bool operator==(const CurveParams &, const CurveParams &) = default;
};

struct EcPoint {
  bool infinity = true;
  std::int64_t x = 0;
  std::int64_t y = 0;

  static constexpr EcPoint at_infinity() noexcept { return {}; }
  static constexpr EcPoint affine(std::int64_t x, std::int64_t y) noexcept { return {false, x, y}; }

  friend bool operator==(const EcPoint &, const EcPoint &) = default;
};

struct KeyPair {
  std::uint64_t private_n = 0;
  EcPoint public_p;
};

bool on_curve(const EcPoint &p, const CurveParams &curve) noexcept;
EcPoint generator(const CurveParams &curve) noexcept;
EcPoint point_negate(const EcPoint &p, const CurveParams &curve) noexcept;

/// Chord-and-tangent group law. Throws Error(PointNotOnCurve).
EcPoint point_add(const EcPoint &p1, const EcPoint &p2, const CurveParams &curve);

/// Double-and-add; n is reduced mod order_p first. Throws Error(PointNotOnCurve).
EcPoint scalar_mul(std::uint64_t n, const EcPoint &p, const CurveParams &curve);

/// private_n drawn uniformly from [1, order_p - 1] with SplitMix64(seed).
KeyPair keygen(const CurveParams &curve, std::uint64_t seed);

/// my_private * their_public. Throws Error(PointNotOnCurve) for an infinite or
/// off-curve peer key and Error(DegenerateSharedPoint) if the product is infinity.
EcPoint shared_point(std::uint64_t my_private, const EcPoint &their_public, const CurveParams &curve);

/// Hill key from the shared point K_I = (x, y): the first row is the affine
/// coordinates of x*G, the second row those of y*G, both reduced mod 256 at
/// the very end. Throws Error(DegenerateDerivedPoint) if either multiple is
/// infinity (x or y divisible by order_p).
Mat2 derive_hill_key(const EcPoint &k_i, const CurveParams &curve);

/// Both sides of one Diffie-Hellman run on `curve`.
struct KeyAgreement {
  KeyPair alice;
  KeyPair bob;
  EcPoint shared_alice; // n_A * P_B
  EcPoint shared_bob;   // n_B * P_A
  Mat2 k_alice;
  Mat2 k_bob;
};

/// Party seeds are the first two outputs of SplitMix64(seed). Propagates the
/// Degenerate* errors of shared_point and derive_hill_key.
KeyAgreement run_key_agreement(const CurveParams &curve, std::uint64_t seed);

} // namespace cipher_autopsy
