#include "cipher_autopsy/ecgroup.hpp"

#include <charconv>
#include <sstream>

#include "cipher_autopsy/error.hpp"
#include "cipher_autopsy/rng.hpp"

namespace cipher_autopsy {

namespace {

std::int64_t mod(std::int64_t v, std::int64_t q) noexcept {
  const std::int64_t r = v % q;
  return r < 0 ? r + q : r;
}

std::int64_t mul_mod(std::int64_t a, std::int64_t b, std::int64_t q) noexcept {
  // q < 2^31 keeps the product below 2^62.
  return (a * b) % q;
}

std::int64_t pow_mod(std::int64_t base, std::int64_t exp, std::int64_t q) noexcept {
  std::int64_t result = 1;
  base = mod(base, q);
  while (exp > 0) {
    if (exp & 1) {
      result = mul_mod(result, base, q);
    }
    base = mul_mod(base, base, q);
    exp >>= 1;
  }
  return result;
}

// q is prime, so a^(q-2) is the inverse.
std::int64_t inv_mod(std::int64_t a, std::int64_t q) noexcept { return pow_mod(a, q - 2, q); }

bool is_prime(std::int64_t n) noexcept {
  if (n < 2) {
    return false;
  }
  for (std::int64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      return false;
    }
  }
  return true;
}

void require_on_curve(const EcPoint &p, const CurveParams &curve) {
  if (!on_curve(p, curve)) {
    throw Error(ErrorCode::PointNotOnCurve,
                "point (" + std::to_string(p.x) + ", " + std::to_string(p.y) + ") is not on the curve");
  }
}

// Group law on validated inputs.
EcPoint add_unchecked(const EcPoint &p1, const EcPoint &p2, const CurveParams &c) noexcept {
  if (p1.infinity) {
    return p2;
  }
  if (p2.infinity) {
    return p1;
  }
  const std::int64_t q = c.q;
  std::int64_t slope = 0;
  if (p1.x == p2.x) {
    if (mod(p1.y + p2.y, q) == 0) {
      return EcPoint::at_infinity();
    }
    // Tangent: (3x^2 + a) / 2y
    const std::int64_t num = mod(3 * mul_mod(p1.x, p1.x, q) + c.a, q);
    slope = mul_mod(num, inv_mod(mod(2 * p1.y, q), q), q);
  } else {
    slope = mul_mod(mod(p2.y - p1.y, q), inv_mod(mod(p2.x - p1.x, q), q), q);
  }
  const std::int64_t x3 = mod(mul_mod(slope, slope, q) - p1.x - p2.x, q);
  const std::int64_t y3 = mod(mul_mod(slope, mod(p1.x - x3, q), q) - p1.y, q);
  return EcPoint::affine(x3, y3);
}

EcPoint mul_unchecked(std::uint64_t n, const EcPoint &p, const CurveParams &c) noexcept {
  EcPoint acc = EcPoint::at_infinity();
  EcPoint addend = p;
  n %= static_cast<std::uint64_t>(c.order_p);
  while (n != 0) {
    if (n & 1u) {
      acc = add_unchecked(acc, addend, c);
    }
    addend = add_unchecked(addend, addend, c);
    n >>= 1;
  }
  return acc;
}

} // namespace

void CurveParams::validate() const {
  auto fail = [](const std::string &why) { throw Error(ErrorCode::InvalidCurve, why); };
  if (q < 3 || q >= (std::int64_t{1} << 31) || !is_prime(q)) {
    fail("q must be an odd prime below 2^31");
  }
  if (a < 0 || a >= q || b < 0 || b >= q || gx < 0 || gx >= q || gy < 0 || gy >= q) {
    fail("curve coefficients and generator must be reduced mod q");
  }
  const std::int64_t disc = mod(4 * pow_mod(a, 3, q) + 27 * mul_mod(b, b, q), q);
  if (disc == 0) {
    fail("curve is singular");
  }
  if (!on_curve(generator(*this), *this)) {
    fail("generator is not on the curve");
  }
  if (!is_prime(order_p)) {
    fail("order_p must be prime");
  }
  // Multiply by order_p without the reduction mod order_p that scalar_mul applies.
  EcPoint acc = EcPoint::at_infinity();
  EcPoint addend = generator(*this);
  for (std::int64_t n = order_p; n != 0; n >>= 1) {
    if (n & 1) {
      acc = add_unchecked(acc, addend, *this);
    }
    addend = add_unchecked(addend, addend, *this);
  }
  if (!acc.infinity) {
    fail("order_p * G is not the point at infinity");
  }
}

CurveParams CurveParams::demo() { return CurveParams{2053, 0, 2, 1, 111, 2137}; }

std::string CurveParams::to_text() const {
  std::ostringstream out;
  out << "q=" << q << '\n'
      << "a=" << a << '\n'
      << "b=" << b << '\n'
      << "gx=" << gx << '\n'
      << "gy=" << gy << '\n'
      << "order_p=" << order_p << '\n';
  return out.str();
}

CurveParams CurveParams::from_text(std::string_view text) {
  CurveParams c;
  unsigned seen = 0;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t')) {
      line.pop_back();
    }
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') {
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::InvalidCurve, "expected name=value, got: " + line);
    }
    std::string name = line.substr(first, eq - first);
    while (!name.empty() && (name.back() == ' ' || name.back() == '\t')) {
      name.pop_back();
    }
    std::string value = line.substr(eq + 1);
    value.erase(0, value.find_first_not_of(" \t"));
    std::int64_t parsed = 0;
    const auto [end, ec] = std::from_chars(value.data(), value.data() + value.size(), parsed);
    if (ec != std::errc{} || end != value.data() + value.size()) {
      throw Error(ErrorCode::InvalidCurve, "not a decimal integer: " + value);
    }
    const std::pair<const char *, std::int64_t CurveParams::*> fields[] = {
        {"q", &CurveParams::q},   {"a", &CurveParams::a},   {"b", &CurveParams::b},
        {"gx", &CurveParams::gx}, {"gy", &CurveParams::gy}, {"order_p", &CurveParams::order_p}};
    bool known = false;
    for (unsigned i = 0; i < std::size(fields); ++i) {
      if (name == fields[i].first) {
        c.*(fields[i].second) = parsed;
        seen |= 1u << i;
        known = true;
      }
    }
    if (!known) {
      throw Error(ErrorCode::InvalidCurve, "unknown curve field: " + name);
    }
  }
  if (seen != 0x3Fu) {
    throw Error(ErrorCode::InvalidCurve, "curve file must set q, a, b, gx, gy and order_p");
  }
  return c;
}

bool on_curve(const EcPoint &p, const CurveParams &curve) noexcept {
  if (p.infinity) {
    return true;
  }
  const std::int64_t q = curve.q;
  if (p.x < 0 || p.x >= q || p.y < 0 || p.y >= q) {
    return false;
  }
  const std::int64_t lhs = mul_mod(p.y, p.y, q);
  const std::int64_t rhs = mod(pow_mod(p.x, 3, q) + mul_mod(curve.a, p.x, q) + curve.b, q);
  return lhs == rhs;
}

EcPoint generator(const CurveParams &curve) noexcept { return EcPoint::affine(curve.gx, curve.gy); }

EcPoint point_negate(const EcPoint &p, const CurveParams &curve) noexcept {
  if (p.infinity) {
    return p;
  }
  return EcPoint::affine(p.x, mod(-p.y, curve.q));
}

EcPoint point_add(const EcPoint &p1, const EcPoint &p2, const CurveParams &curve) {
  require_on_curve(p1, curve);
  require_on_curve(p2, curve);
  return add_unchecked(p1, p2, curve);
}

EcPoint scalar_mul(std::uint64_t n, const EcPoint &p, const CurveParams &curve) {
  require_on_curve(p, curve);
  return mul_unchecked(n, p, curve);
}

KeyPair keygen(const CurveParams &curve, std::uint64_t seed) {
  SplitMix64 rng(seed);
  KeyPair kp;
  kp.private_n = 1 + rng.below(static_cast<std::uint64_t>(curve.order_p - 1));
  kp.public_p = mul_unchecked(kp.private_n, generator(curve), curve);
  return kp;
}

EcPoint shared_point(std::uint64_t my_private, const EcPoint &their_public, const CurveParams &curve) {
  if (their_public.infinity) {
    throw Error(ErrorCode::PointNotOnCurve, "peer public key is the point at infinity");
  }
  const EcPoint k = scalar_mul(my_private, their_public, curve);
  if (k.infinity) {
    throw Error(ErrorCode::DegenerateSharedPoint, "shared point is the point at infinity");
  }
  return k;
}

Mat2 derive_hill_key(const EcPoint &k_i, const CurveParams &curve) {
  if (k_i.infinity) {
    throw Error(ErrorCode::DegenerateDerivedPoint, "shared point is the point at infinity");
  }
  require_on_curve(k_i, curve);
  const EcPoint g = generator(curve);
  const EcPoint xg = mul_unchecked(static_cast<std::uint64_t>(k_i.x), g, curve);
  const EcPoint yg = mul_unchecked(static_cast<std::uint64_t>(k_i.y), g, curve);
  if (xg.infinity || yg.infinity) {
    throw Error(ErrorCode::DegenerateDerivedPoint, "x*G or y*G is the point at infinity");
  }
  Mat2 k;
  k.at(0, 0) = static_cast<std::uint8_t>(xg.x % 256);
  k.at(0, 1) = static_cast<std::uint8_t>(xg.y % 256);
  k.at(1, 0) = static_cast<std::uint8_t>(yg.x % 256);
  k.at(1, 1) = static_cast<std::uint8_t>(yg.y % 256);
  return k;
}

KeyAgreement run_key_agreement(const CurveParams &curve, std::uint64_t seed) {
  SplitMix64 rng(seed);
  const std::uint64_t seed_a = rng.next();
  const std::uint64_t seed_b = rng.next();
  KeyAgreement run;
  run.alice = keygen(curve, seed_a);
  run.bob = keygen(curve, seed_b);
  run.shared_alice = shared_point(run.alice.private_n, run.bob.public_p, curve);
  run.shared_bob = shared_point(run.bob.private_n, run.alice.public_p, curve);
  run.k_alice = derive_hill_key(run.shared_alice, curve);
  run.k_bob = derive_hill_key(run.shared_bob, curve);
  return run;
}

} // namespace cipher_autopsy
