#include "doctest.h"

#include <map>
#include <vector>

#include "cipher_autopsy/ecgroup.hpp"
#include "cipher_autopsy/error.hpp"
#include "cipher_autopsy/rng.hpp"

using namespace cipher_autopsy;

namespace {

ErrorCode code_of(auto &&fn) {
  try {
    fn();
  } catch (const Error &e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::Io;
}

// Brute-force model of the demo group: every point found by scanning all
// (x, y), and addition evaluated with plain long arithmetic and a
// search-based inverse instead of Fermat exponentiation.
struct NaiveGroup {
  CurveParams c = CurveParams::demo();
  std::vector<EcPoint> points;

  NaiveGroup() {
    points.push_back(EcPoint::at_infinity());
    for (long x = 0; x < c.q; ++x) {
      for (long y = 0; y < c.q; ++y) {
        if ((y * y - (x * x * x + c.a * x + c.b)) % c.q == 0) {
          points.push_back(EcPoint::affine(x, y));
        }
      }
    }
  }

  long inv(long v) const {
    v = ((v % c.q) + c.q) % c.q;
    for (long t = 1; t < c.q; ++t) {
      if (v * t % c.q == 1) {
        return t;
      }
    }
    return 0;
  }

  EcPoint add(const EcPoint &p, const EcPoint &r) const {
    if (p.infinity) return r;
    if (r.infinity) return p;
    const long q = c.q;
    long lambda;
    if (p.x == r.x) {
      if ((p.y + r.y) % q == 0) return EcPoint::at_infinity();
      lambda = (3 * p.x * p.x + c.a) % q * inv(2 * p.y) % q;
    } else {
      lambda = ((r.y - p.y) % q + q) % q * inv(r.x - p.x) % q;
    }
    const long x3 = ((lambda * lambda - p.x - r.x) % q + 2 * q) % q;
    const long y3 = ((lambda * (p.x - x3) - p.y) % q + q * q) % q;
    return EcPoint::affine(x3, y3);
  }

  EcPoint repeated(std::uint64_t n, const EcPoint &p) const {
    EcPoint acc = EcPoint::at_infinity();
    for (std::uint64_t i = 0; i < n; ++i) {
      acc = add(acc, p);
    }
    return acc;
  }
};

const NaiveGroup &naive() {
  static const NaiveGroup g;
  return g;
}

} // namespace

TEST_CASE("demo curve") {
  const CurveParams c = CurveParams::demo();
  CHECK_NOTHROW(c.validate());
  CHECK(naive().points.size() == static_cast<std::size_t>(c.order_p));
  CHECK(on_curve(generator(c), c));
  CHECK(scalar_mul(static_cast<std::uint64_t>(c.order_p), generator(c), c).infinity);
  // Order of G found by walking the cyclic subgroup.
  EcPoint p = generator(c);
  std::int64_t order = 1;
  while (!p.infinity) {
    p = naive().add(p, generator(c));
    ++order;
  }
  CHECK(order == c.order_p);
}

TEST_CASE("curve validation rejects bad parameters") {
  CurveParams c = CurveParams::demo();
  c.gy = 112;
  CHECK(code_of([&] { c.validate(); }) == ErrorCode::InvalidCurve);
  c = CurveParams::demo();
  c.order_p = 2131; // prime but wrong
  CHECK(code_of([&] { c.validate(); }) == ErrorCode::InvalidCurve);
  c = CurveParams::demo();
  c.order_p = 2138;
  CHECK(code_of([&] { c.validate(); }) == ErrorCode::InvalidCurve);
  c = CurveParams{2053, 0, 0, 0, 0, 2137}; // singular
  CHECK(code_of([&] { c.validate(); }) == ErrorCode::InvalidCurve);
  c = CurveParams::demo();
  c.q = 2051; // composite
  CHECK(code_of([&] { c.validate(); }) == ErrorCode::InvalidCurve);
}

TEST_CASE("curve text format round trip") {
  const CurveParams c = CurveParams::demo();
  CHECK(c.to_text() == "q=2053\na=0\nb=2\ngx=1\ngy=111\norder_p=2137\n");
  CHECK(CurveParams::from_text(c.to_text()) == c);
  CHECK(CurveParams::from_text("# demo\n\nq = 2053\r\na=0\nb=2\ngx=1\ngy=111\norder_p=2137") == c);
  CHECK(code_of([] { CurveParams::from_text("q=2053\n"); }) == ErrorCode::InvalidCurve);
  CHECK(code_of([] { CurveParams::from_text("q=abc\n"); }) == ErrorCode::InvalidCurve);
  CHECK(code_of([] { CurveParams::from_text("zz=1\n"); }) == ErrorCode::InvalidCurve);
}

TEST_CASE("point_add identity, inverse and errors") {
  const CurveParams c = CurveParams::demo();
  const EcPoint g = generator(c);
  CHECK(point_add(g, EcPoint::at_infinity(), c) == g);
  CHECK(point_add(EcPoint::at_infinity(), g, c) == g);
  CHECK(point_add(g, point_negate(g, c), c).infinity);
  CHECK(code_of([&] { point_add(g, EcPoint::affine(1, 112), c); }) == ErrorCode::PointNotOnCurve);
  CHECK(code_of([&] { scalar_mul(3, EcPoint::affine(5000, 1), c); }) == ErrorCode::PointNotOnCurve);
}

TEST_CASE("point_add matches the naive group on a large sample of pairs") {
  const CurveParams c = CurveParams::demo();
  const auto &pts = naive().points;
  SplitMix64 rng(21);
  // All sums with G and with the point of smallest x, plus 20000 random pairs.
  for (const EcPoint &p : pts) {
    CHECK(point_add(p, generator(c), c) == naive().add(p, generator(c)));
    CHECK(point_add(p, pts[1], c) == naive().add(p, pts[1]));
    CHECK(point_add(p, p, c) == naive().add(p, p));
  }
  for (int i = 0; i < 20000; ++i) {
    const EcPoint &p = pts[rng.below(pts.size())];
    const EcPoint &r = pts[rng.below(pts.size())];
    const EcPoint sum = point_add(p, r, c);
    CHECK(sum == naive().add(p, r));
    CHECK(on_curve(sum, c));
  }
}

TEST_CASE("group axioms on sampled triples") {
  const CurveParams c = CurveParams::demo();
  const auto &pts = naive().points;
  SplitMix64 rng(22);
  for (int i = 0; i < 3000; ++i) {
    const EcPoint &p = pts[rng.below(pts.size())];
    const EcPoint &q = pts[rng.below(pts.size())];
    const EcPoint &r = pts[rng.below(pts.size())];
    CHECK(point_add(point_add(p, q, c), r, c) == point_add(p, point_add(q, r, c), c));
    CHECK(point_add(p, q, c) == point_add(q, p, c));
    CHECK(point_add(p, point_negate(p, c), c).infinity);
  }
}

TEST_CASE("scalar_mul") {
  const CurveParams c = CurveParams::demo();
  const EcPoint g = generator(c);
  CHECK(scalar_mul(0, g, c).infinity);
  CHECK(scalar_mul(1, g, c) == g);
  CHECK(scalar_mul(7, g, c) == EcPoint::affine(808, 1836));
  CHECK(scalar_mul(static_cast<std::uint64_t>(c.order_p) + 5, g, c) == scalar_mul(5, g, c));
  for (std::uint64_t n = 0; n < 300; ++n) {
    CHECK(scalar_mul(n, g, c) == naive().repeated(n, g));
  }
  SplitMix64 rng(23);
  for (int i = 0; i < 1000; ++i) {
    const std::uint64_t m = rng.below(100000);
    const std::uint64_t n = rng.below(100000);
    CHECK(scalar_mul(m + n, g, c) == point_add(scalar_mul(m, g, c), scalar_mul(n, g, c), c));
  }
}

TEST_CASE("keygen") {
  const CurveParams c = CurveParams::demo();
  const KeyPair a1 = keygen(c, 1);
  const KeyPair a2 = keygen(c, 1);
  CHECK(a1.private_n == a2.private_n);
  CHECK(a1.public_p == a2.public_p);
  CHECK(keygen(c, 1).private_n != keygen(c, 2).private_n);
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    const KeyPair kp = keygen(c, seed);
    CHECK(kp.private_n >= 1);
    CHECK(kp.private_n < static_cast<std::uint64_t>(c.order_p));
    CHECK(kp.public_p == scalar_mul(kp.private_n, generator(c), c));
  }
}

TEST_CASE("shared_point") {
  const CurveParams c = CurveParams::demo();
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const KeyPair a = keygen(c, 2 * seed);
    const KeyPair b = keygen(c, 2 * seed + 1);
    CHECK(shared_point(a.private_n, b.public_p, c) == shared_point(b.private_n, a.public_p, c));
  }
  CHECK(code_of([&] { shared_point(5, EcPoint::at_infinity(), c); }) == ErrorCode::PointNotOnCurve);
  CHECK(code_of([&] { shared_point(static_cast<std::uint64_t>(c.order_p), generator(c), c); }) ==
        ErrorCode::DegenerateSharedPoint);
  const EcPoint p = scalar_mul(9, generator(c), c);
  for (std::uint64_t n = 1; n < 40; ++n) {
    CHECK(shared_point(n, p, c) == naive().repeated(n, p));
  }
}

TEST_CASE("derive_hill_key") {
  const CurveParams c = CurveParams::demo();
  // K_I = 1000 G = (54, 653); 54 G = (1452, 1150), 653 G = (210, 143).
  const EcPoint k_i = scalar_mul(1000, generator(c), c);
  CHECK(k_i == EcPoint::affine(54, 653));
  const Mat2 k = derive_hill_key(k_i, c);
  CHECK(k.entries == std::array<std::uint8_t, 4>{172, 126, 210, 143});

  // The demo group has no point with x = 0 (2 is a non-residue mod 2053) and no
  // point with y = 0 (that would have order 2), so the degenerate case needs a
  // smaller curve: y^2 = x^3 + 2x + 1 over F_5 has 7 points and contains (0, 1).
  const CurveParams tiny{5, 2, 1, 1, 2, 7};
  CHECK_NOTHROW(tiny.validate());
  CHECK(code_of([&] { derive_hill_key(EcPoint::affine(0, 1), tiny); }) == ErrorCode::DegenerateDerivedPoint);
  CHECK_NOTHROW(derive_hill_key(EcPoint::affine(1, 2), tiny));
  for (const EcPoint &p : naive().points) {
    if (!p.infinity) {
      CHECK(p.x % c.order_p != 0);
      CHECK(p.y % c.order_p != 0);
    }
  }
  CHECK(code_of([&] { derive_hill_key(EcPoint::at_infinity(), c); }) == ErrorCode::DegenerateDerivedPoint);
}

TEST_CASE("key agreement gives both parties the same Hill key") {
  const CurveParams c = CurveParams::demo();
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const KeyAgreement run = run_key_agreement(c, seed);
    CHECK(run.shared_alice == run.shared_bob);
    CHECK(run.k_alice == run.k_bob);
  }
}
