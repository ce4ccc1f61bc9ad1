#pragma once

#include <cstdint>

namespace cipher_autopsy {

/// SplitMix64 (Steele, Lea, Flood 2014). Used for every seeded draw in the
/// project so fixtures are identical on all platforms and standard libraries.
class SplitMix64 {
public:
  explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  constexpr std::uint64_t next() noexcept {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  constexpr std::uint8_t next_byte() noexcept {
    return static_cast<std::uint8_t>(next() >> 56);
  }

  /// Uniform draw in [0, bound) by rejection; bound must be nonzero.
  constexpr std::uint64_t below(std::uint64_t bound) noexcept {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    std::uint64_t v = next();
    while (v >= limit) {
      v = next();
    }
    return v % bound;
  }

private:
  std::uint64_t state_;
};

} // namespace cipher_autopsy
