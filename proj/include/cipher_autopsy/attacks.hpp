#pragma once

#include <array>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "cipher_autopsy/algebra.hpp"
#include "cipher_autopsy/dwc.hpp"
#include "cipher_autopsy/ecchc.hpp"
#include "cipher_autopsy/imagekit.hpp"

namespace cipher_autopsy {

struct KpaSample {
  Block plaintext{};
  Block ciphertext{};
};

enum class AttackStatus { Unique, Ambiguous, Inconsistent };

std::string_view attack_status_name(AttackStatus status) noexcept;

struct AttackOutcome {
  AttackStatus status = AttackStatus::Ambiguous;
  /// Present iff status == Unique.
  std::optional<HillKey> recovered_key;
  std::uint64_t candidates_tested = 0;
  /// Number of candidate keys consistent with the data; 0 when not counted.
  std::uint64_t consistent_keys = 0;
  bool uniqueness_verified = false;
  /// Smallest matching key of an Ambiguous search.
  std::optional<HillKey> first_match;
  std::chrono::nanoseconds elapsed{0};
};

nlohmann::json to_json(const AttackOutcome &outcome);

// ---------------------------------------------------------------------------
// Known-plaintext key recovery for ECCHC.
//
// For C = K_m P the rows of K_m give
//   c0 = k11*a + k12*b + p2      c2 = k11*a + k12*b + p0
//   c1 = k21*a + k22*b + p3      c3 = k21*a + k22*b + p1
// with a = p0 - p2 and b = p1 - p3 (mod 256). Rows 2 and 3 repeat rows 0 and 1,
// so each sample contributes one equation per key row and at least two samples
// are needed. Both rows share the coefficients (a, b).
// ---------------------------------------------------------------------------

/// Parses one sample line of 16 hex digits: plaintext bytes then ciphertext bytes.
KpaSample parse_kpa_line(std::string_view line);
std::string format_kpa_line(const KpaSample &sample);
/// Parses a whole samples file, skipping blank lines and `#` comments.
std::vector<KpaSample> parse_kpa_samples(std::string_view text);

AttackOutcome kpa_recover_hill_key(std::span<const KpaSample> samples);

// ---------------------------------------------------------------------------
// Exhaustive key search for ECCHC.
// ---------------------------------------------------------------------------

/// Per-byte constraint on (k11, k12, k21, k22); nullopt marks a free byte.
struct KeyMask {
  std::array<std::optional<std::uint8_t>, 4> bytes{};

  std::size_t free_bytes() const noexcept;
  /// Eight characters, two per key byte: hex digits for a fixed byte, "??" for
  /// a free one, e.g. "3a??7f??". Throws Error(BadMask).
  static KeyMask parse(std::string_view text);
  std::string to_string() const;
};

struct HillSearchOptions {
  /// Keep scanning after the first match to count every consistent key.
  bool exhaustive = true;
  /// Searches over all four bytes (2^32 keys) are refused unless set.
  bool allow_full_search = false;
  /// 0 selects std::thread::hardware_concurrency().
  unsigned threads = 0;
};

/// Enumerates keys consistent with `mask` in ascending (k11, k12, k21, k22)
/// order and reports the smallest one that maps `plain` to `cipher`.
/// In exhaustive mode the status is Ambiguous when more than one key matches
/// and candidates_tested is the size of the search space; in first-match mode
/// candidates_tested is the rank of the match in enumeration order.
///
/// Throws Error(DimensionMismatch), Error(BadDimensions), Error(SearchTooLarge)
/// and Error(NotFound).
AttackOutcome brute_force_hill(const GrayImage &plain, const GrayImage &cipher, const KeyMask &mask,
                               const HillSearchOptions &options = {});

// ---------------------------------------------------------------------------
// DWC attacks.
// ---------------------------------------------------------------------------

/// Plausibility score of a candidate plaintext; higher is more plausible.
using PlaintextPredicate = std::function<double(const GrayImage &)>;

/// Default recognizer for smooth images: counts blocks whose byte 0 lies
/// within +-16 of the median of bytes 1..3, plus 1 / (1 + mean distance) as a
/// tie-break. A constant image scores exactly blocks + 1 under the correct
/// key and strictly less under every other key.
double smoothness_score(const GrayImage &candidate);

struct DwcCandidate {
  DwcKey key;
  double score = 0.0;
};

/// Tries all 256 keys and returns them sorted by descending score (ties by
/// ascending key). Throws Error(BadDimensions).
std::vector<DwcCandidate> brute_force_dwc(const GrayImage &cipher,
                                          const PlaintextPredicate &predicate = smoothness_score);

struct PartialRecovery {
  /// Bytes 1..3 of each block are plaintext; byte 0 is plaintext XOR k.
  GrayImage image;
  /// One flag per pixel, true where the byte is exact plaintext.
  std::vector<bool> recovered;

  double recovered_fraction() const noexcept;
  /// Run-length encoding of `recovered`: "<count>R" / "<count>U" tokens.
  std::string mask_rle() const;
};

/// Keyless recovery: CT^-1 on each block, then XOR with the public counter
/// part of the mask. Throws Error(BadDimensions).
PartialRecovery dwc_partial_recover(const GrayImage &cipher);

nlohmann::json to_json(const PartialRecovery &recovery);

// ---------------------------------------------------------------------------
// Structural leaks of ECCHC.
// ---------------------------------------------------------------------------

struct FixedPointCensus {
  /// How many of the 256 blocks (p, p, p, p) are fixed. Always 256.
  std::size_t diagonal_fixed = 0;
  std::size_t sampled = 0;
  /// Fixed points among the random non-diagonal samples.
  std::size_t sampled_fixed = 0;
  /// Up to 16 examples of sampled fixed points.
  std::vector<Block> examples;
};

FixedPointCensus fixed_point_census(const HillKey &key, std::size_t sample_count = 0,
                                    std::uint64_t seed = 0);

nlohmann::json to_json(const FixedPointCensus &census);

struct EcbScan {
  std::size_t total_blocks = 0;
  std::size_t distinct_blocks = 0;
  std::size_t largest_class = 0;
  /// class size -> number of distinct block values occurring that often.
  std::map<std::size_t, std::size_t> class_histogram;
};

/// Throws Error(BadDimensions).
EcbScan ecb_repeat_detector(const GrayImage &cipher);

nlohmann::json to_json(const EcbScan &scan);

} // namespace cipher_autopsy
