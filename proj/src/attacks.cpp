#include "cipher_autopsy/attacks.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>
#include <unordered_map>

#include "cipher_autopsy/error.hpp"
#include "cipher_autopsy/rng.hpp"
#include "hex.hpp"

namespace cipher_autopsy {

namespace {

using Clock = std::chrono::steady_clock;

std::chrono::nanoseconds since(Clock::time_point start) {
  return std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - start);
}

bool is_diagonal(const Block &b) noexcept { return b[0] == b[1] && b[1] == b[2] && b[2] == b[3]; }

std::string block_hex(const Block &b) { return detail::encode_hex(b); }

} // namespace

std::string_view attack_status_name(AttackStatus status) noexcept {
  switch (status) {
  case AttackStatus::Unique: return "Unique";
  case AttackStatus::Ambiguous: return "Ambiguous";
  case AttackStatus::Inconsistent: return "Inconsistent";
  }
  return "Unknown";
}

nlohmann::json to_json(const AttackOutcome &outcome) {
  nlohmann::json j;
  j["status"] = attack_status_name(outcome.status);
  j["key"] = outcome.recovered_key ? nlohmann::json(outcome.recovered_key->to_hex()) : nlohmann::json(nullptr);
  j["candidates_tested"] = outcome.candidates_tested;
  j["consistent_keys"] = outcome.consistent_keys;
  j["uniqueness_verified"] = outcome.uniqueness_verified;
  if (outcome.first_match) {
    j["first_match"] = outcome.first_match->to_hex();
  }
  j["elapsed_ms"] = std::chrono::duration<double, std::milli>(outcome.elapsed).count();
  return j;
}

// ---------------------------------------------------------------------------
// Known plaintext
// ---------------------------------------------------------------------------

KpaSample parse_kpa_line(std::string_view line) {
  const auto bytes = line.size() == 16 ? detail::decode_hex(line) : std::nullopt;
  if (!bytes) {
    throw Error(ErrorCode::BadKey, "sample line must be 16 hex digits (plaintext then ciphertext): " +
                                       std::string(line));
  }
  KpaSample s;
  std::copy_n(bytes->begin(), 4, s.plaintext.begin());
  std::copy_n(bytes->begin() + 4, 4, s.ciphertext.begin());
  return s;
}

std::string format_kpa_line(const KpaSample &sample) {
  return block_hex(sample.plaintext) + block_hex(sample.ciphertext);
}

std::vector<KpaSample> parse_kpa_samples(std::string_view text) {
  std::vector<KpaSample> samples;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t')) {
      line.remove_suffix(1);
    }
    while (!line.empty() && (line.front() == ' ' || line.front() == '\t')) {
      line.remove_prefix(1);
    }
    if (line.empty() || line.front() == '#') {
      continue;
    }
    samples.push_back(parse_kpa_line(line));
  }
  return samples;
}

AttackOutcome kpa_recover_hill_key(std::span<const KpaSample> samples) {
  const auto start = Clock::now();
  AttackOutcome out;

  std::vector<LinearEq2> row0;
  std::vector<LinearEq2> row1;
  for (const KpaSample &s : samples) {
    const Block &p = s.plaintext;
    const Block &c = s.ciphertext;
    const auto a = static_cast<std::uint8_t>(p[0] - p[2]);
    const auto b = static_cast<std::uint8_t>(p[1] - p[3]);
    // Rows 2 and 3 of K_m must reproduce rows 0 and 1 shifted by the plaintext.
    if (static_cast<std::uint8_t>(c[2] - c[0]) != a || static_cast<std::uint8_t>(c[3] - c[1]) != b) {
      out.status = AttackStatus::Inconsistent;
      out.elapsed = since(start);
      return out;
    }
    row0.push_back({a, b, static_cast<std::uint8_t>(c[0] - p[2])});
    row1.push_back({a, b, static_cast<std::uint8_t>(c[1] - p[3])});
  }

  try {
    const auto [k11, k12] = solve_k_rows_mod256(row0);
    const auto [k21, k22] = solve_k_rows_mod256(row1);
    const HillKey key = HillKey::from_bytes({k11, k12, k21, k22});
    out.candidates_tested = 1;
    for (const KpaSample &s : samples) {
      if (ecchc_encrypt_block(s.plaintext, key) != s.ciphertext) {
        out.status = AttackStatus::Inconsistent;
        out.elapsed = since(start);
        return out;
      }
    }
    out.status = AttackStatus::Unique;
    out.recovered_key = key;
    out.consistent_keys = 1;
    out.uniqueness_verified = true;
  } catch (const Error &e) {
    if (e.code() == ErrorCode::Underdetermined) {
      out.status = AttackStatus::Ambiguous;
    } else if (e.code() == ErrorCode::Inconsistent) {
      out.status = AttackStatus::Inconsistent;
    } else {
      throw;
    }
  }
  out.elapsed = since(start);
  return out;
}

// ---------------------------------------------------------------------------
// ECCHC key search
// ---------------------------------------------------------------------------

std::size_t KeyMask::free_bytes() const noexcept {
  return static_cast<std::size_t>(std::count(bytes.begin(), bytes.end(), std::nullopt));
}

KeyMask KeyMask::parse(std::string_view text) {
  if (text.size() != 8) {
    throw Error(ErrorCode::BadMask, "mask must be 8 characters, hex or \"??\" per key byte");
  }
  KeyMask mask;
  for (std::size_t i = 0; i < 4; ++i) {
    const std::string_view pair = text.substr(2 * i, 2);
    if (pair == "??") {
      continue;
    }
    const auto decoded = detail::decode_hex(pair);
    if (!decoded) {
      throw Error(ErrorCode::BadMask, "bad mask byte: " + std::string(pair));
    }
    mask.bytes[i] = (*decoded)[0];
  }
  return mask;
}

std::string KeyMask::to_string() const {
  std::string out;
  for (const auto &b : bytes) {
    out += b ? detail::encode_hex(std::span<const std::uint8_t>(&*b, 1)) : std::string("??");
  }
  return out;
}

AttackOutcome brute_force_hill(const GrayImage &plain, const GrayImage &cipher, const KeyMask &mask,
                               const HillSearchOptions &options) {
  const auto start = Clock::now();
  if (plain.width() != cipher.width() || plain.height() != cipher.height()) {
    throw Error(ErrorCode::DimensionMismatch, "plaintext and ciphertext differ in size");
  }
  const std::vector<Block> pb = blocks_of(plain);
  const std::vector<Block> cb = blocks_of(cipher);

  // ECB: only distinct plaintext blocks matter. Diagonal blocks are fixed under
  // every key and carry no information.
  std::unordered_map<std::uint32_t, std::uint32_t> seen;
  std::vector<std::pair<Block, Block>> pairs;
  for (std::size_t i = 0; i < pb.size(); ++i) {
    const auto p = pack_block(pb[i]);
    const auto c = pack_block(cb[i]);
    const auto [it, inserted] = seen.emplace(p, c);
    if (!inserted) {
      if (it->second != c) {
        throw Error(ErrorCode::NotFound, "equal plaintext blocks map to different ciphertext blocks");
      }
      continue;
    }
    if (is_diagonal(pb[i])) {
      if (p != c) {
        throw Error(ErrorCode::NotFound, "a block (p,p,p,p) is not fixed, so no ECCHC key fits");
      }
      continue;
    }
    pairs.emplace_back(pb[i], cb[i]);
  }

  std::vector<std::size_t> free_pos;
  for (std::size_t i = 0; i < 4; ++i) {
    if (!mask.bytes[i]) {
      free_pos.push_back(i);
    }
  }
  if (free_pos.size() == 4 && !options.allow_full_search) {
    throw Error(ErrorCode::SearchTooLarge, "searching all 2^32 keys requires the full-search flag");
  }
  const std::uint64_t space = std::uint64_t{1} << (8 * free_pos.size());

  // Candidate index t enumerates keys in ascending byte order: the first free
  // byte is the most significant digit of t.
  auto key_at = [&](std::uint64_t t) {
    std::array<std::uint8_t, 4> bytes{};
    for (std::size_t i = 0; i < 4; ++i) {
      bytes[i] = mask.bytes[i].value_or(0);
    }
    for (std::size_t j = 0; j < free_pos.size(); ++j) {
      const std::size_t shift = 8 * (free_pos.size() - 1 - j);
      bytes[free_pos[j]] = static_cast<std::uint8_t>(t >> shift);
    }
    return HillKey::from_bytes(bytes);
  };
  auto matches = [&](const HillKey &key) {
    return std::all_of(pairs.begin(), pairs.end(),
                       [&](const auto &pc) { return ecchc_encrypt_block(pc.first, key) == pc.second; });
  };

  unsigned threads = options.threads != 0 ? options.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, space));

  constexpr std::uint64_t kNone = std::numeric_limits<std::uint64_t>::max();
  std::atomic<std::uint64_t> best{kNone};
  std::atomic<std::uint64_t> match_count{0};

  auto worker = [&](std::uint64_t lo, std::uint64_t hi) {
    std::uint64_t local = 0;
    for (std::uint64_t t = lo; t < hi; ++t) {
      if (!options.exhaustive && t > best.load(std::memory_order_relaxed)) {
        break;
      }
      if (!matches(key_at(t))) {
        continue;
      }
      ++local;
      std::uint64_t cur = best.load();
      while (t < cur && !best.compare_exchange_weak(cur, t)) {
      }
      if (!options.exhaustive) {
        break;
      }
    }
    match_count += local;
  };

  {
    std::vector<std::jthread> pool;
    const std::uint64_t chunk = space / threads;
    for (unsigned w = 0; w < threads; ++w) {
      const std::uint64_t lo = w * chunk;
      const std::uint64_t hi = w + 1 == threads ? space : lo + chunk;
      pool.emplace_back(worker, lo, hi);
    }
  }

  const std::uint64_t found = best.load();
  if (found == kNone) {
    throw Error(ErrorCode::NotFound, "no key under mask " + mask.to_string() + " maps plaintext to ciphertext");
  }

  AttackOutcome out;
  const HillKey first = key_at(found);
  if (options.exhaustive) {
    out.candidates_tested = space;
    out.consistent_keys = match_count.load();
    out.uniqueness_verified = true;
    if (out.consistent_keys == 1) {
      out.status = AttackStatus::Unique;
      out.recovered_key = first;
    } else {
      out.status = AttackStatus::Ambiguous;
      out.first_match = first;
    }
  } else {
    out.candidates_tested = found + 1;
    out.status = AttackStatus::Unique;
    out.recovered_key = first;
  }
  out.elapsed = since(start);
  return out;
}

// ---------------------------------------------------------------------------
// DWC
// ---------------------------------------------------------------------------

double smoothness_score(const GrayImage &candidate) {
  const std::vector<Block> blocks = blocks_of(candidate);
  if (blocks.empty()) {
    return 0.0;
  }
  std::uint64_t hits = 0;
  std::uint64_t deviation = 0;
  for (const Block &b : blocks) {
    std::array<std::uint8_t, 3> rest = {b[1], b[2], b[3]};
    std::sort(rest.begin(), rest.end());
    const int dist = std::abs(int{b[0]} - int{rest[1]});
    if (dist <= 16) {
      ++hits;
    }
    deviation += static_cast<std::uint64_t>(dist);
  }
  const double mean_dev = static_cast<double>(deviation) / static_cast<double>(blocks.size());
  return static_cast<double>(hits) + 1.0 / (1.0 + mean_dev);
}

std::vector<DwcCandidate> brute_force_dwc(const GrayImage &cipher, const PlaintextPredicate &predicate) {
  // CT^-1 is keyless; the candidate plaintext for key k' is the partial
  // recovery with k' XOR-ed into byte 0 of every block.
  const PartialRecovery base = dwc_partial_recover(cipher);
  const std::vector<Block> blocks = blocks_of(base.image);

  std::vector<DwcCandidate> out;
  out.reserve(256);
  std::vector<Block> trial(blocks.size());
  for (unsigned k = 0; k < 256; ++k) {
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      trial[i] = blocks[i];
      trial[i][0] = static_cast<std::uint8_t>(trial[i][0] ^ k);
    }
    const GrayImage candidate = unblocks(trial, cipher.width(), cipher.height());
    out.push_back({DwcKey{static_cast<std::uint8_t>(k)}, predicate(candidate)});
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const DwcCandidate &x, const DwcCandidate &y) { return x.score > y.score; });
  return out;
}

double PartialRecovery::recovered_fraction() const noexcept {
  if (recovered.empty()) {
    return 0.0;
  }
  const auto n = std::count(recovered.begin(), recovered.end(), true);
  return static_cast<double>(n) / static_cast<double>(recovered.size());
}

std::string PartialRecovery::mask_rle() const {
  std::string out;
  std::size_t i = 0;
  while (i < recovered.size()) {
    std::size_t j = i;
    while (j < recovered.size() && recovered[j] == recovered[i]) {
      ++j;
    }
    out += std::to_string(j - i);
    out += recovered[i] ? 'R' : 'U';
    i = j;
  }
  return out;
}

PartialRecovery dwc_partial_recover(const GrayImage &cipher) {
  PartialRecovery out;
  // With k = 0 the mask is exactly the public counter part i ^ (lsb(i) << 24).
  out.image = dwc_decrypt(cipher, DwcKey{0});
  out.recovered.resize(cipher.pixel_count());
  for (std::size_t i = 0; i < out.recovered.size(); ++i) {
    out.recovered[i] = i % 4 != 0;
  }
  return out;
}

nlohmann::json to_json(const PartialRecovery &recovery) {
  return {{"status", "Partial"},
          {"recovered_fraction", recovery.recovered_fraction()},
          {"recovered_mask_rle", recovery.mask_rle()}};
}

// ---------------------------------------------------------------------------
// Structural leaks
// ---------------------------------------------------------------------------

FixedPointCensus fixed_point_census(const HillKey &key, std::size_t sample_count, std::uint64_t seed) {
  FixedPointCensus census;
  for (unsigned p = 0; p < 256; ++p) {
    const auto v = static_cast<std::uint8_t>(p);
    const Block b{v, v, v, v};
    if (ecchc_encrypt_block(b, key) == b) {
      ++census.diagonal_fixed;
    }
  }
  SplitMix64 rng(seed);
  while (census.sampled < sample_count) {
    const Block b = unpack_block(static_cast<std::uint32_t>(rng.next() >> 32));
    if (is_diagonal(b)) {
      continue;
    }
    ++census.sampled;
    if (ecchc_encrypt_block(b, key) == b) {
      ++census.sampled_fixed;
      if (census.examples.size() < 16) {
        census.examples.push_back(b);
      }
    }
  }
  return census;
}

nlohmann::json to_json(const FixedPointCensus &census) {
  nlohmann::json examples = nlohmann::json::array();
  for (const Block &b : census.examples) {
    examples.push_back(block_hex(b));
  }
  return {{"diagonal_fixed", census.diagonal_fixed},
          {"sampled", census.sampled},
          {"sampled_fixed", census.sampled_fixed},
          {"examples", examples}};
}

EcbScan ecb_repeat_detector(const GrayImage &cipher) {
  const std::vector<Block> blocks = blocks_of(cipher);
  std::unordered_map<std::uint32_t, std::size_t> counts;
  for (const Block &b : blocks) {
    ++counts[pack_block(b)];
  }
  EcbScan scan;
  scan.total_blocks = blocks.size();
  scan.distinct_blocks = counts.size();
  for (const auto &[value, count] : counts) {
    scan.largest_class = std::max(scan.largest_class, count);
    ++scan.class_histogram[count];
  }
  return scan;
}

nlohmann::json to_json(const EcbScan &scan) {
  nlohmann::json hist = nlohmann::json::object();
  for (const auto &[size, classes] : scan.class_histogram) {
    hist[std::to_string(size)] = classes;
  }
  return {{"total_blocks", scan.total_blocks},
          {"distinct_blocks", scan.distinct_blocks},
          {"largest_class", scan.largest_class},
          {"class_histogram", hist}};
}

} // namespace cipher_autopsy
