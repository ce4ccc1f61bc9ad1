#include "cli_app.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "cipher_autopsy/attacks.hpp"
#include "cipher_autopsy/dwc.hpp"
#include "cipher_autopsy/ecchc.hpp"
#include "cipher_autopsy/ecgroup.hpp"
#include "cipher_autopsy/error.hpp"
#include "cipher_autopsy/imagekit.hpp"
#include "cipher_autopsy/metrics.hpp"
#include "cipher_autopsy/rng.hpp"

namespace cipher_autopsy::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::uint64_t kDefaultSeed = 2018;
constexpr const char *kFixturesEnv = "CIPHER_AUTOPSY_FIXTURES";

/// Raised when an attack completes but its postcondition does not hold.
struct AttackFailure {
  json outcome;
};

int exit_code_for(ErrorCode code) {
  switch (code) {
  case ErrorCode::Io: return kIoError;
  case ErrorCode::BadKey:
  case ErrorCode::BadMask: return kKeyError;
  case ErrorCode::BadDimensions:
  case ErrorCode::EmptyImage:
  case ErrorCode::DimensionMismatch:
  case ErrorCode::MalformedHeader:
  case ErrorCode::UnsupportedMaxval:
  case ErrorCode::TruncatedData:
  case ErrorCode::BadCellSize: return kImageError;
  case ErrorCode::NotFound:
  case ErrorCode::SearchTooLarge: return kAttackFailed;
  case ErrorCode::InvalidCurve:
  case ErrorCode::PointNotOnCurve:
  case ErrorCode::DegenerateSharedPoint:
  case ErrorCode::DegenerateDerivedPoint: return kCurveError;
  default: return kInternal;
  }
}

json point_json(const EcPoint &p) {
  if (p.infinity) {
    return "infinity";
  }
  return {{"x", p.x}, {"y", p.y}};
}

json matrix_json(const Mat4 &m) {
  json rows = json::array();
  for (std::size_t r = 0; r < 4; ++r) {
    rows.push_back({m.at(r, 0), m.at(r, 1), m.at(r, 2), m.at(r, 3)});
  }
  return rows;
}

std::string read_text(const fs::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::Io, "cannot open " + path.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path &path, const std::string &text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) {
    throw Error(ErrorCode::Io, "cannot write " + path.string());
  }
}

CurveParams load_curve(const std::string &path) {
  CurveParams curve = path.empty() ? CurveParams::demo() : CurveParams::from_text(read_text(path));
  curve.validate();
  return curve;
}

HillKey ecchc_key_from_seed(const CurveParams &curve, std::uint64_t seed) {
  const KeyAgreement run = run_key_agreement(curve, seed);
  return expand_key(run.k_alice);
}

DwcKey dwc_key_from_seed(std::uint64_t seed) {
  SplitMix64 rng(seed ^ 0xD3C0'0000'0000'0000ULL);
  return DwcKey{rng.next_byte()};
}

GrayImage encrypt_with(const std::string &alg, const GrayImage &img, const std::string &key, bool decrypt) {
  if (alg == "ecchc") {
    return ecchc_encrypt(img, HillKey::from_hex(key));
  }
  const DwcKey k = DwcKey::from_hex(key);
  return decrypt ? dwc_decrypt(img, k) : dwc_encrypt(img, k);
}

void emit(std::ostream &out, const std::string &path, const std::string &text) {
  if (path.empty()) {
    out << text;
  } else {
    write_text(path, text);
  }
}

} // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  CLI::App app{"Image-cipher cryptanalysis workbench: ECCHC, the deliberately weak cipher, metrics and attacks",
               "cipher-autopsy"};
  app.require_subcommand(1);

  // Shared option storage; each subcommand binds the ones it uses.
  std::uint64_t seed = kDefaultSeed;
  std::string alg;
  std::string key;
  std::string in_path;
  std::string out_path;
  std::string plain_path;
  std::string format = "json";
  std::string mask_text;
  std::string curve_path;
  std::string fixtures_dir;
  std::size_t cell = 32;
  std::size_t side = kDefaultImageSide;
  unsigned value = 0;
  std::size_t count = 10;
  std::size_t top = 5;
  unsigned threads = 0;
  bool first_match = false;
  bool full_search = false;

  const auto algs = CLI::IsMember({"ecchc", "dwc"});
  const auto formats = CLI::IsMember({"csv", "json"});

  auto *keygen_cmd = app.add_subcommand("keygen", "Two-party EC key agreement and Hill key derivation");
  keygen_cmd->add_option("--seed", seed, "Seed for both parties' key draws");
  keygen_cmd->add_option("--curve", curve_path, "Curve file (name=value lines); default is the demo curve");

  auto *encrypt_cmd = app.add_subcommand("encrypt", "Encrypt a PGM image");
  auto *decrypt_cmd = app.add_subcommand("decrypt", "Decrypt a PGM image");
  for (auto *cmd : {encrypt_cmd, decrypt_cmd}) {
    cmd->add_option("--alg", alg, "ecchc or dwc")->required()->check(algs);
    cmd->add_option("--key", key, "Key hex: 8 digits for ecchc, 2 for dwc")->required();
    cmd->add_option("--in", in_path, "Input PGM")->required();
    cmd->add_option("--out", out_path, "Output PGM")->required();
  }

  auto *metrics_cmd = app.add_subcommand("metrics", "Entropy of --in, PSNR and UACI against --plain");
  metrics_cmd->add_option("--plain", plain_path, "Reference (plaintext) PGM")->required();
  metrics_cmd->add_option("--in", in_path, "Evaluated (ciphertext) PGM")->required();
  metrics_cmd->add_option("--format", format, "csv or json")->check(formats);

  auto *report_cmd = app.add_subcommand("report", "Entropy/PSNR/UACI table for both ciphers");
  report_cmd->add_option("--seed", seed, "Seed for keys and generated images");
  report_cmd->add_option("--format", format, "csv or json")->check(formats);
  report_cmd->add_option("--out", out_path, "Write the report here instead of stdout");
  report_cmd->add_option("--fixtures", fixtures_dir, std::string("Directory with lena.pgm/baboon.pgm (default $") +
                                                         kFixturesEnv + ")");

  auto *attack_cmd = app.add_subcommand("attack", "Run one attack");
  attack_cmd->require_subcommand(1);
  auto *kpa_cmd = attack_cmd->add_subcommand("kpa", "Known-plaintext recovery of the ECCHC key");
  kpa_cmd->add_option("--in", in_path, "Sample file: 16 hex digits per line, plaintext then ciphertext")
      ->required();
  auto *brute_hill_cmd = attack_cmd->add_subcommand("brute-hill", "Exhaustive ECCHC key search under a byte mask");
  brute_hill_cmd->add_option("--plain", plain_path, "Known plaintext PGM")->required();
  brute_hill_cmd->add_option("--in", in_path, "Ciphertext PGM")->required();
  brute_hill_cmd->add_option("--mask", mask_text, "Key mask, e.g. 3a??7f?? (?? = unknown byte)")->required();
  brute_hill_cmd->add_flag("--first-match", first_match, "Stop at the first matching key");
  brute_hill_cmd->add_flag("--full", full_search, "Allow the 2^32 search when all four bytes are unknown");
  brute_hill_cmd->add_option("--threads", threads, "Worker threads (0 = hardware concurrency)");
  auto *brute_dwc_cmd = attack_cmd->add_subcommand("brute-dwc", "Rank all 256 DWC keys by plaintext smoothness");
  brute_dwc_cmd->add_option("--in", in_path, "Ciphertext PGM")->required();
  brute_dwc_cmd->add_option("--top", top, "Number of ranked keys to print");
  brute_dwc_cmd->add_option("--out", out_path, "Write the top candidate's plaintext here");
  auto *partial_cmd = attack_cmd->add_subcommand("dwc-partial", "Keyless recovery of 3 of every 4 DWC bytes");
  partial_cmd->add_option("--in", in_path, "Ciphertext PGM")->required();
  partial_cmd->add_option("--out", out_path, "Recovered PGM");
  auto *ecb_cmd = attack_cmd->add_subcommand("ecb-scan", "Duplicate-block statistics of a ciphertext");
  ecb_cmd->add_option("--in", in_path, "Ciphertext PGM")->required();
  auto *fixed_cmd = attack_cmd->add_subcommand("fixed-points", "Fixed-point census for an ECCHC key");
  fixed_cmd->add_option("--key", key, "ECCHC key hex")->required();
  fixed_cmd->add_option("--samples", count, "Random non-diagonal blocks to test")->default_val(100000);
  fixed_cmd->add_option("--seed", seed, "Sampling seed");

  auto *gen_cmd = app.add_subcommand("gen", "Generate a fixture");
  gen_cmd->require_subcommand(1);
  auto *gen_checker = gen_cmd->add_subcommand("checkerboard", "0/255 checkerboard");
  gen_checker->add_option("--cell", cell, "Cell size in pixels (multiple of 4)");
  auto *gen_drawing_cmd = gen_cmd->add_subcommand("drawing", "Synthetic line drawing");
  auto *gen_noise_cmd = gen_cmd->add_subcommand("noise", "Uniform noise");
  auto *gen_photo_cmd = gen_cmd->add_subcommand("photo", "Synthetic photograph");
  auto *gen_constant_cmd = gen_cmd->add_subcommand("constant", "Constant image");
  gen_constant_cmd->add_option("--value", value, "Pixel value")->check(CLI::Range(0, 255));
  for (auto *cmd : {gen_drawing_cmd, gen_noise_cmd, gen_photo_cmd}) {
    cmd->add_option("--seed", seed, "Generator seed");
  }
  for (auto *cmd : {gen_checker, gen_drawing_cmd, gen_noise_cmd, gen_photo_cmd, gen_constant_cmd}) {
    cmd->add_option("--size", side, "Side length in pixels");
    cmd->add_option("--out", out_path, "Output PGM")->required();
  }
  auto *gen_samples_cmd = gen_cmd->add_subcommand("samples", "Known-plaintext sample file for attack kpa");
  gen_samples_cmd->add_option("--key", key, "ECCHC key hex")->required();
  gen_samples_cmd->add_option("--count", count, "Number of random blocks");
  gen_samples_cmd->add_option("--seed", seed, "Sampling seed");
  gen_samples_cmd->add_option("--out", out_path, "Output file")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError &e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (keygen_cmd->parsed()) {
      const CurveParams curve = load_curve(curve_path);
      const KeyAgreement run = run_key_agreement(curve, seed);
      const HillKey key_a = expand_key(run.k_alice);
      const HillKey key_b = expand_key(run.k_bob);
      const bool self_inverse = mat_mul_mod256(key_a.km, key_a.km) == Mat4::identity();
      json j = {{"seed", seed},
                {"curve", {{"q", curve.q}, {"a", curve.a}, {"b", curve.b}, {"gx", curve.gx}, {"gy", curve.gy},
                           {"order_p", curve.order_p}}},
                {"alice", {{"private", run.alice.private_n}, {"public", point_json(run.alice.public_p)}}},
                {"bob", {{"private", run.bob.private_n}, {"public", point_json(run.bob.public_p)}}},
                {"shared_alice", point_json(run.shared_alice)},
                {"shared_bob", point_json(run.shared_bob)},
                {"shared_equal", run.shared_alice == run.shared_bob},
                {"key_alice", key_a.to_hex()},
                {"key_bob", key_b.to_hex()},
                {"keys_equal", key_a == key_b},
                {"km", matrix_json(key_a.km)},
                {"km_self_inverse", self_inverse}};
      out << j.dump(2) << '\n';
      if (!(run.shared_alice == run.shared_bob) || !(key_a == key_b) || !self_inverse) {
        err << json{{"error", "KeyAgreementCheckFailed"}, {"message", "parties disagree or K_m^2 != I"}}.dump()
            << '\n';
        return kInternal;
      }
      return kOk;
    }

    if (encrypt_cmd->parsed() || decrypt_cmd->parsed()) {
      const GrayImage img = load_pgm(in_path);
      save_pgm(out_path, encrypt_with(alg, img, key, decrypt_cmd->parsed()));
      return kOk;
    }

    if (metrics_cmd->parsed()) {
      const GrayImage plain = load_pgm(plain_path);
      const GrayImage cipher = load_pgm(in_path);
      const std::vector<ReportRow> rows = {{"-", fs::path(in_path).filename().string(), evaluate(plain, cipher)}};
      out << (format == "csv" ? report_to_csv(rows) : report_to_json(rows).dump(2) + "\n");
      return kOk;
    }

    if (report_cmd->parsed()) {
      if (fixtures_dir.empty()) {
        if (const char *env = std::getenv(kFixturesEnv)) {
          fixtures_dir = env;
        }
      }
      std::vector<std::pair<std::string, GrayImage>> images;
      for (const char *name : {"lena", "baboon"}) {
        const fs::path p = fs::path(fixtures_dir.empty() ? "." : fixtures_dir) / (std::string(name) + ".pgm");
        if (!fixtures_dir.empty() && fs::exists(p)) {
          images.emplace_back(name, load_pgm(p));
        } else {
          err << json{{"warning", "MissingFixture"}, {"image", name}, {"path", p.string()}}.dump() << '\n';
        }
      }
      images.emplace_back("synthetic-photo", gen_photo(seed));
      images.emplace_back("checkerboard", gen_checkerboard());
      images.emplace_back("drawing", gen_drawing(seed));

      const HillKey hill = ecchc_key_from_seed(CurveParams::demo(), seed);
      const DwcKey dwc = dwc_key_from_seed(seed);
      std::vector<ReportRow> rows;
      for (const auto &[name, img] : images) {
        rows.push_back({"ECCHC", name, evaluate(img, ecchc_encrypt(img, hill))});
      }
      for (const auto &[name, img] : images) {
        rows.push_back({"DWC", name, evaluate(img, dwc_encrypt(img, dwc))});
      }
      const std::string text = format == "csv" ? report_to_csv(rows) : report_to_json(rows).dump(2) + "\n";
      emit(out, out_path, text);
      return kOk;
    }

    if (attack_cmd->parsed()) {
      if (kpa_cmd->parsed()) {
        const auto samples = parse_kpa_samples(read_text(in_path));
        const AttackOutcome outcome = kpa_recover_hill_key(samples);
        json j = to_json(outcome);
        j["samples"] = samples.size();
        out << j.dump(2) << '\n';
        if (outcome.status != AttackStatus::Unique) {
          throw AttackFailure{j};
        }
        return kOk;
      }
      if (brute_hill_cmd->parsed()) {
        const GrayImage plain = load_pgm(plain_path);
        const GrayImage cipher = load_pgm(in_path);
        HillSearchOptions opts;
        opts.exhaustive = !first_match;
        opts.allow_full_search = full_search;
        opts.threads = threads;
        const AttackOutcome outcome = brute_force_hill(plain, cipher, KeyMask::parse(mask_text), opts);
        json j = to_json(outcome);
        j["mask"] = mask_text;
        out << j.dump(2) << '\n';
        if (outcome.status != AttackStatus::Unique) {
          throw AttackFailure{j};
        }
        return kOk;
      }
      if (brute_dwc_cmd->parsed()) {
        const GrayImage cipher = load_pgm(in_path);
        const auto start = std::chrono::steady_clock::now();
        const auto ranked = brute_force_dwc(cipher);
        const double ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        json list = json::array();
        for (std::size_t i = 0; i < std::min(top, ranked.size()); ++i) {
          list.push_back({{"key", ranked[i].key.to_hex()}, {"score", ranked[i].score}});
        }
        out << json{{"status", "Ranked"},
                    {"key", ranked.front().key.to_hex()},
                    {"candidates_tested", ranked.size()},
                    {"elapsed_ms", ms},
                    {"ranking", list}}
                   .dump(2)
            << '\n';
        if (!out_path.empty()) {
          save_pgm(out_path, dwc_decrypt(cipher, ranked.front().key));
        }
        return kOk;
      }
      if (partial_cmd->parsed()) {
        const GrayImage cipher = load_pgm(in_path);
        const PartialRecovery rec = dwc_partial_recover(cipher);
        out << to_json(rec).dump(2) << '\n';
        if (!out_path.empty()) {
          save_pgm(out_path, rec.image);
        }
        return kOk;
      }
      if (ecb_cmd->parsed()) {
        out << to_json(ecb_repeat_detector(load_pgm(in_path))).dump(2) << '\n';
        return kOk;
      }
      if (fixed_cmd->parsed()) {
        const FixedPointCensus census = fixed_point_census(HillKey::from_hex(key), count, seed);
        json j = to_json(census);
        j["key"] = key;
        out << j.dump(2) << '\n';
        return census.diagonal_fixed == 256 ? kOk : kInternal;
      }
    }

    if (gen_cmd->parsed()) {
      if (gen_samples_cmd->parsed()) {
        const HillKey hill = HillKey::from_hex(key);
        SplitMix64 rng(seed);
        std::string text;
        for (std::size_t i = 0; i < count; ++i) {
          const Block p = unpack_block(static_cast<std::uint32_t>(rng.next() >> 32));
          text += format_kpa_line({p, ecchc_encrypt_block(p, hill)}) + "\n";
        }
        write_text(out_path, text);
        return kOk;
      }
      GrayImage img;
      if (gen_checker->parsed()) {
        img = gen_checkerboard(cell, side);
      } else if (gen_drawing_cmd->parsed()) {
        img = gen_drawing(seed, side);
      } else if (gen_noise_cmd->parsed()) {
        img = gen_noise(seed, side, side);
      } else if (gen_photo_cmd->parsed()) {
        img = gen_photo(seed, side);
      } else {
        img = gen_constant(static_cast<std::uint8_t>(value), side, side);
      }
      save_pgm(out_path, img);
      return kOk;
    }
  } catch (const AttackFailure &f) {
    err << json{{"error", "AttackFailed"}, {"outcome", f.outcome}}.dump() << '\n';
    return kAttackFailed;
  } catch (const Error &e) {
    err << json{{"error", error_code_name(e.code())}, {"message", e.what()}}.dump() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception &e) {
    err << json{{"error", "Internal"}, {"message", e.what()}}.dump() << '\n';
    return kInternal;
  }
  return kUsage;
}

} // namespace cipher_autopsy::cli
