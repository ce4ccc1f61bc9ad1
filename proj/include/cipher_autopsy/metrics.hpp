#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "cipher_autopsy/imagekit.hpp"

namespace cipher_autopsy {

/// Shannon entropy of the 256-bin histogram, in bits. Throws Error(EmptyImage).
double entropy(const GrayImage &img);

// The pairwise metrics throw Error(DimensionMismatch) for differently sized
// images and Error(EmptyImage) for empty ones. Sums are exact integers; floating
// point enters only at the final division or logarithm.

double mse(const GrayImage &a, const GrayImage &b);
/// 20 log10(255 / sqrt(MSE)); +infinity for identical images.
double psnr(const GrayImage &a, const GrayImage &b);
/// Mean |a - b| / 255, as a percentage.
double uaci(const GrayImage &a, const GrayImage &b);

struct MetricsReport {
  double entropy_bits = 0.0;
  double psnr_db = 0.0;
  double uaci_percent = 0.0;
  double mse = 0.0;
};

/// Entropy of the ciphertext, PSNR and UACI between plaintext and ciphertext.
MetricsReport evaluate(const GrayImage &plain, const GrayImage &cipher);

/// Closed-form expectations for the two reference pairs: a constant black
/// image against uniform noise, and two independent uniform noise images.
struct ReferenceExpectations {
  double mse_black_random = 0.0;
  double psnr_black_random = 0.0;
  double mse_random_random = 0.0;
  double psnr_random_random = 0.0;
  double uaci_black_random = 0.0;
  /// 100 * (1/3 + 1/(3*255)), the customary closed form (a continuous
  /// approximation over [0, 256]).
  double uaci_random_random = 0.0;
  /// Exact discrete value 100 * E|X - Y| / 255 = 100 * 257 / 768.
  double uaci_random_random_exact = 0.0;
};

ReferenceExpectations reference_expectations();

struct ReportRow {
  std::string algorithm;
  std::string image;
  MetricsReport metrics;
};

/// Four decimals, or "inf".
std::string format_metric(double value);

/// Header `algorithm,image,entropy,psnr,uaci_percent`, then one line per row.
std::string report_to_csv(const std::vector<ReportRow> &rows);
/// Array of objects with the same fields. Values are rounded to four
/// decimals; infinite PSNR is the string "inf".
nlohmann::json report_to_json(const std::vector<ReportRow> &rows);

} // namespace cipher_autopsy
