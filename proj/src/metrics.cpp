#include "cipher_autopsy/metrics.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <sstream>

#include "cipher_autopsy/error.hpp"

namespace cipher_autopsy {

namespace {

void require_comparable(const GrayImage &a, const GrayImage &b) {
  if (a.width() != b.width() || a.height() != b.height()) {
    throw Error(ErrorCode::DimensionMismatch, "images differ in size");
  }
  if (a.empty()) {
    throw Error(ErrorCode::EmptyImage, "image has no pixels");
  }
}

std::uint64_t squared_error_sum(const GrayImage &a, const GrayImage &b) {
  require_comparable(a, b);
  const auto pa = a.pixels();
  const auto pb = b.pixels();
  std::uint64_t sum = 0;
  for (std::size_t i = 0; i < pa.size(); ++i) {
    const int d = int{pa[i]} - int{pb[i]};
    sum += static_cast<std::uint64_t>(d * d);
  }
  return sum;
}

double psnr_from_mse(double m) {
  if (m == 0.0) {
    return std::numeric_limits<double>::infinity();
  }
  return 20.0 * std::log10(255.0 / std::sqrt(m));
}

double round4(double v) { return std::round(v * 1e4) / 1e4; }

} // namespace

double entropy(const GrayImage &img) {
  if (img.empty()) {
    throw Error(ErrorCode::EmptyImage, "image has no pixels");
  }
  std::array<std::uint64_t, 256> hist{};
  for (std::uint8_t p : img.pixels()) {
    ++hist[p];
  }
  const double n = static_cast<double>(img.pixel_count());
  double h = 0.0;
  for (std::uint64_t count : hist) {
    if (count != 0) {
      const double p = static_cast<double>(count) / n;
      h -= p * std::log2(p);
    }
  }
  // A single occupied bin gives -1 * log2(1) = -0.0.
  return h == 0.0 ? 0.0 : h;
}

double mse(const GrayImage &a, const GrayImage &b) {
  return static_cast<double>(squared_error_sum(a, b)) / static_cast<double>(a.pixel_count());
}

double psnr(const GrayImage &a, const GrayImage &b) { return psnr_from_mse(mse(a, b)); }

double uaci(const GrayImage &a, const GrayImage &b) {
  require_comparable(a, b);
  const auto pa = a.pixels();
  const auto pb = b.pixels();
  std::uint64_t sum = 0;
  for (std::size_t i = 0; i < pa.size(); ++i) {
    sum += static_cast<std::uint64_t>(std::abs(int{pa[i]} - int{pb[i]}));
  }
  return 100.0 * static_cast<double>(sum) / (255.0 * static_cast<double>(pa.size()));
}

MetricsReport evaluate(const GrayImage &plain, const GrayImage &cipher) {
  MetricsReport r;
  r.entropy_bits = entropy(cipher);
  r.mse = mse(plain, cipher);
  r.psnr_db = psnr_from_mse(r.mse);
  r.uaci_percent = uaci(plain, cipher);
  return r;
}

ReferenceExpectations reference_expectations() {
  // Pixel values X, Y independent and uniform on {0, ..., 255}.
  constexpr double levels = 256.0;
  double sum_sq = 0.0;
  double sum = 0.0;
  for (int i = 0; i < 256; ++i) {
    sum_sq += static_cast<double>(i) * i;
    sum += i;
  }
  ReferenceExpectations e;
  // E[X^2]
  e.mse_black_random = sum_sq / levels;
  e.psnr_black_random = psnr_from_mse(e.mse_black_random);
  // E[(X - Y)^2] = 2 Var(X), Var(X) = (256^2 - 1) / 12
  e.mse_random_random = 2.0 * (levels * levels - 1.0) / 12.0;
  e.psnr_random_random = psnr_from_mse(e.mse_random_random);
  // E[X] / 255
  e.uaci_black_random = 100.0 * (sum / levels) / 255.0;
  e.uaci_random_random = 100.0 * (1.0 / 3.0 + 1.0 / (3.0 * 255.0));
  // E|X - Y| = (256^2 - 1) / (3 * 256)
  e.uaci_random_random_exact = 100.0 * ((levels * levels - 1.0) / (3.0 * levels)) / 255.0;
  return e;
}

std::string format_metric(double value) {
  if (std::isinf(value)) {
    return value > 0 ? "inf" : "-inf";
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", value);
  return buf;
}

std::string report_to_csv(const std::vector<ReportRow> &rows) {
  std::ostringstream out;
  out << "algorithm,image,entropy,psnr,uaci_percent\n";
  for (const auto &row : rows) {
    out << row.algorithm << ',' << row.image << ',' << format_metric(row.metrics.entropy_bits) << ','
        << format_metric(row.metrics.psnr_db) << ',' << format_metric(row.metrics.uaci_percent) << '\n';
  }
  return out.str();
}

nlohmann::json report_to_json(const std::vector<ReportRow> &rows) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto &row : rows) {
    nlohmann::json psnr_value;
    if (std::isinf(row.metrics.psnr_db)) {
      psnr_value = "inf";
    } else {
      psnr_value = round4(row.metrics.psnr_db);
    }
    out.push_back({{"algorithm", row.algorithm},
                   {"image", row.image},
                   {"entropy", round4(row.metrics.entropy_bits)},
                   {"psnr", psnr_value},
                   {"uaci_percent", round4(row.metrics.uaci_percent)}});
  }
  return out;
}

} // namespace cipher_autopsy
