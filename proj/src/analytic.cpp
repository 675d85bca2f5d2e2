#include "albumsim/analytic.hpp"

#include <cmath>
#include <stdexcept>

namespace albumsim::analytic {

namespace {

constexpr double kEulerGamma = 0.57721566490153286061;
constexpr double kPiSquaredOver6 = 1.6449340668482264365;
constexpr std::int64_t kDirectSumLimit = 1000000;

void require(bool ok, const char* what) {
  if (!ok) throw std::domain_error(what);
}

// Kahan-compensated sum of f(i) for i = n..1 (small terms first).
template <typename Term>
double compensated_sum(std::int64_t n, Term term) {
  double sum = 0.0, carry = 0.0;
  for (std::int64_t i = n; i >= 1; --i) {
    const double y = term(i) - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
  return sum;
}

}  // namespace

double harmonic(std::int64_t n) {
  require(n >= 0, "harmonic: n must be non-negative");
  if (n == 0) return 0.0;
  if (n <= kDirectSumLimit)
    return compensated_sum(n, [](std::int64_t i) { return 1.0 / static_cast<double>(i); });
  // ln n + gamma + 1/(2n) - 1/(12n^2) + 1/(120n^4); next term ~ 1/(252 n^6).
  const double x = static_cast<double>(n);
  const double x2 = x * x;
  return std::log(x) + kEulerGamma + 1.0 / (2.0 * x) - 1.0 / (12.0 * x2) +
         1.0 / (120.0 * x2 * x2);
}

double harmonic2(std::int64_t n) {
  require(n >= 0, "harmonic2: n must be non-negative");
  if (n == 0) return 0.0;
  if (n <= kDirectSumLimit)
    return compensated_sum(
        n, [](std::int64_t i) { return 1.0 / (static_cast<double>(i) * static_cast<double>(i)); });
  // pi^2/6 - trigamma(n+1), trigamma via its asymptotic series.
  const double x = static_cast<double>(n) + 1.0;
  const double x2 = x * x;
  const double x3 = x2 * x;
  const double x5 = x3 * x2;
  const double x7 = x5 * x2;
  const double trigamma =
      1.0 / x + 1.0 / (2.0 * x2) + 1.0 / (6.0 * x3) - 1.0 / (30.0 * x5) + 1.0 / (42.0 * x7);
  return kPiSquaredOver6 - trigamma;
}

MeanResult exact_mean_single(std::int64_t album_size, std::int64_t allowance) {
  require(album_size >= 1, "exact_mean_single: album size must be >= 1");
  require(allowance >= 0 && allowance <= album_size,
          "exact_mean_single: allowance must lie in [0, album size]");
  const double b = static_cast<double>(album_size);
  const double total =
      b * (harmonic(album_size) - harmonic(allowance)) + static_cast<double>(allowance);
  return {total, total / b};
}

VarianceResult exact_variance_single(std::int64_t album_size, std::int64_t allowance) {
  require(album_size >= 1, "exact_variance_single: album size must be >= 1");
  require(allowance >= 0 && allowance <= album_size,
          "exact_variance_single: allowance must lie in [0, album size]");
  const double b = static_cast<double>(album_size);
  const double variance = b * b * (harmonic2(album_size) - harmonic2(allowance)) -
                          b * (harmonic(album_size) - harmonic(allowance));
  return {variance, std::sqrt(variance / b)};
}

double approx_factor_single(std::int64_t album_size, std::int64_t allowance) {
  require(allowance >= 1, "approx_factor_single: allowance must be >= 1 (use the exact mean for K = 0)");
  require(allowance <= album_size, "approx_factor_single: allowance must be <= album size");
  const double b = static_cast<double>(album_size);
  const double k = static_cast<double>(allowance);
  return std::log(b / k) + k / b;
}

double approx_missing_after(std::int64_t purchased, std::int64_t album_size) {
  require(purchased >= 0, "approx_missing_after: purchase count must be non-negative");
  require(album_size >= 1, "approx_missing_after: album size must be >= 1");
  const double b = static_cast<double>(album_size);
  return b * std::exp(-static_cast<double>(purchased) / b);
}

double approx_sigma_norm(std::int64_t album_size, std::int64_t allowance) {
  require(allowance >= 1, "approx_sigma_norm: allowance must be >= 1");
  require(allowance <= album_size, "approx_sigma_norm: allowance must be <= album size");
  const double r = static_cast<double>(album_size) / static_cast<double>(allowance);
  return std::sqrt((r - 1.0) - std::log(r));
}

double approx_factor_display(std::int64_t album_size, std::int64_t allowance,
                             std::int64_t display_size) {
  require(allowance >= 1, "approx_factor_display: allowance must be >= 1");
  require(display_size >= 0, "approx_factor_display: display size must be non-negative");
  require(album_size - display_size >= allowance,
          "approx_factor_display: display covers the album down to replacement range");
  return std::log(static_cast<double>(album_size - display_size) /
                  static_cast<double>(allowance));
}

double newman_shepp_total(std::int64_t album_size, std::int64_t collectors) {
  require(collectors >= 1, "newman_shepp_total: collector count must be >= 1");
  require(album_size >= 3 || collectors == 1,
          "newman_shepp_total: album size must be >= 3 when collectors > 1");
  require(album_size >= 1, "newman_shepp_total: album size must be >= 1");
  const double b = static_cast<double>(album_size);
  double total = b * std::log(b);
  if (collectors > 1)
    total += b * static_cast<double>(collectors - 1) * std::log(std::log(b));
  return total;
}

double asymptotic_factor(Variant variant, std::int64_t album_size,
                         std::optional<std::int64_t> allowance) {
  require(album_size >= 3, "asymptotic_factor: album size must be >= 3");
  switch (variant) {
    case Variant::SingleNoReplacement:
      return std::log(static_cast<double>(album_size));
    case Variant::SingleReplacement:
      require(allowance.has_value(), "asymptotic_factor: replacement variant needs an allowance");
      return approx_factor_single(album_size, *allowance);
    case Variant::SwapNoReplacement:
      return std::log(std::log(static_cast<double>(album_size)));
    case Variant::SwapReplacement:
      require(allowance.has_value(), "asymptotic_factor: replacement variant needs an allowance");
      return 1.0;
  }
  throw std::domain_error("asymptotic_factor: unknown variant");
}

AnalyticReport analyze(std::int64_t album_size, std::int64_t allowance,
                       std::int64_t display_size) {
  AnalyticReport report;
  report.album_size = album_size;
  report.allowance = allowance;
  report.display_size = display_size;
  const auto mean = exact_mean_single(album_size, allowance);
  const auto var = exact_variance_single(album_size, allowance);
  report.exact_mean = mean.total;
  report.exact_factor = mean.factor;
  report.exact_variance = var.variance;
  report.exact_sigma_norm = var.sigma_norm;
  if (allowance >= 1) {
    report.approx_factor = approx_factor_single(album_size, allowance);
    report.approx_sigma = approx_sigma_norm(album_size, allowance);
    if (display_size > 0 && album_size - display_size >= allowance)
      report.display_factor = approx_factor_display(album_size, allowance, display_size);
  }
  return report;
}

}  // namespace albumsim::analytic
