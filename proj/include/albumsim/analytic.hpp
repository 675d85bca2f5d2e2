#pragma once

#include <cstdint>
#include <optional>

namespace albumsim::analytic {

// Harmonic sums H(n) = sum 1/i and H2(n) = sum 1/i^2, with H(0) = H2(0) = 0
// so a zero replacement allowance flows through the exact formulas without
// branching. Accurate to at least 12 significant digits: compensated direct
// summation up to n = 10^6, asymptotic expansion above.
double harmonic(std::int64_t n);
double harmonic2(std::int64_t n);

struct MeanResult {
  double total;   // expected stickers acquired, replacements included once
  double factor;  // total / B
};

// Expected total for one collector who completes the last K stickers by
// direct purchase: B*(H(B) - H(K)) + K.
MeanResult exact_mean_single(std::int64_t album_size, std::int64_t allowance);

struct VarianceResult {
  double variance;    // stickers^2
  double sigma_norm;  // sqrt(variance) / sqrt(B)
};

// V = B^2*(H2(B) - H2(K)) - B*(H(B) - H(K)): the last K geometric waiting
// stages drop out of the variance sum.
VarianceResult exact_variance_single(std::int64_t album_size, std::int64_t allowance);

// Large-B approximation ln(B/K) + K/B. Requires K >= 1.
double approx_factor_single(std::int64_t album_size, std::int64_t allowance);

// Expected stickers still missing after purchasing `purchased` stickers:
// B*exp(-M/B). The caller can also read off ~B-K in the album and
// ~M-(B-K) duplicates.
double approx_missing_after(std::int64_t purchased, std::int64_t album_size);

// Normalized standard deviation approximation sqrt((B/K - 1) - ln(B/K)).
double approx_sigma_norm(std::int64_t album_size, std::int64_t allowance);

// Factor when the first D stickers arrive duplicate-free: ln((B-D)/K).
// Requires B - D >= K >= 1; below that the display already covers
// everything down to replacement range.
double approx_factor_display(std::int64_t album_size, std::int64_t allowance,
                             std::int64_t display_size);

// Group completion total for F collectors swapping without replacement:
// B*ln(B) + B*(F-1)*ln(ln(B)). Per-collector factor is the value / (B*F).
double newman_shepp_total(std::int64_t album_size, std::int64_t collectors);

enum class Variant {
  SingleNoReplacement,  // ln B
  SingleReplacement,    // ln(B/K) + K/B
  SwapNoReplacement,    // ln ln B, large F
  SwapReplacement,      // 1, large F
};

// Large-size factor asymptotics per variant. Replacement variants require
// an allowance.
double asymptotic_factor(Variant variant, std::int64_t album_size,
                         std::optional<std::int64_t> allowance = std::nullopt);

// Exact and approximate single-collector values side by side for one
// (B, K) and optional display size D.
struct AnalyticReport {
  std::int64_t album_size = 0;
  std::int64_t allowance = 0;
  std::int64_t display_size = 0;
  double exact_mean = 0.0;
  double exact_factor = 0.0;
  double exact_variance = 0.0;
  double exact_sigma_norm = 0.0;
  std::optional<double> approx_factor;      // absent when K = 0
  std::optional<double> approx_sigma;       // absent when K = 0
  std::optional<double> display_factor;     // absent when D = 0 or out of range
};

AnalyticReport analyze(std::int64_t album_size, std::int64_t allowance,
                       std::int64_t display_size = 0);

}  // namespace albumsim::analytic
