#pragma once

#include <cstdint>
#include <span>

#include "albumsim/model.hpp"
#include "albumsim/simulate.hpp"

namespace albumsim::stats {

// 95% two-sided normal quantile used throughout; fixed so outputs stay
// comparable across invocations.
inline constexpr double kZ95 = 1.96;

// Single-pass mean and squared-deviation accumulator (Welford). Merging is
// associative and commutative up to floating-point noise, so partial
// accumulators from concurrent workers can be combined.
class Accumulator {
 public:
  void add(double x);
  void merge(const Accumulator& other);

  std::int64_t count() const { return count_; }
  double mean() const { return mean_; }
  double sum_squared_dev() const { return m2_; }
  double sample_variance() const;  // requires count >= 2
  double sample_std() const;

 private:
  std::int64_t count_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

// z * s / sqrt(n), in the same unit as the standard deviation.
double ci_halfwidth(double sample_std, std::int64_t n, double z = kZ95);

// Smallest run count whose factor half-width is at or below the target:
// ceil((z * sigma_norm * sqrt(B) / (target * B * F))^2).
std::int64_t required_runs(double target_halfwidth, double sigma_norm_estimate,
                           std::int64_t album_size, std::int64_t collectors,
                           double z = kZ95);

// Summary over per-run statistics x = group total acquired / F. Runs are
// the independent unit (swaps correlate collectors within a run).
SummaryStats summarize_values(std::span<const double> per_run_totals, std::int64_t album_size);
SummaryStats summarize(std::span<const RunOutcome> outcomes, std::int64_t album_size,
                       std::int64_t collectors);
SummaryStats summarize(std::span<const GroupTotals> totals, std::int64_t album_size);

}  // namespace albumsim::stats
