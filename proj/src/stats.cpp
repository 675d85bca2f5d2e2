#include "albumsim/stats.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace albumsim::stats {

void Accumulator::add(double x) {
  ++count_;
  const double delta = x - mean_;
  mean_ += delta / static_cast<double>(count_);
  m2_ += delta * (x - mean_);
}

void Accumulator::merge(const Accumulator& other) {
  if (other.count_ == 0) return;
  if (count_ == 0) {
    *this = other;
    return;
  }
  const double na = static_cast<double>(count_);
  const double nb = static_cast<double>(other.count_);
  const double delta = other.mean_ - mean_;
  const double n = na + nb;
  mean_ += delta * nb / n;
  m2_ += other.m2_ + delta * delta * na * nb / n;
  count_ += other.count_;
}

double Accumulator::sample_variance() const {
  if (count_ < 2) throw std::logic_error("sample variance needs at least two observations");
  return m2_ / static_cast<double>(count_ - 1);
}

double Accumulator::sample_std() const { return std::sqrt(sample_variance()); }

double ci_halfwidth(double sample_std, std::int64_t n, double z) {
  if (n < 1) throw std::invalid_argument("ci_halfwidth: n must be >= 1");
  if (sample_std < 0) throw std::invalid_argument("ci_halfwidth: standard deviation must be >= 0");
  return z * sample_std / std::sqrt(static_cast<double>(n));
}

std::int64_t required_runs(double target_halfwidth, double sigma_norm_estimate,
                           std::int64_t album_size, std::int64_t collectors, double z) {
  if (target_halfwidth <= 0) throw std::invalid_argument("required_runs: target must be positive");
  const double b = static_cast<double>(album_size);
  const double root = z * sigma_norm_estimate * std::sqrt(b) /
                      (target_halfwidth * b * static_cast<double>(collectors));
  return static_cast<std::int64_t>(std::ceil(root * root));
}

SummaryStats summarize_values(std::span<const double> per_run_totals, std::int64_t album_size) {
  if (per_run_totals.size() < 2)
    throw std::invalid_argument("summarize: need at least two runs for variance");
  Accumulator acc;
  for (const double x : per_run_totals) acc.add(x);
  const double b = static_cast<double>(album_size);
  SummaryStats s;
  s.runs = acc.count();
  s.mean_total = acc.mean();
  s.sample_variance = acc.sample_variance();
  s.factor_mean = acc.mean() / b;
  s.sigma_norm = acc.sample_std() / std::sqrt(b);
  s.factor_halfwidth = ci_halfwidth(acc.sample_std(), acc.count()) / b;
  return s;
}

SummaryStats summarize(std::span<const RunOutcome> outcomes, std::int64_t album_size,
                       std::int64_t collectors) {
  std::vector<double> x;
  x.reserve(outcomes.size());
  for (const auto& outcome : outcomes)
    x.push_back(static_cast<double>(outcome.group_total_acquired()) /
                static_cast<double>(collectors));
  return summarize_values(x, album_size);
}

SummaryStats summarize(std::span<const GroupTotals> totals, std::int64_t album_size) {
  std::vector<double> x;
  x.reserve(totals.size());
  for (const auto& t : totals) x.push_back(t.acquired_per_collector);
  return summarize_values(x, album_size);
}

}  // namespace albumsim::stats
