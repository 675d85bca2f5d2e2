#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace albumsim {

// Thrown when an album/group configuration violates the model assumptions.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Static album parameters. Prices are exact integer cents so cost
// arithmetic never drifts; they become floating point only inside the
// statistics layer.
struct AlbumSpec {
  std::int64_t album_size = 0;              // B, distinct stickers
  std::int64_t pack_size = 1;               // P, distinct stickers per pack
  std::int64_t replacement_allowance = 0;   // K, directly purchasable per collector
  std::int64_t display_size = 0;            // D, optional duplicate-free initial batch
  std::int64_t pack_price_cents = 0;        // p
  std::int64_t replacement_price_cents = 0; // b, per sticker

  bool operator==(const AlbumSpec&) const = default;
};

enum class SwapModel {
  FairBilateral,  // pairwise one-for-one trades, mutual need required
  PooledIdeal,    // common pack stream allocated to any needy album
};

const char* swap_model_name(SwapModel model);
SwapModel swap_model_from_name(const std::string& name);  // throws ConfigError

// Collector group parameters. F counts the collector themself.
struct GroupSpec {
  std::int64_t collectors = 1;      // F
  std::int64_t non_collectors = 0;  // N, contribute their allowance only
  SwapModel swap_model = SwapModel::FairBilateral;

  bool operator==(const GroupSpec&) const = default;
};

// A validated (album, group) pair with the effective per-collector
// replacement allowance K_eff = round(K*(F+N)/F), clamped to B.
struct Config {
  AlbumSpec album;
  GroupSpec group;
  std::int64_t effective_allowance = 0;  // K_eff

  bool operator==(const Config&) const = default;
};

// Checks the model assumptions and computes K_eff. Throws ConfigError with
// a one-line reason on any violation. Validating an already-validated
// configuration returns it unchanged.
Config validate(const AlbumSpec& album, const GroupSpec& group);

std::int64_t effective_allowance(std::int64_t replacement_allowance,
                                 std::int64_t collectors,
                                 std::int64_t non_collectors,
                                 std::int64_t album_size);

// Per-collector totals for one simulated run. Fair swaps are one-for-one,
// so they never change total_acquired.
struct CollectorTotals {
  std::int64_t packs_bought = 0;
  std::int64_t pack_stickers = 0;  // packs_bought * P + display contribution
  std::int64_t replacements_used = 0;
  std::int64_t duplicates_left = 0;  // duplicates still held at termination
  std::int64_t cards_given = 0;
  std::int64_t cards_received = 0;

  std::int64_t total_acquired() const { return pack_stickers + replacements_used; }
};

struct RunOutcome {
  std::vector<CollectorTotals> collectors;

  std::int64_t group_total_acquired() const;
  std::int64_t group_packs_bought() const;
  std::int64_t group_replacements_used() const;
  std::int64_t group_duplicates_left() const;
  // Per-collector average of total acquired; the per-run statistic the
  // summaries are built on.
  double mean_acquired_per_collector() const;
};

// Aggregated factor statistics over a batch of runs.
struct SummaryStats {
  std::int64_t runs = 0;
  double factor_mean = 0.0;       // mean(x)/B with x = group total acquired / F
  double factor_halfwidth = 0.0;  // 95% normal half-width, in f units
  double sigma_norm = 0.0;        // sample_std(x)/sqrt(B)
  double mean_total = 0.0;        // raw mean of x, in stickers
  double sample_variance = 0.0;   // raw sample variance of x
};

struct TableCell {
  double f = 0.0;
  double sigma_norm = 0.0;
  double halfwidth = 0.0;
  std::int64_t runs = 0;
};

// Grid of (collectors x replacement percentage) -> factor statistics.
// Row and column labels are strictly increasing; every cell is populated.
struct FactorTable {
  std::vector<std::int64_t> collectors;  // row labels, F
  std::vector<double> percentages;       // column labels, K/B in percent
  std::vector<TableCell> cells;          // row-major, collectors.size()*percentages.size()

  std::int64_t album_size = 0;
  std::int64_t pack_size = 1;
  SwapModel model = SwapModel::FairBilateral;
  std::uint64_t seed = 0;
  std::string generator;  // RNG id pinned into the output

  const TableCell& at(std::size_t row, std::size_t col) const;
  TableCell& at(std::size_t row, std::size_t col);
  // Throws ConfigError if labels are not strictly increasing or a cell is
  // missing/invalid (f < 1 is rejected).
  void check() const;
};

// Currency helpers: exact decimal parsing, at most two fraction digits.
std::int64_t parse_money_cents(const std::string& text);  // throws ConfigError
std::string format_money(std::int64_t cents);
std::string format_money(double cents);  // rounds half away from zero

}  // namespace albumsim
