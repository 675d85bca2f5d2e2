#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "albumsim/model.hpp"

namespace albumsim::estimate {

// Interpolation request outside the table's grid (or a collector count
// that is not a row label). Mapped to its own CLI exit code.
class RangeError : public std::runtime_error {
 public:
  explicit RangeError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed or inconsistent factor-table CSV.
class TableFormatError : public std::runtime_error {
 public:
  explicit TableFormatError(const std::string& what) : std::runtime_error(what) {}
};

// One CSV record; the on-disk unit for factor tables and sweeps.
struct TableRow {
  std::int64_t collectors = 0;  // F
  double pct = 0.0;             // K/B in percent
  double f_mean = 0.0;
  double f_halfwidth = 0.0;
  double sigma_norm = 0.0;
  std::int64_t n_runs = 0;
  std::int64_t album_size = 0;  // B
  std::int64_t pack_size = 1;   // P
  std::string model;
  std::uint64_t seed = 0;
};

// Simulates one summary per (F, percentage) cell. Cell seeds derive from
// the master seed and the cell coordinates, so builds are reproducible and
// cells can run in any order or in parallel.
FactorTable build_table(std::int64_t album_size, std::span<const std::int64_t> collectors,
                        std::span<const double> percentages, std::int64_t runs,
                        std::uint64_t master_seed, SwapModel model,
                        std::int64_t pack_size = 1, int threads = 1);

// Linear interpolation along the percentage axis of one collector row.
// Exact grid points return the cell value; no extrapolation and no
// interpolation across collector counts.
double interpolate_factor(const FactorTable& table, std::int64_t collectors, double pct);
double interpolate_sigma_norm(const FactorTable& table, std::int64_t collectors, double pct);

// Per-collector completion cost: B*f*(p/P) + K_eff*(b - p/P), all in cents.
struct CostEstimate {
  double mean_cost_cents = 0.0;
  double cost_std_cents = 0.0;
  double interval_low_cents = 0.0;   // mean - 2*std, clamped at 0
  double interval_high_cents = 0.0;  // mean + 2*std
  bool replacement_cheaper_than_packs = false;  // b < p/P: surcharge reduces cost
  Config config;
  double factor_used = 0.0;
  double sigma_norm_used = 0.0;
};

CostEstimate estimate_cost(const Config& config, double factor, double sigma_norm);

// Factor per (B, pct, F) across several album sizes; the flatness sweep.
std::vector<TableRow> sweep_figure1(std::span<const std::int64_t> album_sizes,
                                    std::span<const double> percentages,
                                    std::span<const std::int64_t> collectors,
                                    std::int64_t runs, std::uint64_t master_seed,
                                    SwapModel model, std::int64_t pack_size = 1,
                                    int threads = 1);

// CSV with the fixed header
//   F,pct,f_mean,f_halfwidth,sigma_norm,n_runs,B,P,model,seed
// one row per cell, floating values at 6 significant digits, LF endings.
void write_table_csv(std::ostream& out, std::span<const TableRow> rows);
std::vector<TableRow> read_table_csv(std::istream& in);  // throws TableFormatError

std::vector<TableRow> table_to_rows(const FactorTable& table);
// Rebuilds a table from CSV rows; requires a single consistent
// (B, P, model, seed) and a fully populated grid.
FactorTable table_from_rows(std::span<const TableRow> rows);

}  // namespace albumsim::estimate
