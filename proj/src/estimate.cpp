#include "albumsim/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>

#include "albumsim/rng.hpp"
#include "albumsim/simulate.hpp"
#include "albumsim/stats.hpp"

namespace albumsim::estimate {

namespace {

constexpr const char* kCsvHeader = "F,pct,f_mean,f_halfwidth,sigma_norm,n_runs,B,P,model,seed";

std::int64_t percentage_to_allowance(double pct, std::int64_t album_size) {
  if (!(pct > 0.0) || pct > 100.0)
    throw ConfigError("replacement percentage must lie in (0, 100]");
  const std::int64_t k = std::llround(pct * static_cast<double>(album_size) / 100.0);
  if (k < 1)
    throw ConfigError("replacement percentage rounds to zero stickers at this album size");
  return std::min(k, album_size);
}

std::uint64_t cell_seed(std::uint64_t master, std::int64_t album_size, std::int64_t pack_size,
                        std::int64_t collectors, std::int64_t allowance, SwapModel model) {
  std::uint64_t s = master;
  s = mix_seed(s, static_cast<std::uint64_t>(album_size));
  s = mix_seed(s, static_cast<std::uint64_t>(pack_size));
  s = mix_seed(s, static_cast<std::uint64_t>(collectors));
  s = mix_seed(s, static_cast<std::uint64_t>(allowance));
  s = mix_seed(s, model == SwapModel::FairBilateral ? 1u : 2u);
  return s;
}

bool nearly_equal(double a, double b) {
  return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
}

std::string format_sig6(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

FactorTable build_table(std::int64_t album_size, std::span<const std::int64_t> collectors,
                        std::span<const double> percentages, std::int64_t runs,
                        std::uint64_t master_seed, SwapModel model,
                        std::int64_t pack_size, int threads) {
  if (runs < 2) throw ConfigError("table build needs at least two runs per cell");
  FactorTable table;
  table.collectors.assign(collectors.begin(), collectors.end());
  table.percentages.assign(percentages.begin(), percentages.end());
  // reject bad labels before burning simulation time
  for (std::size_t i = 1; i < table.collectors.size(); ++i)
    if (table.collectors[i] <= table.collectors[i - 1])
      throw ConfigError("factor table row labels must be strictly increasing");
  for (std::size_t i = 1; i < table.percentages.size(); ++i)
    if (table.percentages[i] <= table.percentages[i - 1])
      throw ConfigError("factor table column labels must be strictly increasing");
  table.cells.resize(collectors.size() * percentages.size());
  table.album_size = album_size;
  table.pack_size = pack_size;
  table.model = model;
  table.seed = master_seed;
  table.generator = RngStream::kGeneratorId;

  for (std::size_t row = 0; row < collectors.size(); ++row) {
    for (std::size_t col = 0; col < percentages.size(); ++col) {
      const std::int64_t allowance = percentage_to_allowance(percentages[col], album_size);
      AlbumSpec album;
      album.album_size = album_size;
      album.pack_size = pack_size;
      album.replacement_allowance = allowance;
      GroupSpec group;
      group.collectors = collectors[row];
      group.swap_model = model;
      const Config cfg = validate(album, group);
      const std::uint64_t seed =
          cell_seed(master_seed, album_size, pack_size, collectors[row], allowance, model);
      const auto totals = simulate_batch_totals(cfg, runs, seed, threads);
      const SummaryStats s = stats::summarize(totals, album_size);
      table.at(row, col) = TableCell{s.factor_mean, s.sigma_norm, s.factor_halfwidth, s.runs};
    }
  }
  table.check();
  return table;
}

namespace {

double interpolate_column(const FactorTable& table, std::int64_t collectors, double pct,
                          double (*value)(const TableCell&)) {
  const auto row_it = std::find(table.collectors.begin(), table.collectors.end(), collectors);
  if (row_it == table.collectors.end())
    throw RangeError("collector count " + std::to_string(collectors) +
                     " is not a table row; factors are not interpolated across collectors");
  const std::size_t row = static_cast<std::size_t>(row_it - table.collectors.begin());
  const auto& cols = table.percentages;
  if (pct < cols.front() - 1e-9 || pct > cols.back() + 1e-9)
    throw RangeError("percentage " + std::to_string(pct) + " outside table range [" +
                     format_sig6(cols.front()) + ", " + format_sig6(cols.back()) +
                     "]; no extrapolation");
  for (std::size_t c = 0; c < cols.size(); ++c)
    if (nearly_equal(cols[c], pct)) return value(table.at(row, c));
  std::size_t hi = 1;
  while (hi < cols.size() && cols[hi] < pct) ++hi;
  const std::size_t lo = hi - 1;
  const double t = (pct - cols[lo]) / (cols[hi] - cols[lo]);
  return value(table.at(row, lo)) + t * (value(table.at(row, hi)) - value(table.at(row, lo)));
}

}  // namespace

double interpolate_factor(const FactorTable& table, std::int64_t collectors, double pct) {
  return interpolate_column(table, collectors, pct, [](const TableCell& c) { return c.f; });
}

double interpolate_sigma_norm(const FactorTable& table, std::int64_t collectors, double pct) {
  return interpolate_column(table, collectors, pct,
                            [](const TableCell& c) { return c.sigma_norm; });
}

CostEstimate estimate_cost(const Config& config, double factor, double sigma_norm) {
  if (factor < 1.0) throw ConfigError("factor must be >= 1");
  if (sigma_norm < 0.0) throw ConfigError("sigma_norm must be >= 0");
  const double b = static_cast<double>(config.album.album_size);
  const double per_sticker =
      static_cast<double>(config.album.pack_price_cents) /
      static_cast<double>(config.album.pack_size);
  const double surcharge =
      static_cast<double>(config.album.replacement_price_cents) - per_sticker;

  CostEstimate est;
  est.config = config;
  est.factor_used = factor;
  est.sigma_norm_used = sigma_norm;
  est.mean_cost_cents =
      b * factor * per_sticker + static_cast<double>(config.effective_allowance) * surcharge;
  est.cost_std_cents = sigma_norm * std::sqrt(b) * per_sticker;
  est.interval_low_cents = std::max(0.0, est.mean_cost_cents - 2.0 * est.cost_std_cents);
  est.interval_high_cents = est.mean_cost_cents + 2.0 * est.cost_std_cents;
  est.replacement_cheaper_than_packs = surcharge < 0.0;
  return est;
}

std::vector<TableRow> sweep_figure1(std::span<const std::int64_t> album_sizes,
                                    std::span<const double> percentages,
                                    std::span<const std::int64_t> collectors,
                                    std::int64_t runs, std::uint64_t master_seed,
                                    SwapModel model, std::int64_t pack_size, int threads) {
  std::vector<TableRow> rows;
  for (const std::int64_t b : album_sizes) {
    const FactorTable table =
        build_table(b, collectors, percentages, runs, master_seed, model, pack_size, threads);
    const auto table_rows = table_to_rows(table);
    rows.insert(rows.end(), table_rows.begin(), table_rows.end());
  }
  return rows;
}

std::vector<TableRow> table_to_rows(const FactorTable& table) {
  std::vector<TableRow> rows;
  rows.reserve(table.cells.size());
  for (std::size_t r = 0; r < table.collectors.size(); ++r) {
    for (std::size_t c = 0; c < table.percentages.size(); ++c) {
      const TableCell& cell = table.at(r, c);
      TableRow row;
      row.collectors = table.collectors[r];
      row.pct = table.percentages[c];
      row.f_mean = cell.f;
      row.f_halfwidth = cell.halfwidth;
      row.sigma_norm = cell.sigma_norm;
      row.n_runs = cell.runs;
      row.album_size = table.album_size;
      row.pack_size = table.pack_size;
      row.model = swap_model_name(table.model);
      row.seed = table.seed;
      rows.push_back(row);
    }
  }
  return rows;
}

void write_table_csv(std::ostream& out, std::span<const TableRow> rows) {
  out << kCsvHeader << '\n';
  for (const auto& row : rows) {
    out << row.collectors << ',' << format_sig6(row.pct) << ',' << format_sig6(row.f_mean)
        << ',' << format_sig6(row.f_halfwidth) << ',' << format_sig6(row.sigma_norm) << ','
        << row.n_runs << ',' << row.album_size << ',' << row.pack_size << ',' << row.model
        << ',' << row.seed << '\n';
  }
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  for (const char ch : line) {
    if (ch == ',') {
      fields.push_back(field);
      field.clear();
    } else {
      field.push_back(ch);
    }
  }
  fields.push_back(field);
  return fields;
}

template <typename T>
T parse_number(const std::string& text, std::size_t line_no, const char* what) {
  std::size_t used = 0;
  try {
    if constexpr (std::is_same_v<T, double>) {
      const double v = std::stod(text, &used);
      if (used == text.size()) return v;
    } else if constexpr (std::is_same_v<T, std::uint64_t>) {
      const std::uint64_t v = std::stoull(text, &used);
      if (used == text.size()) return v;
    } else {
      const std::int64_t v = std::stoll(text, &used);
      if (used == text.size()) return static_cast<T>(v);
    }
  } catch (const std::exception&) {
  }
  throw TableFormatError("line " + std::to_string(line_no) + ": bad " + what + " value '" +
                         text + "'");
}

}  // namespace

std::vector<TableRow> read_table_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw TableFormatError("empty table file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kCsvHeader)
    throw TableFormatError("unexpected header '" + line + "' (expected '" + kCsvHeader + "')");
  std::vector<TableRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != 10)
      throw TableFormatError("line " + std::to_string(line_no) + ": expected 10 fields, got " +
                             std::to_string(fields.size()));
    TableRow row;
    row.collectors = parse_number<std::int64_t>(fields[0], line_no, "F");
    row.pct = parse_number<double>(fields[1], line_no, "pct");
    row.f_mean = parse_number<double>(fields[2], line_no, "f_mean");
    row.f_halfwidth = parse_number<double>(fields[3], line_no, "f_halfwidth");
    row.sigma_norm = parse_number<double>(fields[4], line_no, "sigma_norm");
    row.n_runs = parse_number<std::int64_t>(fields[5], line_no, "n_runs");
    row.album_size = parse_number<std::int64_t>(fields[6], line_no, "B");
    row.pack_size = parse_number<std::int64_t>(fields[7], line_no, "P");
    row.model = fields[8];
    row.seed = parse_number<std::uint64_t>(fields[9], line_no, "seed");
    rows.push_back(row);
  }
  if (rows.empty()) throw TableFormatError("table file has no data rows");
  return rows;
}

FactorTable table_from_rows(std::span<const TableRow> rows) {
  if (rows.empty()) throw TableFormatError("no rows to build a table from");
  FactorTable table;
  table.album_size = rows.front().album_size;
  table.pack_size = rows.front().pack_size;
  table.model = swap_model_from_name(rows.front().model);
  table.seed = rows.front().seed;
  for (const auto& row : rows) {
    if (row.album_size != table.album_size)
      throw TableFormatError("mixed album sizes; interpolation needs a single-size table");
    if (row.pack_size != table.pack_size || row.model != rows.front().model ||
        row.seed != table.seed)
      throw TableFormatError("inconsistent table metadata across rows");
    if (std::find(table.collectors.begin(), table.collectors.end(), row.collectors) ==
        table.collectors.end())
      table.collectors.push_back(row.collectors);
    const auto pct_it = std::find_if(table.percentages.begin(), table.percentages.end(),
                                     [&](double p) { return nearly_equal(p, row.pct); });
    if (pct_it == table.percentages.end()) table.percentages.push_back(row.pct);
  }
  std::sort(table.collectors.begin(), table.collectors.end());
  std::sort(table.percentages.begin(), table.percentages.end());
  table.cells.assign(table.collectors.size() * table.percentages.size(), TableCell{});
  std::vector<bool> seen(table.cells.size(), false);
  for (const auto& row : rows) {
    const std::size_t r = static_cast<std::size_t>(
        std::find(table.collectors.begin(), table.collectors.end(), row.collectors) -
        table.collectors.begin());
    const std::size_t c = static_cast<std::size_t>(
        std::find_if(table.percentages.begin(), table.percentages.end(),
                     [&](double p) { return nearly_equal(p, row.pct); }) -
        table.percentages.begin());
    const std::size_t idx = r * table.percentages.size() + c;
    if (seen[idx])
      throw TableFormatError("duplicate cell for F=" + std::to_string(row.collectors) +
                             ", pct=" + format_sig6(row.pct));
    seen[idx] = true;
    table.cells[idx] = TableCell{row.f_mean, row.sigma_norm, row.f_halfwidth, row.n_runs};
  }
  if (std::find(seen.begin(), seen.end(), false) != seen.end())
    throw TableFormatError("table grid is incomplete");
  table.check();
  return table;
}

}  // namespace albumsim::estimate
