#include "albumsim/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

namespace albumsim {

const char* swap_model_name(SwapModel model) {
  switch (model) {
    case SwapModel::FairBilateral: return "fair-bilateral";
    case SwapModel::PooledIdeal: return "pooled-ideal";
  }
  return "unknown";
}

SwapModel swap_model_from_name(const std::string& name) {
  if (name == "fair-bilateral" || name == "fair") return SwapModel::FairBilateral;
  if (name == "pooled-ideal" || name == "pooled") return SwapModel::PooledIdeal;
  throw ConfigError("unknown swap model '" + name + "' (expected fair-bilateral or pooled-ideal)");
}

std::int64_t effective_allowance(std::int64_t replacement_allowance,
                                 std::int64_t collectors,
                                 std::int64_t non_collectors,
                                 std::int64_t album_size) {
  // Round half up on the exact rational K*(F+N)/F; 50*4/3 -> 67.
  const std::int64_t num = replacement_allowance * (collectors + non_collectors);
  const std::int64_t k_eff = (2 * num + collectors) / (2 * collectors);
  return std::min(k_eff, album_size);
}

Config validate(const AlbumSpec& album, const GroupSpec& group) {
  if (album.album_size <= 0) throw ConfigError("album size must be positive (empty process)");
  if (album.pack_size <= 0) throw ConfigError("pack size must be positive (empty process)");
  if (album.pack_size > album.album_size)
    throw ConfigError("pack cannot be duplicate-free: pack size exceeds album size");
  if (album.replacement_allowance < 0 || album.replacement_allowance > album.album_size)
    throw ConfigError("replacement allowance must lie in [0, album size]");
  if (album.display_size < 0 || album.display_size > album.album_size)
    throw ConfigError("display size must lie in [0, album size]");
  if (album.pack_price_cents < 0) throw ConfigError("pack price must be non-negative");
  if (album.replacement_price_cents < 0) throw ConfigError("replacement price must be non-negative");
  if (group.collectors <= 0) throw ConfigError("collector count must be positive (empty process)");
  if (group.non_collectors < 0) throw ConfigError("non-collector count must be non-negative");

  Config cfg;
  cfg.album = album;
  cfg.group = group;
  cfg.effective_allowance = effective_allowance(
      album.replacement_allowance, group.collectors, group.non_collectors, album.album_size);
  return cfg;
}

std::int64_t RunOutcome::group_total_acquired() const {
  std::int64_t sum = 0;
  for (const auto& c : collectors) sum += c.total_acquired();
  return sum;
}

std::int64_t RunOutcome::group_packs_bought() const {
  std::int64_t sum = 0;
  for (const auto& c : collectors) sum += c.packs_bought;
  return sum;
}

std::int64_t RunOutcome::group_replacements_used() const {
  std::int64_t sum = 0;
  for (const auto& c : collectors) sum += c.replacements_used;
  return sum;
}

std::int64_t RunOutcome::group_duplicates_left() const {
  std::int64_t sum = 0;
  for (const auto& c : collectors) sum += c.duplicates_left;
  return sum;
}

double RunOutcome::mean_acquired_per_collector() const {
  return static_cast<double>(group_total_acquired()) / static_cast<double>(collectors.size());
}

const TableCell& FactorTable::at(std::size_t row, std::size_t col) const {
  return cells[row * percentages.size() + col];
}

TableCell& FactorTable::at(std::size_t row, std::size_t col) {
  return cells[row * percentages.size() + col];
}

void FactorTable::check() const {
  if (collectors.empty() || percentages.empty())
    throw ConfigError("factor table must have at least one row and one column");
  for (std::size_t i = 1; i < collectors.size(); ++i)
    if (collectors[i] <= collectors[i - 1])
      throw ConfigError("factor table row labels must be strictly increasing");
  for (std::size_t i = 1; i < percentages.size(); ++i)
    if (percentages[i] <= percentages[i - 1])
      throw ConfigError("factor table column labels must be strictly increasing");
  if (cells.size() != collectors.size() * percentages.size())
    throw ConfigError("factor table has unpopulated cells");
  for (const auto& cell : cells) {
    if (cell.runs <= 0 || cell.f < 1.0)
      throw ConfigError("factor table cell invalid (needs runs >= 1 and f >= 1)");
  }
}

std::int64_t parse_money_cents(const std::string& text) {
  if (text.empty()) throw ConfigError("empty currency value");
  std::size_t pos = 0;
  bool negative = false;
  if (text[pos] == '+' || text[pos] == '-') {
    negative = text[pos] == '-';
    ++pos;
  }
  std::int64_t units = 0;
  bool any_digit = false;
  while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
    units = units * 10 + (text[pos] - '0');
    any_digit = true;
    ++pos;
  }
  std::int64_t cents = units * 100;
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    std::int64_t frac = 0;
    int digits = 0;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
      frac = frac * 10 + (text[pos] - '0');
      ++digits;
      any_digit = true;
      ++pos;
    }
    if (digits < 1 || digits > 2)
      throw ConfigError("currency value '" + text + "' must have at most two decimals");
    if (digits == 1) frac *= 10;
    cents += frac;
  }
  if (!any_digit || pos != text.size())
    throw ConfigError("malformed currency value '" + text + "'");
  return negative ? -cents : cents;
}

std::string format_money(std::int64_t cents) {
  const char* sign = cents < 0 ? "-" : "";
  const std::int64_t abs_cents = cents < 0 ? -cents : cents;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s%lld.%02lld", sign,
                static_cast<long long>(abs_cents / 100),
                static_cast<long long>(abs_cents % 100));
  return buf;
}

std::string format_money(double cents) {
  return format_money(static_cast<std::int64_t>(std::llround(cents)));
}

}  // namespace albumsim
