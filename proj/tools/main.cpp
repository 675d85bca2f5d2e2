#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "albumsim/analytic.hpp"
#include "albumsim/estimate.hpp"
#include "albumsim/model.hpp"
#include "albumsim/rng.hpp"
#include "albumsim/simulate.hpp"
#include "albumsim/stats.hpp"

namespace {

using namespace albumsim;

constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitUsage = 2;
constexpr int kExitRange = 3;
constexpr int kExitVerify = 4;

int default_threads() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

struct CommonSpecFlags {
  std::int64_t album_size = 0;
  std::int64_t pack_size = 1;
  std::int64_t replacement = 0;
  std::int64_t display = 0;
  std::int64_t collectors = 1;
  std::int64_t non_collectors = 0;
  std::string model = "fair-bilateral";
  std::string pack_price;
  std::string sticker_price;

  Config to_config() const {
    AlbumSpec album;
    album.album_size = album_size;
    album.pack_size = pack_size;
    album.replacement_allowance = replacement;
    album.display_size = display;
    if (!pack_price.empty()) album.pack_price_cents = parse_money_cents(pack_price);
    if (!sticker_price.empty()) album.replacement_price_cents = parse_money_cents(sticker_price);
    GroupSpec group;
    group.collectors = collectors;
    group.non_collectors = non_collectors;
    group.swap_model = swap_model_from_name(model);
    return validate(album, group);
  }
};

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

int cmd_analytic(const CommonSpecFlags& flags, std::optional<std::int64_t> purchased) {
  // Validate the raw numbers through the model even though only B, K, D
  // matter here.
  const Config cfg = flags.to_config();
  const auto report = analytic::analyze(flags.album_size, flags.replacement, flags.display);

  std::cout << "album size B            " << report.album_size << "\n"
            << "replacement K           " << report.allowance << "\n";
  if (report.display_size > 0) std::cout << "display D               " << report.display_size << "\n";
  std::cout << "exact mean total        " << fixed(report.exact_mean, 4) << " stickers\n"
            << "exact factor f          " << fixed(report.exact_factor, 6) << "\n"
            << "exact variance          " << fixed(report.exact_variance, 4) << "\n"
            << "exact sigma/sqrt(B)     " << fixed(report.exact_sigma_norm, 6) << "\n";
  if (report.approx_factor) {
    std::cout << "approx factor           " << fixed(*report.approx_factor, 6)
              << "   |exact-approx| = "
              << fixed(std::abs(report.exact_factor - *report.approx_factor), 6) << "\n";
  } else {
    std::cout << "approx factor           n/a (needs K >= 1)\n";
  }
  if (report.approx_sigma) {
    std::cout << "approx sigma/sqrt(B)    " << fixed(*report.approx_sigma, 6)
              << "   |exact-approx| = "
              << fixed(std::abs(report.exact_sigma_norm - *report.approx_sigma), 6) << "\n";
  }
  if (report.display_factor)
    std::cout << "display-mode factor     " << fixed(*report.display_factor, 6)
              << "  (ln((B-D)/K))\n";
  if (purchased) {
    const double k_est = analytic::approx_missing_after(*purchased, flags.album_size);
    std::cout << "after " << *purchased << " purchased: expect " << fixed(k_est, 2)
              << " missing, " << fixed(static_cast<double>(flags.album_size) - k_est, 2)
              << " in the album, "
              << fixed(static_cast<double>(*purchased) -
                           (static_cast<double>(flags.album_size) - k_est), 2)
              << " duplicates\n";
  }
  if (cfg.group.collectors > 1) {
    const double total = analytic::newman_shepp_total(flags.album_size, cfg.group.collectors);
    std::cout << "swap-only group total   " << fixed(total, 1) << " stickers (F = "
              << cfg.group.collectors << ")\n"
              << "swap-only factor        "
              << fixed(total / (static_cast<double>(flags.album_size) *
                                static_cast<double>(cfg.group.collectors)), 4)
              << ", large-F limit ln(ln(B)) = "
              << fixed(analytic::asymptotic_factor(analytic::Variant::SwapNoReplacement,
                                                   flags.album_size), 4)
              << "\n";
  }
  return kExitOk;
}

int cmd_simulate(const CommonSpecFlags& flags, std::int64_t runs, std::uint64_t seed,
                 int threads) {
  const Config cfg = flags.to_config();
  const auto totals = simulate_batch_totals(cfg, runs, seed, threads);
  const SummaryStats s = stats::summarize(totals, cfg.album.album_size);

  double packs = 0, repl = 0, dups = 0;
  for (const auto& t : totals) {
    packs += static_cast<double>(t.packs_bought);
    repl += static_cast<double>(t.replacements_used);
    dups += static_cast<double>(t.duplicates_left);
  }
  const double f_count = static_cast<double>(cfg.group.collectors);
  const double n = static_cast<double>(totals.size());

  std::cout << "config                  B=" << cfg.album.album_size << " P=" << cfg.album.pack_size
            << " K=" << cfg.album.replacement_allowance << " K_eff=" << cfg.effective_allowance
            << " D=" << cfg.album.display_size << " F=" << cfg.group.collectors
            << " N=" << cfg.group.non_collectors << " model=" << swap_model_name(cfg.group.swap_model)
            << "\n"
            << "runs / seed / rng       " << runs << " / " << seed << " / "
            << RngStream::kGeneratorId << "\n"
            << "factor f mean           " << fixed(s.factor_mean, 6) << " +/- "
            << fixed(s.factor_halfwidth, 6) << " (95%)\n"
            << "sigma/sqrt(B)           " << fixed(s.sigma_norm, 6) << "\n"
            << "mean acquired/collector " << fixed(s.mean_total, 4) << " stickers\n"
            << "mean packs/collector    " << fixed(packs / (n * f_count), 4) << "\n"
            << "mean replacements       " << fixed(repl / (n * f_count), 4) << " per collector\n"
            << "mean leftover doubles   " << fixed(dups / (n * f_count), 4) << " per collector\n";
  return kExitOk;
}

int cmd_table(const std::vector<std::int64_t>& album_sizes,
              const std::vector<std::int64_t>& collectors, const std::vector<double>& percentages,
              std::int64_t pack_size, const std::string& model_name, std::int64_t runs,
              std::uint64_t seed, int threads, const std::string& out_path) {
  const SwapModel model = swap_model_from_name(model_name);
  std::vector<estimate::TableRow> rows;
  if (album_sizes.size() == 1) {
    const FactorTable table = estimate::build_table(album_sizes[0], collectors, percentages,
                                                    runs, seed, model, pack_size, threads);
    rows = estimate::table_to_rows(table);
  } else {
    rows = estimate::sweep_figure1(album_sizes, percentages, collectors, runs, seed, model,
                                   pack_size, threads);
  }
  std::cerr << "generated " << rows.size() << " cells with " << RngStream::kGeneratorId
            << ", seed " << seed << "\n";
  if (out_path.empty() || out_path == "-") {
    estimate::write_table_csv(std::cout, rows);
    return kExitOk;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot open '" << out_path << "' for writing\n";
    return kExitIo;
  }
  estimate::write_table_csv(out, rows);
  if (!out.flush()) {
    std::cerr << "error: failed writing '" << out_path << "'\n";
    return kExitIo;
  }
  return kExitOk;
}

int cmd_estimate(const CommonSpecFlags& flags, std::optional<double> factor,
                 std::optional<double> sigma_norm, const std::string& table_path,
                 std::optional<double> percent) {
  const Config cfg = flags.to_config();
  double f_used = 0.0;
  double sigma_used = sigma_norm.value_or(0.0);

  if (!table_path.empty()) {
    std::ifstream in(table_path, std::ios::binary);
    if (!in) {
      std::cerr << "error: cannot open factor table '" << table_path << "'\n";
      return kExitIo;
    }
    FactorTable table;
    try {
      table = estimate::table_from_rows(estimate::read_table_csv(in));
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kExitIo;
    }
    const double pct =
        percent.value_or(100.0 * static_cast<double>(cfg.effective_allowance) /
                         static_cast<double>(cfg.album.album_size));
    f_used = estimate::interpolate_factor(table, cfg.group.collectors, pct);
    if (!sigma_norm)
      sigma_used = estimate::interpolate_sigma_norm(table, cfg.group.collectors, pct);
    std::cout << "factor from table       " << fixed(f_used, 4) << " at " << fixed(pct, 2)
              << "% (F=" << cfg.group.collectors << ")\n";
  } else {
    if (!factor) {
      std::cerr << "error: need either --factor or --factor-table\n";
      return kExitUsage;
    }
    f_used = *factor;
  }

  const auto est = estimate::estimate_cost(cfg, f_used, sigma_used);
  std::cout << "config                  B=" << cfg.album.album_size << " P=" << cfg.album.pack_size
            << " K=" << cfg.album.replacement_allowance << " K_eff=" << cfg.effective_allowance
            << " F=" << cfg.group.collectors << " N=" << cfg.group.non_collectors << "\n"
            << "factor / sigma_norm     " << fixed(est.factor_used, 4) << " / "
            << fixed(est.sigma_norm_used, 4) << "\n"
            << "mean cost               " << format_money(est.mean_cost_cents) << "\n"
            << "cost std deviation      " << format_money(est.cost_std_cents) << "\n"
            << "95% interval            [" << format_money(est.interval_low_cents) << ", "
            << format_money(est.interval_high_cents) << "]\n";
  if (est.replacement_cheaper_than_packs)
    std::cout << "warning: replacement price below per-sticker pack price; "
                 "the surcharge term reduces the total\n";
  return kExitOk;
}

int cmd_verify(std::int64_t runs, std::uint64_t seed, int threads) {
  constexpr std::int64_t kAlbum = 100;
  bool all_ok = true;
  auto report = [&](bool ok, const std::string& line) {
    std::cout << (ok ? "PASS " : "FAIL ") << line << "\n";
    all_ok = all_ok && ok;
  };

  for (const std::int64_t k : {4, 8, 12, 16, 20, 24}) {
    AlbumSpec album;
    album.album_size = kAlbum;
    album.pack_size = 1;
    album.replacement_allowance = k;
    const Config cfg = validate(album, GroupSpec{});
    const auto totals = simulate_batch_totals(cfg, runs, mix_seed(seed, static_cast<std::uint64_t>(k)),
                                              threads);
    const SummaryStats s = stats::summarize(totals, kAlbum);
    const auto exact_mean = analytic::exact_mean_single(kAlbum, k);
    const auto exact_var = analytic::exact_variance_single(kAlbum, k);
    const double se = std::sqrt(s.sample_variance / static_cast<double>(s.runs));
    const double mean_err = std::abs(s.mean_total - exact_mean.total);
    report(mean_err <= 3.0 * se,
           "mean   K=" + std::to_string(k) + ": simulated " + fixed(s.mean_total, 3) +
               " vs exact " + fixed(exact_mean.total, 3) + " (|diff| " + fixed(mean_err, 3) +
               " <= 3se " + fixed(3.0 * se, 3) + ")");
    const double sig_rel = std::abs(s.sigma_norm / exact_var.sigma_norm - 1.0);
    report(sig_rel <= 0.05,
           "sigma  K=" + std::to_string(k) + ": simulated " + fixed(s.sigma_norm, 4) +
               " vs exact " + fixed(exact_var.sigma_norm, 4) + " (rel " + fixed(sig_rel, 4) + ")");
  }

  // Fixed-budget occupancy: missing after B single-sticker packs.
  {
    stats::Accumulator acc;
    for (std::int64_t i = 0; i < runs; ++i) {
      RngStream run_rng(mix_seed(seed, 999), static_cast<std::uint64_t>(i));
      acc.add(static_cast<double>(missing_after_packs(kAlbum, 1, kAlbum, run_rng)));
    }
    const double exact = static_cast<double>(kAlbum) *
                         std::pow(1.0 - 1.0 / static_cast<double>(kAlbum),
                                  static_cast<double>(kAlbum));
    const double inverse = analytic::approx_missing_after(kAlbum, kAlbum);
    const double se = acc.sample_std() / std::sqrt(static_cast<double>(acc.count()));
    const double err = std::abs(acc.mean() - exact);
    report(err <= 3.0 * se,
           "open albums after " + std::to_string(kAlbum) + " singles: simulated " +
               fixed(acc.mean(), 3) + " vs exact " + fixed(exact, 3) + " (inverse formula " +
               fixed(inverse, 2) + ", |diff| " + fixed(err, 3) + " <= 3se " + fixed(3.0 * se, 3) +
               ")");
  }

  std::cout << (all_ok ? "verification passed" : "verification FAILED") << "\n";
  return all_ok ? kExitOk : kExitVerify;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coupon-collector album simulator: analytics, simulation, factor tables, "
               "cost estimates"};
  app.require_subcommand(1);

  CommonSpecFlags flags;
  std::int64_t runs = 0;
  std::uint64_t seed = 0;
  int threads = default_threads();

  auto add_album_flags = [&](CLI::App* cmd, bool with_prices) {
    cmd->add_option("--album-size", flags.album_size, "Distinct stickers B")->required();
    cmd->add_option("--pack-size", flags.pack_size, "Stickers per pack P (distinct)");
    cmd->add_option("--replacement", flags.replacement, "Replacement allowance K per collector");
    cmd->add_option("--display", flags.display, "Duplicate-free initial batch D");
    cmd->add_option("--collectors", flags.collectors, "Collector count F (includes yourself)");
    cmd->add_option("--non-collectors", flags.non_collectors,
                    "Non-collectors N contributing their allowance");
    cmd->add_option("--model", flags.model, "Swap model: fair-bilateral or pooled-ideal");
    if (with_prices) {
      cmd->add_option("--pack-price", flags.pack_price, "Pack price, decimal currency")->required();
      cmd->add_option("--sticker-price", flags.sticker_price,
                      "Replacement price per sticker, decimal currency")->required();
    }
  };
  auto add_run_flags = [&](CLI::App* cmd) {
    cmd->add_option("--runs", runs, "Simulation run count")->required();
    cmd->add_option("--seed", seed, "Master RNG seed")->required();
    cmd->add_option("--threads", threads, "Worker threads (default: machine parallelism)");
  };

  // analytic
  auto* analytic_cmd = app.add_subcommand("analytic", "Exact and approximate single-collector values");
  std::optional<std::int64_t> purchased;
  add_album_flags(analytic_cmd, false);
  analytic_cmd->add_option("--purchased", purchased,
                           "Also estimate missing stickers after this many purchases");

  // simulate
  auto* simulate_cmd = app.add_subcommand("simulate", "Monte Carlo of the collection process");
  add_album_flags(simulate_cmd, false);
  add_run_flags(simulate_cmd);

  // table
  auto* table_cmd = app.add_subcommand("table", "Factor/sigma grid over collectors x percentages (CSV)");
  std::vector<std::int64_t> table_sizes;
  std::vector<std::int64_t> table_collectors;
  std::vector<double> table_percentages;
  std::string out_path;
  table_cmd->add_option("--album-size,--album-sizes", table_sizes,
                        "Album size(s) B; several sizes produce a flatness sweep")
      ->required()
      ->delimiter(',');
  table_cmd->add_option("--collectors", table_collectors, "Row labels F, comma separated")
      ->required()
      ->delimiter(',');
  table_cmd->add_option("--percentages", table_percentages,
                        "Column labels K/B in percent, comma separated")
      ->required()
      ->delimiter(',');
  table_cmd->add_option("--pack-size", flags.pack_size, "Stickers per pack P");
  table_cmd->add_option("--model", flags.model, "Swap model");
  table_cmd->add_option("--out", out_path, "Output CSV path (default: stdout)");
  add_run_flags(table_cmd);

  // estimate
  auto* estimate_cmd = app.add_subcommand("estimate", "Completion cost from a factor (table or explicit)");
  std::optional<double> factor;
  std::optional<double> sigma_norm;
  std::optional<double> percent;
  std::string table_path;
  add_album_flags(estimate_cmd, true);
  auto* factor_opt = estimate_cmd->add_option("--factor", factor, "Factor f to use directly");
  estimate_cmd->add_option("--sigma-norm", sigma_norm, "Normalized standard deviation to use");
  auto* table_opt =
      estimate_cmd->add_option("--factor-table", table_path, "Factor table CSV for interpolation");
  table_opt->excludes(factor_opt);
  estimate_cmd->add_option("--percent", percent,
                           "Replacement percentage for table lookup (default: 100*K_eff/B)")
      ->needs(table_opt);

  // verify
  auto* verify_cmd = app.add_subcommand("verify", "Single-collector oracle checks (exit 4 on failure)");
  add_run_flags(verify_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (analytic_cmd->parsed()) return cmd_analytic(flags, purchased);
    if (simulate_cmd->parsed()) return cmd_simulate(flags, runs, seed, threads);
    if (table_cmd->parsed())
      return cmd_table(table_sizes, table_collectors, table_percentages, flags.pack_size,
                       flags.model, runs, seed, threads, out_path);
    if (estimate_cmd->parsed())
      return cmd_estimate(flags, factor, sigma_norm, table_path, percent);
    if (verify_cmd->parsed()) return cmd_verify(runs, seed, threads);
  } catch (const estimate::RangeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRange;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
