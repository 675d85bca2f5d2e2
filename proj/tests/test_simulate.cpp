#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <vector>

#include "albumsim/analytic.hpp"
#include "albumsim/simulate.hpp"
#include "albumsim/stats.hpp"

using namespace albumsim;

namespace {

Config make_config(std::int64_t b, std::int64_t p, std::int64_t k, std::int64_t f,
                   SwapModel model = SwapModel::FairBilateral, std::int64_t d = 0,
                   std::int64_t n = 0) {
  AlbumSpec album;
  album.album_size = b;
  album.pack_size = p;
  album.replacement_allowance = k;
  album.display_size = d;
  GroupSpec group;
  group.collectors = f;
  group.non_collectors = n;
  group.swap_model = model;
  return validate(album, group);
}

}  // namespace

TEST_CASE("IdSet basics and tail handling") {
  IdSet s(70);
  CHECK(s.size() == 0);
  CHECK(s.insert(0));
  CHECK(s.insert(69));
  CHECK_FALSE(s.insert(69));
  CHECK(s.size() == 2);
  CHECK(s.contains(69));
  CHECK_FALSE(s.contains(68));
  s.erase(69);
  CHECK(s.size() == 1);
  s.fill_all();
  CHECK(s.size() == 70);
  // tail bits beyond the universe stay clear
  CHECK((s.words()[1] >> 6) == 0);
}

TEST_CASE("a full-album pack is the whole id range") {
  RngStream rng(3, 0);
  std::vector<std::int64_t> pack;
  draw_pack(12, 12, rng, pack);
  std::set<std::int64_t> ids(pack.begin(), pack.end());
  CHECK(ids.size() == 12);
  CHECK(*ids.begin() == 0);
  CHECK(*ids.rbegin() == 11);
}

TEST_CASE("pack draws reject bad sizes") {
  RngStream rng(3, 0);
  std::vector<std::int64_t> pack;
  CHECK_THROWS(draw_pack(5, 6, rng, pack));
  CHECK_THROWS(draw_pack(5, 0, rng, pack));
}

TEST_CASE("single-sticker packs are uniform over ids") {
  RngStream rng(11, 0);
  const std::int64_t b = 100;
  const int n = 1000000;
  std::vector<int> counts(b, 0);
  std::vector<std::int64_t> pack;
  for (int i = 0; i < n; ++i) {
    draw_pack(b, 1, rng, pack);
    ++counts[pack[0]];
  }
  const double expect = n / static_cast<double>(b);
  const double sigma = std::sqrt(n * (1.0 / b) * (1.0 - 1.0 / b));
  for (const int c : counts) CHECK(std::abs(c - expect) < 5 * sigma);
}

TEST_CASE("two-sticker packs cover all pairs evenly") {
  RngStream rng(17, 0);
  const int n = 200000;
  std::map<std::pair<std::int64_t, std::int64_t>, int> counts;
  std::vector<std::int64_t> pack;
  for (int i = 0; i < n; ++i) {
    draw_pack(5, 2, rng, pack);
    auto [lo, hi] = std::minmax(pack[0], pack[1]);
    ++counts[{lo, hi}];
    CHECK(lo != hi);
  }
  CHECK(counts.size() == 10);
  const double expect = n / 10.0;
  const double sigma = std::sqrt(n * 0.1 * 0.9);
  for (const auto& [pair, c] : counts) CHECK(std::abs(c - expect) < 5 * sigma);
}

TEST_CASE("display seeds the album without duplicates") {
  RngStream rng(23, 0);
  CollectorState fresh(50);
  apply_display(fresh, 50, 0, rng);
  CHECK(fresh.album.size() == 0);
  CHECK(fresh.totals.pack_stickers == 0);

  CollectorState full(50);
  apply_display(full, 50, 50, rng);
  CHECK(full.album.size() == 50);
  CHECK(full.missing == 0);
  CHECK(full.duplicates_total == 0);
  CHECK(full.totals.pack_stickers == 50);

  CollectorState partial(50);
  apply_display(partial, 50, 20, rng);
  CHECK(partial.album.size() == 20);
  CHECK(partial.duplicates_total == 0);
  CHECK_THROWS_AS(apply_display(partial, 50, 5, rng), std::logic_error);
}

TEST_CASE("swap pass trades a constructed bilateral match") {
  std::vector<CollectorState> states;
  states.emplace_back(8);
  states.emplace_back(8);
  // collector 0 holds a duplicate of 3 which 1 lacks, and vice versa for 7
  states[0].take_sticker(1);
  states[0].take_sticker(3);
  states[0].take_sticker(3);
  states[1].take_sticker(5);
  states[1].take_sticker(7);
  states[1].take_sticker(7);
  const std::int64_t moved = fair_swap_pass(states);
  CHECK(moved == 2);
  CHECK(states[0].album.contains(7));
  CHECK(states[1].album.contains(3));
  CHECK(states[0].duplicates_total == 0);
  CHECK(states[1].duplicates_total == 0);
  CHECK(states[0].album.size() == 3);
  CHECK(states[1].album.size() == 3);
  CHECK(states[0].totals.cards_given == 1);
  CHECK(states[0].totals.cards_received == 1);
}

TEST_CASE("swap pass does nothing without mutual need") {
  std::vector<CollectorState> states;
  states.emplace_back(8);
  states.emplace_back(8);
  states[0].take_sticker(3);
  states[0].take_sticker(3);  // 0 offers 3
  states[1].take_sticker(3);  // 1 already has 3, offers nothing
  CHECK(fair_swap_pass(states) == 0);
  CHECK(states[0].duplicates_total == 1);
}

TEST_CASE("a pure three-way cycle is not traded bilaterally") {
  // 0 can supply 1, 1 can supply 2, 2 can supply 0; no pair has mutual need.
  std::vector<CollectorState> states;
  for (int i = 0; i < 3; ++i) states.emplace_back(3);
  states[0].take_sticker(0);
  states[0].take_sticker(0);
  states[0].take_sticker(1);  // album {0,1}, duplicate 0; lacks 2
  states[1].take_sticker(1);
  states[1].take_sticker(1);
  states[1].take_sticker(2);  // album {1,2}, duplicate 1; lacks 0
  states[2].take_sticker(2);
  states[2].take_sticker(2);
  states[2].take_sticker(0);  // album {2,0}, duplicate 2; lacks 1
  CHECK(fair_swap_pass(states) == 0);
  for (const auto& s : states) CHECK(s.duplicates_total == 1);
}

TEST_CASE("swap pass takes ascending ids and caps at the smaller side") {
  std::vector<CollectorState> states;
  states.emplace_back(16);
  states.emplace_back(16);
  // 0 duplicates {2, 5, 9}; 1 duplicates {11}; mutual need on all
  for (const std::int64_t id : {2, 2, 5, 5, 9, 9}) states[0].take_sticker(id);
  for (const std::int64_t id : {11, 11}) states[1].take_sticker(id);
  const std::int64_t moved = fair_swap_pass(states);
  CHECK(moved == 2);  // min(3, 1) each way
  CHECK(states[1].album.contains(2));       // ascending: 2 before 5 and 9
  CHECK_FALSE(states[1].album.contains(5));
  CHECK(states[0].album.contains(11));
}

TEST_CASE("full replacement allowance needs no packs") {
  const Config cfg = make_config(30, 1, 30, 2);
  RngStream rng(1, 0);
  const RunOutcome outcome = simulate_run(cfg, rng);
  for (const auto& c : outcome.collectors) {
    CHECK(c.packs_bought == 0);
    CHECK(c.replacements_used == 30);
    CHECK(c.total_acquired() == 30);
  }
}

TEST_CASE("one-sticker album needs exactly one pack") {
  const Config cfg = make_config(1, 1, 0, 1);
  RngStream rng(9, 0);
  const RunOutcome outcome = simulate_run(cfg, rng);
  CHECK(outcome.collectors[0].packs_bought == 1);
  CHECK(outcome.collectors[0].total_acquired() == 1);
}

TEST_CASE("a full display finishes the run for free") {
  const Config cfg = make_config(25, 1, 0, 1, SwapModel::FairBilateral, 25);
  RngStream rng(2, 0);
  const RunOutcome outcome = simulate_run(cfg, rng);
  CHECK(outcome.collectors[0].packs_bought == 0);
  CHECK(outcome.collectors[0].pack_stickers == 25);
  CHECK(outcome.collectors[0].replacements_used == 0);
  CHECK(outcome.collectors[0].total_acquired() == 25);
}

TEST_CASE("display down to the allowance stops before any purchase") {
  const Config cfg = make_config(25, 1, 10, 1, SwapModel::FairBilateral, 15);
  RngStream rng(2, 0);
  const RunOutcome outcome = simulate_run(cfg, rng);
  CHECK(outcome.collectors[0].packs_bought == 0);
  CHECK(outcome.collectors[0].replacements_used == 10);
  CHECK(outcome.collectors[0].total_acquired() == 25);  // factor exactly 1
}

TEST_CASE("two-sticker album matches the classical expectation") {
  const Config cfg = make_config(2, 1, 0, 1);
  const auto totals = simulate_batch_totals(cfg, 20000, 77, 2);
  const auto s = stats::summarize(totals, 2);
  // exact mean 2*H(2) = 3, sigma^2 = 2
  const double se = std::sqrt(s.sample_variance / static_cast<double>(s.runs));
  CHECK(std::abs(s.mean_total - 3.0) < 3 * se);
}

TEST_CASE("batches are reproducible and order-independent") {
  const Config cfg = make_config(40, 3, 5, 3);
  const auto a = simulate_batch(cfg, 64, 123, 1);
  const auto b = simulate_batch(cfg, 64, 123, 4);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t c = 0; c < a[i].collectors.size(); ++c) {
      CHECK(a[i].collectors[c].packs_bought == b[i].collectors[c].packs_bought);
      CHECK(a[i].collectors[c].replacements_used == b[i].collectors[c].replacements_used);
      CHECK(a[i].collectors[c].cards_given == b[i].collectors[c].cards_given);
      CHECK(a[i].collectors[c].duplicates_left == b[i].collectors[c].duplicates_left);
    }
  }
  // first run of a batch equals a standalone run on stream 0
  RngStream rng(123, 0);
  const RunOutcome single = simulate_run(cfg, rng);
  CHECK(single.group_total_acquired() == a[0].group_total_acquired());
  CHECK(single.group_packs_bought() == a[0].group_packs_bought());
}

TEST_CASE("one collector behaves identically under both swap models") {
  for (const std::uint64_t seed : {1ull, 2ull, 3ull}) {
    const Config fair = make_config(60, 4, 9, 1, SwapModel::FairBilateral);
    const Config pooled = make_config(60, 4, 9, 1, SwapModel::PooledIdeal);
    RngStream rng_a(seed, 0);
    RngStream rng_b(seed, 0);
    const RunOutcome a = simulate_run(fair, rng_a);
    const RunOutcome b = simulate_run(pooled, rng_b);
    CHECK(a.group_packs_bought() == b.group_packs_bought());
    CHECK(a.group_replacements_used() == b.group_replacements_used());
    CHECK(a.group_total_acquired() == b.group_total_acquired());
    CHECK(a.group_duplicates_left() == b.group_duplicates_left());
  }
}

TEST_CASE("conservation and fairness invariants hold on random configurations") {
  RngStream pick(2024, 0);
  for (int it = 0; it < 60; ++it) {
    const std::int64_t b = 5 + static_cast<std::int64_t>(pick.next_below(36));
    const std::int64_t p = 1 + static_cast<std::int64_t>(pick.next_below(std::min<std::uint64_t>(6, b)));
    const std::int64_t k = static_cast<std::int64_t>(pick.next_below(b + 1));
    const std::int64_t d = static_cast<std::int64_t>(pick.next_below(b + 1));
    const std::int64_t f = 1 + static_cast<std::int64_t>(pick.next_below(5));
    const Config cfg = make_config(b, p, k, f, SwapModel::FairBilateral, d);
    RngStream rng(pick.next(), 0);
    const RunOutcome outcome = simulate_run(cfg, rng);
    for (const auto& c : outcome.collectors) {
      // every incoming card fills the album, stays as a duplicate, or leaves
      CHECK(c.pack_stickers + c.cards_received ==
            (b - c.replacements_used) + c.duplicates_left + c.cards_given);
      CHECK(c.cards_given == c.cards_received);  // one-for-one trades
      CHECK(c.replacements_used <= cfg.effective_allowance);
      CHECK(c.total_acquired() >= b);  // factor >= 1
    }
  }
}

TEST_CASE("pooled runs close the group album and split totals evenly") {
  RngStream pick(2025, 0);
  for (int it = 0; it < 40; ++it) {
    const std::int64_t b = 5 + static_cast<std::int64_t>(pick.next_below(36));
    const std::int64_t k = static_cast<std::int64_t>(pick.next_below(b + 1));
    const std::int64_t f = 1 + static_cast<std::int64_t>(pick.next_below(5));
    const Config cfg = make_config(b, 1, k, f, SwapModel::PooledIdeal);
    RngStream rng(pick.next(), 0);
    const RunOutcome outcome = simulate_run(cfg, rng);
    CHECK(outcome.group_total_acquired() >= b * f);
    CHECK(outcome.group_replacements_used() <= cfg.effective_allowance * f);
    std::int64_t min_packs = 1 << 30, max_packs = 0;
    for (const auto& c : outcome.collectors) {
      CHECK(c.total_acquired() >= b);  // P = 1: even split keeps everyone at or above B
      min_packs = std::min(min_packs, c.packs_bought);
      max_packs = std::max(max_packs, c.packs_bought);
    }
    CHECK(max_packs - min_packs <= 1);
  }
}

TEST_CASE("pooled allocation is at least as efficient as bilateral trading") {
  const std::int64_t b = 100, k = 8, f = 5, n = 4000;
  const auto fair =
      stats::summarize(simulate_batch_totals(make_config(b, 1, k, f), n, 31, 2), b);
  const auto pooled = stats::summarize(
      simulate_batch_totals(make_config(b, 1, k, f, SwapModel::PooledIdeal), n, 31, 2), b);
  const double se_f = fair.factor_halfwidth / 1.96;
  const double se_p = pooled.factor_halfwidth / 1.96;
  const double combined = std::sqrt(se_f * se_f + se_p * se_p);
  CHECK(pooled.factor_mean <= fair.factor_mean + 2 * combined);
}

TEST_CASE("many collectors with replacement get close to the floor") {
  // bottom-row behavior: F = 100 at 20% stays within a hair of f = 1
  const Config cfg = make_config(100, 1, 20, 100);
  const auto s = stats::summarize(simulate_batch_totals(cfg, 300, 5, 2), 100);
  CHECK(s.factor_mean >= 1.0);
  CHECK(s.factor_mean < 1.10);
}

TEST_CASE("fixed pack budget leaves the expected gap") {
  RngStream rng(41, 0);
  CHECK(missing_after_packs(30, 30, 1, rng) == 0);
  CHECK(missing_after_packs(30, 5, 0, rng) == 30);
  stats::Accumulator acc;
  for (int i = 0; i < 20000; ++i) {
    RngStream run_rng(99, static_cast<std::uint64_t>(i));
    acc.add(static_cast<double>(missing_after_packs(50, 1, 50, run_rng)));
  }
  // exact occupancy mean: B * (1 - 1/B)^M
  const double exact = 50.0 * std::pow(1.0 - 1.0 / 50.0, 50.0);
  const double se = acc.sample_std() / std::sqrt(static_cast<double>(acc.count()));
  CHECK(std::abs(acc.mean() - exact) < 3 * se);
}
