#include "albumsim/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cassert>
#include <functional>
#include <stdexcept>
#include <thread>

namespace albumsim {

namespace {

void parallel_runs(std::int64_t runs, int threads, const std::function<void(std::int64_t)>& body) {
  if (threads <= 1 || runs < 2) {
    for (std::int64_t i = 0; i < runs; ++i) body(i);
    return;
  }
  const int workers = static_cast<int>(std::min<std::int64_t>(threads, runs));
  std::atomic<std::int64_t> next{0};
  constexpr std::int64_t kBlock = 16;
  auto work = [&] {
    for (;;) {
      const std::int64_t begin = next.fetch_add(kBlock);
      if (begin >= runs) return;
      const std::int64_t end = std::min(begin + kBlock, runs);
      for (std::int64_t i = begin; i < end; ++i) body(i);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int t = 0; t < workers; ++t) pool.emplace_back(work);
  for (auto& t : pool) t.join();
}

}  // namespace

IdSet::IdSet(std::int64_t universe)
    : universe_(universe), words_(static_cast<std::size_t>((universe + 63) / 64), 0) {
  if (universe <= 0) throw std::invalid_argument("IdSet: universe must be positive");
}

bool IdSet::insert(std::int64_t id) {
  assert(id >= 0 && id < universe_);
  std::uint64_t& w = words_[static_cast<std::size_t>(id) >> 6];
  const std::uint64_t bit = 1ULL << (id & 63);
  if (w & bit) return false;
  w |= bit;
  ++size_;
  return true;
}

void IdSet::erase(std::int64_t id) {
  assert(id >= 0 && id < universe_);
  std::uint64_t& w = words_[static_cast<std::size_t>(id) >> 6];
  const std::uint64_t bit = 1ULL << (id & 63);
  if (w & bit) {
    w &= ~bit;
    --size_;
  }
}

void IdSet::fill_all() {
  std::fill(words_.begin(), words_.end(), ~0ULL);
  const int tail = static_cast<int>(universe_ & 63);
  if (tail != 0) words_.back() = (1ULL << tail) - 1;
  size_ = universe_;
}

CollectorState::CollectorState(std::int64_t universe)
    : album(universe),
      duplicate_ids(universe),
      duplicate_count(static_cast<std::size_t>(universe), 0),
      missing(universe) {}

void CollectorState::take_sticker(std::int64_t id) {
  if (album.insert(id)) {
    --missing;
  } else {
    if (++duplicate_count[static_cast<std::size_t>(id)] == 1) duplicate_ids.insert(id);
    ++duplicates_total;
  }
}

void CollectorState::remove_duplicate(std::int64_t id) {
  assert(duplicate_count[static_cast<std::size_t>(id)] > 0);
  if (--duplicate_count[static_cast<std::size_t>(id)] == 0) duplicate_ids.erase(id);
  --duplicates_total;
}

void CollectorState::receive_into_album(std::int64_t id) {
  const bool was_new = album.insert(id);
  assert(was_new);
  (void)was_new;
  --missing;
}

void sample_distinct(std::int64_t universe, std::int64_t count, RngStream& rng,
                     std::vector<std::int64_t>& out) {
  if (count < 0 || count > universe)
    throw std::invalid_argument("sample_distinct: count must lie in [0, universe]");
  out.clear();
  // Floyd's subset sampling: uniform over all count-subsets, one draw per id.
  for (std::int64_t j = universe - count; j < universe; ++j) {
    const std::int64_t t = static_cast<std::int64_t>(rng.next_below(static_cast<std::uint64_t>(j + 1)));
    if (std::find(out.begin(), out.end(), t) != out.end())
      out.push_back(j);
    else
      out.push_back(t);
  }
}

void draw_pack(std::int64_t album_size, std::int64_t pack_size, RngStream& rng,
               std::vector<std::int64_t>& out) {
  if (pack_size < 1 || pack_size > album_size)
    throw std::invalid_argument("draw_pack: pack size must lie in [1, album size]");
  sample_distinct(album_size, pack_size, rng, out);
}

void apply_display(CollectorState& state, std::int64_t album_size,
                   std::int64_t display_size, RngStream& rng) {
  if (display_size < 0 || display_size > album_size)
    throw std::invalid_argument("apply_display: display size must lie in [0, album size]");
  if (state.album.size() != 0)
    throw std::logic_error("apply_display: album must be empty");
  if (display_size == 0) return;
  std::vector<std::int64_t> ids;
  sample_distinct(album_size, display_size, rng, ids);
  for (const std::int64_t id : ids) state.take_sticker(id);
  state.totals.pack_stickers += display_size;
}

std::int64_t fair_swap_pass(std::span<CollectorState> states) {
  const std::size_t n = states.size();
  if (n < 2) return 0;
  const std::size_t words = states[0].album.word_count();
  thread_local std::vector<std::int64_t> offer;
  thread_local std::vector<std::int64_t> wanted;
  std::int64_t total = 0;
  for (;;) {
    std::int64_t exchanged = 0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      CollectorState& a = states[i];
      if (a.duplicates_total == 0 || a.missing == 0) continue;
      const std::uint64_t* dup_a = a.duplicate_ids.words();
      const std::uint64_t* alb_a = a.album.words();
      for (std::size_t j = i + 1; j < n; ++j) {
        CollectorState& b = states[j];
        if (b.duplicates_total == 0 || b.missing == 0) continue;
        const std::uint64_t* dup_b = b.duplicate_ids.words();
        const std::uint64_t* alb_b = b.album.words();
        std::uint64_t any_ab = 0;
        for (std::size_t w = 0; w < words; ++w) any_ab |= dup_a[w] & ~alb_b[w];
        if (any_ab == 0) continue;
        std::uint64_t any_ba = 0;
        for (std::size_t w = 0; w < words; ++w) any_ba |= dup_b[w] & ~alb_a[w];
        if (any_ba == 0) continue;
        std::int64_t can_ab = 0, can_ba = 0;
        for (std::size_t w = 0; w < words; ++w) {
          can_ab += std::popcount(dup_a[w] & ~alb_b[w]);
          can_ba += std::popcount(dup_b[w] & ~alb_a[w]);
        }
        const std::int64_t m = std::min(can_ab, can_ba);
        offer.clear();
        wanted.clear();
        std::int64_t need = m;
        for (std::size_t w = 0; w < words && need > 0; ++w) {
          std::uint64_t bits = dup_a[w] & ~alb_b[w];
          while (bits != 0 && need > 0) {
            offer.push_back(static_cast<std::int64_t>(w * 64 + std::countr_zero(bits)));
            bits &= bits - 1;
            --need;
          }
        }
        need = m;
        for (std::size_t w = 0; w < words && need > 0; ++w) {
          std::uint64_t bits = dup_b[w] & ~alb_a[w];
          while (bits != 0 && need > 0) {
            wanted.push_back(static_cast<std::int64_t>(w * 64 + std::countr_zero(bits)));
            bits &= bits - 1;
            --need;
          }
        }
        for (const std::int64_t id : offer) {
          a.remove_duplicate(id);
          b.receive_into_album(id);
        }
        for (const std::int64_t id : wanted) {
          b.remove_duplicate(id);
          a.receive_into_album(id);
        }
        a.totals.cards_given += m;
        a.totals.cards_received += m;
        b.totals.cards_given += m;
        b.totals.cards_received += m;
        exchanged += 2 * m;
      }
    }
    total += exchanged;
    if (exchanged == 0) break;
  }
  return total;
}

namespace {

// Completion via replacement: book the gap, close the album, leave the pool.
void deactivate(CollectorState& state, std::int64_t& active_count) {
  state.totals.replacements_used = state.missing;
  state.album.fill_all();
  state.missing = 0;
  state.active = false;
  --active_count;
}

RunOutcome finish_outcome(std::vector<CollectorState>& states) {
  RunOutcome outcome;
  outcome.collectors.reserve(states.size());
  for (auto& s : states) {
    s.totals.duplicates_left = s.duplicates_total;
    outcome.collectors.push_back(s.totals);
  }
  return outcome;
}

RunOutcome run_fair_bilateral(const Config& cfg, RngStream& rng) {
  const std::int64_t b = cfg.album.album_size;
  const std::int64_t p = cfg.album.pack_size;
  const std::int64_t d = cfg.album.display_size;
  const std::int64_t f = cfg.group.collectors;
  const std::int64_t k_eff = cfg.effective_allowance;

  std::vector<CollectorState> states;
  states.reserve(static_cast<std::size_t>(f));
  for (std::int64_t i = 0; i < f; ++i) states.emplace_back(b);

  std::int64_t active_count = f;
  for (auto& s : states) {
    if (d > 0) apply_display(s, b, d, rng);
    if (s.missing <= k_eff) deactivate(s, active_count);
  }

  std::vector<std::int64_t> pack;
  pack.reserve(static_cast<std::size_t>(p));
  while (active_count > 0) {
    for (auto& s : states) {
      if (!s.active) continue;
      draw_pack(b, p, rng, pack);
      for (const std::int64_t id : pack) s.take_sticker(id);
      ++s.totals.packs_bought;
      s.totals.pack_stickers += p;
      if (s.missing <= k_eff) deactivate(s, active_count);
    }
    if (f > 1 && active_count > 0) {
      fair_swap_pass(states);
      for (auto& s : states)
        if (s.active && s.missing <= k_eff) deactivate(s, active_count);
    }
  }
  return finish_outcome(states);
}

RunOutcome run_pooled_ideal(const Config& cfg, RngStream& rng) {
  const std::int64_t b = cfg.album.album_size;
  const std::int64_t p = cfg.album.pack_size;
  const std::int64_t d = cfg.album.display_size;
  const std::int64_t f = cfg.group.collectors;
  const std::int64_t k_eff = cfg.effective_allowance;

  std::vector<std::uint32_t> counts(static_cast<std::size_t>(b), 0);
  // Unfilled album slots across the whole group.
  std::int64_t group_missing = b * f;
  auto bump = [&](std::int64_t id) {
    if (++counts[static_cast<std::size_t>(id)] <= static_cast<std::uint32_t>(f)) --group_missing;
  };

  std::vector<std::int64_t> ids;
  if (d > 0) {
    for (std::int64_t i = 0; i < f; ++i) {
      sample_distinct(b, d, rng, ids);
      for (const std::int64_t id : ids) bump(id);
    }
  }

  std::int64_t packs = 0;
  while (group_missing > f * k_eff) {
    draw_pack(b, p, rng, ids);
    for (const std::int64_t id : ids) bump(id);
    ++packs;
  }
  const std::int64_t replacements = group_missing;
  const std::int64_t stickers = packs * p + f * d;
  const std::int64_t duplicates = stickers - (b * f - group_missing);

  // Group totals split evenly; remainders go to the lowest indices.
  RunOutcome outcome;
  outcome.collectors.resize(static_cast<std::size_t>(f));
  for (std::int64_t i = 0; i < f; ++i) {
    auto& c = outcome.collectors[static_cast<std::size_t>(i)];
    c.packs_bought = packs / f + (i < packs % f ? 1 : 0);
    c.pack_stickers = c.packs_bought * p + d;
    c.replacements_used = replacements / f + (i < replacements % f ? 1 : 0);
    c.duplicates_left = duplicates / f + (i < duplicates % f ? 1 : 0);
  }
  return outcome;
}

}  // namespace

RunOutcome simulate_run(const Config& cfg, RngStream& rng) {
  if (cfg.group.swap_model == SwapModel::PooledIdeal) return run_pooled_ideal(cfg, rng);
  return run_fair_bilateral(cfg, rng);
}

std::vector<RunOutcome> simulate_batch(const Config& cfg, std::int64_t runs,
                                       std::uint64_t master_seed, int threads) {
  if (runs < 1) throw std::invalid_argument("simulate_batch: need at least one run");
  std::vector<RunOutcome> outcomes(static_cast<std::size_t>(runs));
  parallel_runs(runs, threads, [&](std::int64_t i) {
    RngStream rng(master_seed, static_cast<std::uint64_t>(i));
    outcomes[static_cast<std::size_t>(i)] = simulate_run(cfg, rng);
  });
  return outcomes;
}

std::vector<GroupTotals> simulate_batch_totals(const Config& cfg, std::int64_t runs,
                                               std::uint64_t master_seed, int threads) {
  if (runs < 1) throw std::invalid_argument("simulate_batch_totals: need at least one run");
  std::vector<GroupTotals> totals(static_cast<std::size_t>(runs));
  parallel_runs(runs, threads, [&](std::int64_t i) {
    RngStream rng(master_seed, static_cast<std::uint64_t>(i));
    const RunOutcome outcome = simulate_run(cfg, rng);
    GroupTotals& t = totals[static_cast<std::size_t>(i)];
    t.packs_bought = outcome.group_packs_bought();
    t.replacements_used = outcome.group_replacements_used();
    t.duplicates_left = outcome.group_duplicates_left();
    for (const auto& c : outcome.collectors) t.pack_stickers += c.pack_stickers;
    t.acquired_per_collector = outcome.mean_acquired_per_collector();
  });
  return totals;
}

std::int64_t missing_after_packs(std::int64_t album_size, std::int64_t pack_size,
                                 std::int64_t packs, RngStream& rng) {
  if (packs < 0) throw std::invalid_argument("missing_after_packs: pack count must be non-negative");
  IdSet album(album_size);
  std::vector<std::int64_t> pack;
  for (std::int64_t i = 0; i < packs; ++i) {
    draw_pack(album_size, pack_size, rng, pack);
    for (const std::int64_t id : pack) album.insert(id);
  }
  return album_size - album.size();
}

}  // namespace albumsim
