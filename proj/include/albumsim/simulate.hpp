#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "albumsim/model.hpp"
#include "albumsim/rng.hpp"

namespace albumsim {

// Fixed-universe set of sticker ids, one bit per id. Word access is public
// so the swap pass can run set algebra without allocating.
class IdSet {
 public:
  explicit IdSet(std::int64_t universe);

  bool insert(std::int64_t id);  // returns true if the id was absent
  void erase(std::int64_t id);
  bool contains(std::int64_t id) const {
    return (words_[static_cast<std::size_t>(id) >> 6] >> (id & 63)) & 1u;
  }
  void fill_all();

  std::int64_t size() const { return size_; }
  std::int64_t universe() const { return universe_; }
  const std::uint64_t* words() const { return words_.data(); }
  std::size_t word_count() const { return words_.size(); }

 private:
  std::int64_t universe_;
  std::int64_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

// One collector's album and duplicate holdings mid-run. Every duplicate id
// is already in the album: a needed sticker always fills the album first.
struct CollectorState {
  explicit CollectorState(std::int64_t universe);

  IdSet album;
  IdSet duplicate_ids;  // ids with count >= 1 below
  std::vector<std::uint32_t> duplicate_count;
  std::int64_t duplicates_total = 0;
  std::int64_t missing;  // universe - album.size()
  bool active = true;    // still buying; active implies missing > K_eff
  CollectorTotals totals;

  void take_sticker(std::int64_t id);
  void remove_duplicate(std::int64_t id);
  void receive_into_album(std::int64_t id);
};

// `count` distinct ids drawn uniformly from [0, universe), ascending-free
// insertion order; exactly `count` draws are consumed from the stream.
void sample_distinct(std::int64_t universe, std::int64_t count, RngStream& rng,
                     std::vector<std::int64_t>& out);

// One pack: P distinct ids, uniform over all P-subsets of [0, B).
void draw_pack(std::int64_t album_size, std::int64_t pack_size, RngStream& rng,
               std::vector<std::int64_t>& out);

// Duplicate-free initial batch of D distinct ids; requires a fresh state.
// Credits pack_stickers with D.
void apply_display(CollectorState& state, std::int64_t album_size,
                   std::int64_t display_size, RngStream& rng);

// One-for-one bilateral trading to a fixed point. Pairs are visited in
// index order (i < j); each pair exchanges min(|A|, |C|) cards each way
// where A = duplicates of i that j's album lacks and C the converse, ids
// taken ascending. Full passes repeat until one exchanges nothing.
// Returns the number of cards that changed hands. Deterministic.
std::int64_t fair_swap_pass(std::span<CollectorState> states);

// One complete collection process for a validated configuration.
RunOutcome simulate_run(const Config& config, RngStream& rng);

// n independent runs; run i uses RngStream(master_seed, i), so the result
// is identical for a fixed seed regardless of execution order.
std::vector<RunOutcome> simulate_batch(const Config& config, std::int64_t runs,
                                       std::uint64_t master_seed, int threads = 1);

// Group-level totals per run; the memory-lean form the table builder and
// CLI consume for large batches.
struct GroupTotals {
  std::int64_t packs_bought = 0;
  std::int64_t pack_stickers = 0;
  std::int64_t replacements_used = 0;
  std::int64_t duplicates_left = 0;
  double acquired_per_collector = 0.0;  // the per-run statistic x
};

std::vector<GroupTotals> simulate_batch_totals(const Config& config, std::int64_t runs,
                                               std::uint64_t master_seed, int threads = 1);

// Missing count after buying a fixed number of packs (no stopping rule);
// the fixed-budget experiment behind the inverse estimate.
std::int64_t missing_after_packs(std::int64_t album_size, std::int64_t pack_size,
                                 std::int64_t packs, RngStream& rng);

}  // namespace albumsim
