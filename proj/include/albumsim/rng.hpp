#pragma once

#include <cstdint>
#include <random>

namespace albumsim {

// One deterministic pseudo-random stream, keyed by (master seed, stream
// index). Equal keys give identical output; distinct indices give
// statistically independent streams, so parallel and serial execution of a
// batch produce the same per-run results.
//
// Generator id (pinned into table metadata): mt19937_64 keyed through
// splitmix64, stream state seeded from four mixed 64-bit words.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t stream_index);

  std::uint64_t next() { return engine_(); }

  // Unbiased uniform draw from [0, bound), bound >= 1. Fixed rejection
  // scheme, stable across platforms.
  std::uint64_t next_below(std::uint64_t bound);

  static constexpr const char* kGeneratorId = "mt19937_64/splitmix64-streams-v1";

 private:
  std::mt19937_64 engine_;
};

// splitmix64 single step; the mixing primitive behind stream keying and
// table cell seeds.
std::uint64_t splitmix64(std::uint64_t& state);

// Stateless mix of a seed with one salt value. Chained to derive table
// cell seeds from (master seed, B, P, F, K, model) deterministically.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt);

}  // namespace albumsim
