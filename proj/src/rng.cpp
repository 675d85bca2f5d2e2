#include "albumsim/rng.hpp"

#include <array>

namespace albumsim {

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t state = seed ^ (salt * 0xD1B54A32D192ED03ULL);
  std::uint64_t out = splitmix64(state);
  out ^= splitmix64(state);
  return out;
}

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t stream_index) {
  std::uint64_t state = mix_seed(master_seed, stream_index);
  std::array<std::uint32_t, 8> words{};
  for (std::size_t i = 0; i < words.size(); i += 2) {
    const std::uint64_t w = splitmix64(state);
    words[i] = static_cast<std::uint32_t>(w);
    words[i + 1] = static_cast<std::uint32_t>(w >> 32);
  }
  std::seed_seq seq(words.begin(), words.end());
  engine_.seed(seq);
}

std::uint64_t RngStream::next_below(std::uint64_t bound) {
  // Reject the biased low zone of size 2^64 mod bound.
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t r = engine_();
    if (r >= threshold) return r % bound;
  }
}

}  // namespace albumsim
