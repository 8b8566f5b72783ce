#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <utility>

namespace netflux {

// Philox4x32-10 (Salmon et al., "Parallel random numbers: as easy as 1, 2, 3").
// Output block i is a pure function of (key, i), so every platform produces the
// same stream for the same seed, and independent streams need no shared state.
class Philox4x32 {
public:
  using result_type = std::uint32_t;
  using Block = std::array<std::uint32_t, 4>;

  explicit Philox4x32(std::uint64_t seed = 0, std::uint64_t stream = 0)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        stream_(stream) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    if (lane_ == 4) {
      buffer_ = block(counter_++);
      lane_ = 0;
    }
    return buffer_[lane_++];
  }

  std::uint64_t next_u64() {
    std::uint64_t hi = (*this)();
    std::uint64_t lo = (*this)();
    return (hi << 32) | lo;
  }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform on (0, 1].
  double uniform_open_low() { return 1.0 - uniform(); }

  // Unbiased integer in [0, bound) (Lemire's multiply-shift with rejection).
  std::uint64_t below(std::uint64_t bound) {
    if (bound <= 1)
      return 0;
    if (bound <= 0xffffffffULL) {
      auto b = static_cast<std::uint32_t>(bound);
      std::uint64_t m = static_cast<std::uint64_t>((*this)()) * b;
      auto low = static_cast<std::uint32_t>(m);
      if (low < b) {
        std::uint32_t threshold = (0u - b) % b;
        while (low < threshold) {
          m = static_cast<std::uint64_t>((*this)()) * b;
          low = static_cast<std::uint32_t>(m);
        }
      }
      return m >> 32;
    }
    unsigned __int128 m = static_cast<unsigned __int128>(next_u64()) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
      std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        m = static_cast<unsigned __int128>(next_u64()) * bound;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::size_t j = below(i);
      std::swap(items[i - 1], items[j]);
    }
  }

  Block block(std::uint64_t index) const {
    Block ctr{static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
              static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)};
    std::array<std::uint32_t, 2> key = key_;
    for (int round = 0; round < 10; ++round) {
      ctr = single_round(ctr, key);
      key[0] += 0x9E3779B9u;
      key[1] += 0xBB67AE85u;
    }
    return ctr;
  }

private:
  static Block single_round(const Block& c, const std::array<std::uint32_t, 2>& k) {
    constexpr std::uint64_t m0 = 0xD2511F53u;
    constexpr std::uint64_t m1 = 0xCD9E8D57u;
    std::uint64_t p0 = m0 * c[0];
    std::uint64_t p1 = m1 * c[2];
    return {static_cast<std::uint32_t>(p1 >> 32) ^ c[1] ^ k[0], static_cast<std::uint32_t>(p1),
            static_cast<std::uint32_t>(p0 >> 32) ^ c[3] ^ k[1], static_cast<std::uint32_t>(p0)};
  }

  std::array<std::uint32_t, 2> key_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
  Block buffer_{};
  int lane_ = 4;
};

using Rng = Philox4x32;

// SplitMix64 finalizer, used to fold structured coordinates into a seed.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Seed for grid cell (a, b, c) under a base seed. Independent of evaluation order.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0,
                                    std::uint64_t c = 0) {
  std::uint64_t h = mix64(base);
  h = mix64(h ^ a);
  h = mix64(h ^ (b + 0x632BE59BD9B4E019ULL));
  h = mix64(h ^ (c + 0x85157AF5ULL));
  return h;
}

}  // namespace netflux
