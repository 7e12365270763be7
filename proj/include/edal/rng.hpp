#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace edal::rng {

// splitmix64 step: advances the state and returns the next output.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Named sub-streams so every component draws from its own deterministic
// sequence derived from the single run seed.
enum class Substream : std::uint64_t {
  init = 0x01,
  shuffle = 0x02,
  negatives = 0x03,
  synth = 0x04,
};

// Deterministic generator with identical output on every platform.
// std::uniform_*_distribution is implementation-defined, so bounded draws
// are hand-rolled here.
class Stream {
 public:
  explicit Stream(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() { return splitmix64(state_); }

  // Uniform in [0, 1) with 53 bits of mantissa.
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double next_uniform(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

  // Uniform in [0, n), n > 0. Rejection sampling removes modulo bias.
  std::uint64_t next_below(std::uint64_t n) {
    const std::uint64_t threshold = (0 - n) % n;  // 2^64 mod n
    for (;;) {
      const std::uint64_t r = next_u64();
      if (r >= threshold) return r % n;
    }
  }

  // Fisher-Yates.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(next_below(i));
      using std::swap;
      swap(v[i - 1], v[j]);
    }
  }

 private:
  std::uint64_t state_;
};

inline Stream substream(std::uint64_t master_seed, Substream which) {
  std::uint64_t s = master_seed ^ (0xd1b54a32d192ed03ull * static_cast<std::uint64_t>(which));
  // One warm-up step decorrelates nearby master seeds.
  splitmix64(s);
  return Stream(s);
}

}  // namespace edal::rng
