#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace heraldkit {

// splitmix64 step; used only to expand seeds.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Self-contained xoshiro256** stream. One root seed plus a stream index
// derives an independent stream, so event generation is reproducible for
// any thread count. Standard-library distributions are avoided on purpose:
// their draw sequences are implementation defined.
class RngStream {
 public:
  RngStream() : RngStream(0, 0) {}

  RngStream(std::uint64_t seed, std::uint64_t stream_index) {
    std::uint64_t mix = seed ^ (0x632be59bd9b4e019ull * (stream_index + 1));
    for (auto& word : state_) word = splitmix64_next(mix);
  }

  static RngStream child(std::uint64_t seed, std::uint64_t stream_index) {
    return RngStream(seed, stream_index);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool coin() { return (next_u64() >> 63) != 0; }

  // Exponential with mean tau (inverse CDF).
  double exponential(double tau) { return -tau * std::log(1.0 - uniform()); }

  // Gaussian with mean 0, std sigma (Box-Muller, one value per call).
  double normal(double sigma) {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return sigma * std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t state_[4];
};

}  // namespace heraldkit
