#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>

namespace gidp {

// SplitMix64 step; used to expand seeds and to derive stream keys.
constexpr std::uint64_t splitmix64(std::uint64_t& state) noexcept {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// xoshiro256++ engine (UniformRandomBitGenerator).
class Xoshiro256pp {
 public:
  using result_type = std::uint64_t;

  explicit Xoshiro256pp(std::uint64_t seed = 0) noexcept {
    std::uint64_t sm = seed;
    for (auto& word : s_) word = splitmix64(sm);
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
  }
  std::uint64_t s_[4];
};

// An independent random stream. Streams for parallel consumers are derived
// from one root seed and a stream index, so the sequence a trajectory sees
// does not depend on how work is scheduled.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  static RandomStream derive(std::uint64_t root_seed, std::uint64_t index) {
    std::uint64_t key = index ^ 0x6a09e667f3bcc909ULL;
    const std::uint64_t mixed = splitmix64(key);
    std::uint64_t root = root_seed;
    return RandomStream(splitmix64(root) ^ mixed);
  }

  // Uniform on the open interval (0, 1).
  double uniform() {
    double u;
    do {
      u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    } while (u == 0.0);
    return u;
  }
  double normal() { return normal_(engine_); }
  double exponential() { return -std::log(uniform()); }

  Xoshiro256pp& engine() noexcept { return engine_; }

 private:
  Xoshiro256pp engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace gidp
