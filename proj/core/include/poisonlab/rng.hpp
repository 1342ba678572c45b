#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace poisonlab {

// Named seed streams derived from one master seed. Every consumer of
// randomness in an experiment owns its own stream so that, e.g., the
// attacker's draws are unaffected by how many train batches were sampled.
inline constexpr std::string_view kStreamInit = "init";
inline constexpr std::string_view kStreamTrainShuffle = "train-shuffle";
inline constexpr std::string_view kStreamAuxShuffle = "aux-shuffle";
inline constexpr std::string_view kStreamAttack = "attack";
inline constexpr std::string_view kStreamPoisonInit = "poison-init";
inline constexpr std::string_view kStreamSplit = "split";

inline uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// FNV-1a over the stream name, mixed with the master seed.
inline uint64_t derive_seed(uint64_t master, std::string_view stream) {
  uint64_t h = 0xcbf29ce484222325ull;
  for (char c : stream) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ull;
  }
  return splitmix64(master ^ h);
}

inline uint64_t derive_seed(uint64_t master, std::string_view stream, uint64_t index) {
  return splitmix64(derive_seed(master, stream) ^ splitmix64(index));
}

// mt19937_64 with hand-rolled transforms. The raw engine output is fixed by
// the standard and the transforms below avoid the implementation-defined
// behavior of std::uniform_*_distribution, so all draws are bit-reproducible.
class Rng {
 public:
  explicit Rng(uint64_t seed) : eng_(seed) {}

  uint64_t next_u64() { return eng_(); }

  // uniform in [0, 1)
  double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // unbiased integer in [0, n), rejection sampling
  uint64_t below(uint64_t n) {
    const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    uint64_t x;
    do {
      x = eng_();
    } while (x >= limit);
    return x % n;
  }

  // standard normal, Box-Muller with cached spare
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1, u2;
    do {
      u1 = uniform01();
    } while (u1 <= 0.0);
    u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * 3.141592653589793238462643383279502884 * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

  // Fisher-Yates
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      const size_t j = static_cast<size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 eng_;
  double spare_{0.0};
  bool has_spare_{false};
};

}  // namespace poisonlab
