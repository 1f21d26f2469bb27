#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace looptree {

// All randomness flows through this generator (xoshiro256++ seeded via
// splitmix64) with hand-rolled distributions, so that a given seed produces
// the same stream on every platform. std:: distributions are
// implementation-defined and would break byte-identical reproducibility.
class Rng {
 public:
  explicit Rng(uint64_t seed) { reseed(seed); }

  void reseed(uint64_t seed);

  // Derived stream, independent of scheduling: stream(seed, id) is used for
  // per-replica and per-cycle generators.
  static Rng stream(uint64_t seed, uint64_t stream_id);

  uint64_t next_u64();

  // Uniform on [0,1) with 53 random bits.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, bound). bound must be positive.
  uint64_t below(uint64_t bound);

  // Standard normal via Box-Muller; the spare value is cached.
  double normal();

  template <typename T>
  void shuffle(std::vector<T>& v) {
    // Fisher-Yates
    for (size_t i = v.size(); i > 1; --i) {
      size_t j = static_cast<size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  uint64_t s_[4];
  double spare_ = 0.0;
  bool has_spare_ = false;
};

uint64_t splitmix64(uint64_t& state);

}  // namespace looptree
