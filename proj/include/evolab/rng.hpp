#pragma once

#include <cstdint>

namespace evolab {

// Counter-based generator: each draw is a pure hash of (key, counter), so
// independent streams can be split off without sharing mutable state and the
// sequence is identical on every platform for a given seed.
class SplitRng {
 public:
  explicit SplitRng(std::uint64_t seed, std::uint64_t stream = 0)
      : key_(mix(seed ^ mix(stream ^ 0x9e3779b97f4a7c15ull))) {}

  std::uint64_t next_u64() { return mix(key_ + 0x9e3779b97f4a7c15ull * ++counter_); }

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Integer in [0, m).
  std::uint64_t below(std::uint64_t m) { return next_u64() % m; }

  // Derive an independent child stream; the child's draws do not advance
  // this generator.
  SplitRng split(std::uint64_t substream) const {
    return SplitRng(key_, substream ^ 0xd1342543de82ef95ull);
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace evolab
