#ifndef JETGEOM_RNG_HPP
#define JETGEOM_RNG_HPP

#include <cstdint>
#include <random>

namespace jetgeom {

/// Deterministic generator with an integer-state core and a fixed
/// u64 -> double mapping, so a seed produces the same stream on every
/// platform (std::uniform_real_distribution is implementation-defined).
struct Rng {
  std::mt19937_64 eng;
  explicit Rng(std::uint64_t seed) : eng(seed) {}
  double unit() { return double(eng() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }
  int below(int k) { return int(eng() % std::uint64_t(k)); }
};

}  // namespace jetgeom

#endif
