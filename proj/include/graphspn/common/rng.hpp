#pragma once

#include <cstdint>
#include <random>

namespace graphspn {

using Rng = std::mt19937_64;

// Mixes a master seed with a stream index; used to hand independent seeds to
// sub-tasks so results do not depend on evaluation order.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

inline Rng make_rng(std::uint64_t seed) { return Rng(seed); }

// Uniform double in [lo, hi]. Avoids std::uniform_real_distribution so draws
// are identical across standard library implementations.
inline double uniform_real(Rng& rng, double lo, double hi) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

// Uniform integer in [0, n). n must be > 0.
inline std::uint64_t uniform_index(Rng& rng, std::uint64_t n) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % n;
}

// Fisher-Yates with uniform_index, for the same portability reason.
template <typename It>
void shuffle(It first, It last, Rng& rng) {
  const auto n = static_cast<std::uint64_t>(last - first);
  for (std::uint64_t i = n; i > 1; --i) {
    const auto j = uniform_index(rng, i);
    std::swap(first[i - 1], first[j]);
  }
}

// FNV-1a, used for configuration fingerprints in manifests.
std::uint64_t fnv1a64(const void* data, std::size_t size);

}  // namespace graphspn
