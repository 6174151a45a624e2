#pragma once

#include <cstdint>
#include <vector>

namespace jscc {

// splitmix64 finalizer; the workhorse for keyed, platform-independent
// pseudo-randomness (codebooks, bin maps, per-restart seeds).
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t mix64(std::uint64_t a, std::uint64_t b) {
  return mix64(a ^ mix64(b));
}

// Uniform double in [0, 1) from the top 53 bits.
inline double u01(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// Small sequential generator with an independent stream per (seed, stream).
class SplitMix {
 public:
  explicit SplitMix(std::uint64_t seed, std::uint64_t stream = 0)
      : state_(mix64(seed, stream)) {}

  std::uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  double next_u01() { return u01(next()); }

  // Inverse-cdf draw from an unnormalized nonnegative weight row.
  int next_index(const std::vector<double>& weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    double u = next_u01() * total;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      u -= weights[i];
      if (u < 0.0) return static_cast<int>(i);
    }
    return static_cast<int>(weights.size()) - 1;
  }

 private:
  std::uint64_t state_;
};

// Order-sensitive hash of a symbol sequence, used to key codeword and bin
// lookups on whole source vectors.
inline std::uint64_t hash_sequence(const std::vector<int>& seq, std::uint64_t seed) {
  std::uint64_t h = mix64(seed, 0x5eedULL + seq.size());
  for (int s : seq) h = mix64(h ^ static_cast<std::uint64_t>(s + 1));
  return h;
}

}  // namespace jscc
