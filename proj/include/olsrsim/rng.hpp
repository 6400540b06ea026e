#pragma once

#include <cstdint>
#include <random>

namespace olsrsim {

/// splitmix64 finalizer; used to derive independent stream seeds.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seeded stream with portable draws. std::mt19937_64's output sequence is
/// fixed by the standard; the standard distributions are not, so uniform
/// draws are derived from raw bits here.
class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t sub = 0)
      : engine_(mix64(mix64(seed ^ mix64(stream)) + sub)) {}

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) { return static_cast<std::uint64_t>(uniform() * static_cast<double>(n)); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace olsrsim
