#ifndef INFOLOSS_RNG_HPP
#define INFOLOSS_RNG_HPP

#include <cstdint>

namespace infoloss {

/// SplitMix64 (Steele, Lea & Flood). Every sampling routine in this library
/// draws from this generator; each chunk of a batch gets its own stream so
/// chunk-parallel generation is reproducible for any worker count.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit constexpr SplitMix64(std::uint64_t state) noexcept : state_(state) {}

  static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  constexpr std::uint64_t operator()() noexcept {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix(state_);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  constexpr double uniform() noexcept {
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
  }

  /// Uniform double in (0, 1); never returns an endpoint.
  constexpr double open_uniform() noexcept {
    return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return ~result_type{0}; }

 private:
  std::uint64_t state_;
};

/// Independent stream for chunk `chunk` of a run seeded with `seed`.
constexpr SplitMix64 chunk_stream(std::uint64_t seed, std::uint64_t chunk) noexcept {
  return SplitMix64(SplitMix64::mix(seed ^ SplitMix64::mix(chunk + 0x632be59bd9b4e019ULL)));
}

/// Derives a child seed, e.g. for a held-out evaluation batch.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) noexcept {
  return SplitMix64::mix(seed + SplitMix64::mix(tag ^ 0xd1b54a32d192ed03ULL));
}

}  // namespace infoloss

#endif  // INFOLOSS_RNG_HPP
