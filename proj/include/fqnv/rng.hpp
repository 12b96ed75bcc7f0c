// rng.hpp -- counter-seeded splitmix64 streams.
//
// Every sampled quantity draws from its own stream keyed by
// (master_seed, realization, spin, channel), so adding realizations, spins,
// or toggling one disorder channel never perturbs the draws of another.
// Constants are the splitmix64 reference constants; the combiner is the
// boost-style hash_combine fed through the splitmix finalizer.
#pragma once

#include <cstdint>

namespace fqnv {

// splitmix64 finalizer (Steele/Lea/Flood constants).
constexpr std::uint64_t avalanche(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return z;
}

constexpr std::uint64_t mix_seed(std::uint64_t h, std::uint64_t v) {
  return avalanche(h ^ (v + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2)));
}

// Disorder channels.  Values are part of the reproducibility contract; do not
// renumber.
enum class Channel : std::uint64_t {
  ZeroField = 0,   // D_k
  StrainE1 = 1,
  StrainE2 = 2,
  StrainAngle = 3,
  AxialNoise = 4,  // field-fluctuator part of B_z
  Hyperfine = 5,
  Orientation = 6,  // which of the four <111> axes
};

constexpr std::uint64_t stream_seed(std::uint64_t master, std::uint64_t realization,
                                    std::uint64_t spin, Channel channel) {
  return mix_seed(mix_seed(mix_seed(master, realization), spin),
                  static_cast<std::uint64_t>(channel));
}

class SplitMix64 {
 public:
  explicit constexpr SplitMix64(std::uint64_t seed) : state_(seed) {}

  constexpr std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return avalanche(state_);
  }

  // Uniform on the open interval (0, 1); never returns an endpoint, so
  // tan(pi*(u - 1/2)) below stays finite.
  double uniform() {
    return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
  }

 private:
  std::uint64_t state_;
};

}  // namespace fqnv
