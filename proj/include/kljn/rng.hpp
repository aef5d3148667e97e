#pragma once
// Seeded, splittable randomness. All simulation randomness flows through
// splitmix64 streams whose seeds are derived from a master seed by the fixed
// hash schedule below, so "Eve knows the seed of Alice's generator" is a
// concrete, reproducible data dependency (see README, "Seed schedule").

#include <cstddef>
#include <cstdint>
#include <span>

namespace kljn::rng {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

// splitmix64 finalizer (Vigna / Steele-Lea-Flood).
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

class SplitMix64 {
  public:
    explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    constexpr std::uint64_t next() noexcept {
        state_ += kGolden;
        return mix64(state_);
    }

    // Uniform double in [0, 1), 53 mantissa bits.
    double next_unit() noexcept {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

  private:
    std::uint64_t state_;
};

// Named streams split off a single seed. The noise streams and the switch
// stream are disjoint by construction; the attack premise is modeled by
// handing Eve the noise-stream seeds and nothing else.
enum class Stream : std::uint64_t {
    u_ha = 1,      // Alice's R_H generator
    u_la = 2,      // Alice's R_L generator
    u_hb = 3,      // Bob's R_H generator
    u_lb = 4,      // Bob's R_L generator
    switches = 5,  // resistor selection
    raw = 6,       // per-ensemble raw series under one generator stream
    scratch = 7,   // standalone series (noise-check, demos)
};

// Fixed derivation schedule:
//   derive_seed(root, index, stream) =
//       mix64( mix64(root + kGolden * (index + 1)) ^ (kGolden * (tag + 1)) )
constexpr std::uint64_t derive_seed(std::uint64_t root, std::uint64_t index, Stream stream) noexcept {
    const std::uint64_t tag = static_cast<std::uint64_t>(stream);
    return mix64(mix64(root + kGolden * (index + 1)) ^ (kGolden * (tag + 1)));
}

// Standard normal deviates by the Marsaglia polar method. Only sqrt/log are
// used, so the output is reproducible bit for bit for a given seed.
class NormalSampler {
  public:
    explicit NormalSampler(std::uint64_t seed) noexcept : gen_(seed) {}

    double next() noexcept;

  private:
    SplitMix64 gen_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

void fill_standard_normal(std::uint64_t seed, std::span<double> out) noexcept;

}  // namespace kljn::rng
