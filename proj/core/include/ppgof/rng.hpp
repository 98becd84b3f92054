#pragma once

#include <cstdint>

namespace ppgof {

/// Identifies one replication of one experiment. Every
/// (experiment_seed, replication_index, stream_tag) triple yields an
/// independent, platform-stable random stream.
struct SeedSpec {
    std::uint64_t experiment_seed = 0;
    std::uint32_t replication_index = 0;
};

/// Stream tags keep the per-replication substreams (simulation, fit
/// starts, jitter, retries) from colliding.
namespace stream_tag {
inline constexpr std::uint64_t kSimulate = 1;
inline constexpr std::uint64_t kFit = 2;
inline constexpr std::uint64_t kJitter = 3;
inline constexpr std::uint64_t kOracle = 4;
} // namespace stream_tag

/// Counter-seeded xoshiro256++ generator. All stream derivation is done
/// with fixed-width integer arithmetic, so identical seeds produce
/// identical draws on every platform.
class Rng {
  public:
    Rng(SeedSpec seed, std::uint64_t tag);

    std::uint64_t next_u64();

    /// Uniform draw strictly inside (0, 1).
    double uniform01();

    /// Exponential with the given rate, via inversion.
    double exponential(double rate);

    /// Standard normal (polar Marsaglia).
    double normal();

  private:
    std::uint64_t s_[4];
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace ppgof
