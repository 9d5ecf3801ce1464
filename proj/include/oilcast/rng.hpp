#pragma once

#include <cstdint>

namespace oilcast {

/// Deterministic 64-bit generator used everywhere randomness is needed,
/// so results do not depend on the platform's std library.
///
/// The state update is Marsaglia's xorshift64* (shift triple 12/25/27,
/// multiplier 2685821657736338717). Doubles are built from the top 53 bits.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ULL) {}

    std::uint64_t next_u64() {
        std::uint64_t x = state_;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        state_ = x;
        return x * 2685821657736338717ULL;
    }

    /// Uniform double in [0, 1).
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) {
        return lo + (hi - lo) * next_double();
    }

    /// Uniform integer in [0, n). n must be positive.
    std::uint64_t next_below(std::uint64_t n) {
        return next_u64() % n;
    }

    /// Standard normal via Box-Muller (no cached spare, two draws per call).
    double next_gaussian();

private:
    std::uint64_t state_;
};

/// FNV-1a hash of a stage name, mixed into the master seed so adding a
/// stage never perturbs earlier stages' randomness.
std::uint64_t derive_seed(std::uint64_t master_seed, const char* stage_name);

} // namespace oilcast
