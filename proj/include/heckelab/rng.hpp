#pragma once

#include <cmath>
#include <cstdint>

namespace heckelab {

// Counter-based generator: every draw is a pure function of
// (seed, stream, counter), so parallel workers produce identical streams
// regardless of how samples are assigned to threads.
class CounterRng {
public:
    CounterRng(uint64_t seed, uint64_t stream) : state_(mix(seed ^ mix(stream * 0x9e3779b97f4a7c15ULL))) {}

    uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix(state_);
    }

    // Uniform in [0, 1).
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform in [lo, hi).
    double next_in(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    // Unbiased uniform integer in [0, bound). bound > 0.
    uint64_t next_below(uint64_t bound) {
        const uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            uint64_t r = next_u64();
            if (r >= threshold) return r % bound;
        }
    }

    // Standard normal via Box-Muller (avoids implementation-defined
    // std::normal_distribution, which would break cross-platform determinism).
    double next_normal() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        double u1, u2;
        do {
            u1 = next_double();
        } while (u1 <= 0.0);
        u2 = next_double();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        cached_ = r * std::sin(a);
        have_cached_ = true;
        return r * std::cos(a);
    }

private:
    static uint64_t mix(uint64_t z) {
        // splitmix64 finalizer
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    uint64_t state_;
    double cached_ = 0.0;
    bool have_cached_ = false;
};

}  // namespace heckelab
