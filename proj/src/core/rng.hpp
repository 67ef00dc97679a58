#pragma once

#include <cstdint>

namespace noma::rng {

// SplitMix64 finalizer; good avalanche, passes BigCrush as a stream generator.
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Counter-based stream: the state is a pure function of (seed, id fields),
// so any (trial, block, user) tuple addresses its own reproducible stream
// no matter how trials are distributed over workers.
class Stream {
public:
    explicit Stream(std::uint64_t seed) : state_(mix64(seed ^ kGolden)) {}

    Stream(std::uint64_t seed, std::uint64_t a) : Stream(seed) { fold(a); }
    Stream(std::uint64_t seed, std::uint64_t a, std::uint64_t b) : Stream(seed, a) { fold(b); }
    Stream(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t c)
        : Stream(seed, a, b) {
        fold(c);
    }
    Stream(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d)
        : Stream(seed, a, b, c) {
        fold(d);
    }

    std::uint64_t next_u64() {
        state_ += kGolden;
        return mix64(state_);
    }

    // Uniform on the open interval (0,1); never 0 or 1, so logs are safe.
    double next_uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    double next_exponential();            // Exp(1)
    double next_normal();                 // N(0,1), Box-Muller with caching
    double next_gamma(double shape);      // Gamma(shape, 1), shape >= 1 (Marsaglia-Tsang)

private:
    void fold(std::uint64_t v) { state_ = mix64(state_ ^ (v + kGolden)); }

    static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
    std::uint64_t state_;
    double cached_normal_ = 0.0;
    bool has_cached_normal_ = false;
};

}  // namespace noma::rng
