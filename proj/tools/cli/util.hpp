#pragma once

#include <cmath>
#include <cstdint>
#include <string>

namespace cli {

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

// FNV-1a over raw bytes; stable across platforms, used to stamp outputs
// with the config they came from.
inline std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

// Fixed-precision, locale-independent float formatting so outputs are
// byte-reproducible.
std::string fmt(double v);

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace cli
