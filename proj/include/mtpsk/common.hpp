// common.hpp - error types, angle wrapping, dB conversions, seed splitting

#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace mtpsk {

// Invalid parameters or preconditions violated by the caller.
class config_error : public std::runtime_error {
public:
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

// Internal invariant broken; indicates a bug, not bad input.
class consistency_error : public std::logic_error {
public:
    explicit consistency_error(const std::string& what) : std::logic_error(what) {}
};

// Time-domain integration failed (non-finite state or no convergence).
class integration_error : public std::runtime_error {
public:
    explicit integration_error(const std::string& what) : std::runtime_error(what) {}
};

// Wrap an angle in degrees into (-180, 180]; the upper edge is kept so the
// map is total (+180 stays +180, -180 maps to +180).
inline double wrap_deg(double x) {
    double w = std::fmod(x + 180.0, 360.0);
    if (w <= 0.0) w += 360.0;
    return w - 180.0;
}

// Absolute angular distance between two angles in degrees, in [0, 180].
inline double wrapped_distance_deg(double a, double b) {
    return std::fabs(wrap_deg(a - b));
}

inline double dbm_to_watts(double p_dbm) { return 1e-3 * std::pow(10.0, p_dbm / 10.0); }
inline double watts_to_dbm(double p_w) { return 10.0 * std::log10(p_w / 1e-3); }
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Counter-based seed derivation: child seed depends only on (root, index),
// never on draw order, so parallel workers get stable per-stream streams.
inline std::uint64_t split_seed(std::uint64_t root, std::uint64_t index) {
    return splitmix64(root ^ splitmix64(index * 0x9E3779B97F4A7C15ULL + 0xD1B54A32D192ED03ULL));
}

inline std::mt19937_64 make_engine(std::uint64_t seed) { return std::mt19937_64(seed); }

// Uniform draw from [0, m) for power-of-two m.
inline int uniform_pow2_index(std::mt19937_64& eng, int m) {
    return static_cast<int>(eng() & static_cast<std::uint64_t>(m - 1));
}

inline int random_bit(std::mt19937_64& eng) { return static_cast<int>(eng() >> 63); }

inline bool is_power_of_two(int v) { return v > 0 && (v & (v - 1)) == 0; }

inline int int_log2(int v) { return 31 - __builtin_clz(static_cast<unsigned>(v)); }

}  // namespace mtpsk
