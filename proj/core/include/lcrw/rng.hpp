#pragma once

#include <cmath>
#include <cstdint>
#include <span>

#include "lcrw/point.hpp"

namespace lcrw {
namespace rng {

// SplitMix64 finalizer (Steele, Lea, Flood 2014; same constants as in the
// public-domain splitmix64.c reference).  Each stage is a bijection on
// 64-bit words, which is what makes the keyed-hash construction below
// collision-free per stage and bit-exact across implementations.
inline constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;

inline std::uint64_t mix64(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ull;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBull;
    x ^= x >> 31;
    return x;
}

// ZigZag maps signed coordinates to unsigned words so that small positive and
// negative values stay distinct.
inline std::uint64_t zigzag(std::int64_t v) {
    return (static_cast<std::uint64_t>(v) << 1) ^ static_cast<std::uint64_t>(v >> 63);
}

inline std::uint64_t combine(std::uint64_t h, std::uint64_t v) { return mix64(h + kGamma + v); }

// Keyed hash of (seed, x_1, ..., x_d).  This is the site key of the scenery
// field and the stream-derivation function for walkers: a chain of splitmix64
// stages, one per word.
inline std::uint64_t key_of(std::uint64_t seed, std::span<const Coord> coords) {
    std::uint64_t h = mix64(seed + kGamma);
    for (Coord c : coords) h = combine(h, zigzag(c));
    return h;
}

inline std::uint64_t key_of(std::uint64_t seed, std::uint64_t a) {
    return combine(mix64(seed + kGamma), a);
}
inline std::uint64_t key_of(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    return combine(combine(mix64(seed + kGamma), a), b);
}
inline std::uint64_t key_of(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    return combine(combine(combine(mix64(seed + kGamma), a), b), c);
}

// uniform in the open interval (0,1) on the 52-bit lattice (k+1/2)*2^-52;
// never rounds to 0 or 1, so inverse-CDF transforms need no special cases
inline double to_unit(std::uint64_t bits) {
    return (static_cast<double>(bits >> 12) + 0.5) * 0x1.0p-52;
}

}  // namespace rng

// Counter-based stream: state advances by a fixed gamma, output is the mixed
// state.  Distinct stream ids give statistically independent sequences.
class RngStream {
public:
    RngStream() : state_(0) {}
    explicit RngStream(std::uint64_t stream_id) : state_(rng::mix64(stream_id + 0x632BE59BD9B4E019ull)) {}

    std::uint64_t next_u64() {
        state_ += rng::kGamma;
        return rng::mix64(state_);
    }

    double next_unit() { return rng::to_unit(next_u64()); }

    double next_exponential(double rate) { return -std::log(next_unit()) / rate; }

    // unbiased-to-1/2^64 integer in [0, n); n must be >= 1
    std::uint64_t next_below(std::uint64_t n) {
        return static_cast<std::uint64_t>((static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

    double next_normal() {
        // Box-Muller, one value per call (second value discarded keeps the
        // stream position independent of call parity)
        double u1 = next_unit();
        double u2 = next_unit();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
    }

    std::int64_t next_poisson(double mean);

private:
    std::uint64_t state_;
};

}  // namespace lcrw
