// rng.hpp — counter-split deterministic random streams.
//
// Every random draw in the library flows from one top-level seed through
// named sub-streams: stream(seed, "synth", shot) yields a generator whose
// output is independent of scheduling, worker count and call order of the
// other streams.  Generator is xoshiro256++ seeded via splitmix64.

#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>
#include <vector>

namespace sg::rng {

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// FNV-1a over the stream tag; mixes the textual stream name into the key.
inline std::uint64_t hash_tag(std::string_view tag) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : tag) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

class Stream {
public:
    Stream() : Stream(0) {}

    explicit Stream(std::uint64_t key) {
        std::uint64_t sm = key;
        for (auto& w : s_) w = splitmix64_next(sm);
        if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;
    }

    // Derive the sub-stream (seed, tag, index).
    static Stream derive(std::uint64_t seed, std::string_view tag, std::uint64_t index = 0) {
        std::uint64_t k = seed;
        std::uint64_t mixed = splitmix64_next(k) ^ hash_tag(tag);
        mixed = splitmix64_next(mixed);
        mixed ^= 0x9E3779B97F4A7C15ull * (index + 1);
        return Stream(splitmix64_next(mixed));
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform in [0, 1) with 53-bit resolution.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Standard normal via the Marsaglia polar method (pairs cached).
    double normal() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform01() - 1.0;
            v = 2.0 * uniform01() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        cached_ = v * f;
        have_cached_ = true;
        return u * f;
    }

    // Knuth product method; intended for small means.
    int poisson(double mean) {
        if (mean <= 0.0) return 0;
        const double limit = std::exp(-mean);
        int k = 0;
        double p = 1.0;
        do {
            ++k;
            p *= uniform01();
        } while (p > limit);
        return k - 1;
    }

    // Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) {
        // multiply-shift rejection-free mapping; bias < 2^-64, irrelevant here
        unsigned __int128 m = static_cast<unsigned __int128>(next_u64()) * n;
        return static_cast<std::uint64_t>(m >> 64);
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::uint64_t s_[4]{};
    bool have_cached_ = false;
    double cached_ = 0.0;
};

} // namespace sg::rng
