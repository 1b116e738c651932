#pragma once

#include <cstdint>
#include <string_view>

namespace migo {

/// Deterministic, splittable random stream (xoshiro256** seeded via splitmix64).
/// Streams are identified by (seed, path of tags), so runs are bit-reproducible
/// and independent streams never share state.
class Rng {
public:
    explicit Rng(std::uint64_t seed) { reseed(seed); }

    static std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
        h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        return h;
    }

    static std::uint64_t tag(std::string_view name) {
        std::uint64_t h = 0xcbf29ce484222325ull;
        for (char c : name) {
            h ^= static_cast<unsigned char>(c);
            h *= 0x100000001b3ull;
        }
        return h;
    }

    Rng split(std::uint64_t t) const { return Rng(mix(seed_, t)); }
    Rng split(std::string_view name) const { return split(tag(name)); }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Uniform in [0, bound), bound > 0. Unbiased via rejection.
    std::uint32_t uniform(std::uint32_t bound) {
        const std::uint64_t threshold = (0ull - bound) % bound;
        for (;;) {
            std::uint64_t r = next_u64();
            std::uint64_t m = (r & 0xffffffffull) * bound;
            if ((m & 0xffffffffull) >= threshold) return static_cast<std::uint32_t>(m >> 32);
        }
    }

    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Gaussian via Box-Muller; fine for weight init.
    double gaussian() {
        double u1 = uniform01(), u2 = uniform01();
        while (u1 <= 1e-300) u1 = uniform01();
        return __builtin_sqrt(-2.0 * __builtin_log(u1)) * __builtin_cos(6.283185307179586 * u2);
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    void reseed(std::uint64_t seed) {
        seed_ = seed;
        std::uint64_t z = seed;
        for (auto& s : s_) {
            z += 0x9e3779b97f4a7c15ull;
            std::uint64_t x = z;
            x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
            x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
            s = x ^ (x >> 31);
        }
    }

    std::uint64_t seed_;
    std::uint64_t s_[4];
};

} // namespace migo
