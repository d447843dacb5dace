#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

namespace sapred {

// splitmix64: used both as a stream seeder and to derive independent
// sub-seeds for parallel work units, so results do not depend on scheduling.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
    std::uint64_t s = base ^ (0x9e3779b97f4a7c15ULL * (stream + 1));
    splitmix64(s);
    return splitmix64(s);
}

// xoshiro256++ with explicit normal/uniform draws. Deterministic across
// platforms, unlike std::normal_distribution.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0x853c49e6748fea9bULL) {
        std::uint64_t sm = seed;
        for (auto& w : s_) w = splitmix64(sm);
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

    // Uniform in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) {
        // Lemire-style rejection-free enough for our n << 2^64 use.
        return next_u64() % n;
    }

    // Box-Muller; one value per call keeps the stream layout obvious.
    double normal() {
        double u1 = uniform();
        while (u1 <= 1e-300) u1 = uniform();
        double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    double normal(double mu, double sigma) { return mu + sigma * normal(); }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::uint64_t s_[4];
};

}  // namespace sapred
