#pragma once

#include <cstdint>
#include <cmath>
#include <random>

namespace hproj {

// SplitMix64; used to derive per-task seeds so parallel work is
// deterministic regardless of schedule.
inline uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline uint64_t derive_seed(uint64_t seed, uint64_t task_index) {
    uint64_t s = seed ^ (0x9e3779b97f4a7c15ULL * (task_index + 1));
    return splitmix64(s);
}

// Deterministic generator with self-contained uniform/normal transforms
// (the std:: distributions are not pinned across library versions).
class Rng {
public:
    explicit Rng(uint64_t seed) : engine_(seed) {}

    uint64_t next_u64() { return engine_(); }

    // uniform in [0,1) with 53-bit resolution
    double uniform() { return (engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    uint64_t uniform_index(uint64_t bound) {
        // modulo bias is negligible for bound << 2^64
        return engine_() % bound;
    }

    // standard normal via Box-Muller
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1, u2;
        do {
            u1 = uniform();
        } while (u1 <= 0.0);
        u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

private:
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace hproj
