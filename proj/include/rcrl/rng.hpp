#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace rcrl {

// Deterministic RNG. The mt19937_64 engine is fully specified by the
// standard; the std:: distributions are not, so all transforms are done
// here by hand. Substreams are derived from (seed, stream) so that
// independent concerns (exploration, buffer sampling, mixture sampling,
// evaluation) never perturb each other's draw sequences.
class Rng {
public:
    explicit Rng(uint64_t seed, uint64_t stream = 0) : engine_(mix(seed, stream)) {}

    uint64_t next_u64() { return engine_(); }

    // uniform in [0, 1)
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // unbiased integer in [0, n)
    int uniform_int(int n) {
        const uint64_t un = static_cast<uint64_t>(n);
        const uint64_t limit = UINT64_MAX - UINT64_MAX % un;
        uint64_t x = engine_();
        while (x >= limit) x = engine_();
        return static_cast<int>(x % un);
    }

    // standard normal via Box-Muller; consumes exactly two words per call
    double normal() {
        const double u1 = 1.0 - uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }

    double normal(double mu, double sigma) { return mu + sigma * normal(); }

    // splitmix64 finalizer over seed and stream id
    static uint64_t mix(uint64_t seed, uint64_t stream) {
        uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

private:
    std::mt19937_64 engine_;
};

// Named substreams used by the training loops.
namespace streams {
inline constexpr uint64_t explore = 1;
inline constexpr uint64_t buffer = 2;
inline constexpr uint64_t mixture = 3;
inline constexpr uint64_t eval = 4;
inline constexpr uint64_t init = 5;
inline constexpr uint64_t episode = 6;
}  // namespace streams

}  // namespace rcrl
