#pragma once

#include <cstdint>
#include <cmath>
#include <vector>

namespace floodecon {

// Mixes a 64-bit value (splitmix64 finalizer). Used to derive substream
// seeds from the master seed so that subsystems draw from independent
// streams.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Deterministic random stream. All draws are built from the raw 64-bit
// xoshiro256++ output so results are bit-identical across compilers and
// platforms (the std <random> distributions are implementation-defined
// and must not be used here).
class RngStream {
  public:
    explicit RngStream(std::uint64_t seed) {
        // seed expansion via splitmix64, as recommended for xoshiro
        std::uint64_t x = seed;
        for (auto& word : state_) {
            x = splitmix64(x);
            word = x;
        }
        has_spare_normal_ = false;
        spare_normal_ = 0.0;
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // uniform in [0, 1), 53-bit resolution
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // uniform index in [0, n); n must be > 0
    std::size_t uniform_index(std::size_t n) {
        // rejection sampling to avoid modulo bias
        const std::uint64_t bound = static_cast<std::uint64_t>(n);
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t x = next_u64();
        while (x >= limit) x = next_u64();
        return static_cast<std::size_t>(x % bound);
    }

    // uniform integer in [lo, hi] inclusive
    int uniform_int(int lo, int hi) {
        return lo + static_cast<int>(uniform_index(static_cast<std::size_t>(hi - lo) + 1));
    }

    bool bernoulli(double p) { return uniform() < p; }

    // standard normal via Box-Muller; second value cached
    double normal() {
        if (has_spare_normal_) {
            has_spare_normal_ = false;
            return spare_normal_;
        }
        // u1 in (0, 1] so log(u1) is finite
        const double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * 3.14159265358979323846 * u2;
        spare_normal_ = r * std::sin(theta);
        has_spare_normal_ = true;
        return r * std::cos(theta);
    }

    double normal(double mean, double stddev) { return mean + stddev * normal(); }

    // Fisher-Yates; std::shuffle is implementation-defined so we roll our own
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = uniform_index(i);
            using std::swap;
            swap(v[i - 1], v[j]);
        }
    }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::uint64_t state_[4];
    bool has_spare_normal_;
    double spare_normal_;
};

// Named substreams spawned from one master seed. Keeping hazard, market,
// and evolution draws on separate streams means toggling one subsystem
// does not perturb the randomness seen by the others.
enum class Substream : std::uint64_t { Init = 1, Hazard = 2, Markets = 3, Evolution = 4 };

inline RngStream make_substream(std::uint64_t master_seed, Substream which) {
    return RngStream(splitmix64(master_seed ^ (0xA5A5A5A5DEADBEEFULL * static_cast<std::uint64_t>(which))));
}

}  // namespace floodecon
