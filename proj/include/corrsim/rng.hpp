#ifndef CORRSIM_RNG_HPP
#define CORRSIM_RNG_HPP

#include <cmath>
#include <cstdint>

namespace corrsim::rng {

/// Stateless 64-bit finalizer (murmur3 variant). Used to derive stream seeds.
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 33)) * 0xff51afd7ed558ccdULL;
    z = (z ^ (z >> 33)) * 0xc4ceb9fe1a85ec53ULL;
    return z ^ (z >> 33);
}

/// Counter-based per-trial random stream: the state is derived from
/// (master_seed, trial_index) only, so trial i produces the same draws no
/// matter which thread runs it or in what order. Generator is xoshiro256**.
class TrialRng {
  public:
    TrialRng(std::uint64_t master_seed, std::uint64_t trial_index) {
        std::uint64_t st = mix64(master_seed ^ 0x5851f42d4c957f2dULL) +
                           trial_index * 0x14057b7ef767814fULL;
        for (auto& word : state_) {
            st += 0x9e3779b97f4a7c15ULL;
            word = mix64(st);
        }
        // xoshiro must not start at the all-zero state
        if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = 1;
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform double in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Standard normal via the polar method; the spare deviate is cached.
    double gaussian() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double m = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * m;
        has_spare_ = true;
        return u * m;
    }

    /// Fair coin in {-1, +1}.
    int sign() { return (next_u64() >> 63) ? 1 : -1; }

    bool bernoulli(double p) { return uniform() < p; }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t state_[4];
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace corrsim::rng

#endif
