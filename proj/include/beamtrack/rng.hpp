#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <string_view>

namespace beamtrack {

// SplitMix64 finalizer; used for seed expansion and stream derivation.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// xoshiro256++ with explicit, platform-independent distributions.
// std::normal_distribution and friends are implementation-defined, so all
// variate generation here is hand-rolled to keep seeded runs byte-stable.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) { reseed(seed); }

    // Derives an independent stream from a list of key words (seed, stream
    // tag, trial index, ...). Same keys -> same stream, always.
    static Rng from_keys(std::initializer_list<std::uint64_t> keys) {
        std::uint64_t h = 0x243f6a8885a308d3ULL;
        for (std::uint64_t k : keys) h = mix64(h ^ k);
        return Rng(h);
    }

    void reseed(std::uint64_t seed) {
        for (auto& w : state_) {
            seed = mix64(seed);
            w = seed;
        }
        has_spare_ = false;
    }

    std::uint64_t next() {
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

    // Uniform in [0,1) with 53 random bits.
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, n), unbiased via rejection.
    int uniform_int(int n) {
        const std::uint64_t un = static_cast<std::uint64_t>(n);
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % un;
        std::uint64_t v;
        do {
            v = next();
        } while (v >= limit);
        return static_cast<int>(v % un);
    }

    // Standard normal via Box-Muller (polar form avoided to keep the draw
    // count per call fixed at one pair per two variates).
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform01();
        while (u1 <= 0.0) u1 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double t = 6.283185307179586476925286766559 * uniform01();
        spare_ = r * std::sin(t);
        has_spare_ = true;
        return r * std::cos(t);
    }

    // Circularly symmetric complex Gaussian CN(0, var); consumes exactly two
    // uniforms, independent of var.
    std::complex<double> complex_normal(double var) {
        double u1 = uniform01();
        while (u1 <= 0.0) u1 = uniform01();
        const double mag = std::sqrt(-var * std::log(u1));
        const double t = 6.283185307179586476925286766559 * uniform01();
        return {mag * std::cos(t), mag * std::sin(t)};
    }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::uint64_t state_[4]{};
    double spare_ = 0.0;
    bool has_spare_ = false;
};

// Stream tags for deriving the independent substreams of one trial. Keeping
// the channel stream separate from observation noise and policy decisions is
// what makes common-random-number comparisons across policies valid.
enum class StreamTag : std::uint64_t {
    channel = 0x6368616eULL,  // state transitions, gains, initial draw
    noise = 0x6e6f6973ULL,    // receiver noise per (trial, slot)
    policy = 0x706f6c63ULL,   // policy-internal randomness
};

inline Rng trial_channel_rng(std::uint64_t seed, std::uint64_t trial) {
    return Rng::from_keys({seed, static_cast<std::uint64_t>(StreamTag::channel), trial});
}

inline Rng trial_noise_rng(std::uint64_t seed, std::uint64_t trial, std::uint64_t slot) {
    return Rng::from_keys({seed, static_cast<std::uint64_t>(StreamTag::noise), trial, slot});
}

inline Rng trial_policy_rng(std::uint64_t seed, std::uint64_t trial, std::uint64_t policy_id) {
    return Rng::from_keys({seed, static_cast<std::uint64_t>(StreamTag::policy), trial, policy_id});
}

// FNV-1a, used to give each policy spec a stable decision-stream id.
inline std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace beamtrack
