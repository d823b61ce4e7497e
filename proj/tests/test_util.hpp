#pragma once

// Deliberately naive reference implementations used as test oracles. These
// recompute likelihoods, transitions and rewards with plain dense loops,
// independent of the library's computation paths.

#include <cmath>
#include <vector>

#include "beamtrack/belief.hpp"
#include "beamtrack/detector.hpp"
#include "beamtrack/rng.hpp"
#include "beamtrack/sensing.hpp"
#include "beamtrack/transition.hpp"

namespace oracle {

using namespace beamtrack;

// Tuple of a flat state index, little-endian base n_tx (path 0 first).
inline std::vector<int> decode(long index, int n_tx, int n_paths) {
    std::vector<int> cols(n_paths);
    for (int l = 0; l < n_paths; ++l) {
        cols[l] = static_cast<int>(index % n_tx);
        index /= n_tx;
    }
    return cols;
}

inline long num_states(int n_tx, int n_paths) {
    long n = 1;
    for (int l = 0; l < n_paths; ++l) n *= n_tx;
    return n;
}

// Dense joint transition over enumerated states: product of per-path entries.
inline std::vector<double> dense_full_transition(const TransitionMatrix& P, int n_paths) {
    const long n = num_states(P.size, n_paths);
    std::vector<double> full(static_cast<std::size_t>(n) * n, 0.0);
    for (long i = 0; i < n; ++i) {
        const std::vector<int> from = decode(i, P.size, n_paths);
        for (long j = 0; j < n; ++j) {
            const std::vector<int> to = decode(j, P.size, n_paths);
            double prod = 1.0;
            for (int l = 0; l < n_paths; ++l) prod *= P(from[l], to[l]);
            full[static_cast<std::size_t>(i) * n + j] = prod;
        }
    }
    return full;
}

inline int bins_in_column(const std::vector<int>& cols, int column) {
    int n = 0;
    for (int c : cols)
        if (c == column) ++n;
    return n;
}

inline double quiet_prob(const DetectorSpec& det, int n_rx, int n_bins) {
    return std::pow(1.0 - det.p_fa, n_rx - n_bins) * std::pow(det.p_md, n_bins);
}

inline double q_prob(const std::vector<int>& cols, const Observation& obs, const Action& action,
                     const DetectorSpec& det, int n_rx) {
    double q = 1.0;
    for (int m = 0; m < action.size(); ++m) {
        const double quiet = quiet_prob(det, n_rx, bins_in_column(cols, action.indices[m]));
        q *= obs.flag(m) ? 1.0 - quiet : quiet;
    }
    return q;
}

inline double path_count_reward(const std::vector<int>& cols, const Action& action,
                                const Observation& obs) {
    int detected = 0;
    for (int m = 0; m < action.size(); ++m)
        if (obs.flag(m)) detected += bins_in_column(cols, action.indices[m]);
    return detected;
}

// Triple sum of the expected one-slot reward from a pre-transition state.
inline double expected_reward_state(long pre_state, const Action& action,
                                    const TransitionMatrix& P, const DetectorSpec& det, int n_tx,
                                    int n_rx, int n_paths) {
    const long n = num_states(n_tx, n_paths);
    const std::vector<double> full = dense_full_transition(P, n_paths);
    const int n_obs = 1 << action.size();
    double r = 0.0;
    for (long i = 0; i < n; ++i) {
        const std::vector<int> cols = decode(i, n_tx, n_paths);
        const double pni = full[static_cast<std::size_t>(pre_state) * n + i];
        for (int j = 0; j < n_obs; ++j) {
            const Observation obs{static_cast<std::uint32_t>(j), action.size()};
            r += pni * q_prob(cols, obs, action, det, n_rx) * path_count_reward(cols, action, obs);
        }
    }
    return r;
}

// Exact joint-enumeration Bayes posterior.
inline std::vector<double> bayes_posterior(const std::vector<double>& pi, const Action& action,
                                           const Observation& obs, const TransitionMatrix& P,
                                           const DetectorSpec& det, int n_tx, int n_rx,
                                           int n_paths) {
    const long n = num_states(n_tx, n_paths);
    const std::vector<double> full = dense_full_transition(P, n_paths);
    std::vector<double> post(n, 0.0);
    double norm = 0.0;
    for (long i = 0; i < n; ++i) {
        double pred = 0.0;
        for (long m = 0; m < n; ++m) pred += pi[m] * full[static_cast<std::size_t>(m) * n + i];
        post[i] = q_prob(decode(i, n_tx, n_paths), obs, action, det, n_rx) * pred;
        norm += post[i];
    }
    for (double& v : post) v /= norm;
    return post;
}

inline std::vector<double> random_distribution(Rng& rng, int n) {
    std::vector<double> v(n);
    double sum = 0.0;
    for (double& x : v) {
        x = -std::log(1.0 - rng.uniform01());
        sum += x;
    }
    for (double& x : v) x /= sum;
    return v;
}

inline Action random_action(Rng& rng, int n_tx, int m_p) {
    std::vector<int> pool(n_tx);
    for (int i = 0; i < n_tx; ++i) pool[i] = i;
    for (int j = 0; j < m_p; ++j) std::swap(pool[j], pool[j + rng.uniform_int(n_tx - j)]);
    pool.resize(m_p);
    return make_action(pool, n_tx);
}

// 3-sigma binomial band around an empirical frequency.
inline bool within_3sigma(double observed, double expected, long n) {
    const double sigma = std::sqrt(expected * (1.0 - expected) / static_cast<double>(n));
    return std::abs(observed - expected) <= 3.0 * sigma + 1e-12;
}

}  // namespace oracle
