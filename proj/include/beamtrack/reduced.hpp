#pragma once

#include <algorithm>
#include <numeric>
#include <span>
#include <vector>

#include "beamtrack/belief.hpp"
#include "beamtrack/detector.hpp"
#include "beamtrack/enumeration.hpp"
#include "beamtrack/errors.hpp"
#include "beamtrack/planner.hpp"
#include "beamtrack/sensing.hpp"
#include "beamtrack/transition.hpp"

namespace beamtrack {

// Reduced sufficient statistic: per-path marginal posteriors over columns,
// L x N_t row-major. Each row sums to one, so the total mass is L.
struct ReducedBelief {
    int n_paths = 0;
    int n_tx = 0;
    std::vector<double> w;

    std::span<double> row(int l) { return {w.data() + static_cast<std::size_t>(l) * n_tx, static_cast<std::size_t>(n_tx)}; }
    std::span<const double> row(int l) const { return {w.data() + static_cast<std::size_t>(l) * n_tx, static_cast<std::size_t>(n_tx)}; }
    double& at(int l, int i) { return w[static_cast<std::size_t>(l) * n_tx + i]; }
    double at(int l, int i) const { return w[static_cast<std::size_t>(l) * n_tx + i]; }
};

inline ReducedBelief uniform_reduced(int n_paths, int n_tx) {
    return ReducedBelief{n_paths, n_tx,
                         std::vector<double>(static_cast<std::size_t>(n_paths) * n_tx, 1.0 / n_tx)};
}

inline ReducedBelief point_mass_reduced(std::span<const int> columns, int n_tx) {
    ReducedBelief b{static_cast<int>(columns.size()), n_tx,
                    std::vector<double>(columns.size() * n_tx, 0.0)};
    for (int l = 0; l < b.n_paths; ++l) b.at(l, columns[l]) = 1.0;
    return b;
}

// Per-path predicted occupancy of every column after the within-slot
// transition: row l of the result is omega_l P.
inline std::vector<double> predict_reduced(const ReducedBelief& b, const TransitionMatrix& P) {
    std::vector<double> out(b.w.size(), 0.0);
    for (int l = 0; l < b.n_paths; ++l) {
        const auto src = b.row(l);
        double* dst = &out[static_cast<std::size_t>(l) * b.n_tx];
        for (int n = 0; n < b.n_tx; ++n) {
            const double wn = src[n];
            if (wn == 0.0) continue;
            const double* row = &P.p[static_cast<std::size_t>(n) * b.n_tx];
            for (int i = 0; i < b.n_tx; ++i) dst[i] += wn * row[i];
        }
    }
    return out;
}

// Column scores v = P' omega (the L-fold stacked P^T applied to the stacked
// marginals): v_c = sum_l sum_n omega_{l,n} p_{n,c}.
inline std::vector<double> reduced_column_scores(const ReducedBelief& b, const TransitionMatrix& P) {
    const std::vector<double> pred = predict_reduced(b, P);
    std::vector<double> v(b.n_tx, 0.0);
    for (int l = 0; l < b.n_paths; ++l)
        for (int i = 0; i < b.n_tx; ++i) v[i] += pred[static_cast<std::size_t>(l) * b.n_tx + i];
    return v;
}

// Fast greedy action: the M_p columns with the largest entries of P' omega,
// ties broken by ascending index. One O(N_t^2 L) score pass plus one sort of
// an N_t vector; no enumeration over C(N_t, M_p) actions anywhere.
inline Action greedy_action(const ReducedBelief& b, const TransitionMatrix& P, int m_p) {
    if (m_p < 1 || m_p > b.n_tx) throw config_error("m_p must lie in [1, n_tx]");
    return detail::top_columns(reduced_column_scores(b, P), m_p).action;
}

enum class ReducedRewardMode { exact, zero_miss };

// Expected one-slot reward under the reduced statistic. zero_miss assumes
// ideal detection (the simplification behind the greedy score); exact weighs
// each sensed column by the single-path column detection probability.
inline double reduced_expected_reward(const ReducedBelief& b, const Action& action,
                                      const TransitionMatrix& P, const DetectorSpec& detector,
                                      int n_rx, ReducedRewardMode mode) {
    const double detect =
        mode == ReducedRewardMode::zero_miss ? 1.0 : detector.detect_single(n_rx);
    const std::vector<double> pred = predict_reduced(b, P);
    double r = 0.0;
    for (int l = 0; l < b.n_paths; ++l)
        for (int m = 0; m < action.size(); ++m)
            r += detect * pred[static_cast<std::size_t>(l) * b.n_tx + action.indices[m]];
    return r;
}

// Per-path Bayes update of the reduced statistic. The per-symbol factors are
// column-level event probabilities: a sensed column containing the path is
// missed with probability (1-P_FA)^{N_r-1} P'_MD, and a column not containing
// it stays quiet with probability mixing the no-other-path and
// other-path-missed cases, weighted by the other paths' pre-transition
// marginals pushed through the transition.
inline ReducedBelief reduced_belief_update(const ReducedBelief& b, const Action& action,
                                           const Observation& obs, const TransitionMatrix& P,
                                           const DetectorSpec& detector, int n_rx) {
    const int nt = b.n_tx;
    const int mp = action.size();
    const std::vector<double> pred = predict_reduced(b, P);
    const double quiet_empty = detector.no_detect_empty(n_rx);
    const double miss_single = detector.miss_single(n_rx);

    ReducedBelief out{b.n_paths, nt, std::vector<double>(b.w.size(), 0.0)};
    std::vector<double> quiet_other(mp); // Pr{o_m = 0 | path l elsewhere}, per symbol
    for (int l = 0; l < b.n_paths; ++l) {
        for (int m = 0; m < mp; ++m) {
            double none = 1.0; // no other path lands in the sensed column
            for (int s = 0; s < b.n_paths; ++s)
                if (s != l) none *= 1.0 - pred[static_cast<std::size_t>(s) * nt + action.indices[m]];
            quiet_other[m] = none * quiet_empty + (1.0 - none) * miss_single;
        }
        double norm = 0.0;
        double* dst = &out.w[static_cast<std::size_t>(l) * nt];
        for (int i = 0; i < nt; ++i) {
            double f = 1.0;
            for (int m = 0; m < mp; ++m) {
                const double quiet = action.indices[m] == i ? miss_single : quiet_other[m];
                f *= obs.flag(m) ? 1.0 - quiet : quiet;
            }
            dst[i] = f * pred[static_cast<std::size_t>(l) * nt + i];
            norm += dst[i];
        }
        if (!(norm > 0.0))
            throw impossible_observation("reduced update conditioned on zero-probability observation");
        for (int i = 0; i < nt; ++i) dst[i] /= norm;
    }
    return out;
}

// Rebuilds the product-form full belief pi_n = prod_l omega_{l, i_l(n)}.
inline FullBelief expand_reduced_to_full(const ReducedBelief& b, const StateEnumeration& venum) {
    if (venum.n_tx != b.n_tx || venum.n_paths != b.n_paths)
        throw config_error("enumeration does not match reduced belief shape");
    FullBelief pi{std::vector<double>(venum.n_states, 1.0)};
    for (long n = 0; n < venum.n_states; ++n) {
        long rest = n;
        for (int l = 0; l < b.n_paths; ++l) {
            pi.probs[n] *= b.at(l, static_cast<int>(rest % b.n_tx));
            rest /= b.n_tx;
        }
    }
    pi.normalize();
    return pi;
}

}  // namespace beamtrack
