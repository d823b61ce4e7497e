#pragma once

#include <cmath>
#include <numeric>
#include <span>
#include <vector>

#include "beamtrack/detector.hpp"
#include "beamtrack/enumeration.hpp"
#include "beamtrack/errors.hpp"
#include "beamtrack/sensing.hpp"
#include "beamtrack/transition.hpp"

namespace beamtrack {

// Posterior over the N_t^L enumerated states, held prior to the state
// transition of the slot it describes.
struct FullBelief {
    std::vector<double> probs;

    double sum() const { return std::accumulate(probs.begin(), probs.end(), 0.0); }
    void normalize() {
        const double s = sum();
        for (double& p : probs) p /= s;
    }
};

struct RewardSpec {
    enum class Kind { path_count, mrc_log };
    Kind kind = Kind::path_count;
    double snr_per_path = 0.0; // used by mrc_log only

    double of_detected_bins(int detected) const {
        if (kind == Kind::path_count) return static_cast<double>(detected);
        return std::log1p(detected * snr_per_path);
    }
};

// Everything the exact (full-belief) POMDP machinery needs, bundled and
// precomputed once per experiment: the state enumeration, bin counts, and the
// transition-folded per-column expected-reward table. Immutable after
// construction; safe to share across worker threads.
class PomdpModel {
  public:
    PomdpModel(ModelParams params, TransitionMatrix transition, DetectorSpec detector,
               RewardSpec reward, int m_p)
        : params_(params), transition_(std::move(transition)), detector_(detector),
          reward_(reward), m_p_(m_p), states_(params.n_tx, params.n_paths), bins_(states_) {
        params_.validate();
        if (transition_.size != params_.n_tx) throw config_error("transition size != n_tx");
        if (m_p_ < 1 || m_p_ > params_.n_tx) throw config_error("m_p must lie in [1, n_tx]");
        if (m_p_ > 20) throw config_error("m_p capped at 20 (observation space 2^m_p)");
        build_reward_tables();
    }

    const ModelParams& params() const { return params_; }
    const TransitionMatrix& transition() const { return transition_; }
    const DetectorSpec& detector() const { return detector_; }
    const RewardSpec& reward() const { return reward_; }
    const StateEnumeration& states() const { return states_; }
    const BinCountTable& bins() const { return bins_; }
    int m_p() const { return m_p_; }
    long n_states() const { return states_.n_states; }
    int n_observations() const { return 1 << m_p_; }

    FullBelief uniform_belief() const {
        return FullBelief{std::vector<double>(n_states(), 1.0 / n_states())};
    }

    FullBelief point_mass_belief(std::span<const int> columns) const {
        FullBelief b{std::vector<double>(n_states(), 0.0)};
        b.probs[states_.encode(columns)] = 1.0;
        return b;
    }

    // One-step prediction pi -> pi P, exploiting the product structure of the
    // joint transition (each path's axis is contracted independently).
    std::vector<double> predict(std::span<const double> pi) const {
        std::vector<double> out(pi.begin(), pi.end());
        for (int axis = 0; axis < states_.n_paths; ++axis) apply_axis(out, axis, true);
        return out;
    }

    double obs_prob_given_state(long state, const Observation& obs, const Action& action) const {
        return beamtrack::obs_prob_given_state(state, obs, action, detector_, params_, bins_);
    }

    // r(s, a, o): detected bins weighted by the reward kind. False alarms on
    // empty columns contribute nothing.
    double immediate_reward(long state, const Action& action, const Observation& obs) const {
        int detected = 0;
        for (int m = 0; m < action.size(); ++m)
            if (obs.flag(m)) detected += bins_.count(state, action.indices[m]);
        return reward_.of_detected_bins(detected);
    }

    // R(s_n, a): expected reward with the within-slot transition folded in.
    double expected_reward_state(long pre_state, const Action& action) const {
        if (reward_.kind == RewardSpec::Kind::path_count) {
            double r = 0.0;
            for (int c : action.indices) r += reward_push_[pre_state * params_.n_tx + c];
            return r;
        }
        std::vector<double> pred(n_states(), 0.0);
        pred[pre_state] = 1.0;
        for (int axis = 0; axis < states_.n_paths; ++axis) apply_axis(pred, axis, true);
        double r = 0.0;
        for (long i = 0; i < n_states(); ++i)
            if (pred[i] > 0.0) r += pred[i] * expected_symbolwise_reward(i, action);
        return r;
    }

    // <R(a), pi>.
    double expected_reward_belief(const FullBelief& pi, const Action& action) const {
        if (reward_.kind == RewardSpec::Kind::path_count) {
            const std::vector<double> s = column_scores(pi);
            double r = 0.0;
            for (int c : action.indices) r += s[c];
            return r;
        }
        double r = 0.0;
        for (long n = 0; n < n_states(); ++n)
            if (pi.probs[n] > 0.0) r += pi.probs[n] * expected_reward_state(n, action);
        return r;
    }

    // pi G, where G[n][c] is the transition-folded expected reward earned by
    // sensing column c from pre-transition state n. For the path-count reward
    // <R(a), pi> decomposes as a sum of these per-column scores, which is what
    // makes exact greedy selection a top-M_p problem.
    std::vector<double> column_scores(const FullBelief& pi) const {
        std::vector<double> s(params_.n_tx, 0.0);
        for (long n = 0; n < n_states(); ++n) {
            const double w = pi.probs[n];
            if (w == 0.0) continue;
            const double* g = &reward_push_[n * params_.n_tx];
            for (int c = 0; c < params_.n_tx; ++c) s[c] += w * g[c];
        }
        return s;
    }

    // gamma(o | pi, a) = sum_i q_io^a (pi P)_i.
    double obs_likelihood(const FullBelief& pi, const Action& action, const Observation& obs) const {
        const std::vector<double> mu = predict(pi.probs);
        return obs_likelihood_predicted(mu, action, obs);
    }

    double obs_likelihood_predicted(std::span<const double> mu, const Action& action,
                                    const Observation& obs) const {
        double g = 0.0;
        for (long i = 0; i < n_states(); ++i)
            if (mu[i] > 0.0) g += obs_prob_given_state(i, obs, action) * mu[i];
        return g;
    }

    // Bayes update pi_{k+1,i} = q_io (pi P)_i / gamma. Throws
    // impossible_observation when gamma is zero.
    FullBelief belief_update(const FullBelief& pi, const Action& action,
                             const Observation& obs) const {
        const std::vector<double> mu = predict(pi.probs);
        FullBelief post{std::vector<double>(n_states(), 0.0)};
        double norm = 0.0;
        for (long i = 0; i < n_states(); ++i) {
            if (mu[i] == 0.0) continue;
            const double w = obs_prob_given_state(i, obs, action) * mu[i];
            post.probs[i] = w;
            norm += w;
        }
        if (!(norm > 0.0))
            throw impossible_observation("belief update conditioned on zero-probability observation");
        for (double& p : post.probs) p /= norm;
        return post;
    }

    // q_ij^a for all 2^{M_p} observations of every state, row-major by state.
    // Built by extending products one pilot symbol at a time.
    void q_table(const Action& action, std::vector<double>& out) const {
        const int n_obs = n_observations();
        out.assign(static_cast<std::size_t>(n_states()) * n_obs, 0.0);
        for (long i = 0; i < n_states(); ++i) {
            double* q = &out[static_cast<std::size_t>(i) * n_obs];
            q[0] = 1.0;
            for (int m = 0; m < m_p_; ++m) {
                const double quiet =
                    detector_.no_detect_given_bins(params_.n_rx, bins_.count(i, action.indices[m]));
                const int width = 1 << m;
                for (int j = 0; j < width; ++j) {
                    q[j | width] = q[j] * (1.0 - quiet);
                    q[j] *= quiet;
                }
            }
        }
    }

    // E_o[r | post-transition state i, a] via a small DP over the detected-bin
    // distribution; exact for both reward kinds.
    double expected_symbolwise_reward(long post_state, const Action& action) const {
        std::vector<double> dist(1, 1.0); // dist[d] = Pr{detected bins == d}
        for (int m = 0; m < action.size(); ++m) {
            const int nb = bins_.count(post_state, action.indices[m]);
            const double quiet = detector_.no_detect_given_bins(params_.n_rx, nb);
            if (nb == 0) continue; // false alarms never add reward
            dist.resize(dist.size() + nb, 0.0);
            for (int d = static_cast<int>(dist.size()) - 1 - nb; d >= 0; --d) {
                const double w = dist[d];
                dist[d + nb] += w * (1.0 - quiet);
                dist[d] = w * quiet;
            }
        }
        double r = 0.0;
        for (std::size_t d = 1; d < dist.size(); ++d)
            r += dist[d] * reward_.of_detected_bins(static_cast<int>(d));
        return r;
    }

  private:
    // Contracts one tensor axis of a state-indexed vector with the transition
    // matrix. from_left: out_j = sum_i v_i p_ij (distribution prediction);
    // otherwise out_i = sum_j p_ij v_j (expectation pushback).
    void apply_axis(std::vector<double>& v, int axis, bool from_left) const {
        const int nt = params_.n_tx;
        long stride = 1;
        for (int l = 0; l < axis; ++l) stride *= nt;
        const long block = stride * nt;
        std::vector<double> tmp(nt);
        for (long base = 0; base < states_.n_states; base += block) {
            for (long off = 0; off < stride; ++off) {
                double* slot0 = &v[base + off];
                for (int d = 0; d < nt; ++d) tmp[d] = slot0[d * stride];
                for (int d = 0; d < nt; ++d) {
                    const double* row = &transition_.p[static_cast<std::size_t>(d) * nt];
                    double acc = 0.0;
                    if (from_left) {
                        for (int e = 0; e < nt; ++e) acc += tmp[e] * transition_.p[static_cast<std::size_t>(e) * nt + d];
                    } else {
                        for (int e = 0; e < nt; ++e) acc += row[e] * tmp[e];
                    }
                    slot0[d * stride] = acc;
                }
            }
        }
    }

    void build_reward_tables() {
        const int nt = params_.n_tx;
        // F[i][c] = expected reward of sensing column c in post-transition
        // state i = n_bins * Pr{detect | n_bins}.
        std::vector<double> f(static_cast<std::size_t>(states_.n_states) * nt);
        for (long i = 0; i < states_.n_states; ++i)
            for (int c = 0; c < nt; ++c) {
                const int nb = bins_.count(i, c);
                f[static_cast<std::size_t>(i) * nt + c] =
                    nb * (1.0 - detector_.no_detect_given_bins(params_.n_rx, nb));
            }
        // G = P_full F, column by column via the axis contraction.
        reward_push_.assign(f.size(), 0.0);
        std::vector<double> col(states_.n_states);
        for (int c = 0; c < nt; ++c) {
            for (long i = 0; i < states_.n_states; ++i) col[i] = f[static_cast<std::size_t>(i) * nt + c];
            for (int axis = 0; axis < states_.n_paths; ++axis) apply_axis(col, axis, false);
            for (long i = 0; i < states_.n_states; ++i)
                reward_push_[static_cast<std::size_t>(i) * nt + c] = col[i];
        }
    }

    ModelParams params_;
    TransitionMatrix transition_;
    DetectorSpec detector_;
    RewardSpec reward_;
    int m_p_;
    StateEnumeration states_;
    BinCountTable bins_;
    std::vector<double> reward_push_; // G, n_states x n_tx
};

}  // namespace beamtrack
