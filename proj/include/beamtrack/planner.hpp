#pragma once

#include <algorithm>
#include <numeric>
#include <vector>

#include "beamtrack/belief.hpp"

namespace beamtrack {

// Visits every canonical action (sorted M_p-subsets of columns) in
// lexicographic order.
template <class F>
inline void for_each_action(int n_tx, int m_p, F&& fn) {
    std::vector<int> idx(m_p);
    std::iota(idx.begin(), idx.end(), 0);
    while (true) {
        fn(idx);
        int i = m_p - 1;
        while (i >= 0 && idx[i] == n_tx - m_p + i) --i;
        if (i < 0) return;
        ++idx[i];
        for (int j = i + 1; j < m_p; ++j) idx[j] = idx[j - 1] + 1;
    }
}

struct PlanResult {
    Action action;
    double value = 0.0;
};

namespace detail {

// Top-M_p columns of a score vector, ties broken by ascending index. For a
// column-separable objective this selects the lexicographically first
// maximizing action, i.e. the same action the exhaustive enumeration with
// first-encountered tie-break returns.
inline PlanResult top_columns(const std::vector<double>& scores, int m_p) {
    std::vector<int> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (scores[a] != scores[b]) return scores[a] > scores[b];
        return a < b;
    });
    PlanResult r;
    r.action.indices.assign(order.begin(), order.begin() + m_p);
    std::sort(r.action.indices.begin(), r.action.indices.end());
    for (int c : r.action.indices) r.value += scores[c];
    return r;
}

inline double expectimax_value(const PomdpModel& model, const FullBelief& pi, int depth);

// Evaluates one node of the expectimax tree. Returns the argmax action (ties
// broken by lexicographic action order, first encountered wins) and value.
inline PlanResult expectimax_node(const PomdpModel& model, const FullBelief& pi, int depth) {
    const bool separable = model.reward().kind == RewardSpec::Kind::path_count;
    if (depth == 1 && separable) return top_columns(model.column_scores(pi), model.m_p());

    std::vector<double> scores;
    if (separable) scores = model.column_scores(pi);
    std::vector<double> mu;
    std::vector<double> qtab;
    if (depth > 1) mu = model.predict(pi.probs);

    PlanResult best;
    best.value = -1.0; // rewards are nonnegative, any action beats this
    const long n = model.n_states();
    const int n_obs = model.n_observations();
    FullBelief post{std::vector<double>(n, 0.0)};
    for_each_action(model.params().n_tx, model.m_p(), [&](const std::vector<int>& idx) {
        Action a{idx};
        double v;
        if (separable) {
            v = 0.0;
            for (int c : idx) v += scores[c];
        } else {
            v = model.expected_reward_belief(pi, a);
        }
        if (depth > 1) {
            model.q_table(a, qtab);
            for (int j = 0; j < n_obs; ++j) {
                double gamma = 0.0;
                for (long i = 0; i < n; ++i) gamma += qtab[static_cast<std::size_t>(i) * n_obs + j] * mu[i];
                if (!(gamma > 0.0)) continue;
                const double inv = 1.0 / gamma;
                for (long i = 0; i < n; ++i)
                    post.probs[i] = qtab[static_cast<std::size_t>(i) * n_obs + j] * mu[i] * inv;
                v += gamma * expectimax_value(model, post, depth - 1);
            }
        }
        if (v > best.value) {
            best.value = v;
            best.action = std::move(a);
        }
    });
    return best;
}

inline double expectimax_value(const PomdpModel& model, const FullBelief& pi, int depth) {
    if (depth <= 0) return 0.0;
    if (depth == 1 && model.reward().kind == RewardSpec::Kind::path_count) {
        std::vector<double> s = model.column_scores(pi);
        std::nth_element(s.begin(), s.begin() + model.m_p() - 1, s.end(), std::greater<>());
        return std::accumulate(s.begin(), s.begin() + model.m_p(), 0.0);
    }
    return expectimax_node(model, pi, depth).value;
}

}  // namespace detail

// Exact expectimax over all C(N_t, M_p) actions and 2^{M_p} observation
// branches to depth min(depth, horizon_remaining), terminal value zero.
// Depth 1 is the exact greedy policy (the immediate-reward term alone).
inline PlanResult lookahead_plan(const PomdpModel& model, const FullBelief& pi, int depth,
                                 int horizon_remaining) {
    if (depth < 1) throw config_error("lookahead depth must be >= 1");
    if (horizon_remaining < 1) throw config_error("horizon_remaining must be >= 1");
    return detail::expectimax_node(model, pi, std::min(depth, horizon_remaining));
}

}  // namespace beamtrack
