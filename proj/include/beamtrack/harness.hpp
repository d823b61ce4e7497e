#pragma once

#include <atomic>
#include <cmath>
#include <memory>
#include <thread>
#include <vector>

#include "beamtrack/experiment.hpp"

namespace beamtrack {

struct SlotRecord {
    std::vector<int> true_columns; // post-transition state the slot sensed
    Action action;
    Observation obs;
    double reward = 0.0;
};

struct EpisodeTrace {
    std::vector<int> rows;            // fixed AoA rows of the episode
    std::vector<int> initial_columns; // pre-transition initial state
    std::vector<SlotRecord> slots;
    double total_reward = 0.0;
};

// Reward actually earned in the simulated slot: detected occupied bins of the
// true (row-aware) VCM, so two paths superposed in one bin count once.
inline double immediate_reward_physical(const ChannelState& state, const Action& action,
                                        const Observation& obs, const RewardSpec& reward) {
    int detected = 0;
    for (int m = 0; m < action.size(); ++m)
        if (obs.flag(m)) detected += occupied_bins_in_column(state, action.indices[m]);
    return reward.of_detected_bins(detected);
}

// Runs one seeded episode. Stream discipline: the channel stream depends on
// (seed, trial) only and the noise stream on (seed, trial, slot), so every
// policy of a trial faces the identical channel and noise realizations;
// observations differ only through the chosen columns.
inline EpisodeTrace run_episode(const ExperimentConfig& config, const TransitionMatrix& P,
                                const DetectorSpec& detector, Policy& policy,
                                std::uint64_t policy_stream_id, long trial) {
    Rng channel_rng = trial_channel_rng(config.seed, static_cast<std::uint64_t>(trial));
    ChannelState state = draw_initial_state(config.model, channel_rng);

    EpisodeTrace trace;
    trace.rows = state.rows;
    trace.initial_columns = state.columns;
    trace.slots.reserve(config.slots_per_episode);

    BeliefInit init;
    init.mode = config.init_mode;
    if (init.mode == BeliefInit::Mode::known) init.known_columns = state.columns;
    policy.reset(init, mix64(config.seed ^ mix64(static_cast<std::uint64_t>(trial) ^ policy_stream_id)));

    for (int k = 0; k < config.slots_per_episode; ++k) {
        const Action action = policy.choose(k);
        state = step_state(state, P, config.model, channel_rng);
        Rng noise_rng = trial_noise_rng(config.seed, static_cast<std::uint64_t>(trial),
                                        static_cast<std::uint64_t>(k));
        const Observation obs = simulate_observation(state, action, detector, config.model,
                                                     config.obs_mode, noise_rng);
        SlotRecord rec{state.columns, action, obs,
                       immediate_reward_physical(state, action, obs, config.reward)};
        trace.total_reward += rec.reward;
        policy.observe(action, obs);
        trace.slots.push_back(std::move(rec));
    }
    return trace;
}

struct PolicyAggregate {
    std::string policy;
    long n_trials = 0;
    std::vector<double> mean_reward; // per slot
    std::vector<double> ci95;        // 95% normal-approximation half-width, per slot
    std::vector<double> acc_mean;    // accumulated reward, per slot
    std::vector<double> acc_ci95;
    double overall_mean = 0.0;       // mean per-slot reward across all slots
};

struct AggregateResult {
    ExperimentConfig config;
    std::vector<PolicyAggregate> policies;
};

namespace detail {

inline PolicyContext build_policy_context(const ExperimentConfig& config,
                                          const TransitionMatrix& P, const DetectorSpec& det) {
    PolicyContext ctx;
    ctx.params = config.model;
    ctx.transition = P;
    ctx.detector = det;
    ctx.reward = config.reward;
    ctx.m_p = config.m_p;
    ctx.horizon = config.slots_per_episode;
    for (const PolicySpec& spec : config.policies)
        if (spec.kind == PolicySpec::Kind::greedy_full || spec.kind == PolicySpec::Kind::lookahead) {
            ctx.pomdp = std::make_shared<const PomdpModel>(config.model, P, det, config.reward,
                                                           config.m_p);
            break;
        }
    return ctx;
}

// Mean and 95% CI half-width per column of a trials x slots matrix, reduced
// in fixed trial order so results are identical for any thread count.
inline void column_stats(const std::vector<double>& data, long n_trials, int n_slots,
                         std::vector<double>& mean, std::vector<double>& ci) {
    mean.assign(n_slots, 0.0);
    ci.assign(n_slots, 0.0);
    for (long t = 0; t < n_trials; ++t)
        for (int k = 0; k < n_slots; ++k) mean[k] += data[static_cast<std::size_t>(t) * n_slots + k];
    for (int k = 0; k < n_slots; ++k) mean[k] /= static_cast<double>(n_trials);
    if (n_trials < 2) return;
    std::vector<double> ss(n_slots, 0.0);
    for (long t = 0; t < n_trials; ++t)
        for (int k = 0; k < n_slots; ++k) {
            const double d = data[static_cast<std::size_t>(t) * n_slots + k] - mean[k];
            ss[k] += d * d;
        }
    for (int k = 0; k < n_slots; ++k) {
        const double var = ss[k] / static_cast<double>(n_trials - 1);
        ci[k] = 1.96 * std::sqrt(var / static_cast<double>(n_trials));
    }
}

}  // namespace detail

// Monte Carlo evaluation of every configured policy over n_trials common
// random number episodes. Trials run in parallel; per-trial rewards are
// stored and reduced sequentially, so output is byte-stable regardless of
// thread count.
inline AggregateResult monte_carlo(const ExperimentConfig& config) {
    config.validate();
    const TransitionMatrix P = config.build_transition_matrix();
    const DetectorSpec det = config.build_detector();
    const PolicyContext ctx = detail::build_policy_context(config, P, det);

    const int n_slots = config.slots_per_episode;
    const long n_trials = config.n_trials;
    const int n_policies = static_cast<int>(config.policies.size());
    std::vector<std::vector<double>> rewards(
        n_policies, std::vector<double>(static_cast<std::size_t>(n_trials) * n_slots, 0.0));
    std::vector<std::uint64_t> stream_ids;
    for (const PolicySpec& spec : config.policies) stream_ids.push_back(fnv1a(spec.label()));

    const long total_tasks = static_cast<long>(n_policies) * n_trials;
    unsigned n_threads = config.threads > 0 ? static_cast<unsigned>(config.threads)
                                            : std::max(1u, std::thread::hardware_concurrency());
    n_threads = std::min<unsigned>(n_threads, static_cast<unsigned>(total_tasks));

    std::atomic<long> next_task{0};
    auto worker = [&]() {
        while (true) {
            const long task = next_task.fetch_add(1, std::memory_order_relaxed);
            if (task >= total_tasks) return;
            const int p = static_cast<int>(task % n_policies);
            const long trial = task / n_policies;
            auto policy = make_policy(config.policies[p], ctx);
            const EpisodeTrace trace = run_episode(config, P, det, *policy, stream_ids[p], trial);
            double* row = &rewards[p][static_cast<std::size_t>(trial) * n_slots];
            for (int k = 0; k < n_slots; ++k) row[k] = trace.slots[k].reward;
        }
    };
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned i = 0; i < n_threads; ++i) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }

    AggregateResult result;
    result.config = config;
    for (int p = 0; p < n_policies; ++p) {
        PolicyAggregate agg;
        agg.policy = config.policies[p].label();
        agg.n_trials = n_trials;
        detail::column_stats(rewards[p], n_trials, n_slots, agg.mean_reward, agg.ci95);
        // Accumulated rewards reuse the same storage as running sums per trial.
        std::vector<double>& acc = rewards[p];
        for (long t = 0; t < n_trials; ++t)
            for (int k = 1; k < n_slots; ++k)
                acc[static_cast<std::size_t>(t) * n_slots + k] +=
                    acc[static_cast<std::size_t>(t) * n_slots + k - 1];
        detail::column_stats(acc, n_trials, n_slots, agg.acc_mean, agg.acc_ci95);
        double total = 0.0;
        for (double m : agg.mean_reward) total += m;
        agg.overall_mean = total / n_slots;
        result.policies.push_back(std::move(agg));
    }
    return result;
}

// Convenience wrapper for trace emission and tests: one policy, one trial.
inline EpisodeTrace run_single_episode(const ExperimentConfig& config, const PolicySpec& spec,
                                       long trial) {
    config.validate();
    const TransitionMatrix P = config.build_transition_matrix();
    const DetectorSpec det = config.build_detector();
    ExperimentConfig one = config;
    one.policies = {spec};
    const PolicyContext ctx = detail::build_policy_context(one, P, det);
    auto policy = make_policy(spec, ctx);
    return run_episode(one, P, det, *policy, fnv1a(spec.label()), trial);
}

}  // namespace beamtrack
