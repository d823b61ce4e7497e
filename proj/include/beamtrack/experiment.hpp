#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "beamtrack/belief.hpp"
#include "beamtrack/channel.hpp"
#include "beamtrack/policy.hpp"
#include "beamtrack/sensing.hpp"
#include "beamtrack/transition.hpp"

namespace beamtrack {

inline constexpr std::uint64_t kDefaultSeed = 12345;

struct TransitionSpec {
    int bandwidth = 0;
    double decay = 0.0;
    double mix = 0.0;
};

// One fully resolved experiment: model, dynamics, sensing, policies and the
// Monte Carlo protocol. Everything a run needs to be reproduced bit-exactly.
struct ExperimentConfig {
    std::string preset;         // "" when hand-assembled
    ModelParams model{8, 4, 2, 1.0, 1.0, 1.0};
    TransitionSpec transition{1, 0.5, 0.0};
    int m_p = 4;
    int slots_per_episode = 10; // T
    int slot_length = 10;       // M_s; metadata only, rewards are per-slot counts
    double p_fa = 0.05;
    BeliefInit::Mode init_mode = BeliefInit::Mode::uniform;
    RewardSpec reward{};
    ObservationMode obs_mode = ObservationMode::signal;
    std::vector<PolicySpec> policies;
    long n_trials = 1000;
    std::uint64_t seed = kDefaultSeed;
    int threads = 0; // 0 -> hardware concurrency; never affects results

    void validate() const {
        model.validate();
        if (m_p < 1 || m_p > model.n_tx) throw config_error("m_p must lie in [1, n_tx]");
        if (slots_per_episode < 1) throw config_error("slots_per_episode must be >= 1");
        if (n_trials < 1) throw config_error("n_trials must be >= 1");
        if (policies.empty()) throw config_error("at least one policy is required");
        if (transition.bandwidth < 0 || transition.bandwidth >= model.n_tx)
            throw config_error("transition.bandwidth must satisfy 0 <= B < n_tx");
        if (!(transition.decay >= 0.0 && transition.decay < 1.0))
            throw config_error("transition.decay must lie in [0,1)");
        if (!(transition.mix >= 0.0 && transition.mix <= 1.0))
            throw config_error("transition.mix must lie in [0,1]");
        if (!(p_fa > 0.0 && p_fa < 1.0)) throw config_error("p_fa must lie in (0,1)");
        for (const PolicySpec& p : policies)
            if (p.kind == PolicySpec::Kind::heuristic && m_p % model.n_paths != 0)
                throw config_error("heuristic policy needs m_p divisible by n_paths");
    }

    TransitionMatrix build_transition_matrix() const {
        return build_transition(model.n_tx, transition.bandwidth, transition.decay, transition.mix);
    }

    DetectorSpec build_detector() const { return make_detector(p_fa, model); }
};

// The experiment families reported on: small-array lock-in/tracking with all
// four policies, the mid-size array where the exact greedy is still feasible,
// and the large array where only the fast policies run. Path SNR is 20 dB
// throughout; trial counts are desk-scale defaults and freely overridable.
inline ExperimentConfig preset_experiments(std::string_view name) {
    ExperimentConfig c;
    c.preset = std::string(name);
    const double snr_20db = 100.0;
    if (name == "fig5a" || name == "fig5b") {
        c.model = ModelParams::for_path_snr(8, 4, 2, snr_20db);
        c.transition = {1, 0.5, 0.0};
        c.m_p = 4;
        c.slots_per_episode = 10;
        c.slot_length = 10;
        c.p_fa = 0.05;
        c.init_mode = name == "fig5a" ? BeliefInit::Mode::uniform : BeliefInit::Mode::known;
        c.policies = {parse_policy_spec("lookahead(2)"), parse_policy_spec("greedy-full"),
                      parse_policy_spec("greedy-reduced"), parse_policy_spec("random")};
        c.n_trials = 20000;
    } else if (name == "fig6") {
        c.model = ModelParams::for_path_snr(16, 4, 2, snr_20db);
        c.transition = {2, 0.5, 0.0};
        c.m_p = 6;
        c.slots_per_episode = 30;
        c.slot_length = 30;
        c.p_fa = 0.05;
        c.init_mode = BeliefInit::Mode::known;
        c.policies = {parse_policy_spec("greedy-full"), parse_policy_spec("greedy-reduced"),
                      parse_policy_spec("heuristic")};
        c.n_trials = 5000;
    } else if (name == "fig7") {
        c.model = ModelParams::for_path_snr(64, 16, 2, snr_20db);
        c.transition = {8, 0.5, 0.0};
        c.m_p = 10;
        c.slots_per_episode = 30;
        c.slot_length = 30;
        c.p_fa = 0.01;
        c.init_mode = BeliefInit::Mode::known;
        c.policies = {parse_policy_spec("greedy-reduced"), parse_policy_spec("heuristic")};
        c.n_trials = 500;
    } else {
        throw config_error("unknown preset: " + std::string(name));
    }
    return c;
}

}  // namespace beamtrack
