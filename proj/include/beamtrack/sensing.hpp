#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "beamtrack/channel.hpp"
#include "beamtrack/detector.hpp"
#include "beamtrack/enumeration.hpp"
#include "beamtrack/errors.hpp"
#include "beamtrack/rng.hpp"

namespace beamtrack {

// Canonical pilot action: M_p distinct VCM column indices, sorted ascending.
struct Action {
    std::vector<int> indices;

    int size() const { return static_cast<int>(indices.size()); }
    bool operator==(const Action&) const = default;
};

inline Action make_action(std::vector<int> indices, int n_tx) {
    std::sort(indices.begin(), indices.end());
    if (std::adjacent_find(indices.begin(), indices.end()) != indices.end())
        throw config_error("action indices must be distinct");
    if (indices.empty() || indices.front() < 0 || indices.back() >= n_tx)
        throw config_error("action indices out of range");
    return Action{std::move(indices)};
}

// Binary detection flags fed back per pilot symbol; flag m corresponds to
// indices[m] of the action. Packed as a bitmask so the 2^{M_p} observation
// space enumerates as bits = 0 .. 2^{M_p}-1.
struct Observation {
    std::uint32_t bits = 0;
    int count = 0;

    bool flag(int m) const { return (bits >> m) & 1u; }
    bool operator==(const Observation&) const = default;
};

enum class ObservationMode { signal, analytic };

// Simulates the receiver feedback for one slot. In signal mode the complex
// filter-bank outputs are synthesized and thresholded per element; in
// analytic mode the column flags are drawn directly from the observation
// model. Both consume a fixed number of rng draws per pilot symbol, so a
// shared noise stream yields common random numbers across policies.
inline Observation simulate_observation(const ChannelState& state_after_transition,
                                        const Action& action, const DetectorSpec& detector,
                                        const ModelParams& params, ObservationMode mode,
                                        Rng& noise_rng) {
    Observation o;
    o.count = action.size();
    const double amp = std::sqrt(params.tx_power) *
                       std::sqrt(static_cast<double>(params.n_tx) * params.n_rx);
    std::vector<std::complex<double>> column(params.n_rx);
    for (int m = 0; m < action.size(); ++m) {
        const int col = action.indices[m];
        bool fired = false;
        if (mode == ObservationMode::signal) {
            std::fill(column.begin(), column.end(), std::complex<double>{0.0, 0.0});
            for (std::size_t l = 0; l < state_after_transition.columns.size(); ++l)
                if (state_after_transition.columns[l] == col)
                    column[state_after_transition.rows[l]] += amp * state_after_transition.gains[l];
            for (int n = 0; n < params.n_rx; ++n) {
                const std::complex<double> y = column[n] + noise_rng.complex_normal(params.noise_var);
                if (std::norm(y) >= detector.threshold) fired = true;
            }
        } else {
            int n_bins = 0;
            for (int c : state_after_transition.columns)
                if (c == col) ++n_bins;
            const double p_quiet = detector.no_detect_given_bins(params.n_rx, n_bins);
            fired = noise_rng.uniform01() >= p_quiet;
        }
        if (fired) o.bits |= 1u << m;
    }
    return o;
}

// q_ij^a: probability of observing o given enumerated state i and action a.
// Factorizes over pilot symbols because only receiver noise remains random
// once the state is fixed.
inline double obs_prob_given_state(long state_index, const Observation& obs, const Action& action,
                                   const DetectorSpec& detector, const ModelParams& params,
                                   const BinCountTable& bins) {
    double q = 1.0;
    for (int m = 0; m < action.size(); ++m) {
        const double p_quiet =
            detector.no_detect_given_bins(params.n_rx, bins.count(state_index, action.indices[m]));
        q *= obs.flag(m) ? 1.0 - p_quiet : p_quiet;
    }
    return q;
}

// Linear MMSE estimate of the scaled bin gain h from y = sqrt(P_t) h + noise
// under the CN(0, N_t N_r xi^2) bin-gain prior. Utility for the feedback
// payload; rewards do not depend on it.
inline std::complex<double> estimate_gain(std::complex<double> y_element,
                                          const DetectorSpec& /*detector*/,
                                          const ModelParams& params) {
    const double prior_var = static_cast<double>(params.n_tx) * params.n_rx * params.gain_var;
    const double g = std::sqrt(params.tx_power) * prior_var /
                     (params.tx_power * prior_var + params.noise_var);
    return g * y_element;
}

}  // namespace beamtrack
