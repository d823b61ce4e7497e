#pragma once

#include <cmath>

#include "beamtrack/channel.hpp"
#include "beamtrack/errors.hpp"

namespace beamtrack {

// Per-element Neyman-Pearson energy detector. Under the empty hypothesis the
// squared magnitude of a filter-bank element is exponential with mean
// sigma^2, so the size-P_FA threshold is tau = -sigma^2 ln(P_FA) and the miss
// probability of a single-path element is 1 - exp(-tau / ((1+snr) sigma^2)).
struct DetectorSpec {
    double p_fa = 0.0;       // per-element false-alarm probability
    double threshold = 0.0;  // tau
    double p_md = 0.0;       // per-element miss probability, single-path element
    double path_snr = 0.0;   // N_t N_r P_t xi^2 / sigma^2
    double p_md_multi = 0.0; // P'_MD used by reduced updates; kept equal to p_md

    // Column-level event probabilities (a column observation is the OR of
    // n_rx element tests).
    double no_detect_empty(int n_rx) const { return std::pow(1.0 - p_fa, n_rx); }
    double miss_single(int n_rx) const { return std::pow(1.0 - p_fa, n_rx - 1) * p_md_multi; }
    double detect_single(int n_rx) const { return 1.0 - miss_single(n_rx); }

    // Pr{o = 0 | n_bins occupied bins in the sensed column}: every empty
    // element must stay quiet and every occupied element must be missed.
    double no_detect_given_bins(int n_rx, int n_bins) const {
        return std::pow(1.0 - p_fa, n_rx - n_bins) * std::pow(p_md, n_bins);
    }
};

inline DetectorSpec make_detector(double p_fa, const ModelParams& params) {
    if (!(p_fa > 0.0 && p_fa < 1.0)) throw config_error("p_fa must lie in (0,1)");
    DetectorSpec d;
    d.p_fa = p_fa;
    d.path_snr = params.path_snr();
    // Gamma(1;x) is the exponential CDF, so the inverse at 1-P_FA is -ln P_FA.
    d.threshold = -params.noise_var * std::log(p_fa);
    d.p_md = 1.0 - std::exp(-d.threshold / ((1.0 + d.path_snr) * params.noise_var));
    d.p_md_multi = d.p_md;
    return d;
}

// Error-free sensor used by tests and analytic limits.
inline DetectorSpec perfect_detector(double path_snr = 0.0) {
    return DetectorSpec{0.0, 0.0, 0.0, path_snr, 0.0};
}

}  // namespace beamtrack
