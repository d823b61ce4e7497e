#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <vector>

#include "beamtrack/errors.hpp"
#include "beamtrack/rng.hpp"
#include "beamtrack/transition.hpp"

namespace beamtrack {

// System-level model parameters. path_snr() is the post-beamforming per-path
// SNR N_t*N_r*P_t*xi^2/sigma^2 that drives detector quality.
struct ModelParams {
    int n_tx = 0;           // N_t transmit antennas / AoD grid size
    int n_rx = 0;           // N_r receive antennas / AoA grid size
    int n_paths = 0;        // L
    double gain_var = 1.0;  // xi^2
    double noise_var = 1.0; // sigma_N^2
    double tx_power = 1.0;  // P_t

    double path_snr() const { return n_tx * n_rx * tx_power * gain_var / noise_var; }

    void validate() const {
        if (n_tx < 2) throw config_error("model.n_tx must be >= 2");
        if (n_rx < 1) throw config_error("model.n_rx must be >= 1");
        if (n_paths < 1) throw config_error("model.n_paths must be >= 1");
        if (!(gain_var > 0.0)) throw config_error("model.gain_var must be > 0");
        if (!(noise_var > 0.0)) throw config_error("model.noise_var must be > 0");
        if (!(tx_power > 0.0)) throw config_error("model.tx_power must be > 0");
    }

    // Back-solves P_t so that path_snr() equals the requested linear SNR.
    static ModelParams for_path_snr(int n_tx, int n_rx, int n_paths, double snr_linear,
                                    double gain_var = 1.0, double noise_var = 1.0) {
        ModelParams m{n_tx, n_rx, n_paths, gain_var, noise_var, 1.0};
        m.tx_power = snr_linear * noise_var / (static_cast<double>(n_tx) * n_rx * gain_var);
        m.validate();
        return m;
    }
};

// Hidden channel state: per-path AoD column (random walk), AoA row (fixed for
// the whole episode) and complex gain (redrawn i.i.d. every slot).
struct ChannelState {
    std::vector<int> columns;                // 0-based, length L
    std::vector<int> rows;                   // 0-based, length L
    std::vector<std::complex<double>> gains; // length L
};

inline ChannelState draw_initial_state(const ModelParams& params, Rng& rng) {
    ChannelState s;
    s.rows.reserve(params.n_paths);
    s.columns.reserve(params.n_paths);
    s.gains.reserve(params.n_paths);
    for (int l = 0; l < params.n_paths; ++l) s.rows.push_back(rng.uniform_int(params.n_rx));
    for (int l = 0; l < params.n_paths; ++l) s.columns.push_back(rng.uniform_int(params.n_tx));
    for (int l = 0; l < params.n_paths; ++l) s.gains.push_back(rng.complex_normal(params.gain_var));
    return s;
}

// One slot transition: every path's column is resampled independently from
// its transition row, rows stay put, gains are redrawn.
inline ChannelState step_state(const ChannelState& state, const TransitionMatrix& P,
                               const ModelParams& params, Rng& rng) {
    ChannelState next = state;
    for (std::size_t l = 0; l < state.columns.size(); ++l) {
        const auto row = P.row(state.columns[l]);
        const double u = rng.uniform01();
        double acc = 0.0;
        int chosen = P.size - 1;
        for (int j = 0; j < P.size; ++j) {
            acc += row[j];
            if (u < acc) {
                chosen = j;
                break;
            }
        }
        next.columns[l] = chosen;
    }
    for (std::size_t l = 0; l < state.gains.size(); ++l)
        next.gains[l] = rng.complex_normal(params.gain_var);
    return next;
}

// Number of occupied bins in one VCM column: distinct (row, column) pairs.
// Two paths sharing both row and column superpose into a single bin.
inline int occupied_bins_in_column(const ChannelState& state, int column) {
    int count = 0;
    for (std::size_t l = 0; l < state.columns.size(); ++l) {
        if (state.columns[l] != column) continue;
        bool duplicate = false;
        for (std::size_t s = 0; s < l; ++s)
            if (state.columns[s] == column && state.rows[s] == state.rows[l]) duplicate = true;
        if (!duplicate) ++count;
    }
    return count;
}

inline int total_occupied_bins(const ChannelState& state, int n_tx) {
    int count = 0;
    for (int c = 0; c < n_tx; ++c) count += occupied_bins_in_column(state, c);
    return count;
}

// ULA steering vector (1/sqrt(n)) [1, e^{-i 2 pi theta}, ..., e^{-i (n-1) 2 pi theta}].
inline Eigen::VectorXcd steering_vector(double theta, int n) {
    if (n < 1) throw config_error("steering vector needs n >= 1");
    Eigen::VectorXcd a(n);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (int k = 0; k < n; ++k) {
        const double phase = -2.0 * M_PI * theta * k;
        a(k) = std::complex<double>(scale * std::cos(phase), scale * std::sin(phase));
    }
    return a;
}

// theta = (d/lambda) sin(phi); with half-wavelength spacing theta spans [-1/2, 1/2].
inline double physical_angle_to_direction(double phi, double d_over_lambda = 0.5) {
    return d_over_lambda * std::sin(phi);
}

// Uniform virtual-angle grid theta_j = -1/2 + (j-1)/n; columns are steering
// vectors, and the matrix is unitary for any n.
inline Eigen::MatrixXcd steering_grid(int n) {
    Eigen::MatrixXcd A(n, n);
    for (int j = 0; j < n; ++j) A.col(j) = steering_vector(-0.5 + static_cast<double>(j) / n, n);
    return A;
}

// Virtual channel matrix: bin (row_l, col_l) holds sqrt(N_t N_r) * gain_l,
// with co-located paths superposed. At most L structural nonzeros.
inline Eigen::MatrixXcd assemble_vcm(const ChannelState& state, const ModelParams& params) {
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(params.n_rx, params.n_tx);
    const double scale = std::sqrt(static_cast<double>(params.n_tx) * params.n_rx);
    for (std::size_t l = 0; l < state.columns.size(); ++l)
        h(state.rows[l], state.columns[l]) += scale * state.gains[l];
    return h;
}

// Physical channel H = A_R * vcm * A_T^H.
inline Eigen::MatrixXcd physical_channel(const ChannelState& state, const ModelParams& params) {
    return steering_grid(params.n_rx) * assemble_vcm(state, params) *
           steering_grid(params.n_tx).adjoint();
}

}  // namespace beamtrack
