#pragma once

#include <cmath>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "beamtrack/errors.hpp"

namespace beamtrack {

// Row-stochastic column-transition matrix of the per-path random walk.
// Entries are stored row-major; indices are 0-based throughout the library.
struct TransitionMatrix {
    int size = 0;       // N_t
    int bandwidth = 0;  // B of the banded part
    double decay = 0.0; // beta
    double mix = 0.0;   // lambda of the uniform-appearance mixture
    std::vector<double> p;

    double operator()(int i, int j) const { return p[static_cast<std::size_t>(i) * size + j]; }
    std::span<const double> row(int i) const {
        return {p.data() + static_cast<std::size_t>(i) * size, static_cast<std::size_t>(size)};
    }
};

inline TransitionMatrix identity_transition(int n) {
    if (n < 1) throw config_error("transition size must be >= 1");
    TransitionMatrix t{n, 0, 0.0, 0.0, std::vector<double>(static_cast<std::size_t>(n) * n, 0.0)};
    for (int i = 0; i < n; ++i) t.p[static_cast<std::size_t>(i) * n + i] = 1.0;
    return t;
}

// Banded random-walk matrix: unnormalized row entries decay^|i-j| inside the
// band, zero outside, then each row is renormalized independently. Rows near
// the edge keep the truncated band (no mass reflection).
inline TransitionMatrix build_banded_transition(int n_tx, int bandwidth, double decay) {
    if (n_tx < 1) throw config_error("n_tx must be >= 1");
    if (bandwidth < 0 || bandwidth >= n_tx)
        throw config_error("transition bandwidth must satisfy 0 <= B < n_tx");
    if (!(decay >= 0.0 && decay < 1.0)) throw config_error("transition decay must lie in [0,1)");

    TransitionMatrix t{n_tx, bandwidth, decay, 0.0,
                       std::vector<double>(static_cast<std::size_t>(n_tx) * n_tx, 0.0)};
    for (int i = 0; i < n_tx; ++i) {
        double sum = 0.0;
        const int lo = std::max(0, i - bandwidth);
        const int hi = std::min(n_tx - 1, i + bandwidth);
        for (int j = lo; j <= hi; ++j) {
            const double w = (i == j) ? 1.0 : std::pow(decay, std::abs(i - j));
            t.p[static_cast<std::size_t>(i) * n_tx + j] = w;
            sum += w;
        }
        for (int j = lo; j <= hi; ++j) t.p[static_cast<std::size_t>(i) * n_tx + j] /= sum;
    }
    return t;
}

// (1-lambda) * P + lambda * uniform; models path appearance from an arbitrary
// direction. Preserves row-stochasticity.
inline TransitionMatrix mix_uniform_appearance(const TransitionMatrix& base, double lambda) {
    if (!(lambda >= 0.0 && lambda <= 1.0)) throw config_error("transition mix must lie in [0,1]");
    TransitionMatrix t = base;
    t.mix = lambda;
    const double u = lambda / base.size;
    for (double& v : t.p) v = (1.0 - lambda) * v + u;
    return t;
}

inline TransitionMatrix build_transition(int n_tx, int bandwidth, double decay, double lambda) {
    TransitionMatrix t = build_banded_transition(n_tx, bandwidth, decay);
    return lambda == 0.0 ? t : mix_uniform_appearance(t, lambda);
}

// Dense text dump for debugging; one row per line, space-separated.
inline std::string to_text(const TransitionMatrix& t) {
    std::ostringstream os;
    os.precision(17);
    for (int i = 0; i < t.size; ++i) {
        for (int j = 0; j < t.size; ++j) {
            if (j) os << ' ';
            os << t(i, j);
        }
        os << '\n';
    }
    return os.str();
}

}  // namespace beamtrack
