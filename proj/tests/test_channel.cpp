#include <catch2/catch_amalgamated.hpp>

#include "beamtrack/channel.hpp"
#include "beamtrack/transition.hpp"
#include "test_util.hpp"

using namespace beamtrack;
using Catch::Approx;

TEST_CASE("banded transition with zero decay is the identity") {
    const TransitionMatrix t = build_banded_transition(4, 1, 0.0);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) CHECK(t(i, j) == (i == j ? 1.0 : 0.0));
}

TEST_CASE("banded transition interior and corner rows") {
    const TransitionMatrix t = build_banded_transition(5, 1, 0.5);
    // interior row (0-based index 2): alpha (1 + 2 beta) = 1
    CHECK(t(2, 1) == Approx(0.25).margin(1e-15));
    CHECK(t(2, 2) == Approx(0.5).margin(1e-15));
    CHECK(t(2, 3) == Approx(0.25).margin(1e-15));
    CHECK(t(2, 0) == 0.0);
    CHECK(t(2, 4) == 0.0);
    // corner row: unnormalized [1, 0.5] truncated at the edge, renormalized
    CHECK(t(0, 0) == Approx(2.0 / 3.0).margin(1e-15));
    CHECK(t(0, 1) == Approx(1.0 / 3.0).margin(1e-15));
    CHECK(t(0, 2) == 0.0);
}

TEST_CASE("banded transition rejects bad parameters") {
    CHECK_THROWS_AS(build_banded_transition(4, 4, 0.5), config_error);
    CHECK_THROWS_AS(build_banded_transition(4, 1, 1.0), config_error);
    CHECK_THROWS_AS(build_banded_transition(4, 1, -0.1), config_error);
    CHECK_THROWS_AS(build_banded_transition(4, -1, 0.5), config_error);
}

TEST_CASE("uniform mixing endpoints and blend") {
    const TransitionMatrix base = build_banded_transition(6, 2, 0.7);
    const TransitionMatrix same = mix_uniform_appearance(base, 0.0);
    for (std::size_t i = 0; i < base.p.size(); ++i) CHECK(same.p[i] == base.p[i]);

    const TransitionMatrix flat = mix_uniform_appearance(base, 1.0);
    for (double v : flat.p) CHECK(v == Approx(1.0 / 6.0).margin(1e-15));

    const TransitionMatrix half = mix_uniform_appearance(identity_transition(4), 0.5);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            CHECK(half(i, j) == Approx(i == j ? 0.625 : 0.125).margin(1e-15));

    CHECK_THROWS_AS(mix_uniform_appearance(base, 1.5), config_error);
    CHECK_THROWS_AS(mix_uniform_appearance(base, -0.5), config_error);
}

TEST_CASE("rows stay stochastic and banded across constructions") {
    Rng rng(42);
    for (int rep = 0; rep < 40; ++rep) {
        const int n = 2 + rng.uniform_int(15);
        const int b = rng.uniform_int(n);
        const double beta = rng.uniform01() * 0.999;
        const double lambda = rep % 3 == 0 ? 0.0 : rng.uniform01();
        const TransitionMatrix t = build_transition(n, b, beta, lambda);
        for (int i = 0; i < n; ++i) {
            double sum = 0.0;
            for (int j = 0; j < n; ++j) {
                CHECK(t(i, j) >= 0.0);
                if (lambda == 0.0 && std::abs(i - j) > b) CHECK(t(i, j) == 0.0);
                sum += t(i, j);
            }
            CHECK(sum == Approx(1.0).margin(1e-12));
        }
    }
}

TEST_CASE("step_state keeps identity dynamics fixed and redraws gains") {
    const ModelParams params{8, 4, 1, 1.0, 1.0, 1.0};
    const TransitionMatrix P = identity_transition(8);
    Rng rng(3);
    ChannelState s = draw_initial_state(params, rng);
    const int col = s.columns[0];
    const int row = s.rows[0];
    const std::complex<double> g = s.gains[0];
    for (int k = 0; k < 50; ++k) {
        s = step_state(s, P, params, rng);
        CHECK(s.columns[0] == col);
        CHECK(s.rows[0] == row);
    }
    CHECK(s.gains[0] != g);
}

TEST_CASE("two-path joint transition matches the product rule empirically") {
    const ModelParams params{8, 4, 2, 1.0, 1.0, 1.0};
    const TransitionMatrix P = build_banded_transition(8, 1, 0.5);
    // p_{1->2} p_{4->4} (0-based) = 0.25 * 0.5
    ChannelState start;
    start.columns = {1, 4};
    start.rows = {0, 1};
    start.gains = {1.0, 1.0};
    Rng rng(11);
    const long n = 100000;
    long hits = 0;
    for (long i = 0; i < n; ++i) {
        const ChannelState next = step_state(start, P, params, rng);
        if (next.columns[0] == 2 && next.columns[1] == 4) ++hits;
    }
    CHECK(oracle::within_3sigma(static_cast<double>(hits) / n, 0.125, n));
}

TEST_CASE("single-path step histogram matches the transition row") {
    const ModelParams params{8, 4, 1, 1.0, 1.0, 1.0};
    const TransitionMatrix P = build_transition(8, 2, 0.6, 0.1);
    ChannelState start;
    start.columns = {3};
    start.rows = {0};
    start.gains = {1.0};
    Rng rng(17);
    const long n = 100000;
    std::vector<long> hist(8, 0);
    for (long i = 0; i < n; ++i) ++hist[step_state(start, P, params, rng).columns[0]];
    for (int j = 0; j < 8; ++j)
        CHECK(oracle::within_3sigma(static_cast<double>(hist[j]) / n, P(3, j), n));
}

TEST_CASE("steering vector values and normalization") {
    const Eigen::VectorXcd a = steering_vector(0.0, 4);
    for (int k = 0; k < 4; ++k) CHECK(a(k) == std::complex<double>(0.5, 0.0));

    Rng rng(5);
    for (int rep = 0; rep < 20; ++rep) {
        const double theta = rng.uniform01() - 0.5;
        const int n = 1 + rng.uniform_int(64);
        CHECK(steering_vector(theta, n).norm() == Approx(1.0).margin(1e-12));
    }
}

TEST_CASE("steering grids are unitary") {
    for (int n : {1, 2, 3, 4, 8, 16}) {
        const Eigen::MatrixXcd A = steering_grid(n);
        const Eigen::MatrixXcd gram = A.adjoint() * A;
        CHECK((gram - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("physical angle mapping") {
    CHECK(physical_angle_to_direction(0.0) == 0.0);
    CHECK(physical_angle_to_direction(M_PI / 2) == Approx(0.5).margin(1e-12));
    CHECK(physical_angle_to_direction(M_PI / 6) == Approx(0.25).margin(1e-12));
}

TEST_CASE("vcm assembly scales, superposes, and stays sparse") {
    const ModelParams params{4, 4, 1, 1.0, 1.0, 1.0};
    ChannelState s;
    s.columns = {2};
    s.rows = {1};
    s.gains = {{1.0, 0.0}};
    const Eigen::MatrixXcd h = assemble_vcm(s, params);
    CHECK(h(1, 2) == std::complex<double>(4.0, 0.0)); // sqrt(16) * 1
    CHECK(h.cwiseAbs().sum() == Approx(4.0).margin(1e-12));

    ChannelState zero = s;
    zero.gains = {{0.0, 0.0}};
    CHECK(assemble_vcm(zero, params).cwiseAbs().maxCoeff() == 0.0);

    // same-bin collision superposes into one bin
    const ModelParams two{4, 4, 2, 1.0, 1.0, 1.0};
    ChannelState coll;
    coll.columns = {2, 2};
    coll.rows = {1, 1};
    coll.gains = {{1.0, 0.0}, {0.0, 1.0}};
    const Eigen::MatrixXcd hc = assemble_vcm(coll, two);
    CHECK(hc(1, 2) == std::complex<double>(4.0, 4.0));
    CHECK(occupied_bins_in_column(coll, 2) == 1);

    coll.rows = {1, 3};
    CHECK(occupied_bins_in_column(coll, 2) == 2);
}

TEST_CASE("vcm sparsity bound over random states") {
    const ModelParams params{8, 4, 3, 1.0, 1.0, 1.0};
    Rng rng(23);
    for (int rep = 0; rep < 200; ++rep) {
        const ChannelState s = draw_initial_state(params, rng);
        const int bins = total_occupied_bins(s, params.n_tx);
        CHECK(bins <= params.n_paths);
        CHECK(bins >= 1);
    }
}

TEST_CASE("virtual/physical round trip recovers the vcm") {
    const ModelParams params{8, 4, 2, 1.0, 1.0, 1.0};
    Rng rng(31);
    const ChannelState s = draw_initial_state(params, rng);
    const Eigen::MatrixXcd vcm = assemble_vcm(s, params);
    const Eigen::MatrixXcd H = physical_channel(s, params);
    const Eigen::MatrixXcd back =
        steering_grid(params.n_rx).adjoint() * H * steering_grid(params.n_tx);
    CHECK((back - vcm).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("transition text dump round-trips through parsing") {
    const TransitionMatrix t = build_transition(5, 1, 0.5, 0.25);
    const std::string text = to_text(t);
    std::istringstream is(text);
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) {
            double v = -1;
            is >> v;
            CHECK(v == t(i, j));
        }
}
