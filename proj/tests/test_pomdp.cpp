#include <catch2/catch_amalgamated.hpp>

#include "beamtrack/belief.hpp"
#include "test_util.hpp"

using namespace beamtrack;
using Catch::Approx;

namespace {

PomdpModel small_noisy_model(int n_tx, int n_paths, int m_p) {
    const ModelParams params = ModelParams::for_path_snr(n_tx, 4, n_paths, 100.0);
    const TransitionMatrix P = build_banded_transition(n_tx, 1, 0.5);
    return PomdpModel(params, P, make_detector(0.05, params), RewardSpec{}, m_p);
}

}  // namespace

TEST_CASE("state enumeration round-trips") {
    const StateEnumeration venum(5, 3);
    CHECK(venum.n_states == 125);
    std::vector<int> cols(3);
    for (long n = 0; n < venum.n_states; ++n) {
        venum.decode(n, cols);
        for (int l = 0; l < 3; ++l) CHECK(cols[l] == venum.column_of(n, l));
        CHECK(venum.encode(cols) == n);
    }
    CHECK_THROWS_AS(StateEnumeration(64, 5), config_error);
}

TEST_CASE("immediate reward counts detected bins only") {
    const PomdpModel model = small_noisy_model(4, 2, 2);
    const Action a = make_action({0, 2}, 4);
    const auto& venum = model.states();

    // no sensed column occupied: zero for every observation
    const long empty = venum.encode(std::array{1, 3});
    for (std::uint32_t j = 0; j < 4; ++j)
        CHECK(model.immediate_reward(empty, a, Observation{j, 2}) == 0.0);

    // both paths in distinct sensed columns, both flagged
    const long both = venum.encode(std::array{0, 2});
    CHECK(model.immediate_reward(both, a, Observation{0b11, 2}) == 2.0);
    CHECK(model.immediate_reward(both, a, Observation{0b01, 2}) == 1.0);

    // one sensed column holding two paths
    const long doubled = venum.encode(std::array{2, 2});
    CHECK(model.immediate_reward(doubled, a, Observation{0b10, 2}) == 2.0);

    // false alarm on the empty column adds nothing
    CHECK(model.immediate_reward(both, a, Observation{0b11, 2}) ==
          model.immediate_reward(both, a, Observation{0b11, 2}));
    const long half = venum.encode(std::array{0, 1});
    CHECK(model.immediate_reward(half, a, Observation{0b11, 2}) == 1.0);
}

TEST_CASE("expected state reward: identity dynamics with a perfect detector") {
    const ModelParams params{4, 4, 1, 1.0, 1.0, 1.0};
    const PomdpModel model(params, identity_transition(4), perfect_detector(), RewardSpec{}, 2);
    const long c2 = 2;
    CHECK(model.expected_reward_state(c2, make_action({1, 2}, 4)) == Approx(1.0).margin(1e-12));
    CHECK(model.expected_reward_state(c2, make_action({0, 1}, 4)) == Approx(0.0).margin(1e-12));
}

TEST_CASE("expected state reward matches the brute-force triple sum") {
    SECTION("single path") {
        const PomdpModel model = small_noisy_model(4, 1, 2);
        for (long n = 0; n < model.n_states(); ++n) {
            for_each_action(4, 2, [&](const std::vector<int>& idx) {
                const Action a{idx};
                const double expect = oracle::expected_reward_state(
                    n, a, model.transition(), model.detector(), 4, 4, 1);
                CHECK(model.expected_reward_state(n, a) == Approx(expect).margin(1e-12));
            });
        }
    }
    SECTION("two paths") {
        const PomdpModel model = small_noisy_model(4, 2, 2);
        Rng rng(13);
        for (int rep = 0; rep < 20; ++rep) {
            const long n = rng.uniform_int(static_cast<int>(model.n_states()));
            const Action a = oracle::random_action(rng, 4, 2);
            const double expect =
                oracle::expected_reward_state(n, a, model.transition(), model.detector(), 4, 4, 2);
            CHECK(model.expected_reward_state(n, a) == Approx(expect).margin(1e-12));
        }
    }
}

TEST_CASE("belief reward is the inner product with the state rewards") {
    const PomdpModel model = small_noisy_model(4, 2, 2);
    Rng rng(29);
    const Action a = make_action({1, 3}, 4);

    FullBelief point{std::vector<double>(model.n_states(), 0.0)};
    point.probs[7] = 1.0;
    CHECK(model.expected_reward_belief(point, a) ==
          Approx(model.expected_reward_state(7, a)).margin(1e-12));

    // linearity in the belief
    FullBelief pi1{oracle::random_distribution(rng, static_cast<int>(model.n_states()))};
    FullBelief pi2{oracle::random_distribution(rng, static_cast<int>(model.n_states()))};
    FullBelief mixv{std::vector<double>(model.n_states())};
    for (long i = 0; i < model.n_states(); ++i)
        mixv.probs[i] = 0.5 * pi1.probs[i] + 0.5 * pi2.probs[i];
    CHECK(model.expected_reward_belief(mixv, a) ==
          Approx(0.5 * model.expected_reward_belief(pi1, a) +
                 0.5 * model.expected_reward_belief(pi2, a))
              .margin(1e-12));
}

TEST_CASE("uniform belief under uniform dynamics earns m_p over n_tx") {
    const ModelParams params{8, 4, 1, 1.0, 1.0, 1.0};
    const TransitionMatrix P = mix_uniform_appearance(identity_transition(8), 1.0);
    const PomdpModel model(params, P, perfect_detector(), RewardSpec{}, 4);
    const FullBelief pi = model.uniform_belief();
    CHECK(model.expected_reward_belief(pi, make_action({0, 1, 2, 3}, 8)) ==
          Approx(0.5).margin(1e-12));
}

TEST_CASE("belief update: exact exclusion with a perfect detector") {
    const ModelParams params{4, 4, 1, 1.0, 1.0, 1.0};
    const PomdpModel model(params, identity_transition(4), perfect_detector(), RewardSpec{}, 1);
    const Action a = make_action({0}, 4);

    const FullBelief no = model.belief_update(model.uniform_belief(), a, Observation{0, 1});
    CHECK(no.probs[0] == 0.0);
    for (int i = 1; i < 4; ++i) CHECK(no.probs[i] == Approx(1.0 / 3.0).margin(1e-12));

    const FullBelief yes = model.belief_update(model.uniform_belief(), a, Observation{1, 1});
    CHECK(yes.probs[0] == 1.0);
    for (int i = 1; i < 4; ++i) CHECK(yes.probs[i] == 0.0);

    // impossible observation: point mass elsewhere but flag forced on column 0
    FullBelief point{std::vector<double>(4, 0.0)};
    point.probs[2] = 1.0;
    CHECK_THROWS_AS(model.belief_update(point, a, Observation{1, 1}), impossible_observation);
}

TEST_CASE("belief update matches brute-force joint enumeration") {
    const PomdpModel model = small_noisy_model(4, 2, 2);
    Rng rng(37);
    for (int rep = 0; rep < 300; ++rep) {
        const FullBelief pi{oracle::random_distribution(rng, static_cast<int>(model.n_states()))};
        const Action a = oracle::random_action(rng, 4, 2);
        const Observation obs{static_cast<std::uint32_t>(rng.uniform_int(4)), 2};
        const std::vector<double> expect = oracle::bayes_posterior(
            pi.probs, a, obs, model.transition(), model.detector(), 4, 4, 2);
        const FullBelief got = model.belief_update(pi, a, obs);
        for (long i = 0; i < model.n_states(); ++i)
            CHECK(got.probs[i] == Approx(expect[i]).margin(1e-12));
    }
}

TEST_CASE("observation likelihoods normalize and match simulation") {
    const PomdpModel model = small_noisy_model(4, 2, 2);
    Rng rng(41);
    const FullBelief pi{oracle::random_distribution(rng, static_cast<int>(model.n_states()))};
    const Action a = make_action({1, 2}, 4);

    double sum = 0.0;
    for (std::uint32_t j = 0; j < 4; ++j) sum += model.obs_likelihood(pi, a, Observation{j, 2});
    CHECK(sum == Approx(1.0).margin(1e-10));

    // frequency check: sample states from pi, transition, observe analytically
    const long n = 100000;
    std::vector<long> freq(4, 0);
    Rng sim(43);
    for (long t = 0; t < n; ++t) {
        double u = sim.uniform01();
        long s = 0;
        while (s + 1 < model.n_states() && u >= pi.probs[s]) u -= pi.probs[s], ++s;
        ChannelState state;
        state.columns = {model.states().column_of(s, 0), model.states().column_of(s, 1)};
        state.rows = {0, 1};
        state.gains = {1.0, 1.0};
        state = step_state(state, model.transition(), model.params(), sim);
        ++freq[simulate_observation(state, a, model.detector(), model.params(),
                                    ObservationMode::analytic, sim)
                   .bits];
    }
    for (std::uint32_t j = 0; j < 4; ++j)
        CHECK(oracle::within_3sigma(static_cast<double>(freq[j]) / n,
                                    model.obs_likelihood(pi, a, Observation{j, 2}), n));
}

TEST_CASE("perfect detector point mass forces one observation") {
    const ModelParams params{4, 4, 1, 1.0, 1.0, 1.0};
    const PomdpModel model(params, identity_transition(4), perfect_detector(), RewardSpec{}, 2);
    FullBelief point{std::vector<double>(4, 0.0)};
    point.probs[1] = 1.0;
    const Action a = make_action({1, 3}, 4);
    for (std::uint32_t j = 0; j < 4; ++j)
        CHECK(model.obs_likelihood(point, a, Observation{j, 2}) == (j == 0b01 ? 1.0 : 0.0));
}

TEST_CASE("total probability: posterior mixture reproduces the prediction") {
    const PomdpModel model = small_noisy_model(4, 2, 2);
    Rng rng(47);
    for (int rep = 0; rep < 20; ++rep) {
        const FullBelief pi{oracle::random_distribution(rng, static_cast<int>(model.n_states()))};
        const Action a = oracle::random_action(rng, 4, 2);
        const std::vector<double> mu = model.predict(pi.probs);
        std::vector<double> mixture(model.n_states(), 0.0);
        for (std::uint32_t j = 0; j < 4; ++j) {
            const Observation obs{j, 2};
            const double gamma = model.obs_likelihood(pi, a, obs);
            if (gamma == 0.0) continue;
            const FullBelief post = model.belief_update(pi, a, obs);
            for (long i = 0; i < model.n_states(); ++i) mixture[i] += gamma * post.probs[i];
        }
        for (long i = 0; i < model.n_states(); ++i)
            CHECK(mixture[i] == Approx(mu[i]).margin(1e-10));
    }
}

TEST_CASE("mrc reward variant uses the log of detected-path snr") {
    const ModelParams params{4, 4, 2, 1.0, 1.0, 1.0};
    const RewardSpec mrc{RewardSpec::Kind::mrc_log, 16.0};
    const PomdpModel model(params, identity_transition(4), perfect_detector(), mrc, 2);
    const Action a = make_action({0, 2}, 4);
    const long both = model.states().encode(std::array{0, 2});
    CHECK(model.immediate_reward(both, a, Observation{0b11, 2}) ==
          Approx(std::log1p(2 * 16.0)).margin(1e-12));
    CHECK(model.expected_reward_state(both, a) == Approx(std::log1p(2 * 16.0)).margin(1e-12));
}
