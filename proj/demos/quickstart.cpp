// Minimal library walkthrough: build a model, run the fast greedy policy for
// a few slots by hand, and print what it senses.

#include <iostream>

#include "beamtrack/detector.hpp"
#include "beamtrack/reduced.hpp"
#include "beamtrack/rng.hpp"

int main() {
    using namespace beamtrack;

    const ModelParams model = ModelParams::for_path_snr(16, 4, 2, 100.0);
    const TransitionMatrix P = build_transition(model.n_tx, 2, 0.5, 0.0);
    const DetectorSpec detector = make_detector(0.05, model);

    Rng rng(7);
    ChannelState state = draw_initial_state(model, rng);
    ReducedBelief omega = point_mass_reduced(state.columns, model.n_tx);

    std::cout << "paths start in columns " << state.columns[0] + 1 << " and "
              << state.columns[1] + 1 << "\n";
    for (int slot = 0; slot < 8; ++slot) {
        const Action action = greedy_action(omega, P, 6);
        state = step_state(state, P, model, rng);
        const Observation obs =
            simulate_observation(state, action, detector, model, ObservationMode::signal, rng);
        omega = reduced_belief_update(omega, action, obs, P, detector, model.n_rx);

        std::cout << "slot " << slot + 1 << ": sensed";
        for (int m = 0; m < action.size(); ++m)
            std::cout << ' ' << action.indices[m] + 1 << (obs.flag(m) ? "!" : "");
        std::cout << "  (true: " << state.columns[0] + 1 << ", " << state.columns[1] + 1 << ")\n";
    }
    return 0;
}
