// Renders one tracking episode as ASCII: rows are slots, columns are VCM
// columns. '*' true path, '#' sensed and detected, 'o' sensed and quiet,
// 'X' sensed column that holds a path (a hit).

#include <iostream>
#include <string>

#include "beamtrack/csv.hpp"
#include "beamtrack/harness.hpp"

int main(int argc, char** argv) {
    using namespace beamtrack;

    ExperimentConfig config = preset_experiments("fig6");
    config.seed = argc > 1 ? std::stoull(argv[1]) : kDefaultSeed;
    const PolicySpec spec = parse_policy_spec("greedy-reduced");
    const EpisodeTrace trace = run_single_episode(config, spec, 0);

    std::cout << "one " << spec.label() << " episode on the " << config.preset
              << " configuration (seed " << config.seed << ")\n\n";
    for (std::size_t k = 0; k < trace.slots.size(); ++k) {
        const SlotRecord& rec = trace.slots[k];
        std::string line(config.model.n_tx, '.');
        for (int m = 0; m < rec.action.size(); ++m)
            line[rec.action.indices[m]] = rec.obs.flag(m) ? '#' : 'o';
        for (int c : rec.true_columns) {
            const bool sensed = line[c] == '#' || line[c] == 'o';
            line[c] = sensed ? 'X' : '*';
        }
        std::cout << (k + 1 < 10 ? " " : "") << k + 1 << " |" << line << "| reward "
                  << format_double(rec.reward) << "\n";
    }
    std::cout << "\ntotal reward " << format_double(trace.total_reward) << " over "
              << trace.slots.size() << " slots\n";
    return 0;
}
