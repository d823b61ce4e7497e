// beamtrack command-line front end: runs seeded Monte Carlo experiments and
// emits plot-ready CSV plus a manifest that pins everything needed to
// reproduce the output byte-for-byte.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>

#include "beamtrack/config_file.hpp"
#include "beamtrack/csv.hpp"
#include "beamtrack/experiment.hpp"
#include "beamtrack/harness.hpp"
#include "beamtrack/version.hpp"

namespace fs = std::filesystem;
using beamtrack::ExperimentConfig;
using nlohmann::json;

namespace {

struct CommonOpts {
    std::string preset;
    std::string config_path;
    std::vector<std::string> sets;
    std::vector<std::string> presets; // compare only
    std::string policies;
    long trials = -1;
    long long seed = -1;
    int depth = 0;
    int threads = -1;
    std::string out_dir;
};

void add_common_flags(CLI::App* cmd, CommonOpts& o, bool multi_preset) {
    if (multi_preset)
        cmd->add_option("--preset", o.presets, "preset name(s): fig5a, fig5b, fig6, fig7");
    else
        cmd->add_option("--preset", o.preset, "preset name: fig5a, fig5b, fig6, fig7");
    cmd->add_option("--config", o.config_path, "config file of flat key = value lines");
    cmd->add_option("--set", o.sets, "override a single config key, e.g. --set transition.decay=0.9");
    cmd->add_option("--trials", o.trials, "number of Monte Carlo trials");
    cmd->add_option("--seed", o.seed, "master seed");
    cmd->add_option("--policies", o.policies, "comma-separated policy list");
    cmd->add_option("--depth", o.depth, "lookahead depth applied to lookahead policies");
    cmd->add_option("--threads", o.threads, "worker threads (0 = all cores)");
    cmd->add_option("--out", o.out_dir, "output directory (default $BEAMTRACK_OUT_DIR or .)");
}

fs::path resolve_out_dir(const CommonOpts& o) {
    if (!o.out_dir.empty()) return o.out_dir;
    if (const char* env = std::getenv("BEAMTRACK_OUT_DIR"); env && *env) return env;
    return ".";
}

ExperimentConfig resolve_config(const CommonOpts& o, const std::string& preset) {
    if (preset.empty() && o.config_path.empty())
        throw beamtrack::config_error("need --preset and/or --config");
    ExperimentConfig config =
        preset.empty() ? ExperimentConfig{} : beamtrack::preset_experiments(preset);
    if (!o.config_path.empty())
        beamtrack::apply_key_values(config, beamtrack::parse_config_file(o.config_path));
    for (const std::string& kv : o.sets)
        beamtrack::apply_key_values(config, beamtrack::parse_override(kv));
    if (o.trials >= 0) config.n_trials = o.trials;
    if (o.seed >= 0) config.seed = static_cast<std::uint64_t>(o.seed);
    if (o.threads >= 0) config.threads = o.threads;
    if (!o.policies.empty())
        beamtrack::apply_key_values(config, {{"policies", o.policies}});
    if (o.depth > 0)
        for (beamtrack::PolicySpec& spec : config.policies)
            if (spec.kind == beamtrack::PolicySpec::Kind::lookahead) spec.depth = o.depth;
    config.validate();
    return config;
}

json config_to_json(const ExperimentConfig& c) {
    json j;
    j["preset"] = c.preset.empty() ? "custom" : c.preset;
    j["model"] = {{"n_tx", c.model.n_tx},         {"n_rx", c.model.n_rx},
                  {"n_paths", c.model.n_paths},   {"gain_var", c.model.gain_var},
                  {"noise_var", c.model.noise_var}, {"tx_power", c.model.tx_power},
                  {"path_snr", c.model.path_snr()}};
    j["transition"] = {{"bandwidth", c.transition.bandwidth},
                       {"decay", c.transition.decay},
                       {"mix", c.transition.mix}};
    j["m_p"] = c.m_p;
    j["slots_per_episode"] = c.slots_per_episode;
    j["slot_length"] = c.slot_length;
    j["p_fa"] = c.p_fa;
    j["init_mode"] = c.init_mode == beamtrack::BeliefInit::Mode::known ? "known" : "uniform";
    j["obs_mode"] = c.obs_mode == beamtrack::ObservationMode::signal ? "signal" : "analytic";
    j["reward"] = {{"kind", c.reward.kind == beamtrack::RewardSpec::Kind::path_count
                                ? "path-count"
                                : "mrc-log"},
                   {"snr_per_path", c.reward.snr_per_path}};
    std::vector<std::string> policies;
    for (const auto& p : c.policies) policies.push_back(p.label());
    j["policies"] = policies;
    j["n_trials"] = c.n_trials;
    j["seed"] = c.seed;
    return j;
}

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

void write_manifest(const fs::path& path, const std::string& command, const json& configs,
                    const std::vector<std::string>& outputs, std::uint64_t seed) {
    json m;
    m["tool"] = "beamtrack";
    m["version"] = std::string(beamtrack::kVersion);
    m["command"] = command;
    m["created_utc"] = utc_timestamp();
    m["master_seed"] = seed;
    m["config"] = configs;
    m["outputs"] = outputs;
    beamtrack::write_text_atomic(path, m.dump(2) + "\n");
}

void print_summary(const beamtrack::AggregateResult& result) {
    for (const auto& agg : result.policies)
        std::cout << "  " << agg.policy << ": mean per-slot reward "
                  << beamtrack::format_double(agg.overall_mean) << ", accumulated "
                  << beamtrack::format_double(agg.acc_mean.back()) << " (" << agg.n_trials
                  << " trials)\n";
}

int cmd_run(const CommonOpts& o) {
    const ExperimentConfig config = resolve_config(o, o.preset);
    const fs::path dir = resolve_out_dir(o);
    fs::create_directories(dir);
    const beamtrack::AggregateResult result = beamtrack::monte_carlo(config);
    const fs::path csv_path = dir / "results.csv";
    beamtrack::write_text_atomic(csv_path, beamtrack::results_csv(result));
    write_manifest(dir / "manifest.json", "run", config_to_json(config), {csv_path.string()},
                   config.seed);
    std::cout << "wrote " << csv_path.string() << "\n";
    print_summary(result);
    return 0;
}

int cmd_compare(const CommonOpts& o) {
    if (o.presets.empty()) throw beamtrack::config_error("compare needs at least one --preset");
    if (o.policies.empty()) throw beamtrack::config_error("compare needs --policies");
    const fs::path dir = resolve_out_dir(o);
    fs::create_directories(dir);
    std::string csv = beamtrack::kResultsHeader;
    csv += '\n';
    json configs = json::array();
    std::uint64_t seed = beamtrack::kDefaultSeed;
    for (const std::string& preset : o.presets) {
        const ExperimentConfig config = resolve_config(o, preset);
        seed = config.seed;
        const beamtrack::AggregateResult result = beamtrack::monte_carlo(config);
        std::string block = beamtrack::results_csv(result);
        csv += block.substr(block.find('\n') + 1); // drop per-block header
        configs.push_back(config_to_json(config));
        std::cout << preset << ":\n";
        print_summary(result);
    }
    const fs::path csv_path = dir / "compare.csv";
    beamtrack::write_text_atomic(csv_path, csv);
    write_manifest(dir / "manifest.json", "compare", configs, {csv_path.string()}, seed);
    std::cout << "wrote " << csv_path.string() << "\n";
    return 0;
}

int cmd_trace(const CommonOpts& o, const std::string& policy_name, long trial) {
    ExperimentConfig config = resolve_config(o, o.preset);
    if (!policy_name.empty()) config.policies = {beamtrack::parse_policy_spec(policy_name)};
    if (config.policies.size() != 1)
        throw beamtrack::config_error("trace needs exactly one policy (use --policy)");
    const fs::path dir = resolve_out_dir(o);
    fs::create_directories(dir);
    const beamtrack::EpisodeTrace trace =
        beamtrack::run_single_episode(config, config.policies.front(), trial);
    const fs::path csv_path = dir / "trace.csv";
    beamtrack::write_text_atomic(csv_path, beamtrack::trace_csv(trace));
    json cfg = config_to_json(config);
    cfg["trial"] = trial;
    write_manifest(dir / "manifest.json", "trace", cfg, {csv_path.string()}, config.seed);
    std::cout << "wrote " << csv_path.string() << " (" << trace.slots.size() << " slots, total reward "
              << beamtrack::format_double(trace.total_reward) << ")\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"adaptive pilot-beam sequence design simulator"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(beamtrack::kVersion));

    CommonOpts run_opts;
    CLI::App* run = app.add_subcommand("run", "run one experiment, write results.csv + manifest");
    add_common_flags(run, run_opts, false);

    CommonOpts cmp_opts;
    CLI::App* cmp = app.add_subcommand("compare", "run preset(s) across policies, one long CSV");
    add_common_flags(cmp, cmp_opts, true);

    CommonOpts trace_opts;
    std::string trace_policy;
    long trace_trial = 0;
    CLI::App* trace = app.add_subcommand("trace", "emit one episode's tracking trace CSV");
    add_common_flags(trace, trace_opts, false);
    trace->add_option("--policy", trace_policy, "policy to trace (required unless config has one)");
    trace->add_option("--trial", trace_trial, "trial index used for seed derivation");

    try {
        app.parse(argc, argv);
        if (run->parsed()) return cmd_run(run_opts);
        if (cmp->parsed()) return cmd_compare(cmp_opts);
        if (trace->parsed()) return cmd_trace(trace_opts, trace_policy, trace_trial);
        return 2;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const beamtrack::config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
