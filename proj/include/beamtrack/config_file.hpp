#pragma once

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "beamtrack/experiment.hpp"

namespace beamtrack {

using KeyValues = std::vector<std::pair<std::string, std::string>>;

namespace detail {

inline std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

inline long parse_long(const std::string& key, const std::string& value) {
    long v = 0;
    const auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc{} || p != value.data() + value.size())
        throw config_error("config key '" + key + "': expected integer, got '" + value + "'");
    return v;
}

inline double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw config_error("config key '" + key + "': expected number, got '" + value + "'");
    }
}

inline std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream is(value);
    while (std::getline(is, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

}  // namespace detail

// Flat `key = value` lines; '#' starts a comment; keys mirror the experiment
// config fields with dotted prefixes for nested ones.
inline KeyValues parse_config_text(const std::string& text, const std::string& origin) {
    KeyValues kvs;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string stripped = detail::trim(line);
        if (stripped.empty()) continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw config_error(origin + ":" + std::to_string(lineno) +
                               ": expected 'key = value', got '" + stripped + "'");
        std::string key = detail::trim(stripped.substr(0, eq));
        std::string value = detail::trim(stripped.substr(eq + 1));
        if (key.empty())
            throw config_error(origin + ":" + std::to_string(lineno) + ": empty key");
        kvs.emplace_back(std::move(key), std::move(value));
    }
    return kvs;
}

inline KeyValues parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot read config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), path);
}

inline KeyValues parse_override(const std::string& kv) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0)
        throw config_error("override must be key=value, got '" + kv + "'");
    return {{detail::trim(kv.substr(0, eq)), detail::trim(kv.substr(eq + 1))}};
}

// Applies key/value pairs onto a config. Unknown keys are reported by name.
// model.path_snr_db is resolved after everything else so it can be combined
// with antenna-count keys in any order.
inline void apply_key_values(ExperimentConfig& config, const KeyValues& kvs) {
    std::vector<double> snr_db;
    for (const auto& [key, value] : kvs) {
        if (key == "preset") {
            config = preset_experiments(value);
        } else if (key == "model.n_tx") {
            config.model.n_tx = static_cast<int>(detail::parse_long(key, value));
        } else if (key == "model.n_rx") {
            config.model.n_rx = static_cast<int>(detail::parse_long(key, value));
        } else if (key == "model.n_paths") {
            config.model.n_paths = static_cast<int>(detail::parse_long(key, value));
        } else if (key == "model.gain_var") {
            config.model.gain_var = detail::parse_double(key, value);
        } else if (key == "model.noise_var") {
            config.model.noise_var = detail::parse_double(key, value);
        } else if (key == "model.tx_power") {
            config.model.tx_power = detail::parse_double(key, value);
        } else if (key == "model.path_snr_db") {
            snr_db.push_back(detail::parse_double(key, value));
        } else if (key == "transition.bandwidth") {
            config.transition.bandwidth = static_cast<int>(detail::parse_long(key, value));
        } else if (key == "transition.decay") {
            config.transition.decay = detail::parse_double(key, value);
        } else if (key == "transition.mix") {
            config.transition.mix = detail::parse_double(key, value);
        } else if (key == "m_p") {
            config.m_p = static_cast<int>(detail::parse_long(key, value));
        } else if (key == "slots_per_episode") {
            config.slots_per_episode = static_cast<int>(detail::parse_long(key, value));
        } else if (key == "slot_length") {
            config.slot_length = static_cast<int>(detail::parse_long(key, value));
        } else if (key == "p_fa") {
            config.p_fa = detail::parse_double(key, value);
        } else if (key == "init_mode") {
            if (value == "uniform") config.init_mode = BeliefInit::Mode::uniform;
            else if (value == "known") config.init_mode = BeliefInit::Mode::known;
            else throw config_error("config key 'init_mode': expected uniform|known, got '" + value + "'");
        } else if (key == "obs_mode") {
            if (value == "signal") config.obs_mode = ObservationMode::signal;
            else if (value == "analytic") config.obs_mode = ObservationMode::analytic;
            else throw config_error("config key 'obs_mode': expected signal|analytic, got '" + value + "'");
        } else if (key == "reward.kind") {
            if (value == "path-count") config.reward.kind = RewardSpec::Kind::path_count;
            else if (value == "mrc-log") config.reward.kind = RewardSpec::Kind::mrc_log;
            else throw config_error("config key 'reward.kind': expected path-count|mrc-log, got '" + value + "'");
        } else if (key == "reward.snr_per_path") {
            config.reward.snr_per_path = detail::parse_double(key, value);
        } else if (key == "policies") {
            config.policies.clear();
            for (const std::string& name : detail::split_list(value))
                config.policies.push_back(parse_policy_spec(name));
            if (config.policies.empty()) throw config_error("config key 'policies': empty list");
        } else if (key == "n_trials") {
            config.n_trials = detail::parse_long(key, value);
        } else if (key == "seed") {
            config.seed = static_cast<std::uint64_t>(detail::parse_long(key, value));
        } else if (key == "threads") {
            config.threads = static_cast<int>(detail::parse_long(key, value));
        } else {
            throw config_error("unknown config key: '" + key + "'");
        }
    }
    for (double db : snr_db) {
        config.model.tx_power = std::pow(10.0, db / 10.0) * config.model.noise_var /
                                (static_cast<double>(config.model.n_tx) * config.model.n_rx *
                                 config.model.gain_var);
    }
    // mrc-log defaults its per-path SNR to N_t N_r xi^2 / sigma^2 when unset.
    if (config.reward.kind == RewardSpec::Kind::mrc_log && config.reward.snr_per_path <= 0.0)
        config.reward.snr_per_path = static_cast<double>(config.model.n_tx) * config.model.n_rx *
                                     config.model.gain_var / config.model.noise_var;
}

}  // namespace beamtrack
