#pragma once

#include <charconv>
#include <filesystem>
#include <fstream>
#include <string>

#include "beamtrack/errors.hpp"
#include "beamtrack/harness.hpp"

namespace beamtrack {

// Shortest decimal that round-trips the double; keeps CSV output stable and
// diff-friendly.
inline std::string format_double(double v) {
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, r.ptr);
}

// Write-then-rename so partially written outputs are never observed.
inline void write_text_atomic(const std::filesystem::path& path, const std::string& content) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write file: " + tmp.string());
        out << content;
        if (!out) throw std::runtime_error("write failed: " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

inline const char* kResultsHeader = "preset,policy,slot,mean_reward,acc_reward,ci95,n_trials";

// Long-format results, one row per (policy, slot); slots are 1-based in all
// emitted files.
inline std::string results_csv(const AggregateResult& result) {
    std::string out = kResultsHeader;
    out += '\n';
    const std::string preset = result.config.preset.empty() ? "custom" : result.config.preset;
    for (const PolicyAggregate& agg : result.policies) {
        for (std::size_t k = 0; k < agg.mean_reward.size(); ++k) {
            out += preset;
            out += ',';
            out += agg.policy;
            out += ',';
            out += std::to_string(k + 1);
            out += ',';
            out += format_double(agg.mean_reward[k]);
            out += ',';
            out += format_double(agg.acc_mean[k]);
            out += ',';
            out += format_double(agg.ci95[k]);
            out += ',';
            out += std::to_string(agg.n_trials);
            out += '\n';
        }
    }
    return out;
}

inline const char* kTraceHeader = "slot,true_cols,sensed_cols,flags,reward";

// Single-episode tracking trace; multi-valued cells are ';'-joined, columns
// 1-based.
inline std::string trace_csv(const EpisodeTrace& trace) {
    std::string out = kTraceHeader;
    out += '\n';
    auto join_cols = [](const std::vector<int>& v) {
        std::string s;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) s += ';';
            s += std::to_string(v[i] + 1);
        }
        return s;
    };
    for (std::size_t k = 0; k < trace.slots.size(); ++k) {
        const SlotRecord& rec = trace.slots[k];
        out += std::to_string(k + 1);
        out += ',';
        out += join_cols(rec.true_columns);
        out += ',';
        out += join_cols(rec.action.indices);
        out += ',';
        for (int m = 0; m < rec.action.size(); ++m) {
            if (m) out += ';';
            out += rec.obs.flag(m) ? '1' : '0';
        }
        out += ',';
        out += format_double(rec.reward);
        out += '\n';
    }
    return out;
}

}  // namespace beamtrack
