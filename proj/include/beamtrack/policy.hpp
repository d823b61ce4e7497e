#pragma once

#include <charconv>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "beamtrack/belief.hpp"
#include "beamtrack/planner.hpp"
#include "beamtrack/reduced.hpp"
#include "beamtrack/rng.hpp"

namespace beamtrack {

// How a policy's belief (or tracker) is initialized at slot 1: no prior
// information (uniform) or exact knowledge of the pre-transition initial
// state (known), disclosed by the harness.
struct BeliefInit {
    enum class Mode { uniform, known };
    Mode mode = Mode::uniform;
    std::vector<int> known_columns;
};

// A policy is an episode-scoped object: reset at the start, then one
// choose/observe pair per slot. choose is deterministic given the reset seed
// and the observation history; observe never fails on simulator output.
class Policy {
  public:
    virtual ~Policy() = default;
    virtual void reset(const BeliefInit& init, std::uint64_t decision_seed) = 0;
    virtual Action choose(int slot) = 0;
    virtual void observe(const Action& action, const Observation& obs) = 0;
    virtual std::string_view name() const = 0;
};

struct PolicySpec {
    enum class Kind { random, heuristic, greedy_full, greedy_reduced, lookahead };
    Kind kind = Kind::random;
    int depth = 2; // lookahead only

    std::string label() const {
        switch (kind) {
            case Kind::random: return "random";
            case Kind::heuristic: return "heuristic";
            case Kind::greedy_full: return "greedy-full";
            case Kind::greedy_reduced: return "greedy-reduced";
            case Kind::lookahead: return "lookahead(" + std::to_string(depth) + ")";
        }
        return "?";
    }
    bool operator==(const PolicySpec&) const = default;
};

// Accepts "random", "heuristic", "greedy-full", "greedy-reduced",
// "lookahead" and "lookahead(d)". default_depth applies when no explicit
// depth is given.
inline PolicySpec parse_policy_spec(std::string_view text, int default_depth = 2) {
    PolicySpec s;
    if (text == "random") {
        s.kind = PolicySpec::Kind::random;
    } else if (text == "heuristic") {
        s.kind = PolicySpec::Kind::heuristic;
    } else if (text == "greedy-full") {
        s.kind = PolicySpec::Kind::greedy_full;
    } else if (text == "greedy-reduced") {
        s.kind = PolicySpec::Kind::greedy_reduced;
    } else if (text.starts_with("lookahead")) {
        s.kind = PolicySpec::Kind::lookahead;
        s.depth = default_depth;
        std::string_view rest = text.substr(9);
        if (!rest.empty()) {
            if (rest.front() != '(' || rest.back() != ')')
                throw config_error("bad policy spec: " + std::string(text));
            int d = 0;
            const auto* first = rest.data() + 1;
            const auto* last = rest.data() + rest.size() - 1;
            auto [p, ec] = std::from_chars(first, last, d);
            if (ec != std::errc{} || p != last || d < 1)
                throw config_error("bad lookahead depth in: " + std::string(text));
            s.depth = d;
        }
    } else {
        throw config_error("unknown policy: " + std::string(text));
    }
    return s;
}

// Model pieces a policy may bind. The PomdpModel is only required (and only
// built) for the full-belief policies.
struct PolicyContext {
    ModelParams params;
    TransitionMatrix transition;
    DetectorSpec detector;
    RewardSpec reward;
    int m_p = 1;
    int horizon = 1;
    std::shared_ptr<const PomdpModel> pomdp;
};

namespace detail {

class RandomPolicy final : public Policy {
  public:
    RandomPolicy(int n_tx, int m_p) : n_tx_(n_tx), m_p_(m_p), rng_(0) {}

    void reset(const BeliefInit&, std::uint64_t decision_seed) override { rng_.reseed(decision_seed); }

    Action choose(int) override {
        std::vector<int> pool(n_tx_);
        std::iota(pool.begin(), pool.end(), 0);
        for (int j = 0; j < m_p_; ++j)
            std::swap(pool[j], pool[j + rng_.uniform_int(n_tx_ - j)]);
        pool.resize(m_p_);
        std::sort(pool.begin(), pool.end());
        return Action{std::move(pool)};
    }

    void observe(const Action&, const Observation&) override {}
    std::string_view name() const override { return "random"; }

  private:
    int n_tx_;
    int m_p_;
    Rng rng_;
};

// Detection-driven tracker: M_p / L beams per path. After a detection at
// column c the tracker retunes to the columns most reachable from c (largest
// entries of transition row c, ties ascending); with no detection its beams
// stay put. Trackers claim beams in path order and skip columns already
// claimed, advancing to their next-best choice.
class HeuristicPolicy final : public Policy {
  public:
    HeuristicPolicy(const TransitionMatrix& P, int m_p, int n_paths)
        : P_(P), m_p_(m_p), n_paths_(n_paths), per_tracker_(m_p / n_paths) {
        if (n_paths < 1 || m_p % n_paths != 0)
            throw config_error("heuristic policy needs m_p divisible by n_paths");
    }

    void reset(const BeliefInit& init, std::uint64_t) override {
        const int nt = P_.size;
        beams_.assign(n_paths_, {});
        detected_at_.assign(n_paths_, std::nullopt);
        owner_.assign(nt, -1);
        if (init.mode == BeliefInit::Mode::known) {
            for (int l = 0; l < n_paths_; ++l) detected_at_[l] = init.known_columns[l];
        } else {
            // Evenly spaced coverage, one contiguous chunk per tracker.
            for (int j = 0; j < m_p_; ++j)
                beams_[j / per_tracker_].push_back(static_cast<int>(static_cast<long>(j) * nt / m_p_));
        }
    }

    Action choose(int) override {
        const int nt = P_.size;
        std::vector<char> claimed(nt, 0);
        std::fill(owner_.begin(), owner_.end(), -1);
        std::vector<int> all;
        for (int l = 0; l < n_paths_; ++l) {
            const std::vector<int> prefs = preference_order(l);
            std::vector<int> mine;
            for (int c : prefs) {
                if (claimed[c]) continue;
                claimed[c] = 1;
                mine.push_back(c);
                if (static_cast<int>(mine.size()) == per_tracker_) break;
            }
            std::sort(mine.begin(), mine.end());
            for (int c : mine) {
                owner_[c] = l;
                all.push_back(c);
            }
            beams_[l] = std::move(mine);
        }
        std::sort(all.begin(), all.end());
        return Action{std::move(all)};
    }

    void observe(const Action& action, const Observation& obs) override {
        std::vector<std::optional<int>> hit(n_paths_, std::nullopt);
        for (int m = 0; m < action.size(); ++m) {
            if (!obs.flag(m)) continue;
            const int col = action.indices[m];
            const int l = owner_[col];
            if (l >= 0 && (!hit[l] || col < *hit[l])) hit[l] = col;
        }
        detected_at_ = std::move(hit);
    }

    std::string_view name() const override { return "heuristic"; }

  private:
    std::vector<int> preference_order(int l) const {
        const int nt = P_.size;
        std::vector<int> order(nt);
        std::iota(order.begin(), order.end(), 0);
        if (detected_at_[l]) {
            const auto row = P_.row(*detected_at_[l]);
            std::sort(order.begin(), order.end(), [&](int a, int b) {
                if (row[a] != row[b]) return row[a] > row[b];
                return a < b;
            });
        } else {
            // Keep current beams, then lowest-index fill for collisions.
            std::vector<char> held(nt, 0);
            for (int c : beams_[l]) held[c] = 1;
            order = beams_[l];
            for (int c = 0; c < nt; ++c)
                if (!held[c]) order.push_back(c);
        }
        return order;
    }

    TransitionMatrix P_;
    int m_p_;
    int n_paths_;
    int per_tracker_;
    std::vector<std::vector<int>> beams_;
    std::vector<std::optional<int>> detected_at_;
    std::vector<int> owner_;
};

// Exact belief-space policy: depth-1 is the exact greedy policy, larger
// depths run the expectimax lookahead.
class FullBeliefPolicy final : public Policy {
  public:
    FullBeliefPolicy(std::shared_ptr<const PomdpModel> model, int depth, int horizon,
                     std::string label)
        : model_(std::move(model)), depth_(depth), horizon_(horizon), label_(std::move(label)) {}

    void reset(const BeliefInit& init, std::uint64_t) override {
        pi_ = init.mode == BeliefInit::Mode::known ? model_->point_mass_belief(init.known_columns)
                                                   : model_->uniform_belief();
    }

    Action choose(int slot) override {
        return lookahead_plan(*model_, pi_, depth_, horizon_ - slot).action;
    }

    void observe(const Action& action, const Observation& obs) override {
        pi_ = model_->belief_update(pi_, action, obs);
    }

    std::string_view name() const override { return label_; }

  private:
    std::shared_ptr<const PomdpModel> model_;
    int depth_;
    int horizon_;
    std::string label_;
    FullBelief pi_;
};

class ReducedGreedyPolicy final : public Policy {
  public:
    ReducedGreedyPolicy(const TransitionMatrix& P, const DetectorSpec& detector, int n_rx,
                        int n_paths, int m_p)
        : P_(P), detector_(detector), n_rx_(n_rx), n_paths_(n_paths), m_p_(m_p) {}

    void reset(const BeliefInit& init, std::uint64_t) override {
        omega_ = init.mode == BeliefInit::Mode::known
                     ? point_mass_reduced(init.known_columns, P_.size)
                     : uniform_reduced(n_paths_, P_.size);
    }

    Action choose(int) override { return greedy_action(omega_, P_, m_p_); }

    void observe(const Action& action, const Observation& obs) override {
        omega_ = reduced_belief_update(omega_, action, obs, P_, detector_, n_rx_);
    }

    std::string_view name() const override { return "greedy-reduced"; }

  private:
    TransitionMatrix P_;
    DetectorSpec detector_;
    int n_rx_;
    int n_paths_;
    int m_p_;
    ReducedBelief omega_;
};

}  // namespace detail

inline std::unique_ptr<Policy> make_policy(const PolicySpec& spec, const PolicyContext& ctx) {
    using Kind = PolicySpec::Kind;
    switch (spec.kind) {
        case Kind::random:
            return std::make_unique<detail::RandomPolicy>(ctx.params.n_tx, ctx.m_p);
        case Kind::heuristic:
            return std::make_unique<detail::HeuristicPolicy>(ctx.transition, ctx.m_p,
                                                             ctx.params.n_paths);
        case Kind::greedy_reduced:
            return std::make_unique<detail::ReducedGreedyPolicy>(
                ctx.transition, ctx.detector, ctx.params.n_rx, ctx.params.n_paths, ctx.m_p);
        case Kind::greedy_full:
        case Kind::lookahead: {
            if (!ctx.pomdp)
                throw config_error("full-belief policy requires the enumerated POMDP model");
            const int depth = spec.kind == Kind::greedy_full ? 1 : spec.depth;
            return std::make_unique<detail::FullBeliefPolicy>(ctx.pomdp, depth, ctx.horizon,
                                                              spec.label());
        }
    }
    throw config_error("unknown policy kind");
}

}  // namespace beamtrack
