#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "macforge/blocks.hpp"
#include "macforge/logic.hpp"
#include "macforge/qlearn.hpp"
#include "macforge/sim.hpp"

namespace macforge::agents {

using blocks::Catalog;
using blocks::Genome;

// Training environment over the genome space. A state's value is the
// mean normalized throughput across a fixed evaluation seed list — the
// same definition the sweep oracle uses — memoized per genome, so the
// environment is deterministic and the ground-truth goal state is
// exactly the reward argmax once the goal anchor is set.
class GenomeEnv {
public:
    struct Options {
        sim::Scenario scenario;
        Catalog catalog = Catalog::full();
        logic::RuleTable rules = logic::RuleTable::defaults();
        std::vector<std::uint64_t> eval_seeds = {1};
        double sim_seconds_per_step = 2.0;
    };

    explicit GenomeEnv(Options opts);

    // Mean normalized throughput of one genome (memoized).
    double raw_value(const Genome& g);
    // Training reward: throughput centered at the best known value, so
    // every reward is <= 0 and the zero-initialized table is optimistic
    // (untried actions get probed). With the goal anchor set, values
    // within goal_tol (relative) of the best collapse onto a plateau
    // with a strict preference for simpler (lexicographically smaller)
    // genomes, making the designated goal the unique argmax; a shallow
    // bridge band under the plateau keeps one-step crossings through
    // near-equivalent states profitable under the discount. Without an
    // anchor the baseline is the running maximum seen so far.
    double reward(const Genome& g);
    void set_goal_anchor(double best_raw_value, double goal_tol);
    bool anchored() const { return anchor_ >= 0.0; }

    // Action space: id 0 is "stay"; the rest are single-coordinate
    // mutations encoded as (free block, cyclic option delta).
    int action_count() const { return static_cast<int>(slots_.size()); }
    Genome apply_action(const Genome& g, int action) const;
    // Stay plus every mutation whose result validates under the rules.
    std::vector<int> valid_actions(const Genome& g) const;

    int state_id(const Genome& g) const { return static_cast<int>(blocks::genome_id(g)); }
    Genome genome_of(int state_id) const {
        return blocks::genome_from_id(static_cast<std::uint32_t>(state_id));
    }

    // Neural input: normalized encoding followed by the throughput
    // history (most recent last, zero-padded).
    std::vector<double> observation(const Genome& g,
                                    const std::deque<double>& history, int history_len) const;

    // Identifies the state/action space for warm-start compatibility.
    const std::string& space_signature() const { return signature_; }
    const Options& options() const { return opts_; }
    Genome default_start() const;
    std::size_t distinct_evaluations() const { return cache_.size(); }

    bool has_cached(const Genome& g) const {
        return cache_.count(blocks::genome_id(g)) != 0;
    }
    // Bulk-inserts precomputed values (used by the parallel sweep).
    void prime(const std::vector<std::pair<std::uint32_t, double>>& values);
    // Stateless per-genome evaluation, safe to call from worker threads.
    static double evaluate(const Options& opts, const Genome& g);

private:
    Options opts_;
    std::vector<std::pair<blocks::BlockId, int>> slots_;  // action id -> (block, delta)
    std::unordered_map<std::uint32_t, double> cache_;
    std::string signature_;
    double anchor_ = -1.0;
    double tol_ = 0.0;
    double running_max_ = 0.0;
};

struct EpisodeStats {
    int goal_visits = 0;
    double mean_reward = 0.0;
    std::vector<double> reward_trace;
};

// States the agent has stepped through during a training run; the pool
// the planning backups draw from. Persists across episodes.
class VisitedSet {
public:
    void add(int state);
    bool contains(int state) const { return set_.count(state) != 0; }
    std::size_t size() const { return states_.size(); }
    int at(std::size_t i) const { return states_[i]; }

private:
    std::vector<int> states_;
    std::unordered_map<int, char> set_;
};

// One training episode of exactly cfg.steps_per_episode steps:
// select action (epsilon-greedy over the logic-filtered set), apply the
// mutation, evaluate, update Q, then replay cfg.plan_steps Bellman
// backups over visited transitions. Counts steps whose post-action state
// is the goal.
EpisodeStats run_episode(GenomeEnv& env, QTable& q, const AgentConfig& cfg, int goal_state,
                         const Genome& start, rng::Stream& explore, VisitedSet& visited);

// Epsilon=0 rollout; returns the state with the highest learned value
// along the greedy trajectory (the trained agent's protocol readout).
Genome greedy_readout(GenomeEnv& env, const QTable& q, const AgentConfig& cfg,
                      const Genome& start);

}  // namespace macforge::agents
