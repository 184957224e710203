#include "macforge/env.hpp"

#include <algorithm>
#include <stdexcept>

namespace macforge::agents {

namespace {

std::string make_signature(const GenomeEnv::Options& opts) {
    std::string sig = "catalog:" + opts.catalog.to_string() + ";rules:";
    for (const auto& r : opts.rules.rules) {
        sig += r.id;
        sig += ',';
    }
    return sig;
}

}  // namespace

GenomeEnv::GenomeEnv(Options opts) : opts_(std::move(opts)) {
    opts_.scenario.duration_s = opts_.sim_seconds_per_step;
    slots_.emplace_back(blocks::BlockId::Backoff, 0);  // id 0: stay
    for (int b = 0; b < blocks::kNumBlocks; ++b) {
        if (!opts_.catalog.free[b]) continue;
        for (int d = 1; d < blocks::kDomainSizes[b]; ++d)
            slots_.emplace_back(static_cast<blocks::BlockId>(b), d);
    }
    signature_ = make_signature(opts_);
}

double GenomeEnv::evaluate(const Options& opts, const Genome& g) {
    sim::Scenario sc = opts.scenario;
    sc.duration_s = opts.sim_seconds_per_step;
    double sum = 0.0;
    for (const std::uint64_t s : opts.eval_seeds) {
        sc.seed = s;
        sum += sim::run(g, sc, opts.rules).normalized_throughput;
    }
    return sum / static_cast<double>(opts.eval_seeds.size());
}

double GenomeEnv::raw_value(const Genome& g) {
    const std::uint32_t id = blocks::genome_id(g);
    const auto it = cache_.find(id);
    if (it != cache_.end()) return it->second;
    const double v = evaluate(opts_, g);
    cache_.emplace(id, v);
    return v;
}

void GenomeEnv::set_goal_anchor(double best_raw_value, double goal_tol) {
    anchor_ = best_raw_value;
    tol_ = goal_tol;
}

double GenomeEnv::reward(const Genome& g) {
    const double v = raw_value(g);
    if (anchor_ <= 0.0) {
        running_max_ = std::max(running_max_, v);
        return v - running_max_;
    }
    const double lexfrac = static_cast<double>(blocks::genome_id(g)) /
                           static_cast<double>(blocks::genome_space_size());
    double shaped = v;
    if (v >= (1.0 - tol_) * anchor_) {
        // Goal class: measurement-equivalent genomes, strictly preferring
        // simpler (lexicographically smaller) ones so the designated goal
        // is the unique argmax.
        shaped = anchor_ * (1.0 - 0.02 * lexfrac);
    } else if (v >= (1.0 - 2.5 * tol_) * anchor_) {
        // Bridge band: near-equivalent states (for example the no-backoff
        // bridge the ack toggle has to cross). Strictly below every goal-
        // class reward, but shallow enough that a one-step crossing pays
        // off under the discount.
        shaped = anchor_ * (0.9785 - 0.0015 * lexfrac);
    }
    return shaped - anchor_;
}

Genome GenomeEnv::apply_action(const Genome& g, int action) const {
    if (action < 0 || action >= action_count())
        throw std::invalid_argument("apply_action: action id out of range");
    if (action == 0) return g;
    const auto [block, delta] = slots_[static_cast<std::size_t>(action)];
    const int bi = static_cast<int>(block);
    Genome out = g;
    out.opt[bi] = static_cast<std::uint8_t>((g.opt[bi] + delta) % blocks::kDomainSizes[bi]);
    return out;
}

std::vector<int> GenomeEnv::valid_actions(const Genome& g) const {
    std::vector<int> out;
    out.reserve(slots_.size());
    out.push_back(0);
    for (int a = 1; a < action_count(); ++a) {
        if (logic::validate(apply_action(g, a), opts_.rules).valid) out.push_back(a);
    }
    return out;
}

std::vector<double> GenomeEnv::observation(const Genome& g, const std::deque<double>& history,
                                           int history_len) const {
    std::vector<double> x;
    x.reserve(blocks::kNumBlocks + static_cast<std::size_t>(history_len));
    for (double v : blocks::encode_normalized(g)) x.push_back(v);
    const int pad = history_len - static_cast<int>(history.size());
    for (int i = 0; i < pad; ++i) x.push_back(0.0);
    const int take = std::min<int>(history_len, static_cast<int>(history.size()));
    for (int i = static_cast<int>(history.size()) - take; i < static_cast<int>(history.size()); ++i)
        x.push_back(history[static_cast<std::size_t>(i)]);
    return x;
}

Genome GenomeEnv::default_start() const {
    // Table-4 defaults projected onto the catalog: DCF-like where the
    // blocks are free, pinned values elsewhere.
    Genome g = opts_.catalog.pinned_base();
    const Genome dcf = sim::dcf_genome();
    for (int b = 0; b < blocks::kNumBlocks; ++b)
        if (opts_.catalog.free[b]) g.opt[b] = dcf.opt[b];
    return g;
}

void GenomeEnv::prime(const std::vector<std::pair<std::uint32_t, double>>& values) {
    for (const auto& [id, v] : values) cache_[id] = v;
}

void VisitedSet::add(int state) {
    if (set_.emplace(state, 1).second) states_.push_back(state);
}

namespace {

// Replay Bellman backups over transitions out of already-visited
// states. Rewards come from the memoized cache, so this propagates value
// without touching the simulator; transitions whose successor has never
// been evaluated are skipped rather than evaluated.
void plan(GenomeEnv& env, QTable& q, const AgentConfig& cfg, const VisitedSet& visited,
          rng::Stream& stream) {
    if (visited.size() == 0) return;
    for (int p = 0; p < cfg.plan_steps; ++p) {
        const int sid = visited.at(static_cast<std::size_t>(stream.next_below(visited.size() - 1)));
        const Genome s = env.genome_of(sid);
        const auto actions = env.valid_actions(s);
        const int a = actions[static_cast<std::size_t>(stream.next_below(actions.size() - 1))];
        const Genome next = env.apply_action(s, a);
        if (!env.has_cached(next)) continue;  // planning never runs new simulations
        q_update(q, sid, a, env.reward(next), env.state_id(next), env.valid_actions(next),
                 cfg.alpha, cfg.gamma);
    }
}

}  // namespace

EpisodeStats run_episode(GenomeEnv& env, QTable& q, const AgentConfig& cfg, int goal_state,
                         const Genome& start, rng::Stream& explore, VisitedSet& visited) {
    EpisodeStats stats;
    Genome s = start;
    visited.add(env.state_id(s));
    std::vector<int> actions = env.valid_actions(s);
    for (int step = 0; step < cfg.steps_per_episode; ++step) {
        const int a = select_action(q, env.state_id(s), actions, cfg.epsilon, explore);
        const Genome next = env.apply_action(s, a);
        const double r = env.reward(next);
        const std::vector<int> next_actions = env.valid_actions(next);
        q_update(q, env.state_id(s), a, r, env.state_id(next), next_actions, cfg.alpha, cfg.gamma);
        visited.add(env.state_id(next));
        if (env.state_id(next) == goal_state) stats.goal_visits++;
        // The reported trace carries the actual normalized throughput;
        // centering/shaping is internal to training.
        stats.reward_trace.push_back(env.raw_value(next));
        stats.mean_reward += env.raw_value(next);
        s = next;
        actions = next_actions;
        plan(env, q, cfg, visited, explore);
    }
    if (cfg.steps_per_episode > 0) stats.mean_reward /= cfg.steps_per_episode;
    return stats;
}

Genome greedy_readout(GenomeEnv& env, const QTable& q, const AgentConfig& cfg,
                      const Genome& start) {
    // Follow the learned policy without exploration; the state it parks
    // on (or ends at) carries the highest learned value on the walk.
    Genome s = start;
    for (int step = 0; step < cfg.steps_per_episode; ++step) {
        const int a = q.argmax(env.state_id(s), env.valid_actions(s));
        const Genome next = env.apply_action(s, a);
        if (next == s) break;  // parked on "stay"
        s = next;
    }
    return s;
}

}  // namespace macforge::agents
