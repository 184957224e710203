#include "macforge/dqn_agent.hpp"

namespace macforge::agents {

namespace {

int masked_argmax(const std::vector<double>& q, const std::vector<int>& valid) {
    int best = valid.front();
    for (int a : valid)
        if (q[static_cast<std::size_t>(a)] > q[static_cast<std::size_t>(best)]) best = a;
    return best;
}

}  // namespace

nn::Mlp dqn_train(GenomeEnv& env, const AgentConfig& cfg, const nn::DqnConfig& dcfg,
                  const std::vector<int>& hidden_widths, int episodes, std::uint64_t seed,
                  DqnTrainStats* stats) {
    std::vector<int> widths;
    widths.push_back(blocks::kNumBlocks + cfg.history_len);
    for (int w : hidden_widths) widths.push_back(w);
    widths.push_back(env.action_count());

    nn::DqnTrainer trainer(nn::Mlp::make(widths, seed), dcfg);
    nn::ReplayBuffer replay(1000);
    rng::Stream explore(seed, rng::StreamKind::Agent, 1);
    rng::Stream sampler(seed, rng::StreamKind::Sample, 1);

    double last_loss = 0.0;
    int steps = 0;
    for (int e = 0; e < episodes; ++e) {
        Genome s = env.default_start();
        std::deque<double> history;
        auto obs = env.observation(s, history, cfg.history_len);
        auto valid = env.valid_actions(s);
        for (int step = 0; step < cfg.steps_per_episode; ++step) {
            int a;
            if (cfg.epsilon > 0.0 && explore.next_unit() < cfg.epsilon) {
                a = valid[static_cast<std::size_t>(explore.next_below(valid.size() - 1))];
            } else {
                a = masked_argmax(trainer.net().forward(obs), valid);
            }
            const Genome next = env.apply_action(s, a);
            const double r = env.reward(next);
            history.push_back(env.raw_value(next));
            while (static_cast<int>(history.size()) > cfg.history_len) history.pop_front();
            auto next_obs = env.observation(next, history, cfg.history_len);
            auto next_valid = env.valid_actions(next);
            replay.push(nn::Transition{obs, a, r, next_obs, next_valid});
            if (replay.size() >= dcfg.batch_size) {
                last_loss = trainer.train_step(replay, sampler);
                ++steps;
            }
            s = next;
            obs = std::move(next_obs);
            valid = std::move(next_valid);
        }
    }
    if (stats) {
        stats->final_loss = last_loss;
        stats->steps = steps;
    }
    return trainer.net();
}

Genome dqn_readout(GenomeEnv& env, const nn::Mlp& net, const AgentConfig& cfg,
                   const Genome& start) {
    Genome s = start;
    std::deque<double> history;
    Genome best = start;
    double best_q = -1e300;
    for (int step = 0; step < cfg.steps_per_episode; ++step) {
        const auto obs = env.observation(s, history, cfg.history_len);
        const auto q = net.forward(obs);
        const auto valid = env.valid_actions(s);
        const int a = masked_argmax(q, valid);
        if (q[static_cast<std::size_t>(a)] > best_q) {
            best_q = q[static_cast<std::size_t>(a)];
            best = env.apply_action(s, a);
        }
        const Genome next = env.apply_action(s, a);
        history.push_back(env.raw_value(next));
        while (static_cast<int>(history.size()) > cfg.history_len) history.pop_front();
        if (next == s) break;
        s = next;
    }
    return best;
}

}  // namespace macforge::agents
