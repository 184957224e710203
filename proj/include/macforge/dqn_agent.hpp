#pragma once

#include "macforge/dqn.hpp"
#include "macforge/env.hpp"

namespace macforge::agents {

// Deep agent over the genome environment. Observation = normalized
// genome encoding concatenated with the throughput history; outputs one
// Q-value per action slot, with invalid actions masked out of both the
// policy and the training target.
struct DqnTrainStats {
    double final_loss = 0.0;
    int steps = 0;
};

nn::Mlp dqn_train(GenomeEnv& env, const AgentConfig& cfg, const nn::DqnConfig& dcfg,
                  const std::vector<int>& hidden_widths, int episodes, std::uint64_t seed,
                  DqnTrainStats* stats = nullptr);

Genome dqn_readout(GenomeEnv& env, const nn::Mlp& net, const AgentConfig& cfg,
                   const Genome& start);

}  // namespace macforge::agents
