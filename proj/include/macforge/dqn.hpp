#pragma once

#include <cstdint>
#include <vector>

#include "macforge/mlp.hpp"
#include "macforge/rng.hpp"

namespace macforge::nn {

// One stored environment step. `next_valid` masks the actions available
// from the successor state.
struct Transition {
    std::vector<double> state;
    int action = 0;
    double reward = 0.0;
    std::vector<double> next_state;
    std::vector<int> next_valid;
};

// Fixed-capacity ring buffer with uniform sampling.
class ReplayBuffer {
public:
    explicit ReplayBuffer(std::size_t capacity = 1000) : cap_(capacity) {}

    void push(Transition t);
    std::size_t size() const { return buf_.size(); }
    std::size_t capacity() const { return cap_; }
    const Transition& at(std::size_t i) const { return buf_[i]; }

    std::vector<const Transition*> sample(std::size_t batch, rng::Stream& stream) const;

private:
    std::size_t cap_;
    std::size_t head_ = 0;
    std::vector<Transition> buf_;
};

struct DqnConfig {
    double gamma = 0.8;
    double learning_rate = 1e-3;
    std::size_t batch_size = 32;
    int target_copy_interval = 100;  // steps between theta- refreshes
};

// One stochastic-gradient step on the squared Bellman error
//   (Q(s,a;theta) - (r + gamma * max_a' Q(s',a';theta-)))^2
// averaged over the batch. Returns the batch loss.
double dqn_step(Mlp& net, const std::vector<const Transition*>& batch, const Mlp& target_net,
                const DqnConfig& cfg);

// Owns the target-network schedule around dqn_step.
class DqnTrainer {
public:
    DqnTrainer(Mlp net, DqnConfig cfg) : net_(std::move(net)), target_(net_), cfg_(cfg) {}

    double train_step(const ReplayBuffer& replay, rng::Stream& stream);
    const Mlp& net() const { return net_; }
    Mlp& net() { return net_; }
    const Mlp& target() const { return target_; }
    int steps_done() const { return steps_; }

private:
    Mlp net_;
    Mlp target_;
    DqnConfig cfg_;
    int steps_ = 0;
};

}  // namespace macforge::nn
