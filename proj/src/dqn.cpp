#include "macforge/dqn.hpp"

#include <algorithm>
#include <stdexcept>

namespace macforge::nn {

void ReplayBuffer::push(Transition t) {
    if (buf_.size() < cap_) {
        buf_.push_back(std::move(t));
        return;
    }
    buf_[head_] = std::move(t);
    head_ = (head_ + 1) % cap_;
}

std::vector<const Transition*> ReplayBuffer::sample(std::size_t batch, rng::Stream& stream) const {
    if (buf_.empty()) throw std::logic_error("sampling from an empty replay buffer");
    std::vector<const Transition*> out;
    out.reserve(batch);
    for (std::size_t i = 0; i < batch; ++i)
        out.push_back(&buf_[static_cast<std::size_t>(stream.next_below(buf_.size() - 1))]);
    return out;
}

double dqn_step(Mlp& net, const std::vector<const Transition*>& batch, const Mlp& target_net,
                const DqnConfig& cfg) {
    if (batch.empty()) throw std::invalid_argument("dqn_step: empty batch");
    Mlp::Grad grad = net.zero_grad();
    double loss_sum = 0.0;
    for (const Transition* t : batch) {
        const auto next_q = target_net.forward(t->next_state);
        double best = 0.0;
        bool first = true;
        for (int a : t->next_valid) {
            const double q = next_q[static_cast<std::size_t>(a)];
            if (first || q > best) {
                best = q;
                first = false;
            }
        }
        const double target = t->reward + cfg.gamma * (first ? 0.0 : best);
        loss_sum += net.forward_backward(t->state, t->action, target, grad);
    }
    net.apply_grad(grad, cfg.learning_rate, static_cast<double>(batch.size()));
    return loss_sum / static_cast<double>(batch.size());
}

double DqnTrainer::train_step(const ReplayBuffer& replay, rng::Stream& stream) {
    const std::size_t batch = std::min(cfg_.batch_size, replay.size());
    const auto sampled = replay.sample(batch, stream);
    const double loss = dqn_step(net_, sampled, target_, cfg_);
    ++steps_;
    if (steps_ % cfg_.target_copy_interval == 0) target_ = net_;
    return loss;
}

}  // namespace macforge::nn
