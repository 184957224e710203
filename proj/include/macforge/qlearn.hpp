#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "macforge/rng.hpp"

namespace macforge::agents {

struct AgentConfig {
    double alpha = 1.0;
    double gamma = 0.8;  // 0.9 selectable
    double epsilon = 0.05;
    int steps_per_episode = 100;
    int history_len = 15;
    double sim_seconds_per_step = 2.0;
    // Planning backups replayed over already-visited transitions after
    // each environment step (the environment is deterministic and
    // memoized, so these are exact Bellman updates, not new samples).
    int plan_steps = 20;
};

// Sparse state/action value table; missing entries read as zero.
class QTable {
public:
    QTable() = default;
    explicit QTable(std::string space_signature) : signature_(std::move(space_signature)) {}

    double get(int state, int action) const;
    void set(int state, int action, double v);
    double max_over(int state, const std::vector<int>& actions) const;
    int argmax(int state, const std::vector<int>& actions) const;  // lowest id wins ties
    std::size_t size() const { return q_.size(); }
    const std::string& signature() const { return signature_; }

    // Sorted (state, action, value) CSV.
    void save_csv(const std::string& path) const;
    static QTable load_csv(const std::string& path, std::string signature = "");

private:
    static std::int64_t key(int state, int action) {
        return static_cast<std::int64_t>(state) * 1024 + action;
    }
    std::unordered_map<std::int64_t, double> q_;
    std::string signature_;
};

// Q(s,a) += alpha * (r + gamma * max_a' Q(s',a') - Q(s,a)); returns the
// updated value.
double q_update(QTable& q, int state, int action, double reward, int next_state,
                const std::vector<int>& next_actions, double alpha, double gamma);

// Epsilon-greedy over the valid actions: uniform random with probability
// epsilon, otherwise the argmax with ties broken by lowest action id.
int select_action(const QTable& q, int state, const std::vector<int>& valid_actions,
                  double epsilon, rng::Stream& stream);

// Deep copy for reuse across scenarios. Throws std::invalid_argument when
// the state/action space signatures differ.
QTable warm_start(const QTable& source, const std::string& target_signature);

}  // namespace macforge::agents
