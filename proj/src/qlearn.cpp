#include "macforge/qlearn.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace macforge::agents {

double QTable::get(int state, int action) const {
    const auto it = q_.find(key(state, action));
    return it == q_.end() ? 0.0 : it->second;
}

void QTable::set(int state, int action, double v) { q_[key(state, action)] = v; }

double QTable::max_over(int state, const std::vector<int>& actions) const {
    double best = 0.0;
    bool first = true;
    for (int a : actions) {
        const double v = get(state, a);
        if (first || v > best) {
            best = v;
            first = false;
        }
    }
    return first ? 0.0 : best;
}

int QTable::argmax(int state, const std::vector<int>& actions) const {
    if (actions.empty()) throw std::invalid_argument("argmax over empty action set");
    int best_a = actions.front();
    double best = get(state, best_a);
    for (std::size_t i = 1; i < actions.size(); ++i) {
        const double v = get(state, actions[i]);
        if (v > best) {
            best = v;
            best_a = actions[i];
        }
    }
    return best_a;
}

void QTable::save_csv(const std::string& path) const {
    std::vector<std::pair<std::int64_t, double>> rows(q_.begin(), q_.end());
    std::sort(rows.begin(), rows.end());
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << "state,action,value\n";
    char buf[96];
    for (const auto& [k, v] : rows) {
        std::snprintf(buf, sizeof(buf), "%lld,%lld,%.17g\n",
                      static_cast<long long>(k / 1024), static_cast<long long>(k % 1024), v);
        out << buf;
    }
}

QTable QTable::load_csv(const std::string& path, std::string signature) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    QTable t(std::move(signature));
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        long long s = 0, a = 0;
        double v = 0.0;
        if (std::sscanf(line.c_str(), "%lld,%lld,%lf", &s, &a, &v) != 3)
            throw std::runtime_error("malformed q-table row: " + line);
        t.set(static_cast<int>(s), static_cast<int>(a), v);
    }
    return t;
}

double q_update(QTable& q, int state, int action, double reward, int next_state,
                const std::vector<int>& next_actions, double alpha, double gamma) {
    const double old_v = q.get(state, action);
    const double target = reward + gamma * q.max_over(next_state, next_actions);
    const double v = old_v + alpha * (target - old_v);
    q.set(state, action, v);
    return v;
}

int select_action(const QTable& q, int state, const std::vector<int>& valid_actions,
                  double epsilon, rng::Stream& stream) {
    if (valid_actions.empty()) throw std::invalid_argument("select_action: no valid actions");
    // A single draw decides explore-vs-exploit; a second picks the random
    // action so exploit paths cost one draw.
    if (epsilon > 0.0 && stream.next_unit() < epsilon) {
        const auto i = stream.next_below(valid_actions.size() - 1);
        return valid_actions[static_cast<std::size_t>(i)];
    }
    return q.argmax(state, valid_actions);
}

QTable warm_start(const QTable& source, const std::string& target_signature) {
    if (source.signature() != target_signature) {
        throw std::invalid_argument("warm_start: state/action space mismatch ('" +
                                    source.signature() + "' vs '" + target_signature + "')");
    }
    return source;  // value copy
}

}  // namespace macforge::agents
