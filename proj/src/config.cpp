#include "macforge/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace macforge::config {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace

Config Config::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return from_text(ss.str());
}

Config Config::from_text(const std::string& text) {
    Config c;
    std::stringstream ss(text);
    std::string line;
    int line_no = 0;
    while (std::getline(ss, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config line " + std::to_string(line_no) +
                                     ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw std::runtime_error("config line " + std::to_string(line_no) + ": empty key");
        c.kv_[key] = value;
    }
    return c;
}

std::string Config::get(const std::string& key) const {
    const auto it = kv_.find(key);
    if (it == kv_.end()) throw std::runtime_error("missing config key '" + key + "'");
    return it->second;
}

std::string Config::get_or(const std::string& key, const std::string& fallback) const {
    const auto it = kv_.find(key);
    return it == kv_.end() ? fallback : it->second;
}

double Config::get_double(const std::string& key) const {
    const std::string v = get(key);
    try {
        return std::stod(v);
    } catch (const std::exception&) {
        throw std::runtime_error("config key '" + key + "': '" + v + "' is not a number");
    }
}

double Config::get_double_or(const std::string& key, double fallback) const {
    return has(key) ? get_double(key) : fallback;
}

long long Config::get_int(const std::string& key) const {
    const std::string v = get(key);
    try {
        return std::stoll(v);
    } catch (const std::exception&) {
        throw std::runtime_error("config key '" + key + "': '" + v + "' is not an integer");
    }
}

long long Config::get_int_or(const std::string& key, long long fallback) const {
    return has(key) ? get_int(key) : fallback;
}

sim::Scenario Config::scenario() const {
    sim::Scenario sc;
    if (has("scenario")) sc = sim::Scenario::preset(static_cast<int>(get_int("scenario")));
    sc.num_nodes = static_cast<int>(get_int_or("nodes", sc.num_nodes));
    sc.per_node_load_bps = get_double_or("load_bps", sc.per_node_load_bps);
    sc.app_packet_bytes = static_cast<int>(get_int_or("packet_bytes", sc.app_packet_bytes));
    sc.ber = get_double_or("ber", sc.ber);
    sc.duration_s = get_double_or("duration_s", sc.duration_s);
    sc.seed = static_cast<std::uint64_t>(get_int_or("seed", static_cast<long long>(sc.seed)));
    sc.slot_s = get_double_or("slot_s", sc.slot_s);
    sc.channel_capacity_bps = get_double_or("capacity_bps", sc.channel_capacity_bps);
    sc.check();
    return sc;
}

logic::RuleTable Config::rules() const {
    logic::RuleTable table;
    const std::string sel = get_or("rules", "default");
    if (sel == "default") {
        table = logic::RuleTable::defaults();
    } else {
        std::stringstream ss(sel);
        std::string id;
        std::vector<std::string> ids;
        while (std::getline(ss, id, ',')) {
            id = trim(id);
            if (!id.empty()) ids.push_back(id);
        }
        table = logic::RuleTable::builtin(ids);
    }
    for (const auto& [k, v] : kv_) {
        if (k.rfind("rule.", 0) == 0) table.rules.push_back(logic::RuleTable::parse_rule(v));
    }
    return table;
}

}  // namespace macforge::config
