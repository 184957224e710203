#pragma once

#include <map>
#include <optional>
#include <string>

#include "macforge/logic.hpp"
#include "macforge/sim.hpp"

// Flat key = value configuration files ('#' starts a comment). Flags
// override file values; lookups for missing required keys fail naming
// the key.
namespace macforge::config {

class Config {
public:
    static Config from_file(const std::string& path);
    static Config from_text(const std::string& text);

    void set(const std::string& key, const std::string& value) { kv_[key] = value; }
    bool has(const std::string& key) const { return kv_.count(key) != 0; }

    std::string get(const std::string& key) const;  // throws naming the key
    std::string get_or(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key) const;
    double get_double_or(const std::string& key, double fallback) const;
    long long get_int(const std::string& key) const;
    long long get_int_or(const std::string& key, long long fallback) const;

    const std::map<std::string, std::string>& entries() const { return kv_; }

    // Scenario assembled from `scenario` (preset number) plus field
    // overrides: nodes, load_bps, packet_bytes, ber, duration_s, seed,
    // slot_s, capacity_bps.
    sim::Scenario scenario() const;

    // Rule table from `rules` (comma list of built-in ids or "default")
    // plus any `rule.<n>` additions in the compact rule syntax.
    logic::RuleTable rules() const;

private:
    std::map<std::string, std::string> kv_;
};

}  // namespace macforge::config
