#include "macforge/logic.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <stdexcept>

namespace macforge::logic {

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

BlockId block_by_name(const std::string& name) {
    const std::string t = lower(name);
    if (t == "backoff") return BlockId::Backoff;
    if (t == "ack") return BlockId::Ack;
    if (t == "frag" || t == "fragmentation") return BlockId::Fragmentation;
    if (t == "agg" || t == "aggregation") return BlockId::Aggregation;
    if (t == "rts" || t == "rtscts") return BlockId::RtsCts;
    if (t == "cw" || t == "contentionwindow") return BlockId::ContentionWindow;
    if (t == "cs" || t == "carriersense") return BlockId::CarrierSense;
    if (t == "dr" || t == "datarate") return BlockId::DataRate;
    throw std::invalid_argument("unknown block name '" + name + "'");
}

std::vector<int> options_by_names(BlockId b, const std::string& list) {
    std::vector<int> out;
    if (lower(list) == "none") return out;
    std::stringstream ss(list);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        const std::string t = lower(tok);
        int found = -1;
        const int bi = static_cast<int>(b);
        for (int o = 0; o < blocks::kDomainSizes[bi]; ++o) {
            if (t == lower(blocks::option_name(b, o))) {
                found = o;
                break;
            }
        }
        if (found < 0 && t == "on") found = 1;
        if (found < 0)
            throw std::invalid_argument("unknown option '" + tok + "' for block '" +
                                        blocks::block_name(b) + "'");
        out.push_back(found);
    }
    return out;
}

bool contains(const std::vector<int>& v, int x) {
    return std::find(v.begin(), v.end(), x) != v.end();
}

}  // namespace

DependencyRule RuleTable::builtin_rule(const std::string& id) {
    if (id == "R1") {
        return {"R1", DependencyKind::Strong, false,
                BlockId::Backoff, {1, 2}, BlockId::Ack, {1},
                "backoff requires the ack block: without ack there is no ack-timeout event"};
    }
    if (id == "R2") {
        return {"R2", DependencyKind::Strong, false,
                BlockId::RtsCts, {1}, BlockId::Ack, {1},
                "rts/cts requires the ack block: the handshake presumes control-frame reception"};
    }
    if (id == "R3") {
        return {"R3", DependencyKind::Conditional, true,
                BlockId::Backoff, {0}, BlockId::ContentionWindow, {},
                "contention window setting is inert while backoff is off"};
    }
    throw std::invalid_argument("unknown built-in rule '" + id + "'");
}

RuleTable RuleTable::defaults() { return builtin({"R1", "R2", "R3"}); }

RuleTable RuleTable::builtin(const std::vector<std::string>& ids) {
    RuleTable t;
    for (const auto& id : ids) t.rules.push_back(builtin_rule(id));
    return t;
}

DependencyRule RuleTable::parse_rule(const std::string& text) {
    // "<id> <strong|weak|conditional|info> <block> in <opts> requires <block> in <opts>"
    std::stringstream ss(text);
    std::string id, kind, wb, kw1, wopts, req, rb, kw2, ropts;
    ss >> id >> kind >> wb >> kw1 >> wopts >> req >> rb >> kw2 >> ropts;
    if (lower(kw1) != "in" || lower(req) != "requires" || lower(kw2) != "in")
        throw std::invalid_argument("cannot parse rule '" + text + "'");
    DependencyRule r;
    r.id = id;
    const std::string k = lower(kind);
    if (k == "strong") r.kind = DependencyKind::Strong;
    else if (k == "weak") r.kind = DependencyKind::Weak;
    else if (k == "conditional") r.kind = DependencyKind::Conditional;
    else if (k == "info") { r.kind = DependencyKind::Conditional; r.informational = true; }
    else throw std::invalid_argument("unknown rule kind '" + kind + "'");
    r.when_block = block_by_name(wb);
    r.when_options = options_by_names(r.when_block, wopts);
    r.require_block = block_by_name(rb);
    r.require_options = options_by_names(r.require_block, ropts);
    r.message = "rule " + id;
    return r;
}

std::string RuleTable::describe() const {
    std::string out;
    for (const auto& r : rules) {
        out += r.id;
        out += r.informational ? " (info)" : "";
        out += ": ";
        out += r.message;
        out += '\n';
    }
    return out;
}

ValidationReport validate(const Genome& g, const RuleTable& table) {
    ValidationReport rep;
    for (const auto& r : table.rules) {
        if (!contains(r.when_options, g.option(r.when_block))) continue;
        const bool satisfied =
            !r.informational && contains(r.require_options, g.option(r.require_block));
        if (satisfied) continue;
        if (r.informational) {
            rep.notices.push_back({r.id, r.message});
        } else {
            rep.violations.push_back({r.id, r.message});
        }
    }
    rep.valid = rep.violations.empty();
    return rep;
}

const char* stage_name(ExecStage s) {
    switch (s) {
        case ExecStage::CarrierSense: return "carrier-sense";
        case ExecStage::Backoff: return "backoff";
        case ExecStage::RtsCts: return "rts-cts";
        case ExecStage::Framing: return "framing";
        case ExecStage::Transmit: return "transmit";
        case ExecStage::Ack: return "ack";
    }
    return "?";
}

std::vector<ExecStage> execution_order(const Genome& g, const RuleTable& table) {
    const auto rep = validate(g, table);
    if (!rep.valid) {
        throw std::invalid_argument("execution_order called on invalid genome (" +
                                    rep.violations.front().rule_id + ")");
    }
    std::vector<ExecStage> order;
    if (g.cs_enabled()) order.push_back(ExecStage::CarrierSense);
    if (g.backoff() != blocks::BackoffMode::Off) order.push_back(ExecStage::Backoff);
    if (g.rts_enabled()) order.push_back(ExecStage::RtsCts);
    if (g.frag_enabled() || g.agg_enabled()) order.push_back(ExecStage::Framing);
    order.push_back(ExecStage::Transmit);
    if (g.ack_enabled()) order.push_back(ExecStage::Ack);
    return order;
}

NavSource nav_source(const Genome& g) {
    return g.rts_enabled() ? NavSource::RtsCtsDuration : NavSource::FrameDurationField;
}

std::vector<Genome> filter_actions(const Genome&, const std::vector<Genome>& candidates,
                                   const RuleTable& table) {
    std::vector<Genome> out;
    out.reserve(candidates.size());
    for (const auto& c : candidates)
        if (validate(c, table).valid) out.push_back(c);
    return out;
}

std::uint64_t count_valid(const blocks::Catalog& catalog, const RuleTable& table) {
    std::uint64_t n = 0;
    for (const auto& g : blocks::enumerate_genomes(catalog))
        if (validate(g, table).valid) ++n;
    return n;
}

}  // namespace macforge::logic
