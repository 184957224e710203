#pragma once

#include <string>
#include <vector>

#include "macforge/blocks.hpp"

// The logic controller: rule-based sanity checking of genomes, block
// execution ordering, and action-space filtering.
namespace macforge::logic {

using blocks::BlockId;
using blocks::DependencyKind;
using blocks::Genome;

struct RuleFinding {
    std::string rule_id;
    std::string message;
};

struct ValidationReport {
    bool valid = true;
    std::vector<RuleFinding> violations;
    // Informational notices (inert parameters etc); never invalidate.
    std::vector<RuleFinding> notices;
};

// One if-then rule: if `when_block`'s setting is in `when_options`, then
// `require_block`'s setting must be in `require_options`. A rule with
// `informational` set reports a notice instead of a violation (an empty
// require set means the notice always fires when triggered).
struct DependencyRule {
    std::string id;
    DependencyKind kind = DependencyKind::Strong;
    bool informational = false;
    BlockId when_block = BlockId::Backoff;
    std::vector<int> when_options;
    BlockId require_block = BlockId::Ack;
    std::vector<int> require_options;
    std::string message;
};

struct RuleTable {
    std::vector<DependencyRule> rules;

    // R1: Backoff in {BEB, EIED} => Ack selected (strong).
    // R2: RtsCts on => Ack selected (strong; artifact rule, switchable).
    // R3: Backoff off => CW setting inert (informational).
    static RuleTable defaults();
    // Subset of the built-in rules by id, e.g. {"R1"}.
    static RuleTable builtin(const std::vector<std::string>& ids);
    static DependencyRule builtin_rule(const std::string& id);

    // Compact textual rule form, e.g.
    //   "R9 strong rts in RTS requires cs in CS"
    //   "R3 info backoff in off requires cw in none"
    static DependencyRule parse_rule(const std::string& text);
    std::string describe() const;
};

ValidationReport validate(const Genome& g, const RuleTable& table = RuleTable::defaults());

// Per-transmission pipeline stages in canonical order. Transmit is
// implicit and always present.
enum class ExecStage { CarrierSense, Backoff, RtsCts, Framing, Transmit, Ack };
const char* stage_name(ExecStage s);

// Ordered pipeline over the selected blocks; omitted blocks are skipped.
// Throws std::invalid_argument if the genome fails validation.
std::vector<ExecStage> execution_order(const Genome& g,
                                       const RuleTable& table = RuleTable::defaults());

enum class NavSource { RtsCtsDuration, FrameDurationField };
NavSource nav_source(const Genome& g);

// Keeps exactly the candidates that validate under the table.
std::vector<Genome> filter_actions(const Genome& g, const std::vector<Genome>& candidates,
                                   const RuleTable& table = RuleTable::defaults());

// Count of valid genomes in a catalog (brute force).
std::uint64_t count_valid(const blocks::Catalog& catalog, const RuleTable& table);

}  // namespace macforge::logic
