#pragma once

#include "macforge/sim.hpp"

namespace macforge::sim {

// Pure (unslotted) ALOHA baseline: no carrier sense, no NAV, no RTS/CTS;
// a node with a frame ready transmits immediately. Each application
// packet rides its own frame. Success is confirmed by an ACK unless
// `ack_enabled` is off (the no-ACK variant matches the classic
// G*e^(-2G) throughput model); failures retransmit after a uniform
// random delay of 1..16 slots, up to the retry limit.
struct AlohaOptions {
    bool ack_enabled = true;
    int rate_mbps = 54;
    int max_retries = kRetryLimit;
    int retrans_min_slots = 1;
    int retrans_max_slots = 16;
};

SimResult run_pure_aloha(const Scenario& scenario, const AlohaOptions& opts = AlohaOptions{});

}  // namespace macforge::sim
