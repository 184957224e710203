#pragma once

#include <cstdint>
#include <deque>
#include <string>
#include <vector>

#include "macforge/blocks.hpp"
#include "macforge/logic.hpp"

// Deterministic slotted discrete-event simulator of a single-collision-
// domain wireless network whose MAC behavior is entirely determined by a
// genome. All nodes hear all others; nodes send uplink to one always-on
// receiver station that answers CTS/ACK with SIFS priority.
namespace macforge::sim {

using blocks::Genome;

struct Scenario {
    int num_nodes = 5;
    double per_node_load_bps = 96e3;  // offered application traffic per node
    int app_packet_bytes = 500;
    double ber = 0.0;                 // per-bit corruption probability
    double duration_s = 2.0;
    std::uint64_t seed = 1;
    double slot_s = 2.0e-4;
    double channel_capacity_bps = 10e6;  // normalization only; airtime uses DataRate
    std::string label = "custom";

    // Presets 1-8: nodes {5,5,15,15,25,25,50,50}, loads
    // {low,low,avg,avg,high,high,sat,sat}, noise off/on alternating.
    static Scenario preset(int id);
    void check() const;  // throws on invalid fields

    std::int64_t num_slots() const;
};

// Offered loads per node (bits/s) behind the preset labels: low is
// 8 pkt/s x 1500 B, high/saturated 470 pkt/s x 1500 B, average is fixed
// at 500 kb/s.
inline constexpr double kLowLoadBps = 96e3;
inline constexpr double kAvgLoadBps = 500e3;
inline constexpr double kHighLoadBps = 5.64e6;

// Frame geometry and MAC timing (slots).
inline constexpr int kMacHeaderBytes = 34;
inline constexpr int kAckBytes = 14;
inline constexpr int kRtsBytes = 20;
inline constexpr int kCtsBytes = 14;
inline constexpr int kControlRateMbps = 6;  // control frames at basic rate
inline constexpr int kDifsSlots = 2;
inline constexpr int kSifsSlots = 1;
inline constexpr int kRetryLimit = 7;
inline constexpr int kCwCap = 1023;

enum class FrameKind { Data, Ack, Rts, Cts };

// Airtime in slots: one preamble slot plus payload slots at the given rate.
int transmission_duration(int bytes, int rate_mbps, double slot_s = 2.0e-4);

// True with probability 1 - (1-ber)^bits given a unit-uniform draw.
bool frame_corrupt(std::int64_t bits, double ber, double unit_draw);

enum class TxOutcome { Success, Failure };

// Contention window evolution. Failure doubles under both policies;
// success resets (BEB) or halves (EIED).
int backoff_next_cw(blocks::BackoffMode policy, int cw, TxOutcome outcome, int cw_min);

// Frame packing: whole packets plus at most one fragment up to the
// payload limit. A continuation fragment of a partially sent head packet
// always goes first; a fresh fragment is only started when the head
// packet alone exceeds the limit. Per-frame overhead is one MAC header
// regardless of how many packets ride along.
struct FrameSeg {
    int pkt;  // index into the pending queue
    std::uint32_t offset;
    std::uint32_t len;
};
struct FramePlan {
    std::vector<FrameSeg> segs;
    std::uint32_t payload_bytes = 0;
};
FramePlan plan_frame(const std::deque<std::uint32_t>& pending_bytes, std::uint32_t head_sent,
                     std::uint32_t payload_limit);

// Aggregate accounting for one run. CSV column order is fixed and
// documented in the README.
struct SimResult {
    std::uint64_t delivered_payload_bits = 0;
    double avg_throughput_bps = 0.0;
    double normalized_throughput = 0.0;
    std::uint64_t collisions = 0;         // frames lost to overlap (any kind)
    std::uint64_t corrupted_frames = 0;   // frames lost to bit errors
    std::uint64_t tx_attempts = 0;        // data-frame transmissions incl. retries
    std::uint64_t control_overhead_bits = 0;  // ACK+RTS+CTS bits on air
    std::uint64_t dropped_packets = 0;
    std::uint64_t energy_units = 0;       // (station, slot) pairs spent transmitting
    std::uint64_t offered_payload_bits = 0;
    std::uint64_t offered_packets = 0;
    std::uint64_t delivered_packets = 0;
    std::uint64_t dropped_payload_bits = 0;
    std::uint64_t pending_payload_bits = 0;  // in queue or in flight at cutoff

    static const char* csv_header();
    std::string csv_row() const;
};

// Test/diagnostic hook: record of every transmission the channel carried.
struct TxRecord {
    int station;  // node index, or num_nodes for the receiver station
    FrameKind kind;
    std::int64_t start_slot;
    std::int64_t end_slot;  // exclusive
    bool completed;  // outcome resolved before the horizon
    bool collided;
    bool corrupted;
    // NAV state of every other node at start (diagnostics for the
    // virtual-carrier-sense property).
    std::vector<std::int64_t> nav_until_at_start;
};

struct SimTrace {
    std::vector<TxRecord> transmissions;
};

// One deterministic run. Throws std::invalid_argument if the genome does
// not validate under the rule table or the scenario is malformed.
SimResult run(const Genome& genome, const Scenario& scenario,
              const logic::RuleTable& rules = logic::RuleTable::defaults(),
              SimTrace* trace = nullptr);

// The 802.11 DCF reference genome: BEB, ACK, no frag/agg, CW 15, carrier
// sense on, 54 Mbps; `rts_on` switches the RTS/CTS handshake in.
Genome dcf_genome(bool rts_on = false);
SimResult run_dcf(const Scenario& scenario, bool rts_on = false);

}  // namespace macforge::sim
