#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "macforge/aloha.hpp"

using namespace macforge;
using sim::Scenario;

namespace {

// Crafted so one 500 B packet plus header flies in exactly the airtime
// that equals payload_bits / channel_capacity: normalized throughput then
// reads directly as the classic channel-time utilization S.
Scenario aloha_scenario(double g_load, std::uint64_t seed, double duration_s) {
    Scenario sc;
    sc.num_nodes = 20;
    sc.app_packet_bytes = 500;
    sc.per_node_load_bps = g_load * sc.channel_capacity_bps / sc.num_nodes;
    sc.duration_s = duration_s;
    sc.ber = 0.0;
    sc.seed = seed;
    return sc;
}

}  // namespace

TEST_CASE("airtime matches the payload/capacity identity for the oracle setup") {
    // 534 B at 54 Mbps: 1 preamble + 1 payload slot = 0.4 ms, exactly
    // 4000 bits / 10 Mbps.
    CHECK(sim::transmission_duration(534, 54) == 2);
}

TEST_CASE("no-ack pure aloha matches G*exp(-2G)") {
    sim::AlohaOptions opts;
    opts.ack_enabled = false;
    for (const double G : {0.1, 0.5, 1.0}) {
        const auto res = sim::run_pure_aloha(aloha_scenario(G, 4242, 30.0), opts);
        const double expected = G * std::exp(-2.0 * G);
        CHECK(std::fabs(res.normalized_throughput - expected) < 0.02);
    }
}

TEST_CASE("zero load is zero throughput") {
    Scenario sc = aloha_scenario(0.0, 1, 5.0);
    const auto res = sim::run_pure_aloha(sc);
    CHECK(res.normalized_throughput == 0.0);
    CHECK(res.offered_packets == 0);
}

TEST_CASE("acked aloha recovers at low load and conserves bits") {
    const auto res = sim::run_pure_aloha(aloha_scenario(0.048, 7, 10.0));
    CHECK(res.delivered_payload_bits + res.dropped_payload_bits + res.pending_payload_bits ==
          res.offered_payload_bits);
    CHECK(res.delivered_packets >
          static_cast<std::uint64_t>(0.95 * static_cast<double>(res.offered_packets)));
    CHECK(res.control_overhead_bits > 0);
}

TEST_CASE("acked aloha destabilizes once retransmissions pile up") {
    // The ACK exchange roughly doubles airtime, so moderate load already
    // drives the retry feedback loop into collapse.
    const auto low = sim::run_pure_aloha(aloha_scenario(0.048, 7, 5.0));
    const auto high = sim::run_pure_aloha(aloha_scenario(0.2, 7, 5.0));
    const double low_ratio =
        static_cast<double>(low.delivered_packets) / static_cast<double>(low.offered_packets);
    const double high_ratio =
        static_cast<double>(high.delivered_packets) / static_cast<double>(high.offered_packets);
    CHECK(low_ratio > 0.9);
    CHECK(high_ratio < 0.5);
}

TEST_CASE("aloha runs are deterministic in the seed") {
    const auto a = sim::run_pure_aloha(aloha_scenario(0.5, 33, 3.0));
    const auto b = sim::run_pure_aloha(aloha_scenario(0.5, 33, 3.0));
    const auto c = sim::run_pure_aloha(aloha_scenario(0.5, 34, 3.0));
    CHECK(a.csv_row() == b.csv_row());
    CHECK(a.csv_row() != c.csv_row());
}
