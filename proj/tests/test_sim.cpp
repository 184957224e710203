#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "macforge/rng.hpp"
#include "macforge/sim.hpp"

using namespace macforge;
using blocks::Genome;
using sim::Scenario;

namespace {
Genome g(const char* text) { return blocks::parse_genome(text); }
}  // namespace

TEST_CASE("transmission duration arithmetic") {
    CHECK(sim::transmission_duration(1500, 6) == 11);
    CHECK(sim::transmission_duration(1500, 54) == 3);
    CHECK(sim::transmission_duration(14, 6) == 2);
    CHECK_THROWS_AS(sim::transmission_duration(0, 6), std::invalid_argument);
}

TEST_CASE("frame corruption probability") {
    CHECK(!sim::frame_corrupt(12000, 0.0, 0.0));
    const int n = 100000;
    int hits_big = 0, hits_small = 0;
    rng::Stream s(99, rng::StreamKind::Channel);
    for (int i = 0; i < n; ++i) {
        const double u = s.next_unit();
        if (sim::frame_corrupt(12000, 1e-4, u)) ++hits_big;
        if (sim::frame_corrupt(1600, 1e-4, u)) ++hits_small;
    }
    // 1 - (1-1e-4)^12000 = 0.6988; 1 - (1-1e-4)^1600 = 0.1479
    CHECK(std::fabs(hits_big / double(n) - 0.6988) < 0.01);
    CHECK(std::fabs(hits_small / double(n) - 0.1479) < 0.01);
}

TEST_CASE("contention window evolution") {
    using blocks::BackoffMode;
    CHECK(sim::backoff_next_cw(BackoffMode::Beb, 15, sim::TxOutcome::Failure, 15) == 31);
    CHECK(sim::backoff_next_cw(BackoffMode::Beb, 255, sim::TxOutcome::Success, 15) == 15);
    CHECK(sim::backoff_next_cw(BackoffMode::Eied, 255, sim::TxOutcome::Success, 15) == 127);
    CHECK(sim::backoff_next_cw(BackoffMode::Eied, 15, sim::TxOutcome::Failure, 15) == 31);
    CHECK(sim::backoff_next_cw(BackoffMode::Beb, 1023, sim::TxOutcome::Failure, 15) == 1023);
    CHECK(sim::backoff_next_cw(BackoffMode::Eied, 31, sim::TxOutcome::Success, 15) == 15);
}

TEST_CASE("frame packing") {
    SUBCASE("aggregation packs four 500 B packets at limit 2000") {
        const auto plan = sim::plan_frame({500, 500, 500, 500}, 0, 2000);
        REQUIRE(plan.segs.size() == 4);
        CHECK(plan.payload_bytes == 2000);
        for (const auto& s : plan.segs) CHECK(s.len == 500);
    }
    SUBCASE("limit 200 fragments a 500 B packet into three frames") {
        std::uint32_t sent = 0;
        int frames = 0;
        while (sent < 500) {
            const auto plan = sim::plan_frame({500}, sent, 200);
            REQUIRE(plan.segs.size() == 1);
            CHECK(plan.segs[0].offset == sent);
            sent += plan.segs[0].len;
            ++frames;
        }
        CHECK(frames == 3);
        CHECK(sent == 500);
    }
    SUBCASE("whole packet rides a 1500 B frame") {
        const auto plan = sim::plan_frame({500}, 0, 1500);
        REQUIRE(plan.segs.size() == 1);
        CHECK(plan.segs[0].len == 500);
    }
    SUBCASE("at most one fragment per frame") {
        // Continuation of the head, then wholes; no second fragment starts.
        const auto plan = sim::plan_frame({500, 300, 400}, 400, 500);
        REQUIRE(plan.segs.size() == 2);
        CHECK(plan.segs[0].len == 100);   // finishes the head
        CHECK(plan.segs[1].len == 300);   // whole second packet
        CHECK(plan.payload_bytes == 400); // 400 B third packet does not fit
    }
}

TEST_CASE("single sender delivers its offered load") {
    Scenario sc;
    sc.num_nodes = 1;
    sc.per_node_load_bps = sim::kLowLoadBps;
    sc.duration_s = 30.0;
    sc.seed = 11;
    const auto res = sim::run_dcf(sc);
    // No contention, no loss: everything offered is delivered up to the
    // cutoff edge.
    CHECK(res.collisions == 0);
    CHECK(res.dropped_packets == 0);
    CHECK(res.delivered_payload_bits >=
          0.99 * static_cast<double>(res.offered_payload_bits));
    // Throughput tracks the nominal offered load.
    CHECK(res.normalized_throughput ==
          doctest::Approx(sc.per_node_load_bps / sc.channel_capacity_bps).epsilon(0.08));
    CHECK(res.avg_throughput_bps ==
          doctest::Approx(res.delivered_payload_bits / sc.duration_s));
}

TEST_CASE("zero offered load produces zero counters") {
    Scenario sc;
    sc.num_nodes = 5;
    sc.per_node_load_bps = 0.0;
    sc.duration_s = 1.0;
    const auto res = sim::run(sim::dcf_genome(), sc);
    CHECK(res.offered_packets == 0);
    CHECK(res.delivered_payload_bits == 0);
    CHECK(res.tx_attempts == 0);
    CHECK(res.energy_units == 0);
    CHECK(res.normalized_throughput == 0.0);
}

TEST_CASE("determinism: identical seeds give byte-identical results") {
    Scenario sc = Scenario::preset(5);
    sc.duration_s = 1.0;
    sc.seed = 77;
    const auto a = sim::run(sim::dcf_genome(), sc);
    const auto b = sim::run(sim::dcf_genome(), sc);
    CHECK(a.csv_row() == b.csv_row());
    sc.seed = 78;
    const auto c = sim::run(sim::dcf_genome(), sc);
    CHECK(a.csv_row() != c.csv_row());
}

TEST_CASE("bit conservation across a genome/scenario matrix") {
    const char* genomes[] = {
        "BEB,ACK,off,off,off,15,CS,54",     // DCF
        "off,noack,off,off,off,15,off,54",  // bare
        "off,noack,off,2000,off,31,off,54", // aggregation, no control
        "EIED,ACK,200,off,RTS,63,CS,24",    // everything on, fragments
        "off,ACK,500,off,off,15,CS,6",      // ack without backoff
    };
    for (int preset : {1, 2, 6}) {
        for (const char* text : genomes) {
            Scenario sc = Scenario::preset(preset);
            sc.duration_s = 0.5;
            sc.seed = 5;
            const auto res = sim::run(g(text), sc);
            CHECK(res.delivered_payload_bits + res.dropped_payload_bits +
                      res.pending_payload_bits ==
                  res.offered_payload_bits);
            CHECK(res.delivered_payload_bits <= res.offered_payload_bits);
        }
    }
}

TEST_CASE("noise only hurts") {
    Scenario base = Scenario::preset(5);
    base.duration_s = 0.5;
    double clean = 0.0, noisy = 0.0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        Scenario sc = base;
        sc.seed = seed;
        sc.ber = 0.0;
        clean += sim::run_dcf(sc).normalized_throughput;
        sc.ber = 1e-4;
        noisy += sim::run_dcf(sc).normalized_throughput;
    }
    CHECK(noisy <= clean);
}

TEST_CASE("collision rule: overlapping transmissions all fail") {
    // No carrier sense, no backoff, saturated: collisions must appear and
    // every overlapping pair must be marked failed.
    Scenario sc;
    sc.num_nodes = 8;
    sc.per_node_load_bps = sim::kHighLoadBps;
    sc.duration_s = 0.2;
    sc.seed = 3;
    sim::SimTrace trace;
    const auto res = sim::run(g("off,noack,off,off,off,15,off,54"), sc,
                               logic::RuleTable::defaults(), &trace);
    CHECK(res.collisions > 0);
    const auto& txs = trace.transmissions;
    for (std::size_t i = 0; i < txs.size(); ++i) {
        if (!txs[i].completed) continue;
        for (std::size_t j = i + 1; j < txs.size(); ++j) {
            if (!txs[j].completed) continue;
            const bool overlap =
                txs[i].start_slot < txs[j].end_slot && txs[j].start_slot < txs[i].end_slot;
            if (overlap) {
                CHECK(txs[i].collided);
                CHECK(txs[j].collided);
            }
        }
    }
}

TEST_CASE("energy equals transmitting station-slots") {
    Scenario sc = Scenario::preset(1);
    sc.duration_s = 1.0;
    sc.seed = 9;
    sim::SimTrace trace;
    const auto res = sim::run(sim::dcf_genome(), sc, logic::RuleTable::defaults(), &trace);
    const std::int64_t horizon = sc.num_slots();
    std::uint64_t slots = 0;
    for (const auto& tx : trace.transmissions)
        slots += static_cast<std::uint64_t>(std::min(tx.end_slot, horizon) - tx.start_slot);
    CHECK(res.energy_units == slots);
    CHECK(res.energy_units > 0);
}

TEST_CASE("nav honored: carrier-sense nodes never start inside their own NAV") {
    Scenario sc;
    sc.num_nodes = 8;
    sc.per_node_load_bps = sim::kHighLoadBps;
    sc.duration_s = 0.5;
    sc.seed = 21;
    sim::SimTrace trace;
    sim::run(g("BEB,ACK,off,off,RTS,15,CS,54"), sc, logic::RuleTable::defaults(), &trace);
    int rts_count = 0;
    for (const auto& tx : trace.transmissions) {
        if (tx.kind == sim::FrameKind::Rts) ++rts_count;
        if (tx.station >= sc.num_nodes) continue;  // receiver station is exempt
        if (tx.kind == sim::FrameKind::Data || tx.kind == sim::FrameKind::Rts) {
            CHECK(tx.nav_until_at_start[static_cast<std::size_t>(tx.station)] <= tx.start_slot);
        }
    }
    CHECK(rts_count > 0);
}

TEST_CASE("run_dcf is definitionally run(dcf genome)") {
    Scenario sc = Scenario::preset(3);
    sc.duration_s = 0.5;
    sc.seed = 13;
    CHECK(sim::run_dcf(sc).csv_row() == sim::run(sim::dcf_genome(), sc).csv_row());
    CHECK(blocks::to_string(sim::dcf_genome(true)) == "BEB,ACK,off,off,RTS,15,CS,54");
}

TEST_CASE("dcf throughput degrades with contention") {
    double small = 0.0, large = 0.0;
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        Scenario sc;
        sc.per_node_load_bps = sim::kHighLoadBps;
        sc.duration_s = 0.5;
        sc.seed = seed;
        sc.num_nodes = 5;
        small += sim::run_dcf(sc).normalized_throughput;
        sc.num_nodes = 50;
        large += sim::run_dcf(sc).normalized_throughput;
    }
    CHECK(small >= large);
}

TEST_CASE("invalid inputs are rejected") {
    Scenario sc = Scenario::preset(1);
    CHECK_THROWS_AS(sim::run(g("BEB,noack,off,off,off,15,CS,54"), sc), std::invalid_argument);
    sc.duration_s = -1.0;
    CHECK_THROWS_AS(sim::run(sim::dcf_genome(), sc), std::invalid_argument);
    CHECK_THROWS_AS(Scenario::preset(9), std::invalid_argument);
    Scenario bad = Scenario::preset(1);
    bad.ber = 1.5;
    CHECK_THROWS_AS(bad.check(), std::invalid_argument);
}

TEST_CASE("scenario presets match the configuration table") {
    const int nodes[8] = {5, 5, 15, 15, 25, 25, 50, 50};
    for (int id = 1; id <= 8; ++id) {
        const Scenario sc = Scenario::preset(id);
        CHECK(sc.num_nodes == nodes[id - 1]);
        CHECK(sc.ber == (id % 2 == 0 ? 1e-4 : 0.0));
        CHECK(sc.slot_s == 2e-4);
        CHECK(sc.channel_capacity_bps == 10e6);
    }
    CHECK(Scenario::preset(1).per_node_load_bps == 96e3);
    CHECK(Scenario::preset(3).per_node_load_bps == 500e3);
    CHECK(Scenario::preset(7).per_node_load_bps == 5.64e6);
}
