#include "macforge/aloha.hpp"

#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <queue>
#include <stdexcept>
#include <vector>

#include "macforge/rng.hpp"

// Pure ALOHA runs in continuous time: transmissions start at arrival
// instants, not slot boundaries, so the collision geometry matches the
// classic unslotted model. Frame airtimes still come from the slotted
// duration formula.
namespace macforge::sim {

namespace {

using rng::StreamKind;

enum class EvKind { Arrival, TxEnd, CtrlStart, Timeout, RetryFire };

struct Ev {
    double t;
    std::uint64_t seq;
    EvKind kind;
    int node;
    int tx_id;
    bool operator>(const Ev& o) const { return t != o.t ? t > o.t : seq > o.seq; }
};

struct ATx {
    int station;
    FrameKind kind;
    double start, end;
    std::int64_t bits;
    int owner;
    bool dirty = false;
};

struct ANode {
    std::deque<bool> q;  // per-packet "delivered" flag; bytes are uniform
    bool busy = false;
    int retries = 0;
    std::uint64_t chan_draws = 0;
    std::uint64_t delay_draws = 0;
};

}  // namespace

SimResult run_pure_aloha(const Scenario& sc, const AlohaOptions& opts) {
    sc.check();
    const double T = sc.duration_s;
    const double slot = sc.slot_s;
    const int n = sc.num_nodes;
    const int sink = n;

    const int data_bytes = sc.app_packet_bytes + kMacHeaderBytes;
    const double data_air = transmission_duration(data_bytes, opts.rate_mbps, slot) * slot;
    const double ack_air = transmission_duration(kAckBytes, kControlRateMbps, slot) * slot;
    const double sifs = kSifsSlots * slot;

    SimResult res;
    std::vector<ANode> nodes(static_cast<std::size_t>(n));
    std::vector<ATx> txs;
    std::vector<int> active;

    std::priority_queue<Ev, std::vector<Ev>, std::greater<Ev>> pq;
    std::uint64_t seq = 0;

    // Pre-generate Poisson arrivals (same stream layout as the slotted sim).
    const double rate = sc.per_node_load_bps / (sc.app_packet_bytes * 8.0);
    for (int i = 0; i < n; ++i) {
        if (rate <= 0.0) continue;
        double t = 0.0;
        std::uint64_t idx = 0;
        while (true) {
            const double u = rng::draw_unit(
                sc.seed, rng::stream_id(StreamKind::Arrival, static_cast<std::uint64_t>(i)), idx++);
            t += -std::log1p(-u) / rate;
            if (t >= T) break;
            pq.push(Ev{t, seq++, EvKind::Arrival, i, -1});
        }
    }

    auto energy_slots = [&](double start, double end) {
        const double span = std::min(end, T) - start;
        return span <= 0.0 ? 0ull : static_cast<std::uint64_t>(std::llround(span / slot));
    };

    auto start_tx = [&](int station, FrameKind kind, double t, double air, int owner,
                        std::int64_t bits) {
        const int id = static_cast<int>(txs.size());
        txs.push_back(ATx{station, kind, t, t + air, bits, owner});
        if (!active.empty()) {
            txs[static_cast<std::size_t>(id)].dirty = true;
            for (int a : active) txs[static_cast<std::size_t>(a)].dirty = true;
        }
        active.push_back(id);
        res.energy_units += energy_slots(t, t + air);
        if (kind == FrameKind::Data)
            res.tx_attempts++;
        else
            res.control_overhead_bits += static_cast<std::uint64_t>(bits);
        pq.push(Ev{t + air, seq++, EvKind::TxEnd, owner, id});
    };

    auto pop_packet = [&](int i, double now) {
        ANode& nd = nodes[static_cast<std::size_t>(i)];
        const bool delivered = nd.q.front();
        nd.q.pop_front();
        if (delivered) {
            res.delivered_packets++;
            res.delivered_payload_bits += sc.app_packet_bytes * 8ull;
        } else {
            res.dropped_packets++;
            res.dropped_payload_bits += sc.app_packet_bytes * 8ull;
        }
        nd.retries = 0;
        nd.busy = false;
        if (!nd.q.empty() && now < T) {
            nd.busy = true;
            start_tx(i, FrameKind::Data, now, data_air, i, data_bytes * 8ll);
        }
    };

    auto schedule_retry = [&](int i, double now) {
        ANode& nd = nodes[static_cast<std::size_t>(i)];
        nd.retries++;
        if (nd.retries > opts.max_retries) {
            pop_packet(i, now);
            return;
        }
        const std::uint64_t span =
            static_cast<std::uint64_t>(opts.retrans_max_slots - opts.retrans_min_slots);
        const std::uint64_t u = rng::draw_u64(
            sc.seed, rng::stream_id(StreamKind::AlohaDelay, static_cast<std::uint64_t>(i)),
            nd.delay_draws++);
        const double d = (opts.retrans_min_slots + (span ? u % (span + 1) : 0)) * slot;
        pq.push(Ev{now + d, seq++, EvKind::RetryFire, i, -1});
    };

    while (!pq.empty()) {
        const Ev ev = pq.top();
        pq.pop();
        if (ev.t >= T) break;
        switch (ev.kind) {
            case EvKind::Arrival: {
                ANode& nd = nodes[static_cast<std::size_t>(ev.node)];
                nd.q.push_back(false);
                res.offered_packets++;
                res.offered_payload_bits += sc.app_packet_bytes * 8ull;
                if (!nd.busy) {
                    nd.busy = true;
                    start_tx(ev.node, FrameKind::Data, ev.t, data_air, ev.node, data_bytes * 8ll);
                }
                break;
            }
            case EvKind::TxEnd: {
                ATx& tx = txs[static_cast<std::size_t>(ev.tx_id)];
                for (std::size_t k = 0; k < active.size(); ++k) {
                    if (active[k] == ev.tx_id) {
                        active.erase(active.begin() + static_cast<std::ptrdiff_t>(k));
                        break;
                    }
                }
                ANode& nd = nodes[static_cast<std::size_t>(tx.owner)];
                const double u = rng::draw_unit(
                    sc.seed, rng::stream_id(StreamKind::Channel, 1),
                    static_cast<std::uint64_t>(tx.owner) * (1ull << 32) + nd.chan_draws++);
                const bool ok = !tx.dirty && !frame_corrupt(tx.bits, sc.ber, u);
                if (tx.dirty) res.collisions++;
                else if (!ok) res.corrupted_frames++;

                if (tx.kind == FrameKind::Data) {
                    if (ok) nd.q.front() = true;  // receiver has it
                    if (!opts.ack_enabled) {
                        pop_packet(tx.owner, ev.t);
                    } else if (ok) {
                        pq.push(Ev{ev.t + sifs, seq++, EvKind::CtrlStart, tx.owner, -1});
                    } else {
                        pq.push(Ev{ev.t + sifs + ack_air + slot, seq++, EvKind::Timeout, tx.owner, -1});
                    }
                } else {  // the ACK
                    if (ok)
                        pop_packet(tx.owner, ev.t);
                    else
                        schedule_retry(tx.owner, ev.t);
                }
                break;
            }
            case EvKind::CtrlStart:
                start_tx(sink, FrameKind::Ack, ev.t, ack_air, ev.node, kAckBytes * 8ll);
                break;
            case EvKind::Timeout:
                schedule_retry(ev.node, ev.t);
                break;
            case EvKind::RetryFire:
                start_tx(ev.node, FrameKind::Data, ev.t, data_air, ev.node, data_bytes * 8ll);
                break;
        }
    }

    res.pending_payload_bits =
        res.offered_payload_bits - res.delivered_payload_bits - res.dropped_payload_bits;
    res.avg_throughput_bps = static_cast<double>(res.delivered_payload_bits) / T;
    res.normalized_throughput = res.avg_throughput_bps / sc.channel_capacity_bps;
    return res;
}

}  // namespace macforge::sim
