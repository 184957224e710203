#include "macforge/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "macforge/rng.hpp"

namespace macforge::sim {

namespace {

using blocks::BackoffMode;
using rng::StreamKind;

constexpr int kEndMargin = 4096;  // room for exchanges spilling past the horizon

struct Packet {
    std::uint32_t bytes;
    std::uint32_t sent_offset = 0;     // sender-side progress
    std::uint32_t delivered_upto = 0;  // receiver-side contiguous prefix
};

struct Seg {
    int qpos;  // index into the owner's queue at frame-build time
    std::uint32_t offset;
    std::uint32_t len;
};

enum class NodeAction { None, ResolveCts, StartData, ResolveAck };

struct Node {
    std::deque<Packet> q;
    std::vector<Seg> frame;
    std::uint32_t frame_payload_bytes = 0;
    bool has_frame = false;

    int cw = 15;
    int backoff = -1;  // -1: not drawn
    int retries = 0;
    std::int64_t nav_until = 0;

    bool in_exchange = false;  // a timed RTS/data/ACK sequence is running
    std::int64_t timer = -1;
    NodeAction action = NodeAction::None;
    bool ctrl_ok = false;  // CTS/ACK received flag, set by control-frame ends

    std::uint64_t backoff_draws = 0;
    double next_arrival_time = 0.0;
    std::uint64_t arrival_index = 0;
};

struct Tx {
    int station;
    FrameKind kind;
    std::int64_t start;
    std::int64_t end;  // exclusive
    int owner;         // node whose exchange this belongs to
    std::int64_t bits;
    int trace_index = -1;
};

struct PendingCtrl {
    FrameKind kind;
    int dur;
    int owner;
    std::int64_t bits;
};

int ctrl_duration(int bytes, double slot_s) {
    return transmission_duration(bytes, kControlRateMbps, slot_s);
}

}  // namespace

Scenario Scenario::preset(int id) {
    if (id < 1 || id > 8) throw std::invalid_argument("scenario preset must be 1..8");
    static constexpr int nodes[8] = {5, 5, 15, 15, 25, 25, 50, 50};
    static constexpr double loads[8] = {kLowLoadBps, kLowLoadBps, kAvgLoadBps, kAvgLoadBps,
                                        kHighLoadBps, kHighLoadBps, kHighLoadBps, kHighLoadBps};
    static const char* names[8] = {"s1-low",  "s2-low-noise",  "s3-avg",  "s4-avg-noise",
                                   "s5-high", "s6-high-noise", "s7-sat",  "s8-sat-noise"};
    Scenario s;
    s.num_nodes = nodes[id - 1];
    s.per_node_load_bps = loads[id - 1];
    s.ber = (id % 2 == 0) ? 1e-4 : 0.0;
    s.label = names[id - 1];
    return s;
}

void Scenario::check() const {
    if (num_nodes < 1) throw std::invalid_argument("scenario: num_nodes must be >= 1");
    if (ber < 0.0 || ber >= 1.0) throw std::invalid_argument("scenario: ber must be in [0, 1)");
    if (duration_s <= 0.0) throw std::invalid_argument("scenario: duration must be > 0");
    if (slot_s <= 0.0) throw std::invalid_argument("scenario: slot must be > 0");
    if (per_node_load_bps < 0.0) throw std::invalid_argument("scenario: load must be >= 0");
    if (app_packet_bytes <= 0) throw std::invalid_argument("scenario: packet bytes must be > 0");
    if (channel_capacity_bps <= 0.0) throw std::invalid_argument("scenario: capacity must be > 0");
}

std::int64_t Scenario::num_slots() const {
    return static_cast<std::int64_t>(std::llround(duration_s / slot_s));
}

int transmission_duration(int bytes, int rate_mbps, double slot_s) {
    if (bytes <= 0) throw std::invalid_argument("transmission_duration: bytes must be > 0");
    const double bits_per_slot = rate_mbps * 1e6 * slot_s;
    return 1 + static_cast<int>(std::ceil(bytes * 8.0 / bits_per_slot));
}

bool frame_corrupt(std::int64_t bits, double ber, double unit_draw) {
    if (ber <= 0.0) return false;
    const double p_ok = std::pow(1.0 - ber, static_cast<double>(bits));
    return unit_draw < 1.0 - p_ok;
}

int backoff_next_cw(BackoffMode policy, int cw, TxOutcome outcome, int cw_min) {
    if (outcome == TxOutcome::Failure) return std::min(2 * (cw + 1) - 1, kCwCap);
    if (policy == BackoffMode::Beb) return cw_min;
    return std::max((cw + 1) / 2 - 1, cw_min);  // EIED halves back down
}

const char* SimResult::csv_header() {
    return "delivered_payload_bits,avg_throughput_bps,normalized_throughput,collisions,"
           "corrupted_frames,tx_attempts,control_overhead_bits,dropped_packets,energy_units,"
           "offered_payload_bits,offered_packets,delivered_packets,dropped_payload_bits,"
           "pending_payload_bits";
}

std::string SimResult::csv_row() const {
    char buf[512];
    std::snprintf(buf, sizeof(buf),
                  "%llu,%.10g,%.10g,%llu,%llu,%llu,%llu,%llu,%llu,%llu,%llu,%llu,%llu,%llu",
                  static_cast<unsigned long long>(delivered_payload_bits), avg_throughput_bps,
                  normalized_throughput, static_cast<unsigned long long>(collisions),
                  static_cast<unsigned long long>(corrupted_frames),
                  static_cast<unsigned long long>(tx_attempts),
                  static_cast<unsigned long long>(control_overhead_bits),
                  static_cast<unsigned long long>(dropped_packets),
                  static_cast<unsigned long long>(energy_units),
                  static_cast<unsigned long long>(offered_payload_bits),
                  static_cast<unsigned long long>(offered_packets),
                  static_cast<unsigned long long>(delivered_packets),
                  static_cast<unsigned long long>(dropped_payload_bits),
                  static_cast<unsigned long long>(pending_payload_bits));
    return buf;
}

FramePlan plan_frame(const std::deque<std::uint32_t>& pending, std::uint32_t head_sent,
                     std::uint32_t limit) {
    FramePlan plan;
    if (pending.empty()) return plan;
    std::uint32_t room = limit;
    int qpos = 0;
    bool has_fragment = false;
    if (head_sent > 0) {
        const std::uint32_t rem = pending.front() - head_sent;
        const std::uint32_t take = std::min(rem, room);
        plan.segs.push_back({0, head_sent, take});
        plan.payload_bytes += take;
        room -= take;
        has_fragment = true;
        qpos = 1;
    }
    while (qpos < static_cast<int>(pending.size())) {
        const std::uint32_t bytes = pending[static_cast<std::size_t>(qpos)];
        if (bytes <= room) {
            plan.segs.push_back({qpos, 0, bytes});
            plan.payload_bytes += bytes;
            room -= bytes;
            ++qpos;
            continue;
        }
        if (!has_fragment && plan.segs.empty() && room > 0) {
            plan.segs.push_back({qpos, 0, room});
            plan.payload_bytes += room;
            room = 0;
        }
        break;
    }
    return plan;
}

Genome dcf_genome(bool rts_on) {
    Genome g;
    g.set_option(blocks::BlockId::Backoff, static_cast<int>(BackoffMode::Beb));
    g.set_option(blocks::BlockId::Ack, 1);
    g.set_option(blocks::BlockId::RtsCts, rts_on ? 1 : 0);
    g.set_option(blocks::BlockId::ContentionWindow, 0);  // CW 15
    g.set_option(blocks::BlockId::CarrierSense, 1);
    g.set_option(blocks::BlockId::DataRate, 6);  // 54 Mbps
    return g;
}

SimResult run_dcf(const Scenario& scenario, bool rts_on) {
    return run(dcf_genome(rts_on), scenario);
}

namespace {

// The whole slotted engine lives in one object so the per-slot loop stays
// readable.
class Engine {
public:
    Engine(const Genome& g, const Scenario& sc, SimTrace* trace)
        : g_(g), sc_(sc), trace_(trace) {
        n_slots_ = sc.num_slots();
        num_nodes_ = sc.num_nodes;
        sink_ = num_nodes_;
        tx_count_.assign(static_cast<std::size_t>(n_slots_ + kEndMargin), 0);
        end_at_.resize(static_cast<std::size_t>(n_slots_ + kEndMargin));
        ctrl_at_.resize(static_cast<std::size_t>(n_slots_ + kEndMargin));
        nodes_.resize(static_cast<std::size_t>(num_nodes_));

        ack_selected_ = g.ack_enabled();
        rts_selected_ = g.rts_enabled();
        cs_selected_ = g.cs_enabled();
        backoff_selected_ = g.backoff() != BackoffMode::Off;
        rate_ = g.data_rate_mbps();
        payload_limit_ = g.frame_payload_limit();
        cw_min_ = g.cw_min();
        ack_dur_ = ctrl_duration(kAckBytes, sc.slot_s);
        rts_dur_ = ctrl_duration(kRtsBytes, sc.slot_s);
        cts_dur_ = ctrl_duration(kCtsBytes, sc.slot_s);
        arrival_rate_ = sc.per_node_load_bps / (sc.app_packet_bytes * 8.0);

        for (int i = 0; i < num_nodes_; ++i) {
            nodes_[static_cast<std::size_t>(i)].cw = cw_min_;
            advance_arrival(i);
        }
    }

    SimResult finish() {
        for (std::int64_t t = 0; t < n_slots_; ++t) step(t);
        // Cutoff accounting: whatever is still queued or mid-air is pending.
        for (auto& nd : nodes_) {
            for (const auto& p : nd.q) res_.pending_payload_bits += p.bytes * 8ull;
        }
        res_.avg_throughput_bps =
            static_cast<double>(res_.delivered_payload_bits) / sc_.duration_s;
        res_.normalized_throughput = res_.avg_throughput_bps / sc_.channel_capacity_bps;
        return res_;
    }

private:
    void advance_arrival(int i) {
        Node& nd = nodes_[static_cast<std::size_t>(i)];
        if (arrival_rate_ <= 0.0) {
            nd.next_arrival_time = std::numeric_limits<double>::infinity();
            return;
        }
        const double u = rng::draw_unit(sc_.seed, rng::stream_id(StreamKind::Arrival,
                                                                 static_cast<std::uint64_t>(i)),
                                        nd.arrival_index++);
        nd.next_arrival_time += -std::log1p(-u) / arrival_rate_;
    }

    void step(std::int64_t t) {
        const double slot_end = (t + 1) * sc_.slot_s;
        for (int i = 0; i < num_nodes_; ++i) {
            Node& nd = nodes_[static_cast<std::size_t>(i)];
            while (nd.next_arrival_time < slot_end) {
                nd.q.push_back(Packet{static_cast<std::uint32_t>(sc_.app_packet_bytes)});
                res_.offered_packets++;
                res_.offered_payload_bits += sc_.app_packet_bytes * 8ull;
                advance_arrival(i);
            }
        }

        for (const PendingCtrl& pc : ctrl_at_[static_cast<std::size_t>(t)])
            start_tx(sink_, pc.kind, t, pc.dur, pc.owner, pc.bits);
        ctrl_at_[static_cast<std::size_t>(t)].clear();

        for (int tx_idx : end_at_[static_cast<std::size_t>(t)]) process_end(txs_[static_cast<std::size_t>(tx_idx)]);
        end_at_[static_cast<std::size_t>(t)].clear();

        for (int i = 0; i < num_nodes_; ++i) {
            Node& nd = nodes_[static_cast<std::size_t>(i)];
            if (nd.timer == t) fire_action(i, t);
        }

        for (int i = 0; i < num_nodes_; ++i) contend(i, t);

        for (const auto& [owner, until] : pending_nav_) set_nav_others(owner, until);
        pending_nav_.clear();

        if (tx_count_[static_cast<std::size_t>(t)] > 0)
            idle_streak_ = 0;
        else
            ++idle_streak_;
    }

    void contend(int i, std::int64_t t) {
        Node& nd = nodes_[static_cast<std::size_t>(i)];
        if (nd.in_exchange || nd.q.empty()) return;
        if (!nd.has_frame) build_frame(nd);

        if (cs_selected_) {
            if (t < nd.nav_until) return;
            if (idle_streak_ < kDifsSlots) return;
        }
        if (backoff_selected_) {
            if (nd.backoff < 0) {
                const auto u = rng::draw_u64(
                    sc_.seed, rng::stream_id(StreamKind::Backoff, static_cast<std::uint64_t>(i)),
                    nd.backoff_draws++);
                nd.backoff = static_cast<int>(u % static_cast<std::uint64_t>(nd.cw + 1));
            }
            if (nd.backoff > 0) {
                --nd.backoff;
                return;
            }
        }
        begin_exchange(i, t);
    }

    void build_frame(Node& nd) {
        // Only a bounded prefix of the queue can fit in one frame.
        std::deque<std::uint32_t> pending;
        std::uint64_t seen = 0;
        const std::uint64_t enough =
            static_cast<std::uint64_t>(payload_limit_) + nd.q.front().bytes + 1;
        for (const Packet& p : nd.q) {
            pending.push_back(p.bytes);
            seen += p.bytes;
            if (seen > enough) break;
        }
        const FramePlan plan = plan_frame(pending, nd.q.front().sent_offset,
                                          static_cast<std::uint32_t>(payload_limit_));
        nd.frame.clear();
        for (const FrameSeg& s : plan.segs) nd.frame.push_back({s.pkt, s.offset, s.len});
        nd.frame_payload_bytes = plan.payload_bytes;
        nd.has_frame = true;
        nd.retries = 0;
    }

    void begin_exchange(int i, std::int64_t t) {
        Node& nd = nodes_[static_cast<std::size_t>(i)];
        nd.in_exchange = true;
        nd.backoff = -1;
        if (rts_selected_) {
            start_tx(i, FrameKind::Rts, t, rts_dur_, i, kRtsBytes * 8);
        } else {
            start_data(i, t);
        }
    }

    void start_data(int i, std::int64_t t) {
        Node& nd = nodes_[static_cast<std::size_t>(i)];
        const std::int64_t bits = (nd.frame_payload_bytes + kMacHeaderBytes) * 8ll;
        const int dur = transmission_duration(
            static_cast<int>(nd.frame_payload_bytes) + kMacHeaderBytes, rate_, sc_.slot_s);
        res_.tx_attempts++;
        const bool clean_start = range_clear(t, t + dur);
        start_tx(i, FrameKind::Data, t, dur, i, bits);
        // Duration field reserves through the ACK for anyone who can
        // decode the header (virtual carrier sense without RTS/CTS).
        // Deferred to the end of the slot: simultaneous starters must not
        // see each other's reservations.
        if (ack_selected_ && !rts_selected_ && clean_start) {
            pending_nav_.push_back({i, t + dur + kSifsSlots + ack_dur_});
        }
    }

    bool range_clear(std::int64_t s, std::int64_t e) const {
        const std::int64_t hi = std::min<std::int64_t>(e, n_slots_ + kEndMargin);
        for (std::int64_t k = s; k < hi; ++k)
            if (tx_count_[static_cast<std::size_t>(k)] != 0) return false;
        return true;
    }

    void set_nav_others(int owner, std::int64_t until) {
        for (int j = 0; j < num_nodes_; ++j) {
            if (j == owner) continue;
            Node& nd = nodes_[static_cast<std::size_t>(j)];
            nd.nav_until = std::max(nd.nav_until, until);
        }
    }

    void start_tx(int station, FrameKind kind, std::int64_t start, int dur, int owner,
                  std::int64_t bits) {
        Tx tx{station, kind, start, start + dur, owner, bits, -1};
        const std::int64_t hi = std::min<std::int64_t>(tx.end, n_slots_ + kEndMargin);
        for (std::int64_t k = start; k < hi; ++k) tx_count_[static_cast<std::size_t>(k)]++;
        res_.energy_units += static_cast<std::uint64_t>(std::min(tx.end, n_slots_) - start);
        if (kind != FrameKind::Data) res_.control_overhead_bits += static_cast<std::uint64_t>(bits);
        if (trace_) {
            TxRecord rec{station, kind, start, tx.end, false, false, false, {}};
            for (int j = 0; j < num_nodes_; ++j)
                rec.nav_until_at_start.push_back(nodes_[static_cast<std::size_t>(j)].nav_until);
            trace_->transmissions.push_back(rec);
            tx.trace_index = static_cast<int>(trace_->transmissions.size()) - 1;
        }
        if (tx.end < n_slots_ + kEndMargin) {
            end_at_[static_cast<std::size_t>(tx.end)].push_back(static_cast<int>(txs_.size()));
        }
        txs_.push_back(tx);
    }

    void process_end(const Tx& tx) {
        bool clean = true;
        for (std::int64_t k = tx.start; k < tx.end; ++k) {
            if (tx_count_[static_cast<std::size_t>(k)] > 1) {
                clean = false;
                break;
            }
        }
        const double u = rng::draw_unit(
            sc_.seed, rng::stream_id(StreamKind::Channel),
            static_cast<std::uint64_t>(tx.end) * static_cast<std::uint64_t>(num_nodes_ + 2) +
                static_cast<std::uint64_t>(tx.station));
        const bool corrupted = clean && frame_corrupt(tx.bits, sc_.ber, u);
        if (!clean) res_.collisions++;
        if (corrupted) res_.corrupted_frames++;
        if (trace_ && tx.trace_index >= 0) {
            auto& rec = trace_->transmissions[static_cast<std::size_t>(tx.trace_index)];
            rec.completed = true;
            rec.collided = !clean;
            rec.corrupted = corrupted;
        }
        const bool ok = clean && !corrupted;

        Node& nd = nodes_[static_cast<std::size_t>(tx.owner)];
        switch (tx.kind) {
            case FrameKind::Rts: {
                if (ok) {
                    // Reserve the full exchange for everyone who heard it.
                    const std::int64_t data_dur = transmission_duration(
                        static_cast<int>(nd.frame_payload_bytes) + kMacHeaderBytes, rate_,
                        sc_.slot_s);
                    std::int64_t until = tx.end + kSifsSlots + cts_dur_ + kSifsSlots + data_dur;
                    if (ack_selected_) until += kSifsSlots + ack_dur_;
                    set_nav_others(tx.owner, until);
                    schedule_ctrl(tx.end + kSifsSlots, FrameKind::Cts, cts_dur_, tx.owner,
                                  kCtsBytes * 8);
                    nd.timer = tx.end + kSifsSlots + cts_dur_;
                } else {
                    nd.timer = tx.end + kSifsSlots + cts_dur_ + 1;  // CTS timeout
                }
                nd.ctrl_ok = false;
                nd.action = NodeAction::ResolveCts;
                break;
            }
            case FrameKind::Cts: {
                nodes_[static_cast<std::size_t>(tx.owner)].ctrl_ok = ok;
                break;
            }
            case FrameKind::Data: {
                if (ok) deliver_frame(nd);
                if (ack_selected_) {
                    if (ok) {
                        schedule_ctrl(tx.end + kSifsSlots, FrameKind::Ack, ack_dur_, tx.owner,
                                      kAckBytes * 8);
                        nd.timer = tx.end + kSifsSlots + ack_dur_;
                    } else {
                        nd.timer = tx.end + kSifsSlots + ack_dur_ + 1;  // ACK timeout
                    }
                    nd.ctrl_ok = false;
                    nd.action = NodeAction::ResolveAck;
                } else {
                    // Sender assumes success and moves on.
                    advance_sender(tx.owner);
                    end_exchange(tx.owner);
                }
                break;
            }
            case FrameKind::Ack: {
                nodes_[static_cast<std::size_t>(tx.owner)].ctrl_ok = ok;
                break;
            }
        }
    }

    void schedule_ctrl(std::int64_t at, FrameKind kind, int dur, int owner, std::int64_t bits) {
        if (at >= n_slots_ + kEndMargin) return;
        ctrl_at_[static_cast<std::size_t>(at)].push_back(PendingCtrl{kind, dur, owner, bits});
    }

    void fire_action(int i, std::int64_t t) {
        Node& nd = nodes_[static_cast<std::size_t>(i)];
        const NodeAction act = nd.action;
        nd.timer = -1;
        nd.action = NodeAction::None;
        switch (act) {
            case NodeAction::ResolveCts:
                if (nd.ctrl_ok) {
                    nd.timer = t + kSifsSlots;
                    nd.action = NodeAction::StartData;
                } else {
                    fail_exchange(i);
                }
                break;
            case NodeAction::StartData:
                start_data(i, t);
                break;
            case NodeAction::ResolveAck:
                if (nd.ctrl_ok) {
                    succeed_exchange(i);
                } else {
                    fail_exchange(i);
                }
                break;
            case NodeAction::None:
                break;
        }
    }

    // Receiver-side bookkeeping for a clean, uncorrupted data frame.
    void deliver_frame(Node& nd) {
        for (const Seg& s : nd.frame) {
            Packet& p = nd.q[static_cast<std::size_t>(s.qpos)];
            if (s.offset <= p.delivered_upto)
                p.delivered_upto = std::max(p.delivered_upto, s.offset + s.len);
        }
    }

    // Sender marks the frame's bytes as sent and retires finished packets.
    void advance_sender(int i) {
        Node& nd = nodes_[static_cast<std::size_t>(i)];
        for (const Seg& s : nd.frame) {
            Packet& p = nd.q[static_cast<std::size_t>(s.qpos)];
            p.sent_offset = std::max(p.sent_offset, s.offset + s.len);
        }
        while (!nd.q.empty() && nd.q.front().sent_offset == nd.q.front().bytes) {
            retire_front(nd);
        }
        nd.has_frame = false;
        nd.frame.clear();
    }

    void retire_front(Node& nd) {
        const Packet& p = nd.q.front();
        if (p.delivered_upto == p.bytes) {
            res_.delivered_packets++;
            res_.delivered_payload_bits += p.bytes * 8ull;
        } else {
            res_.dropped_packets++;
            res_.dropped_payload_bits += p.bytes * 8ull;
        }
        nd.q.pop_front();
    }

    void succeed_exchange(int i) {
        Node& nd = nodes_[static_cast<std::size_t>(i)];
        if (backoff_selected_) nd.cw = backoff_next_cw(g_.backoff(), nd.cw, TxOutcome::Success, cw_min_);
        advance_sender(i);
        end_exchange(i);
    }

    void fail_exchange(int i) {
        Node& nd = nodes_[static_cast<std::size_t>(i)];
        if (backoff_selected_) nd.cw = backoff_next_cw(g_.backoff(), nd.cw, TxOutcome::Failure, cw_min_);
        nd.retries++;
        if (nd.retries > kRetryLimit) {
            // Drop the whole frame: every packet it carries is abandoned.
            // Pop from the back so queue positions stay valid.
            for (auto it = nd.frame.rbegin(); it != nd.frame.rend(); ++it) {
                Packet& p = nd.q[static_cast<std::size_t>(it->qpos)];
                p.sent_offset = p.bytes;  // mark finished
            }
            while (!nd.q.empty() && nd.q.front().sent_offset == nd.q.front().bytes) {
                retire_front(nd);
            }
            nd.has_frame = false;
            nd.frame.clear();
            nd.retries = 0;
        }
        end_exchange(i);
    }

    void end_exchange(int i) {
        Node& nd = nodes_[static_cast<std::size_t>(i)];
        nd.in_exchange = false;
        nd.backoff = -1;
        nd.ctrl_ok = false;
    }

    const Genome& g_;
    const Scenario& sc_;
    SimTrace* trace_;

    std::int64_t n_slots_ = 0;
    int num_nodes_ = 0;
    int sink_ = 0;
    bool ack_selected_ = false, rts_selected_ = false, cs_selected_ = false,
         backoff_selected_ = false;
    int rate_ = 54, payload_limit_ = 1500, cw_min_ = 15;
    int ack_dur_ = 2, rts_dur_ = 2, cts_dur_ = 2;
    double arrival_rate_ = 0.0;

    std::vector<Node> nodes_;
    std::vector<std::uint16_t> tx_count_;
    std::vector<std::vector<int>> end_at_;
    std::vector<std::vector<PendingCtrl>> ctrl_at_;
    std::vector<Tx> txs_;
    std::vector<std::pair<int, std::int64_t>> pending_nav_;
    std::int64_t idle_streak_ = 1'000'000;  // channel starts idle

    SimResult res_;
};

}  // namespace

SimResult run(const Genome& genome, const Scenario& scenario, const logic::RuleTable& rules,
              SimTrace* trace) {
    scenario.check();
    const auto rep = logic::validate(genome, rules);
    if (!rep.valid) {
        throw std::invalid_argument("sim::run called with invalid genome (" +
                                    rep.violations.front().rule_id + ": " +
                                    rep.violations.front().message + ")");
    }
    if (scenario.num_slots() <= 0) throw std::invalid_argument("sim::run: empty duration");
    Engine engine(genome, scenario, trace);
    return engine.finish();
}

}  // namespace macforge::sim
