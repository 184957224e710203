#include "macforge/blocks.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <stdexcept>

namespace macforge::blocks {

namespace {

const std::array<const char*, kNumBlocks> kBlockNames = {
    "backoff", "ack", "frag", "agg", "rts", "cw", "cs", "dr"};

const std::array<std::vector<const char*>, kNumBlocks> kOptionNames = {{
    {"off", "BEB", "EIED"},
    {"noack", "ACK"},
    {"off", "200", "500", "1000"},
    {"off", "2000"},
    {"off", "RTS"},
    {"15", "31", "63", "127", "255", "511", "1023"},
    {"off", "CS"},
    {"6", "9", "12", "24", "36", "48", "54"},
}};

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::vector<std::string> split_commas(const std::string& text) {
    std::vector<std::string> out;
    std::string tok;
    std::stringstream ss(text);
    while (std::getline(ss, tok, ',')) {
        // trim
        auto b = tok.find_first_not_of(" \t");
        auto e = tok.find_last_not_of(" \t");
        out.push_back(b == std::string::npos ? std::string() : tok.substr(b, e - b + 1));
    }
    return out;
}

}  // namespace

const char* block_name(BlockId b) { return kBlockNames[static_cast<int>(b)]; }

const char* option_name(BlockId b, int option) {
    return kOptionNames[static_cast<int>(b)][static_cast<std::size_t>(option)];
}

std::uint32_t genome_id(const Genome& g) {
    std::uint32_t id = 0;
    for (int i = 0; i < kNumBlocks; ++i) id = id * kDomainSizes[i] + g.opt[i];
    return id;
}

Genome genome_from_id(std::uint32_t id) {
    Genome g;
    for (int i = kNumBlocks - 1; i >= 0; --i) {
        g.opt[i] = static_cast<std::uint8_t>(id % kDomainSizes[i]);
        id /= kDomainSizes[i];
    }
    return g;
}

Catalog Catalog::full() {
    Catalog c;
    c.free.fill(true);
    return c;
}

Catalog Catalog::of(const std::vector<BlockId>& ids) {
    Catalog c;
    for (BlockId b : ids) c.free[static_cast<int>(b)] = true;
    return c;
}

Catalog Catalog::parse(const std::string& text) {
    if (lower(text) == "full" || text.empty()) return full();
    Catalog c;
    for (const std::string& raw : split_commas(text)) {
        const std::string t = lower(raw);
        int idx = -1;
        if (t == "backoff") idx = 0;
        else if (t == "ack") idx = 1;
        else if (t == "frag" || t == "fragmentation") idx = 2;
        else if (t == "agg" || t == "aggregation") idx = 3;
        else if (t == "rts" || t == "rtscts") idx = 4;
        else if (t == "cw" || t == "contentionwindow") idx = 5;
        else if (t == "cs" || t == "carriersense") idx = 6;
        else if (t == "dr" || t == "datarate" || t == "rate") idx = 7;
        else throw std::invalid_argument("unknown block name in catalog: '" + raw + "'");
        c.free[idx] = true;
    }
    return c;
}

Genome Catalog::pinned_base() const {
    Genome g;  // toggles off / noack
    g.set_option(BlockId::ContentionWindow, 0);               // CW 15
    g.set_option(BlockId::DataRate, kDomainSizes[7] - 1);     // 54 Mbps
    return g;
}

std::string Catalog::to_string() const {
    std::string out;
    for (int i = 0; i < kNumBlocks; ++i) {
        if (!free[i]) continue;
        if (!out.empty()) out += ',';
        out += kBlockNames[i];
    }
    return out.empty() ? "(none)" : out;
}

std::uint64_t genome_space_size(const Catalog& catalog) {
    std::uint64_t n = 1;
    for (int i = 0; i < kNumBlocks; ++i)
        if (catalog.free[i]) n *= kDomainSizes[i];
    return n;
}

std::vector<Genome> enumerate_genomes(const Catalog& catalog) {
    std::vector<Genome> out;
    out.reserve(genome_space_size(catalog));
    Genome g = catalog.pinned_base();
    // Odometer over free coordinates.
    std::vector<int> free_idx;
    for (int i = 0; i < kNumBlocks; ++i)
        if (catalog.free[i]) free_idx.push_back(i);
    for (int i : free_idx) g.opt[i] = 0;
    while (true) {
        out.push_back(g);
        int k = static_cast<int>(free_idx.size()) - 1;
        for (; k >= 0; --k) {
            int i = free_idx[k];
            if (g.opt[i] + 1 < kDomainSizes[i]) {
                ++g.opt[i];
                break;
            }
            g.opt[i] = 0;
        }
        if (k < 0) break;
    }
    return out;
}

std::array<int, kNumBlocks> encode(const Genome& g) {
    std::array<int, kNumBlocks> v{};
    for (int i = 0; i < kNumBlocks; ++i) {
        const auto b = static_cast<BlockId>(i);
        v[i] = is_toggle_block(b) ? g.opt[i] : g.opt[i] + 1;
    }
    return v;
}

std::array<double, kNumBlocks> encode_normalized(const Genome& g) {
    std::array<double, kNumBlocks> v{};
    for (int i = 0; i < kNumBlocks; ++i)
        v[i] = static_cast<double>(g.opt[i] + 1) / kDomainSizes[i];
    return v;
}

Genome decode(const std::vector<int>& v) {
    if (v.size() != kNumBlocks) {
        throw std::invalid_argument("malformed encoding vector: expected 8 coordinates, got " +
                                    std::to_string(v.size()));
    }
    Genome g;
    for (int i = 0; i < kNumBlocks; ++i) {
        const auto b = static_cast<BlockId>(i);
        const int lo = is_toggle_block(b) ? 0 : 1;
        const int hi = is_toggle_block(b) ? kDomainSizes[i] - 1 : kDomainSizes[i];
        if (v[i] < lo || v[i] > hi) {
            throw std::invalid_argument(std::string("coordinate out of range for block '") +
                                        kBlockNames[i] + "': " + std::to_string(v[i]));
        }
        g.opt[i] = static_cast<std::uint8_t>(is_toggle_block(b) ? v[i] : v[i] - 1);
    }
    return g;
}

std::vector<Genome> neighbors(const Genome& g, const Catalog& catalog) {
    std::vector<Genome> out;
    for (int i = 0; i < kNumBlocks; ++i) {
        if (!catalog.free[i]) continue;
        for (int o = 0; o < kDomainSizes[i]; ++o) {
            if (o == g.opt[i]) continue;
            Genome n = g;
            n.opt[i] = static_cast<std::uint8_t>(o);
            out.push_back(n);
        }
    }
    return out;
}

std::string to_string(const Genome& g) {
    std::string out;
    for (int i = 0; i < kNumBlocks; ++i) {
        if (i) out += ',';
        out += kOptionNames[i][g.opt[i]];
    }
    return out;
}

Genome parse_genome(const std::string& text) {
    const std::vector<std::string> toks = split_commas(text);
    if (toks.size() != kNumBlocks) {
        throw std::invalid_argument("genome string must have 8 comma-separated settings, got " +
                                    std::to_string(toks.size()));
    }
    Genome g;
    for (int i = 0; i < kNumBlocks; ++i) {
        const std::string t = lower(toks[i]);
        int found = -1;
        for (int o = 0; o < kDomainSizes[i]; ++o) {
            if (t == lower(kOptionNames[i][o])) {
                found = o;
                break;
            }
        }
        // "on" accepted for the plain toggles.
        if (found < 0 && t == "on" &&
            (i == static_cast<int>(BlockId::RtsCts) || i == static_cast<int>(BlockId::CarrierSense)))
            found = 1;
        if (found < 0) {
            throw std::invalid_argument(std::string("unknown setting '") + toks[i] +
                                        "' for block '" + kBlockNames[i] + "'");
        }
        g.opt[i] = static_cast<std::uint8_t>(found);
    }
    return g;
}

BlockSpec block_spec(BlockId b) {
    switch (b) {
        case BlockId::Backoff:
            return {b, {"ACK_timeout"}, {"CW"}, {"Freeze", "Countdown"}, "BEB",
                    {{BlockId::Ack, DependencyKind::Strong}}};
        case BlockId::Ack:
            return {b, {"data_frame_received"}, {"ack_timeout_interval"}, {"AwaitingAck"},
                    "ACK", {}};
        case BlockId::Fragmentation:
            return {b, {"frame_ready"}, {"fragment_limit"}, {"FragmentOffset"}, "Fragment", {}};
        case BlockId::Aggregation:
            return {b, {"frame_ready"}, {"aggregate_limit"}, {"PendingQueue"}, "Aggregate", {}};
        case BlockId::RtsCts:
            return {b, {"frame_ready"}, {"rts_threshold"}, {"AwaitingCts"}, "RTS/CTS",
                    {{BlockId::Ack, DependencyKind::Strong},
                     {BlockId::CarrierSense, DependencyKind::Conditional}}};
        case BlockId::ContentionWindow:
            return {b, {}, {"CW_min"}, {}, "ContentionWindow",
                    {{BlockId::Backoff, DependencyKind::Conditional}}};
        case BlockId::CarrierSense:
            return {b, {"medium_state_change"}, {"DIFS"}, {"Idle", "Busy"}, "CarrierSense", {}};
        case BlockId::DataRate:
            return {b, {}, {"rate_mbps"}, {}, "DataRate", {}};
    }
    throw std::logic_error("unreachable");
}

}  // namespace macforge::blocks
