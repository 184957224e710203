#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace macforge::blocks {

// The fixed 8-block catalog. Order is canonical: it defines genome
// coordinates, numeric encodings and the lexicographic tie-break used by
// the harness.
enum class BlockId : int {
    Backoff = 0,
    Ack = 1,
    Fragmentation = 2,
    Aggregation = 3,
    RtsCts = 4,
    ContentionWindow = 5,
    CarrierSense = 6,
    DataRate = 7,
};

inline constexpr int kNumBlocks = 8;

// Option counts per block: [3, 2, 4, 2, 2, 7, 2, 7].
inline constexpr std::array<int, kNumBlocks> kDomainSizes = {3, 2, 4, 2, 2, 7, 2, 7};

// ContentionWindow and DataRate are always-present parameter blocks; the
// rest are toggles whose option 0 means "excluded".
inline constexpr bool is_toggle_block(BlockId b) {
    return b != BlockId::ContentionWindow && b != BlockId::DataRate;
}

enum class BackoffMode : int { Off = 0, Beb = 1, Eied = 2 };

inline constexpr std::array<int, 4> kFragLimits = {1500, 200, 500, 1000};
inline constexpr std::array<int, 2> kAggLimits = {1500, 2000};
inline constexpr std::array<int, 7> kCwMinValues = {15, 31, 63, 127, 255, 511, 1023};
inline constexpr std::array<int, 7> kDataRatesMbps = {6, 9, 12, 24, 36, 48, 54};

const char* block_name(BlockId b);
const char* option_name(BlockId b, int option);

// One point in the block-configuration space: a fixed-length vector of
// option indices, one per block. This is both the RL state and the
// simulator's MAC specification.
struct Genome {
    std::array<std::uint8_t, kNumBlocks> opt{};

    int option(BlockId b) const { return opt[static_cast<int>(b)]; }
    void set_option(BlockId b, int o) { opt[static_cast<int>(b)] = static_cast<std::uint8_t>(o); }

    BackoffMode backoff() const { return static_cast<BackoffMode>(option(BlockId::Backoff)); }
    bool ack_enabled() const { return option(BlockId::Ack) == 1; }
    bool frag_enabled() const { return option(BlockId::Fragmentation) != 0; }
    int frag_limit_bytes() const { return kFragLimits[option(BlockId::Fragmentation)]; }
    bool agg_enabled() const { return option(BlockId::Aggregation) != 0; }
    int agg_limit_bytes() const { return kAggLimits[option(BlockId::Aggregation)]; }
    bool rts_enabled() const { return option(BlockId::RtsCts) == 1; }
    int cw_min() const { return kCwMinValues[option(BlockId::ContentionWindow)]; }
    bool cs_enabled() const { return option(BlockId::CarrierSense) == 1; }
    int data_rate_mbps() const { return kDataRatesMbps[option(BlockId::DataRate)]; }

    // Payload limit per frame: aggregation wins, then fragmentation, else 1500 B.
    int frame_payload_limit() const {
        if (agg_enabled()) return agg_limit_bytes();
        if (frag_enabled()) return frag_limit_bytes();
        return 1500;
    }

    bool operator==(const Genome&) const = default;
    // Lexicographic over the canonical coordinate order.
    auto operator<=>(const Genome&) const = default;
};

// Dense id in [0, genome_space_size()): mixed-radix over kDomainSizes.
std::uint32_t genome_id(const Genome& g);
Genome genome_from_id(std::uint32_t id);

// A catalog restriction: blocks outside the restriction are pinned at
// their defaults (toggles off, CW 15, 54 Mbps) and excluded from the
// search/action space.
struct Catalog {
    std::array<bool, kNumBlocks> free{};

    static Catalog full();
    static Catalog of(const std::vector<BlockId>& blocks);
    // Comma-separated block names, e.g. "ack,cs" or "ack,backoff,cw,cs,dr".
    static Catalog parse(const std::string& text);

    bool is_free(BlockId b) const { return free[static_cast<int>(b)]; }
    Genome pinned_base() const;
    std::string to_string() const;
};

std::uint64_t genome_space_size(const Catalog& catalog = Catalog::full());
std::vector<Genome> enumerate_genomes(const Catalog& catalog = Catalog::full());

// Numeric encoding: toggles encode 0 when excluded and their option index
// otherwise; CW and DataRate encode the 1-based option index.
std::array<int, kNumBlocks> encode(const Genome& g);
// Normalized per-coordinate form in (0, 1] for neural input.
std::array<double, kNumBlocks> encode_normalized(const Genome& g);
// Inverse of encode. Throws std::invalid_argument on wrong length or
// out-of-range coordinates (naming the offending block).
Genome decode(const std::vector<int>& v);

// All genomes differing from g in exactly one free coordinate.
std::vector<Genome> neighbors(const Genome& g, const Catalog& catalog = Catalog::full());

// Genome textual form for CLI/CSV: comma-separated canonical option
// names, e.g. "BEB,ACK,off,off,off,15,CS,54". Parsing is case-insensitive.
std::string to_string(const Genome& g);
Genome parse_genome(const std::string& text);

// How blocks depend on one another (uni-directional).
enum class DependencyKind { Strong, Weak, Conditional };

// The block tuple: events that trigger it, tunable parameters, internal
// state, its function, and dependencies on other blocks.
struct BlockSpec {
    BlockId id;
    std::vector<std::string> events;
    std::vector<std::string> params;
    std::vector<std::string> state;
    std::string function;
    std::vector<std::pair<BlockId, DependencyKind>> deps;
};

BlockSpec block_spec(BlockId b);
inline BlockSpec backoff_block_spec() { return block_spec(BlockId::Backoff); }

}  // namespace macforge::blocks
