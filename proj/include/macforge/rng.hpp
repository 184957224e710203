#pragma once

#include <cstdint>

// Counter-based random streams. Every draw is a pure function of
// (seed, stream id, draw index), so determinism does not depend on the
// order in which simulation events are processed.
namespace macforge::rng {

inline std::uint64_t mix64(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebULL;
    x ^= x >> 31;
    return x;
}

// Purpose tags keep per-node streams from aliasing each other.
enum class StreamKind : std::uint64_t {
    Arrival = 1,
    Backoff = 2,
    Channel = 3,
    AlohaDelay = 4,
    Agent = 5,
    Init = 6,
    Sample = 7,
};

inline std::uint64_t stream_id(StreamKind kind, std::uint64_t sub = 0) {
    return (static_cast<std::uint64_t>(kind) << 32) | sub;
}

inline std::uint64_t draw_u64(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
    const std::uint64_t base = mix64(seed ^ mix64(stream + 0x9e3779b97f4a7c15ULL));
    return mix64(base + 0x9e3779b97f4a7c15ULL * (index + 1));
}

inline double draw_unit(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
    return static_cast<double>(draw_u64(seed, stream, index) >> 11) * 0x1.0p-53;
}

// Convenience wrapper owning a monotone draw counter.
class Stream {
public:
    Stream() = default;
    Stream(std::uint64_t seed, StreamKind kind, std::uint64_t sub = 0)
        : seed_(seed), stream_(stream_id(kind, sub)) {}

    std::uint64_t next_u64() { return draw_u64(seed_, stream_, counter_++); }
    double next_unit() { return draw_unit(seed_, stream_, counter_++); }

    // Uniform integer in [0, bound], bias-free enough for bounds <= 2^32.
    std::uint64_t next_below(std::uint64_t bound_inclusive) {
        return next_u64() % (bound_inclusive + 1);
    }

    std::uint64_t at_u64(std::uint64_t index) const { return draw_u64(seed_, stream_, index); }
    double at_unit(std::uint64_t index) const { return draw_unit(seed_, stream_, index); }

    std::uint64_t counter() const { return counter_; }

private:
    std::uint64_t seed_ = 0;
    std::uint64_t stream_ = 0;
    std::uint64_t counter_ = 0;
};

}  // namespace macforge::rng
