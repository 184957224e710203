#include <doctest.h>

#include <cmath>

#include "macforge/rng.hpp"

using namespace macforge;

TEST_CASE("draws are pure functions of (seed, stream, index)") {
    const auto a = rng::draw_u64(42, rng::stream_id(rng::StreamKind::Arrival, 3), 17);
    const auto b = rng::draw_u64(42, rng::stream_id(rng::StreamKind::Arrival, 3), 17);
    CHECK(a == b);
    CHECK(a != rng::draw_u64(42, rng::stream_id(rng::StreamKind::Arrival, 3), 18));
    CHECK(a != rng::draw_u64(42, rng::stream_id(rng::StreamKind::Arrival, 4), 17));
    CHECK(a != rng::draw_u64(43, rng::stream_id(rng::StreamKind::Arrival, 3), 17));
    CHECK(a != rng::draw_u64(42, rng::stream_id(rng::StreamKind::Backoff, 3), 17));
}

TEST_CASE("stream counter advances and random access agrees") {
    rng::Stream s(7, rng::StreamKind::Channel);
    const double first = s.at_unit(0);
    CHECK(s.next_unit() == first);
    CHECK(s.counter() == 1);
    for (int i = 0; i < 100; ++i) {
        const double u = s.next_unit();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
}

TEST_CASE("units look uniform") {
    rng::Stream s(123, rng::StreamKind::Sample);
    const int n = 200000;
    double sum = 0.0, sumsq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double u = s.next_unit();
        sum += u;
        sumsq += u * u;
    }
    const double mean = sum / n;
    const double var = sumsq / n - mean * mean;
    CHECK(std::fabs(mean - 0.5) < 0.005);
    CHECK(std::fabs(var - 1.0 / 12.0) < 0.005);
}
