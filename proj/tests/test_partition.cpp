#include "ks/catalog.hpp"
#include "ks/errors.hpp"
#include "ks/partition.hpp"

#include <doctest.h>

using namespace ks;

namespace {

std::vector<CompactLine> families() {
    return {make_finite({0, 1, 2, 5}), make_timescale({{0, 1}, {2, 2}, {3, 4}}), make_ordinal({0, 0, 1}),
            make_lex(make_interval(0, 1), make_finite({0, 1})), make_double_arrow(make_interval(0, 1), SubsetDescriptor{})};
}

} // namespace

TEST_CASE("cousin partitions are fine and cover the line") {
    for (const auto& K : families()) {
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            Gauge g = random_gauge(K, seed, 0.02, 0.3);
            TaggedPartition P = cousin_partition(K, g);
            CHECK(is_fine(K, P, g));
            validate_partition(K, P, K->min(), K->max());
            REQUIRE_FALSE(P.parts.empty());
            CHECK(P.parts.front().lo == K->min());
            CHECK(P.parts.back().hi == K->max());
            for (std::size_t i = 0; i + 1 < P.parts.size(); ++i) CHECK(P.parts[i].hi == P.parts[i + 1].lo);
        }
    }
}

TEST_CASE("uniform gauge on [0,1] needs about 1/r cells") {
    auto K = make_interval(0, 1);
    Gauge g = uniform_gauge(K, 0.125);
    TaggedPartition P = cousin_partition(K, g);
    CHECK(is_fine(K, P, g));
    CHECK(P.parts.size() >= 4);
    CHECK(P.parts.size() <= 64);
}

TEST_CASE("exposing points makes them tags") {
    auto K = make_interval(0, 1);
    std::vector<Point> C{real_pt(1, 3), real_pt(1, 2)};
    Gauge g = refine_and_expose(K, uniform_gauge(K, 0.25), std::nullopt, C);
    TaggedPartition P = cousin_partition(K, g);
    CHECK(is_fine(K, P, g));
    for (const auto& c : C) {
        bool tagged = false;
        for (const auto& part : P.parts) tagged = tagged || part.tag == c;
        CHECK(tagged);
    }
}

TEST_CASE("a non-fine partition is caught") {
    auto K = make_interval(0, 1);
    Gauge g = uniform_gauge(K, 0.1);
    std::vector<Component> coarse{{real_pt(0), real_pt(1), real_pt(1, 2)}};
    CHECK_FALSE(is_fine(K, coarse, g));
}

TEST_CASE("partition validation rejects gaps and misplaced tags") {
    auto K = make_interval(0, 1);
    TaggedPartition gap{{{real_pt(0), real_pt(1, 3), real_pt(0)}, {real_pt(1, 2), real_pt(1), real_pt(1)}}};
    CHECK_THROWS_AS(validate_partition(K, gap, K->min(), K->max()), Error);
    TaggedPartition tag{{{real_pt(0), real_pt(1, 2), real_pt(3, 4)}, {real_pt(1, 2), real_pt(1), real_pt(1)}}};
    CHECK_THROWS_AS(validate_partition(K, tag, K->min(), K->max()), Error);
}

TEST_CASE("partitions on sub-intervals merge") {
    auto K = make_interval(0, 1);
    Gauge g = uniform_gauge(K, 0.2);
    CousinOptions left, right;
    left.lo = real_pt(0);
    left.hi = real_pt(1, 2);
    right.lo = real_pt(1, 2);
    right.hi = real_pt(1);
    TaggedPartition M = merge_partitions({cousin_partition(K, g, left), cousin_partition(K, g, right)});
    CHECK(is_fine(K, M, g));
    validate_partition(K, M, K->min(), K->max());
}

TEST_CASE("an ordinal partition reaches w in one step") {
    auto K = make_ordinal({0, 1});
    Gauge g = uniform_gauge(K, 0.1);
    TaggedPartition P = cousin_partition(K, g);
    CHECK(is_fine(K, P, g));
    CHECK(P.parts.back().tag == ord_pt("w"));
    CHECK(P.parts.size() < 64);
}
