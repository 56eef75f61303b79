#include "ks/catalog.hpp"
#include "ks/errors.hpp"
#include "ks/line.hpp"

#include <doctest.h>

using namespace ks;

namespace {

PointClass cls(const CompactLine& K, const Point& x) { return classify(K, x); }

} // namespace

TEST_CASE("rationals parse exactly") {
    CHECK(parse_rational("1/3") == Rational(1, 3));
    CHECK(parse_rational("-2/4") == Rational(-1, 2));
    CHECK(parse_rational("0.25") == Rational(1, 4));
    CHECK(from_double(0.1) != Rational(1, 10)); // binary64 is not decimal
    CHECK_THROWS_AS(parse_rational("1/0"), Error);
    CHECK_THROWS_AS(parse_rational("abc"), Error);
}

TEST_CASE("ordinal text round trips through Cantor normal form") {
    for (const char* s : {"0", "7", "w", "w+1", "w*2+3", "w^2", "w^2*2+w+5"}) CHECK(format_ordinal(parse_ordinal(s)) == s);
    CHECK(parse_ordinal("w*2+3") == std::vector<std::uint64_t>{3, 2});
    CHECK(ord_pt("w+1") > ord_pt("w"));
    CHECK(ord_pt("w^2") > ord_pt("w*100+100"));
}

TEST_CASE("time scale points") {
    auto T = make_timescale({{0, 1}, {2, 2}, {3, 4}});
    CHECK(cls(T, real_pt(1, 2)).left_dense);
    CHECK(cls(T, real_pt(1, 2)).right_dense);
    auto one = cls(T, real_pt(1));
    CHECK(one.left_dense);
    CHECK_FALSE(one.right_dense);
    CHECK(to_string(*one.successor) == "2");
    auto two = cls(T, real_pt(2));
    CHECK(two.left_isolated());
    CHECK(two.right_isolated());
    CHECK(to_string(*two.predecessor) == "1");
    auto three = cls(T, real_pt(3));
    CHECK(three.left_isolated());
    CHECK(three.right_dense);
    CHECK_FALSE(T->contains(real_pt(3, 2)));
    CHECK_THROWS_AS(require_member(T, real_pt(5, 2)), Error);
}

TEST_CASE("finite lines are isolated everywhere") {
    auto D = make_finite({Rational(0), Rational(1, 2), Rational(3)});
    for (const auto& x : {real_pt(0), real_pt(1, 2), real_pt(3)}) {
        auto c = cls(D, x);
        CHECK(c.left_isolated());
        CHECK(c.right_isolated());
    }
    CHECK(to_string(*cls(D, real_pt(1, 2)).successor) == "3");
    CHECK_FALSE(cls(D, real_pt(0)).predecessor);
}

TEST_CASE("ordinal points: limits are left-dense, all points right-isolated") {
    auto K = make_ordinal({0, 0, 1});
    CHECK(cls(K, ord_pt("w")).left_dense);
    CHECK(cls(K, ord_pt("w^2")).left_dense);
    CHECK(cls(K, ord_pt("w*2")).left_dense);
    CHECK(to_string(*cls(K, ord_pt("w*2+3")).predecessor) == "w*2+2");
    CHECK(to_string(*cls(K, ord_pt("w")).successor) == "w+1");
    CHECK_FALSE(cls(K, ord_pt("w^2")).successor);
    CHECK_FALSE(K->contains(ord_pt("w^2+1")));
    // approach sequences stay below the target and climb
    Point prev = K->approach(ord_pt("w^2"), true, 1);
    for (int k = 2; k < 6; ++k) {
        Point p = K->approach(ord_pt("w^2"), true, k);
        CHECK(p < ord_pt("w^2"));
        CHECK(prev < p);
        prev = p;
    }
}

TEST_CASE("lexicographic square [0,1] x {0,1}") {
    auto L = make_lex(make_interval(0, 1), make_finite({0, 1}));
    Point lo = Point::pair(real_pt(1, 2), real_pt(0)), hi = Point::pair(real_pt(1, 2), real_pt(1));
    CHECK(lo < hi);
    CHECK(Point::pair(real_pt(1, 3), real_pt(1)) < lo);
    auto a = cls(L, lo), b = cls(L, hi);
    CHECK(a.left_dense);
    CHECK_FALSE(a.right_dense);
    CHECK(*a.successor == hi);
    CHECK(b.left_isolated());
    CHECK(b.right_dense);
    CHECK(L->min() == Point::pair(real_pt(0), real_pt(0)));
    CHECK(L->max() == Point::pair(real_pt(1), real_pt(1)));
}

TEST_CASE("double arrow doubles exactly the subset points") {
    SubsetDescriptor s;
    s.kind = SubsetDescriptor::Kind::Points;
    s.points = {real_pt(1, 2)};
    auto D = make_double_arrow(make_interval(0, 1), s);
    auto low = cls(D, Point::arrow(real_pt(1, 2), 0));
    CHECK(low.left_dense);
    CHECK(*low.successor == Point::arrow(real_pt(1, 2), 1));
    auto other = cls(D, Point::arrow(real_pt(1, 3), 0));
    CHECK(other.left_dense);
    CHECK(other.right_dense);
    CHECK_FALSE(D->contains(Point::arrow(real_pt(1, 3), 1)));
    auto W = make_double_arrow(make_interval(0, 1), SubsetDescriptor{});
    CHECK(cls(W, W->min()).right_isolated());
    CHECK(cls(W, W->max()).left_isolated());
}

TEST_CASE("interval algebra") {
    auto K = make_interval(0, 1);
    auto A = IntervalSpec::closed(real_pt(0), real_pt(1, 2));
    auto B = IntervalSpec::left_open(real_pt(1, 2), real_pt(1));
    CHECK_FALSE(intersects(K, A, B));
    CHECK(is_empty(K, intersect(K, A, B)));
    auto H = hull(K, A, B);
    CHECK(H.lower == real_pt(0));
    CHECK(H.upper == real_pt(1));
    CHECK(is_subset(K, A, H));
    CHECK(contains(K, A, real_pt(1, 2)));
    CHECK_FALSE(contains(K, B, real_pt(1, 2)));
    CHECK(is_empty(K, IntervalSpec::left_open(real_pt(1, 2), real_pt(1, 2))));
    CHECK(is_open_set(K, IntervalSpec::right_open(real_pt(0), real_pt(1, 2))));
    CHECK_FALSE(is_open_set(K, IntervalSpec::closed(real_pt(1, 4), real_pt(1, 2))));
}

TEST_CASE("open intervals between isolated points hold the inner points only") {
    auto D = make_finite({0, 1, 2, 3});
    auto C = canonicalize(D, IntervalSpec::open(real_pt(0), real_pt(3)));
    auto E = IntervalSpec::closed(real_pt(1), real_pt(2));
    CHECK(is_subset(D, C, E));
    CHECK(is_subset(D, E, C));
    CHECK_FALSE(contains(D, C, real_pt(0)));
    CHECK(contains(D, C, real_pt(1)));
    CHECK(contains(D, C, real_pt(2)));
    CHECK_FALSE(contains(D, C, real_pt(3)));
    // on a finite line every interval is open
    CHECK(is_open_set(D, E));
}

TEST_CASE("samples lie in the line") {
    std::mt19937_64 rng(3);
    for (const auto& K : {make_timescale({{0, 1}, {2, 2}}), make_ordinal({0, 0, 1}), make_lex(make_interval(0, 1), make_finite({0, 1})),
                          make_double_arrow(make_interval(0, 1), SubsetDescriptor{})})
        for (const auto& x : K->sample(rng, 64)) CHECK(K->contains(x));
}
