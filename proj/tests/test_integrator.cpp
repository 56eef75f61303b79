#include "ks/catalog.hpp"
#include "ks/errors.hpp"
#include "ks/integrator.hpp"

#include <doctest.h>

using namespace ks;

namespace {

// x below 1/2, 3/2 at 1/2, x + 1 above
LineFunction jumpy() { return pieces_fn({Rational(1, 2)}, {1.5}, {{0, 1}, {1, 1}}); }

} // namespace

TEST_CASE("left and right limits at a jump") {
    auto K = make_interval(0, 1);
    LineFunction g = jumpy();
    CHECK(left_limit(K, g, real_pt(1, 2)) == doctest::Approx(0.5));
    CHECK(right_limit(K, g, real_pt(1, 2)) == doctest::Approx(1.5));
    CHECK(g(real_pt(1, 2)) == 1.5);
    CHECK(left_limit(K, g, real_pt(1, 4)) == doctest::Approx(0.25));
}

TEST_CASE("left limits at isolated points are the predecessor value") {
    auto D = make_finite({0, 1, 2});
    LineFunction g = poly_fn({0, 0, 1});
    CHECK(left_limit(D, g, real_pt(2)) == 1);
    auto W = make_ordinal({0, 1});
    LineFunction s = series_fn(geometric(0.5), true, 5.0);
    CHECK(left_limit(W, s, ord_pt("w")) == doctest::Approx(2.0));
    CHECK(s(ord_pt("w")) == 5.0);
}

TEST_CASE("total variation") {
    auto K = make_interval(0, 1);
    // x^2 - x drops by 1/4 then climbs back
    CHECK(total_variation(K, poly_fn({0, -1, 1})).value == doctest::Approx(0.5));
    CHECK(total_variation(K, jumpy()).value == doctest::Approx(2.0));
    CHECK(total_variation(K, jumpy(), real_pt(0), real_pt(1, 4)).value == doctest::Approx(0.25));
    auto T = make_timescale({{0, 1}, {2, 2}});
    // the gap contributes |G(2) - G(1)|
    CHECK(total_variation(T, poly_fn({0, 0, 1})).value == doctest::Approx(4.0));
    auto W = make_ordinal({0, 1});
    CHECK(total_variation(W, series_fn(alt_harmonic(), true)).divergent);
    // |a_1| + |a_2| + ... = 1; G(0) = a_0 is not variation
    CHECK(total_variation(W, series_fn(geometric(-0.5), true)).value == doctest::Approx(1.0));
}

TEST_CASE("mu of intervals follows the cut convention") {
    auto K = make_interval(0, 1);
    Integrator G = make_integrator(K, jumpy(), Regularity::NondecreasingAmenable);
    CHECK(mu_interval(K, G, IntervalSpec::right_open(real_pt(0), real_pt(1, 2))) == doctest::Approx(0.5));
    CHECK(mu_interval(K, G, singleton(K, real_pt(1, 2))) == doctest::Approx(1.0));
    CHECK(mu_interval(K, G, IntervalSpec::left_open(real_pt(1, 2), real_pt(1))) == doctest::Approx(0.5));
    CHECK(mu_interval(K, G, whole_line(K)) == doctest::Approx(2.0));
    CHECK(mu_interval(K, G, singleton(K, real_pt(1, 3))) == 0);
}

TEST_CASE("declared regularity is checked") {
    auto K = make_interval(0, 1);
    CHECK_THROWS_AS(make_integrator(K, poly_fn({1, -1}), Regularity::NondecreasingAmenable), Error);
    CHECK_NOTHROW(make_integrator(K, poly_fn({1, -1}), Regularity::NBV));
    auto W = make_ordinal({0, 1});
    CHECK_THROWS_AS(make_integrator(W, series_fn(alt_harmonic(), true), Regularity::NBV), Error);
}

TEST_CASE("outer measure bounds") {
    auto K = make_interval(0, 1);
    Integrator G = make_integrator(K, jumpy(), Regularity::NondecreasingAmenable);
    CHECK(outer_measure_bound(K, G, PointSet{{real_pt(1, 2)}, {}}) == doctest::Approx(1.0));
    CHECK(outer_measure_bound(K, G, PointSet{{real_pt(1, 3), real_pt(3, 4)}, {}}) == 0);
    CHECK(outer_measure_bound(K, G, PointSet{{}, {IntervalSpec::closed(real_pt(0), real_pt(1, 4))}}) == doctest::Approx(0.25));
}

TEST_CASE("sup of |f|") {
    auto K = make_interval(-1, 2);
    CHECK(sup_abs(K, poly_fn({0, -1, 1}), real_pt(-1), real_pt(2)) == doctest::Approx(2.0));
    CHECK(sup_abs(K, poly_fn({0, -1, 1}), real_pt(0), real_pt(1)) == doctest::Approx(0.25));
}
