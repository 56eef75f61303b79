#include "ks/bridges.hpp"
#include "ks/catalog.hpp"
#include "ks/errors.hpp"

#include <doctest.h>

#include <cmath>

using namespace ks;

TEST_CASE("backward jump") {
    auto T = make_timescale({{0, 1}, {2, 2}, {3, 4}});
    CHECK(backward_jump(T, real_pt(2)) == real_pt(1));
    CHECK(backward_jump(T, real_pt(3)) == real_pt(2));
    CHECK(backward_jump(T, real_pt(1, 2)) == real_pt(1, 2));
    CHECK(backward_jump(T, real_pt(0)) == real_pt(0));
}

TEST_CASE("nabla on a finite line") {
    auto D = make_finite({0, 1, 2});
    Integrator G = make_integrator(D, poly_fn({0, 1}), Regularity::Amenable);
    NablaResult n = nabla_integrate(D, Integrand{poly_fn({0, 0, 1}), true}, G);
    CHECK(n.nabla.value == doctest::Approx(5));
    CHECK(n.ks.value == doctest::Approx(5));
    CHECK(n.defect <= 1e-12);
}

TEST_CASE("nabla keeps G(a) out of the integral") {
    auto K = make_interval(0, 1);
    Integrator G = make_integrator(K, poly_fn({1, 1}), Regularity::Amenable);
    NablaResult n = nabla_integrate(K, Integrand{constant_function(1), true}, G);
    CHECK(n.nabla.value == doctest::Approx(1).epsilon(1e-9));
    CHECK(n.ks.value == doctest::Approx(2).epsilon(1e-12));
    CHECK(n.defect <= 1e-9);
}

TEST_CASE("nabla on a mixed time scale") {
    auto T = make_timescale({{0, 1}, {2, 2}});
    Integrator G = make_integrator(T, poly_fn({2, 1}), Regularity::Amenable);
    // ks: f(0)G(0) = 2, int_0^1 (1+x) dx = 3/2, f(2)(G(2) - G(1)) = 3
    NablaResult n = nabla_integrate(T, Integrand{poly_fn({1, 1}), true}, G);
    CHECK(n.ks.value == doctest::Approx(6.5).epsilon(1e-12));
    CHECK(n.nabla.value == doctest::Approx(4.5).epsilon(1e-9));
    CHECK(n.defect <= 1e-9);
}

TEST_CASE("nabla gauges are gamma-fine on the partitions they produce") {
    auto T = make_timescale({{0, 1}, {2, 2}, {3, 4}});
    Integrator G = make_integrator(T, poly_fn({1, 0, 1}), Regularity::Amenable);
    NablaResult n = nabla_integrate(T, Integrand{poly_fn({0, 0, 0, 1}), true}, G);
    CHECK(n.ks.value == doctest::Approx(471.8).epsilon(1e-12));
    CHECK(n.defect <= 1e-9);
}

TEST_CASE("simple functions: KS integral equals the measure sum") {
    auto K = make_interval(0, 1);
    Integrator G = make_integrator(K, pieces_fn({Rational(1, 2)}, {2}, {{0, 2}, {1, 2}}), Regularity::NondecreasingAmenable);
    SimpleFunction phi{{{2, {IntervalSpec::right_open(real_pt(0), real_pt(1, 2))}},
                        {3, {singleton(K, real_pt(1, 2))}},
                        {-1, {IntervalSpec::left_open(real_pt(1, 2), real_pt(1))}}}};
    SimpleIntegral s = simple_function_integral(K, phi, G);
    // mu[0,1/2) = 1, mu{1/2} = 1, mu(1/2,1] = 1
    CHECK(s.measure_value == doctest::Approx(4));
    CHECK(s.ks_value == doctest::Approx(4).epsilon(1e-12));
    CHECK(s.defect <= 1e-12);
    SimpleFunction zero{{{5, {singleton(K, real_pt(0))}}}};
    CHECK(simple_function_integral(K, zero, G).defect <= 1e-12);
}

TEST_CASE("overlapping sets are refused") {
    auto K = make_interval(0, 1);
    Integrator G = make_integrator(K, poly_fn({0, 1}), Regularity::NondecreasingAmenable);
    SimpleFunction phi{{{1, {IntervalSpec::closed(real_pt(0), real_pt(1, 2))}}, {1, {IntervalSpec::closed(real_pt(1, 2), real_pt(1))}}}};
    CHECK_THROWS_AS(simple_function_integral(K, phi, G), Error);
}

TEST_CASE("convergence theorems on x^m") {
    auto K = make_interval(0, 1);
    Integrator G = make_integrator(K, poly_fn({0, 1}), Regularity::NondecreasingAmenable);
    ConvergenceProblem mct;
    mct.mode = ConvergenceMode::MCT;
    mct.family = [](int m) {
        std::vector<double> c(static_cast<std::size_t>(m) + 1, 0.0);
        c[0] = 1;
        c[m] = -1;
        return Integrand{poly_fn(c), true};
    };
    mct.limit = Integrand{indicator(K, {IntervalSpec::right_open(real_pt(0), real_pt(1))}), false};
    ConvergenceReport r = convergence_harness(K, G, mct);
    CHECK(r.limit_integral == doctest::Approx(1).epsilon(1e-12));
    CHECK(r.defect <= 1e-6);

    ConvergenceProblem dct;
    dct.mode = ConvergenceMode::DCT;
    dct.family = [](int m) {
        std::vector<double> c(static_cast<std::size_t>(m) + 1, 0.0);
        c[m] = 1;
        return Integrand{poly_fn(c), true};
    };
    dct.limit = Integrand{indicator(K, {singleton(K, real_pt(1))}), false};
    dct.lower = constant_function(0);
    dct.upper = constant_function(1);
    ConvergenceReport d = convergence_harness(K, G, dct);
    CHECK(std::abs(d.limit_integral) <= 1e-12);
    CHECK(d.defect <= 1e-6);

    ConvergenceProblem fatou = dct;
    fatou.mode = ConvergenceMode::Fatou;
    CHECK(convergence_harness(K, G, fatou).inequality_holds);
}

TEST_CASE("a family that breaks monotonicity is rejected") {
    auto K = make_interval(0, 1);
    Integrator G = make_integrator(K, poly_fn({0, 1}), Regularity::NondecreasingAmenable);
    ConvergenceProblem bad;
    bad.mode = ConvergenceMode::MCT;
    bad.family = [](int m) { return Integrand{constant_function(m % 2 ? 1.0 : 0.0), true}; };
    bad.limit = Integrand{constant_function(1), true};
    CHECK_THROWS_AS(convergence_harness(K, G, bad), Error);
}

TEST_CASE("Vitali selection") {
    auto K = make_interval(0, 1);
    Integrator G = make_integrator(K, poly_fn({0, 1}), Regularity::NondecreasingAmenable);
    std::vector<IntervalSpec> F{IntervalSpec::closed(real_pt(0), real_pt(1, 2)), IntervalSpec::closed(real_pt(1, 4), real_pt(3, 8)),
                                IntervalSpec::closed(real_pt(3, 8), real_pt(1)), IntervalSpec::closed(real_pt(7, 8), real_pt(1))};
    VitaliSelection s = vitali_select(K, G, F);
    REQUIRE_FALSE(s.selected.empty());
    for (std::size_t i = 0; i < s.selected.size(); ++i)
        for (std::size_t j = i + 1; j < s.selected.size(); ++j) CHECK_FALSE(intersects(K, F[s.selected[i]], F[s.selected[j]]));
    for (std::size_t k = 0; k < s.selected.size(); ++k)
        CHECK(mu_interval(K, G, s.hulls[k]) <= 5 * s.measures[s.selected[k]] + 1e-12);
    // the largest member goes first
    CHECK(s.selected[0] == 2);
}

TEST_CASE("admissibility and finite covers") {
    auto K = make_interval(0, 1);
    Integrator G = make_integrator(K, pieces_fn({Rational(1, 3)}, {1.0 / 3 + 1}, {{0, 1}, {1, 1}}), Regularity::NondecreasingAmenable);
    std::vector<IntervalSpec> F{IntervalSpec::closed(real_pt(1, 4), real_pt(1, 2)), IntervalSpec::closed(real_pt(1, 3), real_pt(1, 3)),
                                IntervalSpec::closed(real_pt(3, 10), real_pt(9, 25))};
    std::vector<Point> A{real_pt(1, 3)};
    CHECK_FALSE(admissibility_witness(K, A, F));
    VitaliCover c = vitali_cover_finite(K, G, A, F, 0.1);
    CHECK(c.defect < 0.1);
    // a point no member contains cannot be covered
    auto w = admissibility_witness(K, {real_pt(3, 4)}, F);
    REQUIRE(w);
    CHECK(w->point == real_pt(3, 4));
    CHECK_THROWS_AS(vitali_cover_finite(K, G, {real_pt(3, 4)}, F, 0.1), Error);
}

TEST_CASE("series on [0,w]") {
    IntegralResult l = ordinal_series_integral(alt_harmonic(), constant_rule(1));
    CHECK(std::abs(l.value - std::log(2.0)) <= 1e-6);
    CHECK(ordinal_series_integral(geometric(0.5), constant_rule(1)).value == doctest::Approx(2).epsilon(1e-9));
    // two positive terms then one negative: 3/2 ln 2
    IntegralResult r = ordinal_series_integral(rearranged(2, 1), constant_rule(1));
    CHECK(std::abs(r.value - 1.5 * std::log(2.0)) <= 1e-6);
    CHECK(std::abs(r.value - l.value) > 0.1);
    try {
        ordinal_series_integral(power_rule(1, false), constant_rule(1));
        FAIL("harmonic series should diverge");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::SeriesDivergent);
    }
}
