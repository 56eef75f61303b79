#include "ks/catalog.hpp"
#include "ks/engine.hpp"
#include "ks/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdlib>

using namespace ks;

namespace {

IntegrateOptions adaptive_only() {
    IntegrateOptions o;
    o.allow_exact = false;
    return o;
}

} // namespace

TEST_CASE("polynomial integrals on [0,1]") {
    auto K = make_interval(0, 1);
    Integrator G = make_integrator(K, poly_fn({0, 1}), Regularity::Amenable);
    IntegralResult r = integrate(K, Integrand{poly_fn({0, 1}), true}, G);
    CHECK(r.status == Status::Exact);
    CHECK(r.value == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(r.continuity_check == 1);
    // x^2 d(x + x^3) = int x^2 + 3x^4 = 1/3 + 3/5
    Integrator G3 = make_integrator(K, poly_fn({0, 1, 0, 1}), Regularity::Amenable);
    CHECK(integrate(K, Integrand{poly_fn({0, 0, 1}), true}, G3).value == doctest::Approx(14.0 / 15).epsilon(1e-14));
}

TEST_CASE("the leading term f(0)G(0) is included") {
    auto K = make_interval(0, 1);
    Integrator G = make_integrator(K, constant_function(5), Regularity::Amenable);
    CHECK(integrate(K, Integrand{constant_function(2), true}, G).value == doctest::Approx(10));
    Integrator G2 = make_integrator(K, poly_fn({2, 1}), Regularity::Amenable);
    CHECK(integrate(K, Integrand{poly_fn({1, 1}), true}, G2).value == doctest::Approx(2 + 1.5));
}

TEST_CASE("jumps of G pick up f at the jump") {
    auto K = make_interval(0, 1);
    Integrator G = make_integrator(K, pieces_fn({Rational(1, 2)}, {1.5}, {{0, 1}, {1, 1}}), Regularity::Amenable);
    // int (1-x) dx + (1 - 1/2) * 1
    Integrand f{poly_fn({1, -1}), true};
    CHECK(integrate(K, f, G).value == doctest::Approx(1.0));
    IntegralResult a = integrate(K, f, G, adaptive_only());
    CHECK(a.status == Status::Certified);
    CHECK(a.value == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(a.error_bound <= 1e-9);
}

TEST_CASE("adaptive path on a black box") {
    auto K = make_interval(0, 1);
    Integrator G = make_integrator(K, poly_fn({0, 1}), Regularity::Amenable);
    Integrand f{black_box([](const Point& x) { return std::exp(x.to_double()); }, "exp"), true};
    IntegralResult r = integrate(K, f, G);
    CHECK(r.path == "adaptive");
    CHECK(r.ok());
    CHECK(std::abs(r.value - (std::exp(1.0) - 1)) <= 1e-9);
    CHECK(std::abs(r.value - (std::exp(1.0) - 1)) <= r.error_bound + 1e-12);
    CHECK_FALSE(r.trace.empty());
}

TEST_CASE("a starved budget reports NoCertificate") {
    auto K = make_interval(0, 1);
    Integrator G = make_integrator(K, poly_fn({0, 1}), Regularity::Amenable);
    Integrand f{black_box([](const Point& x) { return std::exp(x.to_double()); }, "exp"), true};
    IntegrateOptions o;
    o.tol = 1e-15;
    o.max_refine = 3;
    CHECK(integrate(K, f, G, o).status == Status::NoCertificate);
}

TEST_CASE("KS_MAX_REFINE overrides the budget") {
    setenv("KS_MAX_REFINE", "7", 1);
    CHECK(refine_budget(40) == 7);
    setenv("KS_MAX_REFINE", "junk", 1);
    CHECK(refine_budget(40) == 40);
    unsetenv("KS_MAX_REFINE");
    CHECK(refine_budget(40) == 40);
}

TEST_CASE("singleton integrals are the jump") {
    auto K = make_interval(0, 1);
    Integrator G = make_integrator(K, pieces_fn({Rational(1, 2)}, {1.5}, {{0, 1}, {1, 1}}), Regularity::Amenable);
    CHECK(singleton_integral(K, G, real_pt(1, 2)) == doctest::Approx(1.0));
    CHECK(singleton_integral(K, G, real_pt(1, 4)) == 0);
    // at 0_K the leading term supplies G(0)
    Integrator G2 = make_integrator(K, poly_fn({3, 1}), Regularity::Amenable);
    CHECK(singleton_integral(K, G2, real_pt(0)) == doctest::Approx(3.0));
    Integrand chi{indicator(K, {singleton(K, real_pt(1, 2))}), false};
    CHECK(integrate(K, chi, G, adaptive_only()).value == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("time scale: gaps act as jumps") {
    auto T = make_timescale({{0, 1}, {2, 2}, {3, 4}});
    Integrator G = make_integrator(T, poly_fn({1, 0, 1}), Regularity::Amenable);
    IntegralResult r = integrate(T, Integrand{poly_fn({0, 0, 0, 1}), true}, G);
    // 2/5 + 8*(5-2) + 27*(10-5) + 2(4^5 - 3^5)/5
    CHECK(r.value == doctest::Approx(0.4 + 24 + 135 + 312.4).epsilon(1e-13));
}

TEST_CASE("finite lines are plain sums") {
    auto D = make_finite({0, 1, 2});
    Integrator G = make_integrator(D, poly_fn({1, 0, 1}), Regularity::Amenable);
    // f(0)G(0) + f(1)(2-1) + f(2)(5-2) with f = x + 1
    CHECK(integrate(D, Integrand{poly_fn({1, 1}), true}, G).value == doctest::Approx(1 + 2 + 9));
}

TEST_CASE("ordinal series path") {
    auto W = make_ordinal({0, 1});
    Integrator G = make_integrator(W, series_fn(alt_harmonic(), true), Regularity::Arbitrary);
    IntegralResult r = integrate(W, Integrand{constant_function(1), false}, G);
    CHECK(r.ok());
    CHECK(std::abs(r.value - std::log(2.0)) <= 1e-6);
    Integrator g = make_integrator(W, series_fn(geometric(0.5), true), Regularity::Amenable);
    CHECK(integrate(W, Integrand{constant_function(1), false}, g).value == doctest::Approx(2.0).epsilon(1e-9));
    IntegralResult a = absolute_integrate(W, Integrand{constant_function(1), false}, G);
    CHECK(a.status == Status::Divergent);
}

TEST_CASE("additivity on the catalog") {
    auto cat = structured_catalog();
    CHECK(cat.size() >= 30);
    for (const auto& p : cat) {
        Additivity a = additivity_check(p.K, p.f, p.G, p.a, p.c, p.b);
        CHECK_MESSAGE(a.defect <= 1e-9, p.name);
    }
}

TEST_CASE("continuity bound on exact runs") {
    for (const auto& p : structured_catalog()) {
        IntegralResult r = integrate(p.K, p.f, p.G);
        if (r.path != "exact") continue;
        Variation v = total_variation(p.K, p.G.fn);
        double bound = std::abs(p.f(p.K->min()) * p.G(p.K->min())) + sup_abs(p.K, p.f.fn, p.K->min(), p.K->max()) * v.value;
        CHECK_MESSAGE(std::abs(r.value) <= bound * (1 + 1e-12) + 1e-12, p.name);
    }
}

TEST_CASE("Saks-Henstock on an eps-gauge") {
    auto K = make_interval(0, 1);
    Integrator G = make_integrator(K, pieces_fn({Rational(1, 2)}, {1.5}, {{0, 1}, {1, 1}}), Regularity::Amenable);
    Integrand f{poly_fn({0, 0, 1}), true};
    const double eps = 1e-2;
    Gauge d = epsilon_gauge(K, f, G, eps);
    std::mt19937_64 rng(9);
    for (int i = 0; i < 20; ++i) {
        TaggedSystem S = random_fine_system(K, d, rng);
        Residual r = saks_henstock_residual(K, f, G, S, d);
        CHECK(std::abs(r.signed_residual) <= 2 * eps);
        CHECK(r.absolute_residual <= 4 * eps);
    }
    // a full partition turns the residual into S - integral
    TaggedPartition P = cousin_partition(K, d);
    TaggedSystem full{P.parts};
    Residual r = saks_henstock_residual(K, f, G, full, d);
    double S = riemann_sum(K, f, G, P.parts), I = integrate(K, f, G).value;
    CHECK(std::abs(r.signed_residual - (S - I)) <= 1e-9);
}

TEST_CASE("a system that is not fine is refused") {
    auto K = make_interval(0, 1);
    Integrator G = make_integrator(K, poly_fn({0, 1}), Regularity::Amenable);
    Integrand f{poly_fn({0, 1}), true};
    Gauge d = uniform_gauge(K, 0.01);
    TaggedSystem S{{{real_pt(0), real_pt(1), real_pt(1, 2)}}};
    CHECK_THROWS_AS(saks_henstock_residual(K, f, G, S, d), Error);
}

TEST_CASE("primitive and absolute integral of sign-changing steps") {
    auto K = make_interval(0, 2);
    Integrator G = make_integrator(K, poly_fn({0, 1}), Regularity::NondecreasingAmenable);
    Integrand f{pieces_fn({Rational(1)}, {-1}, {{1}, {-1}}), false};
    LineFunction F = primitive(K, f, G);
    CHECK(F(real_pt(1, 2)) == doctest::Approx(0.5));
    CHECK(F(real_pt(2)) == doctest::Approx(0.0));
    IntegralResult a = absolute_integrate(K, f, G);
    CHECK(a.value == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(a.value == doctest::Approx(std::abs(f(K->min()) * G(K->min())) + total_variation(K, F).value).epsilon(1e-12));
}

TEST_CASE("indicator integrals of open and closed sets") {
    auto K = make_interval(0, 1);
    Integrator G = make_integrator(K, pieces_fn({Rational(1)}, {2}, {{0, 1}, {0, 1}}), Regularity::Amenable);
    Integrand one{constant_function(1), true};
    CHECK(indicator_integral(K, one, G, IntervalSpec::open(real_pt(1, 2), real_pt(1))).value == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(indicator_integral(K, one, G, IntervalSpec::left_open(real_pt(1, 2), real_pt(1))).value == doctest::Approx(1.5).epsilon(1e-9));
}
