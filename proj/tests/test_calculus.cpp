#include "ks/calculus.hpp"
#include "ks/catalog.hpp"
#include "ks/errors.hpp"

#include <doctest.h>

#include <string>

using namespace ks;

namespace {

std::string failure(const CompactLine& K, const LineFunction& F, const Integrator& G, const Point& x) {
    try {
        g_derivative(K, F, G, x);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NotGDifferentiable);
        return e.detail();
    }
    return "";
}

} // namespace

TEST_CASE("jump quotients on a finite line") {
    auto D = make_finite({0, 1, 2});
    Integrator G = make_integrator(D, poly_fn({0, 1}), Regularity::NondecreasingAmenable);
    LineFunction F = poly_fn({0, 0, 1});
    DerivativeResult d1 = g_derivative(D, F, G, real_pt(1));
    CHECK(d1.kind == DerivativeCase::Jump);
    CHECK(d1.value == 1);
    CHECK(g_derivative(D, F, G, real_pt(2)).value == 3);
}

TEST_CASE("two-point line: S = 2, FTC mismatch at 1") {
    auto D = make_finite({0, 1});
    Integrator G = make_integrator(D, constant_function(1), Regularity::NondecreasingAmenable);
    LineFunction F = step_fn(2, {{real_pt(1), 1}});
    CHECK(g_derivative(D, F, G, real_pt(0)).value == 2);
    CHECK(failure(D, F, G, real_pt(1)).rfind("LeftLimitMismatch", 0) == 0);
}

TEST_CASE("dense derivatives") {
    auto K = make_interval(0, 1);
    Integrator G = make_integrator(K, poly_fn({0, 1}), Regularity::NondecreasingAmenable);
    DerivativeResult d = g_derivative(K, poly_fn({0, 0, 1}), G, real_pt(1, 2));
    CHECK(d.kind == DerivativeCase::Dense);
    CHECK(d.value == doctest::Approx(1.0).epsilon(1e-6));
    // d(x^3)/d(x^2) = 3x/2
    Integrator G2 = make_integrator(K, poly_fn({0, 0, 1}), Regularity::NondecreasingAmenable);
    CHECK(g_derivative(K, poly_fn({0, 0, 0, 1}), G2, real_pt(1, 2)).value == doctest::Approx(0.75).epsilon(1e-6));
}

TEST_CASE("failures name their reason") {
    auto K = make_interval(0, 1);
    Integrator flat = make_integrator(K, constant_function(1), Regularity::NondecreasingAmenable);
    CHECK(failure(K, poly_fn({0, 1}), flat, real_pt(1, 2)).rfind("GConstant", 0) == 0);
    Integrator G = make_integrator(K, poly_fn({0, 1}), Regularity::NondecreasingAmenable);
    // a corner: the two one-sided quotients disagree
    LineFunction corner = pieces_fn({Rational(1, 2)}, {0.5}, {{0, 1}, {1.5, -2}});
    CHECK_FALSE(failure(K, corner, G, real_pt(1, 2)).empty());
}

TEST_CASE("derivatives need a nondecreasing integrator") {
    auto K = make_interval(0, 1);
    Integrator G = make_integrator(K, poly_fn({1, -1}), Regularity::NBV);
    CHECK_THROWS_AS(g_derivative(K, poly_fn({0, 1}), G, real_pt(1, 2)), Error);
}

TEST_CASE("straddle intervals") {
    auto K = make_interval(0, 1);
    Integrator G = make_integrator(K, poly_fn({0, 1}), Regularity::NondecreasingAmenable);
    StraddleReport s = straddle_probe(K, poly_fn({0, 0, 1}), G, real_pt(1, 2), 1e-3);
    CHECK(contains(K, s.interval, real_pt(1, 2)));
    CHECK_FALSE(s.jump_case);
    CHECK(s.worst_ratio <= 1);
    auto D = make_finite({0, 1, 2});
    Integrator Gd = make_integrator(D, poly_fn({0, 1}), Regularity::NondecreasingAmenable);
    StraddleReport j = straddle_probe(D, poly_fn({0, 0, 1}), Gd, real_pt(1), 1e-3);
    CHECK(j.jump_case);
    CHECK(j.worst_ratio <= 1);
}

TEST_CASE("FTC: integrating a derivative") {
    auto D = make_finite({0, 1, 2});
    Integrator G = make_integrator(D, poly_fn({0, 1}), Regularity::NondecreasingAmenable);
    // F = x^2 has jump quotients 1 at 1 and 3 at 2
    Integrand f{step_fn(0, {{real_pt(1), 1}, {real_pt(2), 2}}), false};
    FtcIntegrateReport r = ftc_integrate_derivative(D, poly_fn({0, 0, 1}), f, G, {});
    CHECK(r.lhs == doctest::Approx(4));
    CHECK(r.rhs == doctest::Approx(4));
    CHECK(r.violations.empty());

    auto K = make_interval(0, 1);
    Integrator Gx = make_integrator(K, poly_fn({0, 1}), Regularity::NondecreasingAmenable);
    FtcIntegrateReport c = ftc_integrate_derivative(K, poly_fn({0, 0, 0.5}), Integrand{poly_fn({0, 1}), true}, Gx, {});
    CHECK(c.defect <= 1e-9);
    CHECK(c.lhs == doctest::Approx(0.5));
}

TEST_CASE("FTC fails on the two-point line and says where") {
    auto D = make_finite({0, 1});
    Integrator G = make_integrator(D, constant_function(1), Regularity::NondecreasingAmenable);
    LineFunction F = step_fn(2, {{real_pt(1), 1}});
    FtcIntegrateReport r = ftc_integrate_derivative(D, F, Integrand{F, false}, G, {});
    CHECK(r.lhs == 2);
    CHECK(r.rhs == 3);
    REQUIRE(r.violations.size() == 1);
    CHECK(r.violations[0].at == real_pt(1));
}

TEST_CASE("exceptions may not sit on left-isolated points other than 0") {
    auto D = make_finite({0, 1});
    Integrator G = make_integrator(D, constant_function(1), Regularity::NondecreasingAmenable);
    LineFunction F = step_fn(2, {{real_pt(1), 1}});
    try {
        ftc_integrate_derivative(D, F, Integrand{F, false}, G, {real_pt(1)});
        FAIL("expected PreconditionViolated");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::PreconditionViolated);
    }
}

TEST_CASE("FTC: differentiating an integral") {
    auto K = make_interval(0, 1);
    Integrator G = make_integrator(K, pieces_fn({Rational(1, 2)}, {1.5}, {{0, 1}, {1, 1}}), Regularity::NondecreasingAmenable);
    Integrand f{poly_fn({1, 2}), true};
    FtcDifferentiateReport r = ftc_differentiate_integral(K, f, G, {real_pt(1, 4), real_pt(1, 2), real_pt(3, 4)});
    REQUIRE(r.probes.size() == 3);
    for (const auto& p : r.probes) {
        CHECK(p.error.empty());
        if (p.jump) CHECK(p.derivative == doctest::Approx(p.f).epsilon(1e-14));
        else CHECK(std::abs(p.derivative - p.f) <= 1e-6);
    }
    CHECK(r.probes[1].jump);
    CHECK(r.exceptional.empty());
}

TEST_CASE("the characteristic function of a point gives a null exceptional set") {
    auto K = make_interval(0, 1);
    Integrator G = make_integrator(K, poly_fn({0, 1}), Regularity::NondecreasingAmenable);
    Integrand chi{indicator(K, {singleton(K, real_pt(1, 2))}), false};
    FtcDifferentiateReport r = ftc_differentiate_integral(K, chi, G, {real_pt(1, 4), real_pt(1, 2)});
    REQUIRE(r.exceptional.size() == 1);
    CHECK(r.exceptional[0] == real_pt(1, 2));
    CHECK(r.outer_measure_bound == 0);
}
