#include "ks/catalog.hpp"

namespace ks {

Polynomial poly(std::vector<double> c) { return Polynomial{std::move(c)}; }

LineFunction poly_fn(std::vector<double> c, std::string label) {
    PiecewisePoly p;
    p.cells = {poly(std::move(c))};
    return from_poly(p, std::move(label));
}

LineFunction pieces_fn(std::vector<Rational> knots, std::vector<double> values, std::vector<std::vector<double>> cells,
                       std::string label) {
    PiecewisePoly p;
    p.knots = std::move(knots);
    p.knot_values = std::move(values);
    for (auto& c : cells) p.cells.push_back(poly(std::move(c)));
    return from_poly(p, std::move(label));
}

LineFunction step_fn(double base, std::vector<std::pair<Point, double>> jumps, std::string label) {
    StepJumps s;
    s.base = base;
    s.jumps = std::move(jumps);
    return from_step(normalize(s), std::move(label));
}

LineFunction series_fn(SequenceRule rule, bool partial_sums, std::optional<double> at_limit, std::string label) {
    OrdinalSeries s;
    s.rule = std::move(rule);
    s.partial_sums = partial_sums;
    s.at_limit = at_limit;
    return from_series(s, std::move(label));
}

Point real_pt(long num, long den) { return Point::real(Rational(num, den)); }
Point ord_pt(const std::string& text) { return Point::ordinal(parse_ordinal(text)); }

std::vector<CatalogProblem> structured_catalog() {
    std::vector<CatalogProblem> v;
    auto add = [&](std::string name, CompactLine K, LineFunction f, bool cont, LineFunction G, Point a, Point c, Point b) {
        Integrator g = make_integrator(K, std::move(G), Regularity::Amenable);
        v.push_back({std::move(name), K, Integrand{std::move(f), cont}, std::move(g), a, c, b});
    };
    using R = Rational;
    auto I01 = make_interval(0, 1);
    add("x dx", I01, poly_fn({0, 1}), true, poly_fn({0, 1}), real_pt(0), real_pt(1, 2), real_pt(1));
    add("x^2 d(x+x^3)", I01, poly_fn({0, 0, 1}), true, poly_fn({0, 1, 0, 1}), real_pt(0), real_pt(1, 3), real_pt(1));
    add("(1-x) d(x + jump)", I01, poly_fn({1, -1}), true, pieces_fn({R(1, 2)}, {1.5}, {{0, 1}, {1, 1}}), real_pt(0),
        real_pt(1, 2), real_pt(1));
    add("step f d x^2", I01, pieces_fn({R(1, 3)}, {1}, {{0}, {1}}), false, poly_fn({0, 0, 1}), real_pt(0), real_pt(1, 4),
        real_pt(1));
    add("x d(2+x)", I01, poly_fn({0, 1}), true, poly_fn({2, 1}), real_pt(0), real_pt(2, 3), real_pt(1));
    add("chi d(x + jump)", I01, pieces_fn({R(1, 2)}, {1}, {{0}, {0}}), false, pieces_fn({R(1, 2)}, {1.5}, {{0, 1}, {1, 1}}),
        real_pt(0), real_pt(1, 2), real_pt(1));
    add("(x^3-x) d(x^2+3x)", I01, poly_fn({0, -1, 0, 1}), true, poly_fn({0, 3, 1}), real_pt(1, 8), real_pt(5, 8), real_pt(7, 8));
    auto Im12 = make_interval(-1, 2);
    add("x d step", Im12, poly_fn({0, 1}), true, step_fn(0.5, {{real_pt(0), 1}, {real_pt(1), -2}}), real_pt(-1), real_pt(1),
        real_pt(2));
    auto I02 = make_interval(0, 2);
    add("tent dx", I02, pieces_fn({R(1)}, {1}, {{0, 1}, {2, -1}}), true, poly_fn({0, 1}), real_pt(0), real_pt(1), real_pt(2));
    add("2 d const", I01, constant_function(2), true, constant_function(5), real_pt(0), real_pt(1, 2), real_pt(1));
    add("x^2 d(jumps+x)", make_interval(0, 3), poly_fn({0, 0, 1}), true,
        pieces_fn({R(1), R(2)}, {2, 4.5}, {{0, 1}, {1, 1}, {2.5, 1}}), real_pt(0), real_pt(3, 2), real_pt(3));

    auto T1 = make_timescale({{R(0), R(1)}, {R(2), R(2)}, {R(3), R(4)}});
    add("ts x^3 d(1+x^2)", T1, poly_fn({0, 0, 0, 1}), true, poly_fn({1, 0, 1}), real_pt(0), real_pt(2), real_pt(4));
    add("ts x dx", T1, poly_fn({0, 1}), true, poly_fn({0, 1}), real_pt(1, 2), real_pt(3), real_pt(7, 2));
    auto T2 = make_timescale({{R(0), R(1)}, {R(2), R(3)}});
    add("ts 1 d(x+jump)", T2, constant_function(1), true, pieces_fn({R(5, 2)}, {3.5}, {{0, 1}, {1, 1}}), real_pt(0),
        real_pt(5, 2), real_pt(3));
    auto T3 = make_timescale({{R(0), R(0)}, {R(1), R(2)}, {R(3), R(3)}, {R(5), R(5)}});
    add("ts x^2 dx", T3, poly_fn({0, 0, 1}), true, poly_fn({0, 1}), real_pt(0), real_pt(3), real_pt(5));
    auto T4 = make_timescale({{R(0), R(1)}, {R(3, 2), R(3, 2)}, {R(2), R(5, 2)}});
    add("ts (1-x) dx^2", T4, poly_fn({1, -1}), true, poly_fn({0, 0, 1}), real_pt(0), real_pt(3, 2), real_pt(5, 2));
    auto T5 = make_timescale({{R(0), R(1)}, {R(2), R(2)}});
    add("ts step dx", T5, pieces_fn({R(1, 2)}, {2}, {{0}, {2}}), false, poly_fn({1, 1}), real_pt(0), real_pt(1), real_pt(2));

    auto D3 = make_finite({R(0), R(1), R(2)});
    add("finite x^2 dx", D3, poly_fn({0, 0, 1}), true, poly_fn({0, 1}), real_pt(0), real_pt(1), real_pt(2));
    auto D4 = make_finite({R(0), R(1, 2), R(1), R(3)});
    add("finite x d(x^2+1)", D4, poly_fn({0, 1}), true, poly_fn({1, 0, 1}), real_pt(0), real_pt(1), real_pt(3));
    auto D2 = make_finite({R(0), R(1)});
    add("two-point", D2, step_fn(2, {{real_pt(1), 1}}), true, constant_function(1), real_pt(0), real_pt(0), real_pt(1));
    auto D5 = make_finite({R(-2), R(-1), R(0), R(4)});
    add("finite (3x-1) d table", D5, poly_fn({-1, 3}), true,
        step_fn(1, {{real_pt(-1), 2}, {real_pt(0), -1}, {real_pt(4), 0.5}}), real_pt(-2), real_pt(0), real_pt(4));
    auto D6 = make_finite({R(0), R(1), R(2), R(3), R(4), R(5)});
    add("finite table d table", D6, step_fn(1, {{real_pt(2), -3}, {real_pt(4), 2}}), true,
        step_fn(0, {{real_pt(1), 1}, {real_pt(3), 2}, {real_pt(5), 4}}), real_pt(1), real_pt(3), real_pt(5));

    auto W = make_ordinal({0, 1});
    add("w: 1 d geometric", W, constant_function(1), false, series_fn(geometric(0.5), true), ord_pt("0"), ord_pt("3"), ord_pt("w"));
    add("w: (-0.7)^i d geometric", W, series_fn(geometric(-0.7), false, 0.0), false, series_fn(geometric(0.5), true),
        ord_pt("0"), ord_pt("2"), ord_pt("w"));
    add("w: 2 d list", W, constant_function(2), false, series_fn(list_rule({1, -2, 3, 0.5}), true), ord_pt("1"), ord_pt("2"),
        ord_pt("w"));
    add("w: geometric d geometric with jump at w", W, series_fn(geometric(0.25), false), false,
        series_fn(geometric(0.5), true, 3.0), ord_pt("0"), ord_pt("5"), ord_pt("w"));
    auto W2 = make_ordinal({0, 2});
    add("w*2: step d step", W2, step_fn(1, {{ord_pt("w"), 1}}), false,
        step_fn(0, {{ord_pt("1"), 1}, {ord_pt("w"), 2}, {ord_pt("w+3"), 0.5}}), ord_pt("0"), ord_pt("w+1"), ord_pt("w*2"));
    auto Wsq = make_ordinal({0, 0, 1});
    add("w^2: step d step", Wsq, step_fn(0, {{ord_pt("2"), 1}}), false, step_fn(1, {{ord_pt("w"), 1}, {ord_pt("w*2+1"), 3}}),
        ord_pt("0"), ord_pt("w*2"), ord_pt("w^2"));
    auto O5 = make_ordinal({5});
    add("[0,5]: step d step", O5, step_fn(2, {{ord_pt("3"), -1}}), false, step_fn(0, {{ord_pt("1"), 1}, {ord_pt("4"), 2}}),
        ord_pt("0"), ord_pt("3"), ord_pt("5"));

    auto L = make_lex(I01, I01);
    auto lp = [](long a, long b, long c, long d) { return Point::pair(real_pt(a, b), real_pt(c, d)); };
    add("lex: 3 d step", L, constant_function(3), false, step_fn(0, {{lp(1, 2, 0, 1), 1}, {lp(1, 2, 1, 1), 2}}), lp(0, 1, 0, 1),
        lp(1, 2, 1, 2), lp(1, 1, 1, 1));
    auto L2 = make_lex(make_finite({R(0), R(1)}), W);
    auto lo = [](long a, const char* w) { return Point::pair(real_pt(a), ord_pt(w)); };
    add("lex finite x w: step d step", L2, step_fn(1, {{lo(1, "0"), 2}}), false,
        step_fn(0, {{lo(0, "3"), 1}, {lo(0, "w"), 1}, {lo(1, "1"), 4}}), lo(0, "0"), lo(0, "w"), lo(1, "w"));
    auto DA = make_double_arrow(I01, SubsetDescriptor{});
    auto ap = [](long a, long b, int s) { return Point::arrow(real_pt(a, b), s); };
    add("double arrow: step d step", DA, step_fn(0, {{ap(1, 2, 1), 1}}), false, step_fn(0, {{ap(1, 3, 1), 1}, {ap(1, 2, 0), 2}}),
        ap(0, 1, 0), ap(1, 2, 0), ap(1, 1, 1));
    SubsetDescriptor half;
    half.kind = SubsetDescriptor::Kind::Points;
    half.points = {real_pt(1, 2)};
    auto DA2 = make_double_arrow(I01, half);
    add("double arrow at 1/2: 2 d step", DA2, constant_function(2), false, step_fn(1, {{ap(1, 2, 1), 3}}), ap(0, 1, 0),
        ap(1, 2, 0), ap(1, 1, 0));
    return v;
}

} // namespace ks
