#include "ks/problem.hpp"
#include "ks/errors.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace ks {

namespace {

[[noreturn]] void bad(const std::string& where, const std::string& what) {
    throw Error(ErrorKind::ParseError, where + ": " + what);
}

void only_keys(const Json& j, const std::string& where, std::initializer_list<const char*> keys) {
    if (!j.is_object()) bad(where, "expected an object");
    std::set<std::string> ok(keys.begin(), keys.end());
    for (const auto& [k, v] : j.items())
        if (!ok.count(k)) bad(where, "unknown key \"" + k + "\"");
}

Rational rational(const Json& j, const std::string& where) {
    if (j.is_number_integer()) return Rational(j.get<long>());
    if (j.is_number()) return from_double(j.get<double>());
    if (j.is_string()) {
        try {
            return parse_rational(j.get<std::string>());
        } catch (const Error&) {
            bad(where, "not a rational: " + j.get<std::string>());
        }
    }
    bad(where, "expected a number or a rational string");
}

double number(const Json& j, const std::string& where) { return rational(j, where).get_d(); }

std::vector<double> numbers(const Json& j, const std::string& where) {
    if (!j.is_array()) bad(where, "expected an array of numbers");
    std::vector<double> out;
    for (const auto& x : j) out.push_back(number(x, where));
    return out;
}

std::vector<std::pair<Rational, Rational>> pairs(const Json& j, const std::string& where) {
    if (!j.is_array() || j.empty()) bad(where, "expected a nonempty array of [a,b] pairs");
    std::vector<std::pair<Rational, Rational>> out;
    for (const auto& p : j) {
        if (!p.is_array() || p.size() != 2) bad(where, "expected [a,b]");
        out.emplace_back(rational(p[0], where), rational(p[1], where));
    }
    return out;
}

SubsetDescriptor parse_subset(const CompactLine& base, const Json& j) {
    SubsetDescriptor s;
    if (j.is_string()) {
        if (j.get<std::string>() != "all") bad("double_arrow.subset", "expected \"all\"");
        return s;
    }
    if (j.is_object() && j.contains("points")) {
        only_keys(j, "double_arrow.subset", {"points"});
        s.kind = SubsetDescriptor::Kind::Points;
        for (const auto& p : j["points"]) s.points.push_back(parse_point(base, p));
        std::sort(s.points.begin(), s.points.end(), PointLess{});
        return s;
    }
    if (j.is_object() && j.contains("intervals")) {
        only_keys(j, "double_arrow.subset", {"intervals"});
        s.kind = SubsetDescriptor::Kind::Intervals;
        for (const auto& p : j["intervals"]) {
            if (!p.is_array() || p.size() != 2) bad("double_arrow.subset", "expected [a,b]");
            s.intervals.push_back(IntervalSpec::closed(parse_point(base, p[0]), parse_point(base, p[1])));
        }
        return s;
    }
    bad("double_arrow.subset", "expected \"all\", {\"points\":[...]} or {\"intervals\":[...]}");
}

} // namespace

CompactLine parse_line(const Json& j) {
    if (!j.is_object() || j.size() != 1) bad("line", "expected exactly one of interval, finite, timescale, ordinal, lex, double_arrow");
    const auto& [k, v] = *j.items().begin();
    try {
        if (k == "interval") {
            if (!v.is_array() || v.size() != 2) bad("line.interval", "expected [a,b]");
            return make_interval(rational(v[0], "line.interval"), rational(v[1], "line.interval"));
        }
        if (k == "finite") {
            if (!v.is_array() || v.empty()) bad("line.finite", "expected a nonempty array");
            std::vector<Rational> labels;
            for (const auto& x : v) labels.push_back(rational(x, "line.finite"));
            return make_finite(labels);
        }
        if (k == "timescale") return make_timescale(pairs(v, "line.timescale"));
        if (k == "ordinal") {
            std::vector<std::uint64_t> a;
            if (v.is_number_unsigned() || v.is_number_integer()) a = v.get<long>() > 0 ? std::vector<std::uint64_t>{v.get<std::uint64_t>()} : std::vector<std::uint64_t>{};
            else if (v.is_string()) a = parse_ordinal(v.get<std::string>());
            else bad("line.ordinal", "expected an ordinal such as \"w\" or \"w*2+3\"");
            return make_ordinal(a);
        }
        if (k == "lex") {
            if (!v.is_array() || v.size() != 2) bad("line.lex", "expected [outer, inner]");
            return make_lex(parse_line(v[0]), parse_line(v[1]));
        }
        if (k == "double_arrow") {
            only_keys(v, "line.double_arrow", {"base", "subset"});
            if (!v.contains("base")) bad("line.double_arrow", "missing base");
            CompactLine base = parse_line(v["base"]);
            SubsetDescriptor s = v.contains("subset") ? parse_subset(base, v["subset"]) : SubsetDescriptor{};
            return make_double_arrow(base, s);
        }
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::ParseError) throw;
        bad("line." + k, e.what());
    }
    bad("line", "unknown line kind \"" + k + "\"");
}

Point parse_point(const CompactLine& K, const Json& j) {
    Point p;
    switch (K->family()) {
    case Family::Finite:
    case Family::TimeScale: p = Point::real(rational(j, "point")); break;
    case Family::Ordinal:
        if (j.is_number_integer()) {
            if (j.get<long>() < 0) bad("point", "negative ordinal");
            p = j.get<long>() == 0 ? Point::ordinal({}) : Point::ordinal({j.get<std::uint64_t>()});
        } else if (j.is_string()) {
            try {
                p = Point::ordinal(parse_ordinal(j.get<std::string>()));
            } catch (const Error&) {
                bad("point", "not an ordinal: " + j.get<std::string>());
            }
        } else {
            bad("point", "expected an ordinal");
        }
        break;
    case Family::Lex: {
        if (!j.is_array() || j.size() != 2) bad("point", "lex points are [outer, inner]");
        const auto& L = static_cast<const LexLine&>(*K);
        p = Point::pair(parse_point(L.outer(), j[0]), parse_point(L.inner(), j[1]));
        break;
    }
    case Family::DoubleArrow: {
        if (!j.is_array() || j.size() != 2 || !j[1].is_number_integer()) bad("point", "double-arrow points are [x, side]");
        const auto& D = static_cast<const DoubleArrowLine&>(*K);
        p = Point::arrow(parse_point(D.base(), j[0]), j[1].get<int>());
        break;
    }
    }
    if (!K->contains(p)) bad("point", to_string(p) + " is not a point of " + K->describe());
    return p;
}

IntervalSpec parse_interval(const CompactLine& K, const Json& j) {
    if (j.is_array()) {
        if (j.size() != 2) bad("interval", "expected [lo, hi]");
        return IntervalSpec::closed(parse_point(K, j[0]), parse_point(K, j[1]));
    }
    only_keys(j, "interval", {"lo", "hi", "lo_open", "hi_open"});
    if (!j.contains("lo") || !j.contains("hi")) bad("interval", "needs lo and hi");
    IntervalSpec I;
    I.lower = parse_point(K, j["lo"]);
    I.upper = parse_point(K, j["hi"]);
    I.lower_open = j.value("lo_open", false);
    I.upper_open = j.value("hi_open", false);
    return I;
}

SequenceRule parse_rule(const Json& j) {
    if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) bad("series", "expected {\"kind\": ...}");
    std::string k = j["kind"];
    SequenceRule r;
    if (k == "alt-harmonic") {
        only_keys(j, "series", {"kind", "scale", "mode", "limit"});
        r = alt_harmonic();
    } else if (k == "geometric") {
        only_keys(j, "series", {"kind", "ratio", "scale", "mode", "limit"});
        r = geometric(number(j.value("ratio", Json(0.5)), "series.ratio"));
    } else if (k == "power") {
        only_keys(j, "series", {"kind", "exponent", "alternating", "scale", "mode", "limit"});
        r = power_rule(number(j.value("exponent", Json(1)), "series.exponent"), j.value("alternating", false));
    } else if (k == "alt-sign") {
        only_keys(j, "series", {"kind", "scale", "mode", "limit"});
        r = power_rule(0, true);
    } else if (k == "rearranged") {
        only_keys(j, "series", {"kind", "p", "q", "scale", "mode", "limit"});
        int p = j.value("p", 2), q = j.value("q", 1);
        if (p < 1 || q < 1) bad("series", "rearrangement blocks must be positive");
        r = rearranged(p, q);
    } else if (k == "list") {
        only_keys(j, "series", {"kind", "values", "scale", "mode", "limit"});
        if (!j.contains("values")) bad("series", "list needs values");
        r = list_rule(numbers(j["values"], "series.values"));
    } else if (k == "constant") {
        only_keys(j, "series", {"kind", "value", "scale", "mode", "limit"});
        r = constant_rule(number(j.value("value", Json(1)), "series.value"));
    } else if (k == "abs") {
        only_keys(j, "series", {"kind", "of", "scale", "mode", "limit"});
        if (!j.contains("of")) bad("series", "abs needs of");
        r = abs_rule(parse_rule(j["of"]));
    } else {
        bad("series", "unknown kind \"" + k + "\"");
    }
    if (j.contains("scale")) r.scale = number(j["scale"], "series.scale");
    return r;
}

namespace {

struct Piece {
    Rational lo, hi;
    Polynomial p;
};

PiecewisePoly build_pieces(std::vector<Piece> ps, const Json* jumps) {
    std::vector<Rational> knots;
    for (const auto& p : ps) {
        knots.push_back(p.lo);
        knots.push_back(p.hi);
    }
    std::vector<std::pair<Rational, double>> js;
    if (jumps) {
        if (!jumps->is_array()) bad("jumps", "expected [[x, s], ...]");
        for (const auto& q : *jumps) {
            if (!q.is_array() || q.size() != 2) bad("jumps", "expected [x, s]");
            js.emplace_back(rational(q[0], "jumps"), number(q[1], "jumps"));
            knots.push_back(js.back().first);
        }
    }
    std::sort(knots.begin(), knots.end());
    knots.erase(std::unique(knots.begin(), knots.end()), knots.end());
    // Pieces are half-open [lo, hi) except one that ends at the last knot.
    auto piece_at = [&](const Rational& x, bool knot) -> const Piece* {
        for (const auto& p : ps)
            if (knot ? (x >= p.lo && (x < p.hi || (x == p.hi && x == knots.back()))) : (x > p.lo && x < p.hi)) return &p;
        return nullptr;
    };
    auto jump_sum = [&](const Rational& x, bool inclusive) {
        double s = 0;
        for (const auto& [c, v] : js)
            if (c < x || (inclusive && c == x)) s += v;
        return s;
    };
    PiecewisePoly out;
    out.knots = knots;
    out.cells.push_back(Polynomial{{0}});
    for (std::size_t i = 0; i < knots.size(); ++i) {
        const Piece* at = piece_at(knots[i], true);
        out.knot_values.push_back((at ? at->p(knots[i].get_d()) : 0.0) + jump_sum(knots[i], true));
        Polynomial cell{{0}};
        if (i + 1 < knots.size()) {
            Rational mid = (knots[i] + knots[i + 1]) / 2;
            if (const Piece* p = piece_at(mid, false)) cell = p->p;
            cell = cell + Polynomial{{jump_sum(mid, true)}};
        } else {
            cell = Polynomial{{jump_sum(knots[i], true)}};
        }
        out.cells.push_back(cell);
    }
    return out;
}

std::vector<Piece> parse_pieces(const Json& pieces) {
    if (!pieces.is_array() || pieces.empty()) bad("pieces", "expected a nonempty array");
    std::vector<Piece> ps;
    for (const auto& q : pieces) {
        only_keys(q, "pieces", {"on", "poly"});
        if (!q.contains("on") || !q["on"].is_array() || q["on"].size() != 2 || !q.contains("poly"))
            bad("pieces", "each piece needs on:[a,b] and poly:[...]");
        Piece p{rational(q["on"][0], "pieces.on"), rational(q["on"][1], "pieces.on"), Polynomial{numbers(q["poly"], "pieces.poly")}};
        if (p.hi < p.lo) bad("pieces", "piece endpoints out of order");
        ps.push_back(p);
    }
    return ps;
}

StepJumps parse_jumps(const CompactLine& K, double base, const Json& jumps) {
    StepJumps s;
    s.base = base;
    if (!jumps.is_array()) bad("step.jumps", "expected [[x, s], ...]");
    for (const auto& q : jumps) {
        if (!q.is_array() || q.size() != 2) bad("step.jumps", "expected [x, s]");
        s.jumps.emplace_back(parse_point(K, q[0]), number(q[1], "step.jumps"));
    }
    return normalize(s);
}

} // namespace

LineFunction parse_function(const CompactLine& K, const Json& j) {
    if (!j.is_object()) bad("function", "expected an object");
    static const char* forms[] = {"pieces", "poly", "step", "const", "table", "series", "indicator"};
    std::string form;
    for (const char* f : forms)
        if (j.contains(f)) {
            if (!form.empty()) bad("function", "both " + form + " and " + f + " given");
            form = f;
        }
    if (form.empty()) bad("function", "expected one of pieces, poly, step, const, table, series, indicator");
    std::string label = j.value("label", form);
    const RealLine* R = as_real_line(K);
    if (form == "pieces" || form == "poly") {
        if (!R) bad("function." + form, "polynomial pieces need a line of real coordinates");
        std::vector<Piece> ps;
        if (form == "poly")
            ps.push_back({R->components().front().first, R->components().back().second, Polynomial{numbers(j["poly"], "poly")}});
        else
            ps = parse_pieces(j["pieces"]);
        return from_poly(build_pieces(ps, j.contains("jumps") ? &j["jumps"] : nullptr), label);
    }
    if (form == "step") {
        const Json& s = j["step"];
        only_keys(s, "function.step", {"base", "jumps"});
        return from_step(parse_jumps(K, s.contains("base") ? number(s["base"], "step.base") : 0.0, s.value("jumps", Json::array())), label);
    }
    if (form == "const") {
        LineFunction c = constant_function(number(j["const"], "const"));
        c.label = label;
        return c;
    }
    if (form == "table") {
        const Json& t = j["table"];
        if (!t.is_array() || t.empty()) bad("function.table", "expected [[x, v], ...]");
        std::vector<std::pair<Point, double>> rows;
        for (const auto& q : t) {
            if (!q.is_array() || q.size() != 2) bad("function.table", "expected [x, v]");
            rows.emplace_back(parse_point(K, q[0]), number(q[1], "table"));
        }
        std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        StepJumps s;
        double prev = 0;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (i > 0 && rows[i].first == rows[i - 1].first) bad("function.table", "repeated point " + to_string(rows[i].first));
            if (i == 0 && rows[i].first == K->min()) s.base = rows[i].second;
            else s.jumps.emplace_back(rows[i].first, rows[i].second - prev);
            prev = rows[i].second;
        }
        return from_step(normalize(s), label);
    }
    if (form == "series") {
        if (K->family() != Family::Ordinal || K->max() != Point::ordinal({0, 1})) bad("function.series", "series functions live on [0,w]");
        const Json& s = j["series"];
        OrdinalSeries os;
        os.rule = parse_rule(s);
        std::string mode = s.value("mode", "values");
        if (mode != "values" && mode != "partial_sums") bad("function.series", "mode is values or partial_sums");
        os.partial_sums = mode == "partial_sums";
        if (s.contains("limit")) os.at_limit = number(s["limit"], "series.limit");
        return from_series(os, label);
    }
    const Json& sets = j["indicator"];
    if (!sets.is_array()) bad("function.indicator", "expected a list of intervals");
    std::vector<IntervalSpec> v;
    for (const auto& s : sets) v.push_back(parse_interval(K, s));
    LineFunction ind = indicator(K, v);
    ind.label = label;
    return ind;
}

namespace {

Json strip(const Json& j, std::initializer_list<const char*> keys) {
    Json c = j;
    for (const char* k : keys) c.erase(k);
    return c;
}

const std::set<std::string> kFunctionKeys{"pieces", "poly", "jumps", "step", "const", "table", "series", "indicator", "label"};

void function_keys(const Json& j, const std::string& where, std::initializer_list<const char*> extra) {
    if (!j.is_object()) bad(where, "expected an object");
    std::set<std::string> ok(kFunctionKeys);
    ok.insert(extra.begin(), extra.end());
    for (const auto& [k, v] : j.items())
        if (!ok.count(k)) bad(where, "unknown key \"" + k + "\"");
}

} // namespace

Problem parse_problem(const Json& j) {
    only_keys(j, "problem", {"line", "G", "f", "F", "interval", "points", "exceptions", "gauge", "vitali", "converge",
                             "series", "simple", "absolute"});
    if (!j.contains("line")) bad("problem", "missing line");
    Problem p;
    p.line = parse_line(j["line"]);
    const CompactLine& K = p.line;
    if (j.contains("G")) {
        function_keys(j["G"], "G", {"regularity"});
        Regularity r = Regularity::Amenable;
        if (j["G"].contains("regularity")) {
            try {
                r = parse_regularity(j["G"]["regularity"].get<std::string>());
            } catch (const std::exception& e) {
                bad("G.regularity", e.what());
            }
        }
        p.G = make_integrator(K, parse_function(K, strip(j["G"], {"regularity"})), r);
    }
    if (j.contains("f")) {
        function_keys(j["f"], "f", {"continuous"});
        p.f = Integrand{parse_function(K, strip(j["f"], {"continuous"})), j["f"].value("continuous", false)};
    }
    if (j.contains("F")) {
        function_keys(j["F"], "F", {});
        p.F = parse_function(K, j["F"]);
    }
    if (j.contains("interval")) p.interval = parse_interval(K, j["interval"]);
    for (const char* key : {"points", "exceptions"}) {
        if (!j.contains(key)) continue;
        if (!j[key].is_array()) bad(key, "expected an array of points");
        auto& dst = std::string(key) == "points" ? p.points : p.exceptions;
        for (const auto& x : j[key]) dst.push_back(parse_point(K, x));
    }
    if (j.contains("gauge")) {
        const Json& g = j["gauge"];
        only_keys(g, "gauge", {"uniform", "random"});
        GaugeSpec s;
        if (g.contains("uniform")) {
            s.radius = number(g["uniform"], "gauge.uniform");
            if (!(s.radius > 0)) bad("gauge.uniform", "radius must be positive");
        } else if (g.contains("random")) {
            const Json& r = g["random"];
            only_keys(r, "gauge.random", {"seed", "rmin", "rmax"});
            s.kind = GaugeSpec::Kind::Random;
            s.seed = r.value("seed", std::uint64_t{0});
            s.rmin = number(r.value("rmin", Json(0.01)), "gauge.random.rmin");
            s.rmax = number(r.value("rmax", Json(0.2)), "gauge.random.rmax");
            if (!(s.rmin > 0 && s.rmin <= s.rmax)) bad("gauge.random", "need 0 < rmin <= rmax");
        } else {
            bad("gauge", "expected uniform or random");
        }
        p.gauge = s;
    }
    if (j.contains("vitali")) {
        const Json& v = j["vitali"];
        only_keys(v, "vitali", {"family", "points", "eps"});
        VitaliSpec s;
        for (const auto& I : v.value("family", Json::array())) s.family.push_back(parse_interval(K, I));
        for (const auto& x : v.value("points", Json::array())) s.points.push_back(parse_point(K, x));
        s.eps = number(v.value("eps", Json(0.1)), "vitali.eps");
        if (!(s.eps > 0)) bad("vitali.eps", "must be positive");
        p.vitali = s;
    }
    if (j.contains("converge")) {
        const Json& c = j["converge"];
        only_keys(c, "converge", {"mode", "family", "factor", "limit", "lower", "upper", "m_max"});
        ConvergeSpec s;
        std::string mode = c.value("mode", "MCT");
        if (mode == "MCT") s.mode = ConvergenceMode::MCT;
        else if (mode == "DCT") s.mode = ConvergenceMode::DCT;
        else if (mode == "Fatou") s.mode = ConvergenceMode::Fatou;
        else bad("converge.mode", "expected MCT, DCT or Fatou");
        s.family = c.value("family", "power");
        if (s.family != "power" && s.family != "alternating_power" && s.family != "one_minus_power")
            bad("converge.family", "expected power, alternating_power or one_minus_power");
        if (!as_real_line(K)) bad("converge", "sequence families need a line of real coordinates");
        if (c.contains("factor")) s.factor = Polynomial{numbers(c["factor"], "converge.factor")};
        for (const char* key : {"limit", "lower", "upper"})
            if (c.contains(key)) {
                auto fn = parse_function(K, c[key]);
                (std::string(key) == "limit" ? s.limit : std::string(key) == "lower" ? s.lower : s.upper) = fn;
            }
        s.m_max = c.value("m_max", 64);
        if (s.m_max < 4 || s.m_max > 4096) bad("converge.m_max", "must lie in [4, 4096]");
        if (!s.limit) bad("converge", "missing limit");
        p.converge = s;
    }
    if (j.contains("series")) {
        const Json& s = j["series"];
        only_keys(s, "series", {"a", "f"});
        if (!s.contains("a")) bad("series", "missing a");
        p.series = SeriesSpec{parse_rule(s["a"]), s.contains("f") ? parse_rule(s["f"]) : constant_rule(1)};
    }
    if (j.contains("simple")) {
        SimpleFunction phi;
        if (!j["simple"].is_array()) bad("simple", "expected [{\"c\":..., \"sets\":[...]}, ...]");
        for (const auto& t : j["simple"]) {
            only_keys(t, "simple", {"c", "sets"});
            SimpleTerm term;
            term.coefficient = number(t.value("c", Json(1)), "simple.c");
            for (const auto& s : t.value("sets", Json::array())) term.sets.push_back(parse_interval(K, s));
            phi.terms.push_back(term);
        }
        p.simple = phi;
    }
    if (j.contains("absolute")) {
        if (!j["absolute"].is_boolean()) bad("absolute", "expected true or false");
        p.absolute = j["absolute"].get<bool>();
    }
    return p;
}

Problem parse_problem_text(const std::string& text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const Json::parse_error& e) {
        bad("json", e.what());
    }
    return parse_problem(j);
}

Problem load_problem(const std::string& path) {
    std::ifstream in(path);
    if (!in) bad(path, "cannot open");
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return parse_problem_text(ss.str());
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::ParseError) bad(path, e.detail());
        throw;
    }
}

} // namespace ks
