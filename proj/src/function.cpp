#include "ks/function.hpp"
#include "ks/errors.hpp"
#include "ks/series.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numeric>

namespace ks {

// Polynomial -----------------------------------------------------------------

double Polynomial::operator()(double x) const {
    double v = 0;
    for (std::size_t k = c.size(); k-- > 0;) v = v * x + c[k];
    return v;
}

Polynomial Polynomial::derivative() const {
    Polynomial d;
    for (std::size_t k = 1; k < c.size(); ++k) d.c.push_back(c[k] * static_cast<double>(k));
    return d;
}

Polynomial Polynomial::antiderivative() const {
    Polynomial a;
    a.c.push_back(0);
    for (std::size_t k = 0; k < c.size(); ++k) a.c.push_back(c[k] / static_cast<double>(k + 1));
    return a;
}

std::size_t Polynomial::degree() const {
    std::size_t d = c.size();
    while (d > 0 && c[d - 1] == 0) --d;
    return d == 0 ? 0 : d - 1;
}

bool Polynomial::is_constant() const { return degree() == 0; }

std::vector<double> Polynomial::roots_in(double lo, double hi) const {
    std::vector<double> out;
    std::size_t d = degree();
    if (d == 0 || !(lo < hi)) return out;
    if (d == 1) {
        double r = -c[0] / c[1];
        if (r > lo && r < hi) out.push_back(r);
        return out;
    }
    std::vector<double> pts{lo};
    for (double r : derivative().roots_in(lo, hi)) pts.push_back(r);
    pts.push_back(hi);
    const Polynomial& p = *this;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        double u = pts[i], v = pts[i + 1];
        double pu = p(u), pv = p(v);
        if (i + 1 < pts.size() - 1 && pv == 0) {
            out.push_back(v);
            continue;
        }
        if ((pu < 0 && pv > 0) || (pu > 0 && pv < 0)) {
            for (int it = 0; it < 200; ++it) {
                double m = 0.5 * (u + v);
                if (m <= u || m >= v) break;
                double pm = p(m);
                if ((pm < 0) == (pu < 0)) {
                    u = m;
                    pu = pm;
                } else {
                    v = m;
                }
            }
            out.push_back(0.5 * (u + v));
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

double Polynomial::max_abs(double lo, double hi) const {
    double m = std::max(std::abs((*this)(lo)), std::abs((*this)(hi)));
    for (double r : derivative().roots_in(lo, hi)) m = std::max(m, std::abs((*this)(r)));
    return m;
}

double Polynomial::variation(double lo, double hi) const {
    if (!(lo < hi)) return 0;
    std::vector<double> pts{lo};
    for (double r : derivative().roots_in(lo, hi)) pts.push_back(r);
    pts.push_back(hi);
    double v = 0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) v += std::abs((*this)(pts[i + 1]) - (*this)(pts[i]));
    return v;
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    Polynomial r;
    r.c.assign(std::max(a.c.size(), b.c.size()), 0.0);
    for (std::size_t k = 0; k < a.c.size(); ++k) r.c[k] += a.c[k];
    for (std::size_t k = 0; k < b.c.size(); ++k) r.c[k] += b.c[k];
    return r;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    Polynomial r;
    if (a.c.empty() || b.c.empty()) return r;
    r.c.assign(a.c.size() + b.c.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.c.size(); ++i)
        for (std::size_t j = 0; j < b.c.size(); ++j) r.c[i + j] += a.c[i] * b.c[j];
    return r;
}

Polynomial operator*(double s, const Polynomial& a) {
    Polynomial r = a;
    for (auto& x : r.c) x *= s;
    return r;
}

// PiecewisePoly --------------------------------------------------------------

std::size_t PiecewisePoly::cell_index(const Rational& x, bool& exact_knot) const {
    auto it = std::upper_bound(knots.begin(), knots.end(), x);
    std::size_t idx = static_cast<std::size_t>(it - knots.begin());
    exact_knot = idx > 0 && knots[idx - 1] == x;
    return exact_knot ? idx - 1 : idx;
}

double PiecewisePoly::operator()(const Rational& x) const {
    bool knot = false;
    std::size_t i = cell_index(x, knot);
    if (knot) return knot_values[i];
    return cells[i](x.get_d());
}

double PiecewisePoly::left_limit(const Rational& x) const {
    bool knot = false;
    std::size_t i = cell_index(x, knot);
    return cells[i](x.get_d());
}

double PiecewisePoly::right_limit(const Rational& x) const {
    bool knot = false;
    std::size_t i = cell_index(x, knot);
    return cells[knot ? i + 1 : i](x.get_d());
}

bool PiecewisePoly::piecewise_constant() const {
    return std::all_of(cells.begin(), cells.end(), [](const Polynomial& p) { return p.is_constant(); });
}

PiecewisePoly PiecewisePoly::with_knots(const std::vector<Rational>& extra) const {
    std::vector<Rational> all = knots;
    all.insert(all.end(), extra.begin(), extra.end());
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());
    PiecewisePoly r;
    r.knots = all;
    for (const auto& k : all) r.knot_values.push_back((*this)(k));
    for (std::size_t i = 0; i <= all.size(); ++i) {
        // any interior point of the new cell lies in a single old cell
        Rational probe = 0;
        if (all.empty()) probe = 0;
        else if (i == 0) probe = all[0] - 1;
        else if (i == all.size()) probe = all.back() + 1;
        else probe = (all[i - 1] + all[i]) / 2;
        bool knot = false;
        r.cells.push_back(cells[cell_index(probe, knot)]);
    }
    return r;
}

PiecewisePoly constant_poly(double v) {
    PiecewisePoly p;
    p.cells.push_back(Polynomial{{v}});
    return p;
}

// StepJumps ------------------------------------------------------------------

double StepJumps::operator()(const Point& x) const {
    double v = base;
    for (const auto& [c, j] : jumps) {
        if (c > x) break;
        v += j;
    }
    return v;
}

double StepJumps::before(const Point& x) const {
    double v = base;
    for (const auto& [c, j] : jumps) {
        if (c >= x) break;
        v += j;
    }
    return v;
}

double StepJumps::jump_at(const Point& x) const {
    for (const auto& [c, j] : jumps)
        if (c == x) return j;
    return 0;
}

StepJumps normalize(StepJumps s) {
    std::stable_sort(s.jumps.begin(), s.jumps.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<std::pair<Point, double>> merged;
    for (auto& j : s.jumps) {
        if (!merged.empty() && merged.back().first == j.first) merged.back().second += j.second;
        else merged.push_back(j);
    }
    s.jumps.clear();
    for (auto& j : merged)
        if (j.second != 0) s.jumps.push_back(j);
    return s;
}

// SequenceRule ---------------------------------------------------------------

double SequenceRule::operator()(std::uint64_t i) const {
    double v = 0;
    double n1 = static_cast<double>(i) + 1.0;
    switch (kind) {
    case Kind::AltHarmonic: v = ((i & 1) ? -1.0 : 1.0) / n1; break;
    case Kind::Geometric: v = std::pow(param, static_cast<double>(i)); break;
    case Kind::Power: v = ((alternating && (i & 1)) ? -1.0 : 1.0) * std::pow(n1, -param); break;
    case Kind::Rearranged: {
        std::uint64_t block = static_cast<std::uint64_t>(p + q);
        std::uint64_t b = i / block, r = i % block;
        if (r < static_cast<std::uint64_t>(p)) {
            double k = static_cast<double>(b * p + r);
            v = 1.0 / (2 * k + 1);
        } else {
            double k = static_cast<double>(b * q + (r - p));
            v = -1.0 / (2 * k + 2);
        }
        break;
    }
    case Kind::List: v = i < list.size() ? list[i] : 0.0; break;
    case Kind::Constant: v = param; break;
    case Kind::Product: v = parts[0](i) * parts[1](i); break;
    case Kind::Sum: v = parts[0](i) + parts[1](i); break;
    case Kind::Abs: v = std::abs(parts[0](i)); break;
    }
    return scale * v;
}

bool SequenceRule::nonnegative() const {
    if (scale < 0) return false;
    switch (kind) {
    case Kind::AltHarmonic: return false;
    case Kind::Geometric: return param >= 0;
    case Kind::Power: return !alternating;
    case Kind::Rearranged: return false;
    case Kind::List: return std::all_of(list.begin(), list.end(), [](double x) { return x >= 0; });
    case Kind::Constant: return param >= 0;
    case Kind::Product:
    case Kind::Sum: return parts[0].nonnegative() && parts[1].nonnegative();
    case Kind::Abs: return true;
    }
    return false;
}

std::uint64_t SequenceRule::period() const {
    switch (kind) {
    case Kind::Rearranged: return static_cast<std::uint64_t>(p + q);
    case Kind::Product:
    case Kind::Sum: return std::lcm(parts[0].period(), parts[1].period());
    case Kind::Abs: return parts[0].period();
    default: return 1;
    }
}

std::string SequenceRule::describe() const {
    std::string s;
    switch (kind) {
    case Kind::AltHarmonic: s = "alt-harmonic"; break;
    case Kind::Geometric: s = "geometric(" + format_double(param) + ")"; break;
    case Kind::Power: s = std::string(alternating ? "alt-" : "") + "power(" + format_double(param) + ")"; break;
    case Kind::Rearranged: s = "rearranged(" + std::to_string(p) + "," + std::to_string(q) + ")"; break;
    case Kind::List: s = "list[" + std::to_string(list.size()) + "]"; break;
    case Kind::Constant: s = "constant(" + format_double(param) + ")"; break;
    case Kind::Product: s = parts[0].describe() + "*" + parts[1].describe(); break;
    case Kind::Sum: s = "(" + parts[0].describe() + "+" + parts[1].describe() + ")"; break;
    case Kind::Abs: s = "|" + parts[0].describe() + "|"; break;
    }
    if (scale != 1) s = format_double(scale) + "*" + s;
    return s;
}

namespace {

SequenceRule rule_of(SequenceRule::Kind k) {
    SequenceRule s;
    s.kind = k;
    return s;
}

} // namespace

SequenceRule alt_harmonic() { return rule_of(SequenceRule::Kind::AltHarmonic); }

SequenceRule geometric(double r) {
    SequenceRule s = rule_of(SequenceRule::Kind::Geometric);
    s.param = r;
    return s;
}

SequenceRule power_rule(double exponent, bool alternating) {
    SequenceRule s = rule_of(SequenceRule::Kind::Power);
    s.param = exponent;
    s.alternating = alternating;
    return s;
}

SequenceRule rearranged(int p, int q) {
    if (p < 1 || q < 1) throw Error(ErrorKind::ParseError, "rearrangement block sizes must be positive");
    SequenceRule s = rule_of(SequenceRule::Kind::Rearranged);
    s.p = p;
    s.q = q;
    return s;
}

SequenceRule constant_rule(double c) {
    SequenceRule s = rule_of(SequenceRule::Kind::Constant);
    s.param = c;
    return s;
}

SequenceRule list_rule(std::vector<double> v) {
    SequenceRule s = rule_of(SequenceRule::Kind::List);
    s.list = std::move(v);
    return s;
}

SequenceRule product_rule(SequenceRule a, SequenceRule b) {
    SequenceRule s = rule_of(SequenceRule::Kind::Product);
    s.parts = {std::move(a), std::move(b)};
    return s;
}

SequenceRule sum_rule(SequenceRule a, SequenceRule b, double sa, double sb) {
    a.scale *= sa;
    b.scale *= sb;
    SequenceRule s = rule_of(SequenceRule::Kind::Sum);
    s.parts = {std::move(a), std::move(b)};
    return s;
}

SequenceRule abs_rule(const SequenceRule& a) {
    SequenceRule s = rule_of(SequenceRule::Kind::Abs);
    s.parts = {a};
    return s;
}

// LineFunction ---------------------------------------------------------------

LineFunction from_poly(PiecewisePoly p, std::string label) {
    if (p.cells.size() != p.knots.size() + 1 || p.knot_values.size() != p.knots.size())
        throw Error(ErrorKind::ParseError, "piecewise polynomial needs one more cell than knots");
    for (auto& k : p.knots) k.canonicalize();
    for (std::size_t i = 1; i < p.knots.size(); ++i)
        if (p.knots[i - 1] >= p.knots[i]) throw Error(ErrorKind::EndpointsOutOfOrder, "knots must increase");
    LineFunction f;
    auto shared = std::make_shared<const PiecewisePoly>(p);
    f.eval = [shared](const Point& x) {
        if (!x.is_real()) throw Error(ErrorKind::FamilyMismatch, "polynomial evaluated at " + to_string(x));
        return (*shared)(x.real_value());
    };
    f.poly = std::move(p);
    f.label = std::move(label);
    return f;
}

LineFunction from_step(StepJumps s, std::string label) {
    s = normalize(std::move(s));
    LineFunction f;
    auto shared = std::make_shared<const StepJumps>(s);
    f.eval = [shared](const Point& x) { return (*shared)(x); };
    f.step = std::move(s);
    f.label = std::move(label);
    return f;
}

namespace {

struct LimitCache {
    std::once_flag once;
    double value = 0;
};

std::uint64_t finite_index(const Point& x) {
    if (!x.is_ordinal()) throw Error(ErrorKind::FamilyMismatch, "series evaluated at " + to_string(x));
    const auto& c = x.cnf();
    if (c.empty()) return 0;
    if (c.size() == 1) return c[0];
    throw Error(ErrorKind::UnsupportedSet, "series functions live on [0,w], got " + to_string(x));
}

bool is_omega(const Point& x) {
    const auto& c = x.cnf();
    return c.size() == 2 && c[0] == 0 && c[1] == 1;
}

} // namespace

LineFunction from_series(OrdinalSeries s, std::string label) {
    LineFunction f;
    auto shared = std::make_shared<const OrdinalSeries>(s);
    auto cache = std::make_shared<LimitCache>();
    f.eval = [shared, cache](const Point& x) -> double {
        if (x.is_ordinal() && is_omega(x)) {
            if (shared->at_limit) return *shared->at_limit;
            std::call_once(cache->once, [&] {
                if (shared->partial_sums) {
                    cache->value = sum_rule(shared->rule, 1e-10).value;
                } else {
                    // limit of the terms themselves
                    double last = 0;
                    for (std::uint64_t n = 1ULL << 20; n <= 1ULL << 24; n <<= 1) last = shared->rule(n);
                    cache->value = last;
                }
            });
            return cache->value;
        }
        std::uint64_t n = finite_index(x);
        if (!shared->partial_sums) return shared->rule(n);
        double v = 0;
        for (std::uint64_t i = 0; i <= n; ++i) v += shared->rule(i);
        return v;
    };
    f.series = std::move(s);
    f.label = std::move(label);
    return f;
}

LineFunction black_box(std::function<double(const Point&)> fn, std::string label, std::vector<Point> breakpoints) {
    LineFunction f;
    f.eval = std::move(fn);
    f.label = std::move(label);
    f.breakpoints = std::move(breakpoints);
    return f;
}

LineFunction constant_function(double c) {
    StepJumps s;
    s.base = c;
    return from_step(s, "const " + format_double(c));
}

namespace {

bool raw_contains(const IntervalSpec& I, const Point& x) {
    return compare_cuts(lower_cut(I), {x, false}) <= 0 && compare_cuts(upper_cut(I), {x, true}) >= 0;
}

Rational cell_probe(const std::vector<Rational>& knots, std::size_t i) {
    if (knots.empty()) return Rational(0);
    if (i == 0) return knots[0] - 1;
    if (i == knots.size()) return knots.back() + 1;
    return (knots[i - 1] + knots[i]) / 2;
}

} // namespace

LineFunction indicator(const CompactLine& K, const std::vector<IntervalSpec>& sets) {
    std::vector<IntervalSpec> canon;
    for (const auto& I : sets) {
        auto C = canonicalize(K, I);
        if (!is_empty(K, C)) canon.push_back(C);
    }
    auto fn = [canon](const Point& x) {
        for (const auto& I : canon)
            if (raw_contains(I, x)) return 1.0;
        return 0.0;
    };
    std::string label = "indicator";
    if (as_real_line(K)) {
        std::vector<Rational> knots;
        for (const auto& I : canon) {
            knots.push_back(I.lower.real_value());
            knots.push_back(I.upper.real_value());
        }
        std::sort(knots.begin(), knots.end());
        knots.erase(std::unique(knots.begin(), knots.end()), knots.end());
        PiecewisePoly p;
        p.knots = knots;
        for (const auto& k : knots) p.knot_values.push_back(fn(Point::real(k)));
        for (std::size_t i = 0; i <= knots.size(); ++i) p.cells.push_back(Polynomial{{fn(Point::real(cell_probe(knots, i)))}});
        return from_poly(std::move(p), label);
    }
    // Right-continuous steps: a cut "before c" starts at c, "after c" at the successor of c.
    StepJumps s;
    bool representable = true;
    auto start_of = [&](const Cut& c) -> std::optional<Point> {
        if (!c.after) return c.at;
        if (c.at == K->max()) return std::nullopt;
        PointClass pc = K->classify_member(c.at);
        if (pc.right_dense) {
            representable = false;
            return std::nullopt;
        }
        return *pc.successor;
    };
    for (const auto& I : canon) {
        auto a = start_of(lower_cut(I));
        auto b = start_of(upper_cut(I));
        if (a) s.jumps.emplace_back(*a, 1.0);
        if (b) s.jumps.emplace_back(*b, -1.0);
    }
    if (representable) {
        LineFunction f = from_step(s, label);
        return f;
    }
    std::vector<Point> bps;
    for (const auto& I : canon) {
        bps.push_back(I.lower);
        bps.push_back(I.upper);
    }
    return black_box(fn, label, bps);
}

std::optional<PiecewisePoly> as_piecewise(const CompactLine& K, const LineFunction& f) {
    if (!as_real_line(K)) return std::nullopt;
    if (f.poly) return f.poly;
    if (f.step) {
        PiecewisePoly p;
        double v = f.step->base;
        p.cells.push_back(Polynomial{{v}});
        for (const auto& [c, j] : f.step->jumps) {
            if (!c.is_real()) return std::nullopt;
            v += j;
            p.knots.push_back(c.real_value());
            p.knot_values.push_back(v);
            p.cells.push_back(Polynomial{{v}});
        }
        return p;
    }
    return std::nullopt;
}

namespace {

PiecewisePoly combine(const PiecewisePoly& f, const PiecewisePoly& g, double a, double b, bool multiply) {
    PiecewisePoly F = f.with_knots(g.knots), Gp = g.with_knots(f.knots);
    PiecewisePoly r;
    r.knots = F.knots;
    for (std::size_t i = 0; i < F.knots.size(); ++i)
        r.knot_values.push_back(multiply ? F.knot_values[i] * Gp.knot_values[i] : a * F.knot_values[i] + b * Gp.knot_values[i]);
    for (std::size_t i = 0; i < F.cells.size(); ++i)
        r.cells.push_back(multiply ? F.cells[i] * Gp.cells[i] : a * F.cells[i] + b * Gp.cells[i]);
    return r;
}

StepJumps combine(const StepJumps& f, const StepJumps& g, double a, double b) {
    StepJumps s;
    s.base = a * f.base + b * g.base;
    for (const auto& [c, j] : f.jumps) s.jumps.emplace_back(c, a * j);
    for (const auto& [c, j] : g.jumps) s.jumps.emplace_back(c, b * j);
    return normalize(s);
}

std::vector<Point> merged_hints(const CompactLine& K, const LineFunction& f, const LineFunction& g) {
    auto a = structural_points(K, f);
    auto b = structural_points(K, g);
    a.insert(a.end(), b.begin(), b.end());
    std::sort(a.begin(), a.end(), PointLess{});
    a.erase(std::unique(a.begin(), a.end()), a.end());
    return a;
}

} // namespace

LineFunction linear_combination(const CompactLine& K, double a, const LineFunction& f, double b, const LineFunction& g) {
    std::string label = format_double(a) + "*" + f.label + "+" + format_double(b) + "*" + g.label;
    if (f.step && g.step) return from_step(combine(*f.step, *g.step, a, b), label);
    auto pf = as_piecewise(K, f), pg = as_piecewise(K, g);
    if (pf && pg) return from_poly(combine(*pf, *pg, a, b, false), label);
    if (f.series && g.series && f.series->partial_sums == g.series->partial_sums) {
        OrdinalSeries s;
        s.rule = sum_rule(f.series->rule, g.series->rule, a, b);
        s.partial_sums = f.series->partial_sums;
        if (f.series->at_limit || g.series->at_limit) {
            Point w = Point::ordinal({0, 1});
            s.at_limit = a * f(w) + b * g(w);
        }
        return from_series(std::move(s), label);
    }
    auto F = f.eval, Gf = g.eval;
    return black_box([F, Gf, a, b](const Point& x) { return a * F(x) + b * Gf(x); }, label, merged_hints(K, f, g));
}

LineFunction product(const CompactLine& K, const LineFunction& f, const LineFunction& g) {
    std::string label = f.label + "*" + g.label;
    if (f.step && g.step) {
        std::vector<Point> pts;
        for (const auto& j : f.step->jumps) pts.push_back(j.first);
        for (const auto& j : g.step->jumps) pts.push_back(j.first);
        std::sort(pts.begin(), pts.end(), PointLess{});
        pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
        StepJumps s;
        s.base = f.step->base * g.step->base;
        for (const auto& c : pts)
            s.jumps.emplace_back(c, (*f.step)(c) * (*g.step)(c) - f.step->before(c) * g.step->before(c));
        return from_step(s, label);
    }
    auto pf = as_piecewise(K, f), pg = as_piecewise(K, g);
    if (pf && pg) return from_poly(combine(*pf, *pg, 1, 1, true), label);
    if (f.series && g.series && !f.series->partial_sums && !g.series->partial_sums) {
        OrdinalSeries s;
        s.rule = product_rule(f.series->rule, g.series->rule);
        if (f.series->at_limit || g.series->at_limit) {
            Point w = Point::ordinal({0, 1});
            s.at_limit = f(w) * g(w);
        }
        return from_series(std::move(s), label);
    }
    auto F = f.eval, Gf = g.eval;
    return black_box([F, Gf](const Point& x) { return F(x) * Gf(x); }, label, merged_hints(K, f, g));
}

std::vector<Point> structural_points(const CompactLine& K, const LineFunction& f) {
    std::vector<Point> out;
    auto add = [&](const Point& p) {
        try {
            if (K->contains(p)) out.push_back(p);
        } catch (const Error&) {
        }
    };
    if (f.poly)
        for (const auto& k : f.poly->knots) add(Point::real(k));
    if (f.step)
        for (const auto& j : f.step->jumps) add(j.first);
    if (f.series) add(Point::ordinal({0, 1}));
    for (const auto& p : f.breakpoints) add(p);
    std::sort(out.begin(), out.end(), PointLess{});
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// Integrator -----------------------------------------------------------------

const char* regularity_name(Regularity r) {
    switch (r) {
    case Regularity::Arbitrary: return "arbitrary";
    case Regularity::Amenable: return "amenable";
    case Regularity::NBV: return "nbv";
    case Regularity::NondecreasingAmenable: return "nondecreasing";
    }
    return "?";
}

Regularity parse_regularity(const std::string& s) {
    if (s == "arbitrary") return Regularity::Arbitrary;
    if (s == "amenable") return Regularity::Amenable;
    if (s == "nbv") return Regularity::NBV;
    if (s == "nondecreasing" || s == "nondecreasing-amenable") return Regularity::NondecreasingAmenable;
    throw Error(ErrorKind::ParseError, "unknown regularity '" + s + "'");
}

bool Integrator::at_least(Regularity r) const { return static_cast<int>(regularity) >= static_cast<int>(r); }

namespace {

bool close(double a, double b) { return std::abs(a - b) <= 1e-12 * (1 + std::abs(a) + std::abs(b)); }

[[noreturn]] void invalid(const std::string& why) { throw Error(ErrorKind::InvalidRegularity, why); }

void validate_poly(const RealLine& K, const PiecewisePoly& p, Regularity r) {
    const auto& comps = K.components();
    for (std::size_t i = 0; i < p.knots.size(); ++i) {
        const Rational& k = p.knots[i];
        auto j = K.component_of(k);
        if (!j || k == comps[*j].second) continue;
        if (!close(p.knot_values[i], p.cells[i + 1](k.get_d())))
            invalid("not right-continuous at " + format_rational(k));
    }
    if (r != Regularity::NondecreasingAmenable) return;
    if (p(comps.front().first) < 0) invalid("negative at the left end");
    for (std::size_t j = 0; j < comps.size(); ++j) {
        const auto& [l, rr] = comps[j];
        if (j > 0 && p(l) < p(comps[j - 1].second) - 1e-12) invalid("decreases across the gap before " + format_rational(l));
        if (l == rr) continue;
        std::vector<Rational> pts{l};
        for (const auto& k : p.knots)
            if (k > l && k < rr) pts.push_back(k);
        pts.push_back(rr);
        for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
            double u = pts[i].get_d(), v = pts[i + 1].get_d();
            bool knot = false;
            Rational mid = (pts[i] + pts[i + 1]) / 2;
            const Polynomial& cell = p.cells[p.cell_index(mid, knot)];
            Polynomial d = cell.derivative();
            double lo = std::min(d(u), d(v));
            for (double r0 : d.derivative().roots_in(u, v)) lo = std::min(lo, d(r0));
            if (lo < -1e-12) invalid("decreasing between " + format_rational(pts[i]) + " and " + format_rational(pts[i + 1]));
            if (i + 1 < pts.size() - 1 && p(pts[i + 1]) < p.left_limit(pts[i + 1]) - 1e-12)
                invalid("downward jump at " + format_rational(pts[i + 1]));
        }
    }
}

void validate_step(const CompactLine& K, const StepJumps& s, Regularity r) {
    for (const auto& j : s.jumps) require_member(K, j.first);
    if (r != Regularity::NondecreasingAmenable) return;
    if (s(K->min()) < 0) invalid("negative at the left end");
    for (const auto& [c, j] : s.jumps)
        if (j < 0 && c != K->min()) invalid("downward jump at " + to_string(c));
}

void validate_series(const OrdinalSeries& s, Regularity r) {
    if (!s.partial_sums) return;
    if (r >= Regularity::Amenable) {
        auto res = sum_rule(s.rule, 1e-8);
        if (res.status == Status::Divergent) invalid("partial sums of " + s.rule.describe() + " have no limit");
    }
    if (r >= Regularity::NBV) {
        auto res = sum_rule(abs_rule(s.rule), 1e-8);
        if (res.status == Status::Divergent) invalid("unbounded variation: sum of |" + s.rule.describe() + "| diverges");
    }
    if (r == Regularity::NondecreasingAmenable) {
        if (!s.rule.nonnegative()) invalid("terms of " + s.rule.describe() + " change sign");
        if (s.at_limit && *s.at_limit < sum_rule(s.rule, 1e-8).value - 1e-6) invalid("value at w below the limit");
    }
}

} // namespace

Integrator make_integrator(const CompactLine& K, LineFunction fn, Regularity declared) {
    if (declared != Regularity::Arbitrary) {
        if (fn.poly) {
            const RealLine* R = as_real_line(K);
            if (!R) invalid("polynomial pieces need a line of real coordinates");
            validate_poly(*R, *fn.poly, declared);
        } else if (fn.step) {
            validate_step(K, *fn.step, declared);
        } else if (fn.series) {
            if (K->family() != Family::Ordinal) invalid("series integrators live on [0,w]");
            validate_series(*fn.series, declared);
        }
    }
    return Integrator{std::move(fn), declared};
}

} // namespace ks
