#include "ks/integrator.hpp"
#include "ks/errors.hpp"
#include "ks/series.hpp"

#include <algorithm>
#include <cmath>

namespace ks {

namespace {

bool is_omega(const Point& x) { return x.is_ordinal() && x.cnf().size() == 2 && x.cnf()[0] == 0 && x.cnf()[1] == 1; }

std::uint64_t index_of(const Point& x) {
    const auto& c = x.cnf();
    if (c.empty()) return 0;
    if (c.size() == 1) return c[0];
    throw Error(ErrorKind::UnsupportedSet, "series functions live on [0,w]");
}

double sequence_limit(const SequenceRule& r) {
    double a = r(1ULL << 22), b = r(1ULL << 24), c = r((1ULL << 24) + 1);
    double scale = 1 + std::abs(b);
    if (std::abs(a - b) > 1e-6 * scale || std::abs(b - c) > 1e-6 * scale)
        throw Error(ErrorKind::NotRegulated, "terms of " + r.describe() + " have no limit");
    return c;
}

double probe_limit(const CompactLine& K, const LineFunction& f, const Point& x, bool from_left) {
    std::vector<double> v;
    for (int k = 8; k <= 52; k += 4) v.push_back(f(K->approach(x, from_left, k)));
    std::size_t n = v.size();
    double s = 1 + std::abs(v[n - 1]);
    for (std::size_t i = n - 3; i < n; ++i)
        if (std::abs(v[i] - v[i - 1]) > 1e-12 * s)
            throw Error(ErrorKind::NotRegulated, "no certified one-sided limit of " + f.label + " at " + to_string(x));
    return v[n - 1];
}

} // namespace

double left_limit(const CompactLine& K, const LineFunction& f, const Point& x) {
    PointClass pc = classify(K, x);
    if (x == K->min()) return 0;
    if (!pc.left_dense) return f(*pc.predecessor);
    if (f.step) return f.step->before(x);
    if (f.poly && x.is_real()) return f.poly->left_limit(x.real_value());
    if (f.series && is_omega(x)) {
        if (f.series->partial_sums) return sum_rule(f.series->rule, 1e-10).value;
        return sequence_limit(f.series->rule);
    }
    return probe_limit(K, f, x, true);
}

double left_limit(const CompactLine& K, const Integrator& G, const Point& x) { return left_limit(K, G.fn, x); }

double right_limit(const CompactLine& K, const LineFunction& f, const Point& x) {
    PointClass pc = classify(K, x);
    if (!pc.right_dense) return f(x);
    if (f.step) return f(x);
    if (f.poly && x.is_real()) return f.poly->right_limit(x.real_value());
    return probe_limit(K, f, x, false);
}

namespace {

Variation poly_variation(const RealLine& R, const PiecewisePoly& p, const Rational& a, const Rational& b) {
    const auto& comps = R.components();
    std::vector<Rational> ev{a, b};
    for (const auto& k : p.knots)
        if (k > a && k < b && R.component_of(k)) ev.push_back(k);
    for (const auto& [l, r] : comps) {
        if (l > a && l < b) ev.push_back(l);
        if (r > a && r < b) ev.push_back(r);
    }
    std::sort(ev.begin(), ev.end());
    ev.erase(std::unique(ev.begin(), ev.end()), ev.end());
    Variation v;
    for (std::size_t i = 0; i + 1 < ev.size(); ++i) {
        const Rational &u = ev[i], &w = ev[i + 1];
        auto cu = R.component_of(u), cw = R.component_of(w);
        if (cu && cw && *cu == *cw) {
            bool knot = false;
            Rational mid = (u + w) / 2;
            const Polynomial& cell = p.cells[p.cell_index(mid, knot)];
            v.value += std::abs(p.right_limit(u) - p(u));
            v.value += cell.variation(u.get_d(), w.get_d());
            v.value += std::abs(p(w) - p.left_limit(w));
        } else {
            v.value += std::abs(p(w) - p(u));
        }
    }
    return v;
}

Variation sampled_variation(const CompactLine& K, const LineFunction& G, const Point& a, const Point& b) {
    std::vector<Point> pts{a, b};
    if (const RealLine* R = as_real_line(K)) {
        Rational lo = a.real_value(), hi = b.real_value();
        for (int i = 1; i < 4096; ++i) {
            Rational x = lo + (hi - lo) * i / 4096;
            if (R->component_of(x)) pts.push_back(Point::real(x));
        }
        for (const auto& [l, r] : R->components()) {
            if (l > lo && l < hi) pts.push_back(Point::real(l));
            if (r > lo && r < hi) pts.push_back(Point::real(r));
        }
    } else {
        std::mt19937_64 rng(12345);
        for (const auto& p : K->sample(rng, 4096))
            if (p > a && p < b) pts.push_back(p);
    }
    for (const auto& p : structural_points(K, G))
        if (p > a && p < b) pts.push_back(p);
    std::sort(pts.begin(), pts.end(), PointLess{});
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    Variation v;
    v.exact = false;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) v.value += std::abs(G(pts[i + 1]) - G(pts[i]));
    v.divergent = !(v.value <= kVariationCeiling);
    return v;
}

} // namespace

Variation total_variation(const CompactLine& K, const LineFunction& G, const Point& a, const Point& b) {
    require_member(K, a);
    require_member(K, b);
    if (a > b) throw Error(ErrorKind::EndpointsOutOfOrder, "variation over [" + to_string(a) + "," + to_string(b) + "]");
    Variation v;
    if (a == b) return v;
    if (G.step) {
        for (const auto& [c, j] : G.step->jumps)
            if (c > a && c <= b) v.value += std::abs(j);
        return v;
    }
    if (G.poly) {
        if (const RealLine* R = as_real_line(K)) return poly_variation(*R, *G.poly, a.real_value(), b.real_value());
    }
    if (G.series) {
        const SequenceRule& r = G.series->rule;
        std::uint64_t lo = index_of(a);
        bool to_limit = is_omega(b);
        std::uint64_t hi = to_limit ? 0 : index_of(b);
        auto step_term = [&](std::uint64_t i) {
            return G.series->partial_sums ? std::abs(r(i)) : std::abs(r(i) - r(i - 1));
        };
        if (!to_limit) {
            for (std::uint64_t i = lo + 1; i <= hi; ++i) v.value += step_term(i);
            return v;
        }
        SeriesOptions opt;
        opt.tol = 1e-9;
        opt.ceiling = kVariationCeiling;
        opt.period = r.period();
        auto tail = sum_series([&](std::uint64_t i) { return step_term(i + lo + 1); }, opt);
        if (tail.status == Status::Divergent) {
            v.value = INFINITY;
            v.divergent = true;
            return v;
        }
        v.value = tail.value + std::abs(G(b) - left_limit(K, G, b));
        v.exact = tail.status == Status::Certified;
        return v;
    }
    return sampled_variation(K, G, a, b);
}

Variation total_variation(const CompactLine& K, const LineFunction& G) { return total_variation(K, G, K->min(), K->max()); }

double sup_abs(const CompactLine& K, const LineFunction& f, const Point& a, const Point& b) {
    double m = std::abs(f(a));
    if (f.step) {
        for (const auto& [c, j] : f.step->jumps)
            if (c > a && c <= b) m = std::max(m, std::abs(f(c)));
        return m;
    }
    const RealLine* R = as_real_line(K);
    if (f.poly && R) {
        const PiecewisePoly& p = *f.poly;
        Rational lo = a.real_value(), hi = b.real_value();
        for (const auto& [l, r] : R->components()) {
            Rational u = std::max(l, lo), w = std::min(r, hi);
            if (u > w) continue;
            std::vector<Rational> ev{u, w};
            for (const auto& k : p.knots)
                if (k > u && k < w) ev.push_back(k);
            std::sort(ev.begin(), ev.end());
            for (const auto& e : ev) m = std::max(m, std::abs(p(e)));
            for (std::size_t i = 0; i + 1 < ev.size(); ++i) {
                bool knot = false;
                Rational mid = (ev[i] + ev[i + 1]) / 2;
                m = std::max(m, p.cells[p.cell_index(mid, knot)].max_abs(ev[i].get_d(), ev[i + 1].get_d()));
            }
        }
        return m;
    }
    std::mt19937_64 rng(777);
    for (const auto& x : K->sample(rng, 2048))
        if (x >= a && x <= b) m = std::max(m, std::abs(f(x)));
    for (const auto& x : structural_points(K, f))
        if (x >= a && x <= b) m = std::max(m, std::abs(f(x)));
    return std::max(m, std::abs(f(b)));
}

double mu_interval(const CompactLine& K, const Integrator& G, const IntervalSpec& I) {
    if (!G.at_least(Regularity::NBV)) throw Error(ErrorKind::NotNBV, "mu_G needs an NBV integrator, got " + std::string(regularity_name(G.regularity)));
    IntervalSpec C = canonicalize(K, I);
    if (is_empty(K, C)) return 0;
    auto value = [&](const Cut& c) { return c.after ? G(c.at) : left_limit(K, G, c.at); };
    return value(upper_cut(C)) - value(lower_cut(C));
}

double outer_measure_bound(const CompactLine& K, const Integrator& G, const PointSet& S) {
    if (S.points.empty() && S.intervals.empty()) return 0;
    if (!G.fn.structured()) throw Error(ErrorKind::UnsupportedSet, "outer measure bounds need a structured integrator");
    auto atom = [&](const Point& c) { return std::abs(G(c) - left_limit(K, G, c)); };
    std::vector<Point> pts = S.points;
    for (const auto& p : pts) require_member(K, p);
    std::sort(pts.begin(), pts.end(), PointLess{});
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    double bound = 0;
    for (const auto& c : pts) bound += atom(c);
    for (const auto& I : S.intervals) {
        IntervalSpec C = canonicalize(K, I);
        if (is_empty(K, C)) continue;
        Variation v = total_variation(K, G.fn, C.lower, C.upper);
        if (v.divergent) return INFINITY;
        double m = v.value;
        if (!C.lower_open) m += atom(C.lower);
        if (C.upper_open) m -= atom(C.upper);
        bound += std::max(m, 0.0);
    }
    return bound;
}

} // namespace ks
