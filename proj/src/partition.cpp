#include "ks/partition.hpp"
#include "ks/errors.hpp"
#include "ks/integrator.hpp"

#include <algorithm>
#include <cmath>

namespace ks {

namespace {

std::uint64_t fnv1a(const std::string& s, std::uint64_t seed) {
    std::uint64_t h = 1469598103934665603ULL ^ (seed * 0x9E3779B97F4A7C15ULL);
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    h ^= h >> 33;
    h *= 0xff51afd7ed558ccdULL;
    h ^= h >> 33;
    return h;
}

using Radius = std::function<double(const Point&)>;

Cut lift_lex_lower(const IntervalSpec& H, const CompactLine& inner) {
    Cut h = lower_cut(H);
    return h.after ? Cut{Point::pair(h.at, inner->max()), true} : Cut{Point::pair(h.at, inner->min()), false};
}

Cut lift_lex_upper(const IntervalSpec& H, const CompactLine& inner) {
    Cut h = upper_cut(H);
    return h.after ? Cut{Point::pair(h.at, inner->max()), true} : Cut{Point::pair(h.at, inner->min()), false};
}

IntervalSpec rule_for(const CompactLine& K, const Radius& rad, const Point& x);

IntervalSpec ordinal_rule(const Point& x, double r) {
    const auto& c = x.cnf();
    if (c.empty() || c[0] != 0) return IntervalSpec::closed(x, x);
    auto [base, j] = OrdinalLine::limit_decomposition(c);
    double n = std::ceil(1.0 / std::max(r, 1e-15));
    if (base.size() < j) base.resize(j, 0);
    base[j - 1] = static_cast<std::uint64_t>(std::min(n, 4.0e18));
    return IntervalSpec::left_open(Point::ordinal(base), x);
}

IntervalSpec rule_for(const CompactLine& K, const Radius& rad, const Point& x) {
    switch (K->family()) {
    case Family::Finite:
    case Family::TimeScale: return static_cast<const RealLine&>(*K).ball(x, from_double(rad(x)));
    case Family::Ordinal: return ordinal_rule(x, rad(x));
    case Family::Lex: {
        const auto& L = static_cast<const LexLine&>(*K);
        IntervalSpec H = canonicalize(L.outer(), rule_for(L.outer(), rad, x.first()));
        IntervalSpec J = canonicalize(L.inner(), rule_for(L.inner(), rad, x.second()));
        Cut lo = lower_cut(J).after || J.lower != L.inner()->min() ? Cut{Point::pair(x.first(), J.lower), J.lower_open}
                                                                     : lift_lex_lower(H, L.inner());
        Cut hi = !upper_cut(J).after || J.upper != L.inner()->max() ? Cut{Point::pair(x.first(), J.upper), !J.upper_open}
                                                                      : lift_lex_upper(H, L.inner());
        return from_cuts(K, lo, hi);
    }
    case Family::DoubleArrow: {
        const auto& D = static_cast<const DoubleArrowLine&>(*K);
        IntervalSpec H = canonicalize(D.base(), rule_for(D.base(), rad, x.first()));
        auto top = [&](const Point& p) { return Point::arrow(p, D.in_subset(p) ? 1 : 0); };
        Cut lo = lower_cut(H).after ? Cut{top(H.lower), true} : Cut{Point::arrow(H.lower, 0), false};
        Cut hi = upper_cut(H).after ? Cut{top(H.upper), true} : Cut{Point::arrow(H.upper, 0), false};
        if (x.side() == 1) lo = {Point::arrow(x.first(), 0), true};
        else if (D.in_subset(x.first())) hi = {Point::arrow(x.first(), 0), true};
        return from_cuts(K, lo, hi);
    }
    }
    throw Error(ErrorKind::FamilyMismatch, "unknown family");
}

} // namespace

Gauge full_gauge(const CompactLine& K) {
    IntervalSpec W = whole_line(K);
    return Gauge{[W](const Point&) { return W; }, "full", {}};
}

Gauge uniform_gauge(const CompactLine& K, double r) {
    Radius rad = [r](const Point&) { return r; };
    return Gauge{[K, rad](const Point& x) { return rule_for(K, rad, x); }, "uniform r=" + format_double(r), {}};
}

Gauge random_gauge(const CompactLine& K, std::uint64_t seed, double rmin, double rmax) {
    Radius rad = [seed, rmin, rmax](const Point& x) {
        double u = static_cast<double>(fnv1a(to_string(x), seed) >> 11) * 0x1.0p-53;
        return rmin + (rmax - rmin) * u;
    };
    return Gauge{[K, rad](const Point& x) { return rule_for(K, rad, x); },
                 "random seed=" + std::to_string(seed) + " r in [" + format_double(rmin) + "," + format_double(rmax) + "]", {}};
}

Gauge refine_and_expose(const CompactLine& K, const Gauge& delta, const std::optional<Gauge>& eta, const std::vector<Point>& C) {
    std::vector<Point> cs = C;
    for (const auto& c : cs) {
        require_member(K, c);
        if (c == K->min()) throw Error(ErrorKind::ExposeZero, "cannot expose 0_K");
    }
    std::sort(cs.begin(), cs.end(), PointLess{});
    cs.erase(std::unique(cs.begin(), cs.end()), cs.end());
    if (!eta && cs.empty()) return delta;
    Point lo = K->min(), hi = K->max();
    auto rule = [K, delta, eta, cs, lo, hi](const Point& x) {
        IntervalSpec I = delta(x);
        if (eta) I = intersect(K, I, (*eta)(x));
        // nearest exposed points on either side are the only ones that can bind
        auto it = std::upper_bound(cs.begin(), cs.end(), x, PointLess{});
        if (it != cs.end()) I = intersect(K, I, IntervalSpec::right_open(lo, *it));
        auto jt = std::lower_bound(cs.begin(), cs.end(), x, PointLess{});
        if (jt != cs.begin()) I = intersect(K, I, IntervalSpec::left_open(*(jt - 1), hi));
        return I;
    };
    std::vector<Point> exposed = delta.exposed;
    if (eta) exposed.insert(exposed.end(), eta->exposed.begin(), eta->exposed.end());
    exposed.insert(exposed.end(), cs.begin(), cs.end());
    std::sort(exposed.begin(), exposed.end(), PointLess{});
    exposed.erase(std::unique(exposed.begin(), exposed.end()), exposed.end());
    std::string prov = "composed(" + delta.provenance + (eta ? "," + eta->provenance : "") + ", exposing " + std::to_string(cs.size()) + ")";
    return Gauge{rule, prov, exposed};
}

TaggedPartition cousin_partition(const CompactLine& K, const Gauge& delta, const CousinOptions& opt) {
    Point lo = opt.lo ? *opt.lo : K->min();
    Point hi = opt.hi ? *opt.hi : K->max();
    require_member(K, lo);
    require_member(K, hi);
    if (lo > hi) throw Error(ErrorKind::EndpointsOutOfOrder, "cousin partition of [" + to_string(lo) + "," + to_string(hi) + "]");
    TaggedPartition P;
    if (lo == hi) {
        P.parts.push_back({lo, hi, lo});
        return P;
    }
    Point y = lo;
    while (y < hi) {
        if (P.parts.size() >= opt.max_components)
            throw Error(ErrorKind::NoProgress, "more than " + std::to_string(opt.max_components) + " components before reaching " + to_string(hi));
        IntervalSpec D = canonicalize(K, delta(y));
        if (!contains(K, D, y)) throw Error(ErrorKind::NoProgress, "gauge value " + to_string(D) + " misses its point " + to_string(y));

        std::vector<Point> cand = K->landmarks_after(y);
        auto it = std::upper_bound(delta.exposed.begin(), delta.exposed.end(), y, PointLess{});
        for (int n = 0; it != delta.exposed.end() && n < 8; ++it, ++n) cand.push_back(*it);
        cand.push_back(hi);
        if (!upper_cut(D).after) cand.push_back(D.upper);
        std::sort(cand.begin(), cand.end(), [](const Point& a, const Point& b) { return a > b; });
        cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
        bool jumped = false;
        for (const auto& t : cand) {
            if (t <= y || t > hi) continue;
            if (!K->classify_member(t).left_dense) continue;
            if (contains(K, delta(t), y)) {
                P.parts.push_back({y, t, t});
                y = t;
                jumped = true;
                break;
            }
        }
        if (jumped) continue;

        PointClass pc = K->classify_member(y);
        if (!pc.right_dense) {
            Point s = *pc.successor;
            P.parts.push_back({y, s, s});
            y = s;
            continue;
        }
        Cut u = upper_cut(D);
        std::optional<Point> z;
        if (u.after) z = u.at;
        else z = K->between(y, u.at);
        if (!z || *z <= y) throw Error(ErrorKind::NoProgress, "no room right of " + to_string(y) + " inside " + to_string(D));
        if (*z > hi) z = hi;
        P.parts.push_back({y, *z, y});
        y = *z;
    }
    return P;
}

bool is_fine(const CompactLine& K, const std::vector<Component>& parts, const Gauge& delta) {
    for (const auto& c : parts) {
        if (c.lo == c.hi) continue;
        IntervalSpec D = canonicalize(K, delta(c.tag));
        if (is_empty(K, D)) return false;
        Cut lo{c.lo, true}, hi{c.hi, true};
        if (compare_cuts(lower_cut(D), lo) > 0) return false;
        if (compare_cuts(hi, upper_cut(D)) > 0) return false;
    }
    return true;
}

void validate_partition(const CompactLine& K, const TaggedPartition& P, const Point& lo, const Point& hi) {
    if (P.parts.empty()) throw Error(ErrorKind::JunctionMismatch, "empty partition");
    if (P.parts.front().lo != lo) throw Error(ErrorKind::JunctionMismatch, "partition starts at " + to_string(P.parts.front().lo));
    if (P.parts.back().hi != hi) throw Error(ErrorKind::JunctionMismatch, "partition ends at " + to_string(P.parts.back().hi));
    for (std::size_t i = 0; i < P.parts.size(); ++i) {
        const auto& c = P.parts[i];
        require_member(K, c.lo);
        require_member(K, c.hi);
        require_member(K, c.tag);
        if (c.lo > c.hi || c.tag < c.lo || c.tag > c.hi) throw Error(ErrorKind::EndpointsOutOfOrder, "bad component " + to_string(c));
        if (i > 0 && P.parts[i - 1].hi != c.lo) throw Error(ErrorKind::JunctionMismatch, "gap before " + to_string(c));
    }
}

void validate_system(const CompactLine& K, const TaggedSystem& S) {
    for (std::size_t i = 0; i < S.parts.size(); ++i) {
        const auto& c = S.parts[i];
        require_member(K, c.lo);
        require_member(K, c.hi);
        require_member(K, c.tag);
        if (c.lo > c.hi || c.tag < c.lo || c.tag > c.hi) throw Error(ErrorKind::EndpointsOutOfOrder, "bad component " + to_string(c));
        if (i > 0 && S.parts[i - 1].hi > c.lo) throw Error(ErrorKind::EndpointsOutOfOrder, "overlapping components at " + to_string(c));
    }
}

TaggedPartition merge_partitions(const std::vector<TaggedPartition>& parts) {
    TaggedPartition out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (parts[i].parts.empty()) throw Error(ErrorKind::JunctionMismatch, "empty partition in merge");
        if (i > 0 && parts[i - 1].parts.back().hi != parts[i].parts.front().lo)
            throw Error(ErrorKind::JunctionMismatch, to_string(parts[i - 1].parts.back().hi) + " does not meet " + to_string(parts[i].parts.front().lo));
        out.parts.insert(out.parts.end(), parts[i].parts.begin(), parts[i].parts.end());
    }
    return out;
}

TaggedPartition split_at_tags(const TaggedPartition& P, const std::vector<Point>& C) {
    for (const auto& c : C) {
        bool found = std::any_of(P.parts.begin(), P.parts.end(), [&](const Component& p) { return p.tag == c; });
        if (!found) throw Error(ErrorKind::TagAbsent, to_string(c) + " is not a tag");
    }
    TaggedPartition out;
    for (const auto& p : P.parts) {
        bool hit = std::any_of(C.begin(), C.end(), [&](const Point& c) { return c == p.tag; });
        if (!hit) {
            out.parts.push_back(p);
            continue;
        }
        out.parts.push_back({p.lo, p.tag, p.tag});
        out.parts.push_back({p.tag, p.hi, p.tag});
    }
    return out;
}

namespace {

bool is_constant(const LineFunction& f) {
    if (f.step) return f.step->jumps.empty();
    if (f.poly) {
        const auto& p = *f.poly;
        double v = p.cells[0](0.0);
        for (const auto& c : p.cells)
            if (!c.is_constant() || c(0.0) != v) return false;
        for (double k : p.knot_values)
            if (k != v) return false;
        return true;
    }
    return false;
}

double lipschitz(const RealLine& R, const LineFunction& f, const Rational& l, const Rational& r) {
    if (f.poly) {
        const auto& p = *f.poly;
        std::vector<Rational> ev{l, r};
        for (const auto& k : p.knots)
            if (k > l && k < r) ev.push_back(k);
        std::sort(ev.begin(), ev.end());
        double m = 0;
        for (std::size_t i = 0; i + 1 < ev.size(); ++i) {
            bool knot = false;
            const Polynomial& cell = p.cells[p.cell_index((ev[i] + ev[i + 1]) / 2, knot)];
            m = std::max(m, cell.derivative().max_abs(ev[i].get_d(), ev[i + 1].get_d()));
        }
        return m;
    }
    if (f.step) return 0;
    // sampled modulus with a safety factor
    (void)R;
    double m = 0;
    const int n = 1024;
    Rational h = (r - l) / n;
    double prev = f(Point::real(l));
    for (int i = 1; i <= n; ++i) {
        double cur = f(Point::real(l + h * i));
        m = std::max(m, std::abs(cur - prev) / h.get_d());
        prev = cur;
    }
    return 2 * m;
}

} // namespace

std::vector<Point> uniform_division(const CompactLine& K, const Integrand& f, double eps) {
    if (!f.continuous) throw Error(ErrorKind::NotContinuousDeclared, f.fn.label + " is not declared continuous");
    if (!(eps > 0)) throw Error(ErrorKind::ParseError, "eps must be positive");
    if (is_constant(f.fn)) {
        if (K->min() == K->max()) return {K->min()};
        return {K->min(), K->max()};
    }
    std::vector<Point> z;
    if (const RealLine* R = as_real_line(K)) {
        for (const auto& [l, r] : R->components()) {
            z.push_back(Point::real(l));
            if (l == r) continue;
            double lip = lipschitz(*R, f.fn, l, r);
            double len = Rational(r - l).get_d();
            double m = std::ceil(lip * len / eps * 1.0000001);
            std::size_t n = static_cast<std::size_t>(std::max(1.0, std::min(m + 1, 1e7)));
            for (std::size_t i = 1; i < n; ++i) z.push_back(Point::real(l + (r - l) * Rational(static_cast<long>(i), static_cast<long>(n))));
            z.push_back(Point::real(r));
        }
    } else if (K->family() == Family::Ordinal && f.fn.step) {
        z.push_back(K->min());
        for (const auto& [c, j] : f.fn.step->jumps) {
            if (c == K->min()) continue;
            if (K->classify_member(c).left_dense)
                throw Error(ErrorKind::NotContinuousDeclared, f.fn.label + " jumps at the limit point " + to_string(c));
            z.push_back(c);
        }
        z.push_back(K->max());
    } else if (K->family() == Family::Ordinal && f.fn.series && !f.fn.series->partial_sums) {
        const auto& L = static_cast<const OrdinalLine&>(*K);
        if (L.alpha() != std::vector<std::uint64_t>{0, 1}) throw Error(ErrorKind::UnsupportedSet, "series integrands live on [0,w]");
        Point w = K->max();
        double lim = f(w);
        std::uint64_t N = 0;
        for (std::uint64_t n = 1; n <= (1u << 20); ++n)
            if (std::abs(f(Point::ordinal({n})) - lim) >= eps / 2) N = n;
        if (N == (1u << 20)) throw Error(ErrorKind::NotContinuousDeclared, f.fn.label + " does not settle near w");
        for (std::uint64_t n = 0; n <= N; ++n) z.push_back(Point::ordinal({n}));
        z.push_back(w);
    } else {
        throw Error(ErrorKind::UnsupportedSet, "uniform division needs a real or ordinal line with structured f");
    }
    std::sort(z.begin(), z.end(), PointLess{});
    z.erase(std::unique(z.begin(), z.end()), z.end());
    return z;
}

std::string to_string(const Component& c) {
    return "[" + to_string(c.lo) + "," + to_string(c.hi) + "]@" + to_string(c.tag);
}

} // namespace ks
