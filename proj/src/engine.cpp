#include "ks/engine.hpp"
#include "ks/certify.hpp"
#include "ks/errors.hpp"
#include "ks/series.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <cstdlib>

namespace ks {

int refine_budget(int fallback) {
    if (const char* s = std::getenv("KS_MAX_REFINE")) {
        char* end = nullptr;
        long v = std::strtol(s, &end, 10);
        if (end != s && *end == '\0' && v > 0 && v < 1000) return static_cast<int>(v);
    }
    return fallback;
}

double riemann_sum(const CompactLine& K, const Integrand& f, const Integrator& G, const std::vector<Component>& parts) {
    (void)K;
    if (parts.empty()) return 0;
    double s = f(parts.front().lo) * G(parts.front().lo);
    for (const auto& c : parts) s += f(c.tag) * (G(c.hi) - G(c.lo));
    return s;
}

namespace {

bool is_omega(const Point& x) { return x.is_ordinal() && x.cnf().size() == 2 && x.cnf()[0] == 0 && x.cnf()[1] == 1; }

std::uint64_t index_of(const Point& x) {
    const auto& c = x.cnf();
    if (c.empty()) return 0;
    if (c.size() == 1) return c[0];
    throw Error(ErrorKind::UnsupportedSet, "series functions live on [0,w]");
}

const Polynomial& cell_at(const PiecewisePoly& p, const Rational& a, const Rational& b) {
    bool knot = false;
    return p.cells[p.cell_index((a + b) / 2, knot)];
}

double left_of(const RealLine& R, const PiecewisePoly& p, const Rational& c) {
    auto j = *R.component_of(c);
    if (c == R.components()[j].first) return j == 0 ? 0.0 : p(R.components()[j - 1].second);
    return p.left_limit(c);
}

bool right_continuous(const RealLine& R, const PiecewisePoly& p, const Rational& a, const Rational& b) {
    for (std::size_t i = 0; i < p.knots.size(); ++i) {
        const Rational& k = p.knots[i];
        if (k < a || k >= b) continue;
        auto j = R.component_of(k);
        if (!j || k == R.components()[*j].second) continue;
        double v = p.knot_values[i], r = p.cells[i + 1](k.get_d());
        if (std::abs(v - r) > 1e-12 * (1 + std::abs(v))) return false;
    }
    return true;
}

void continuity_check(const CompactLine& K, const Integrand& f, const Integrator& G, const Point& a, const Point& b, IntegralResult& r) {
    if (!f.continuous) return;
    Variation v = total_variation(K, G.fn, a, b);
    if (v.divergent || !v.exact) return;
    double bound = std::abs(f(a) * G(a)) + sup_abs(K, f.fn, a, b) * v.value;
    r.continuity_check = std::abs(r.value) <= bound + 1e-9 * (1 + bound) ? 1 : 0;
}

IntegralResult exact_result(double v) {
    IntegralResult r;
    r.value = v;
    r.status = Status::Exact;
    r.path = "exact";
    r.trace.push_back({"exact", v});
    return r;
}

std::optional<IntegralResult> exact_path(const CompactLine& K, const Integrand& f, const Integrator& G, const Point& a,
                                         const Point& b, const IntegrateOptions& opt) {
    if (K->family() == Family::Finite) {
        const auto& R = static_cast<const RealLine&>(*K);
        double v = f(a) * G(a);
        Point prev = a;
        for (const auto& [l, r] : R.components()) {
            Point x = Point::real(l);
            if (x <= a || x > b) continue;
            v += f(x) * (G(x) - G(prev));
            prev = x;
        }
        return exact_result(v);
    }
    if (G.fn.step) {
        double v = f(a) * G(a);
        for (const auto& [c, j] : G.fn.step->jumps)
            if (c > a && c <= b) v += f(c) * j;
        return exact_result(v);
    }
    const RealLine* R = as_real_line(K);
    if (R && G.fn.poly) {
        const PiecewisePoly& g = *G.fn.poly;
        Rational ra = a.real_value(), rb = b.real_value();
        if (!right_continuous(*R, g, ra, rb)) return std::nullopt;
        auto pf = as_piecewise(K, f.fn);
        bool flat = g.piecewise_constant();
        if (!pf && !flat) return std::nullopt;
        double v = f(a) * G(a);
        std::vector<Rational> E;
        for (const auto& k : g.knots)
            if (k > ra && k <= rb && R->component_of(k)) E.push_back(k);
        for (std::size_t j = 1; j < R->components().size(); ++j) {
            const Rational& l = R->components()[j].first;
            if (l > ra && l <= rb) E.push_back(l);
        }
        std::sort(E.begin(), E.end());
        E.erase(std::unique(E.begin(), E.end()), E.end());
        for (const auto& c : E) v += f(Point::real(c)) * (g(c) - left_of(*R, g, c));
        if (!flat) {
            for (const auto& [l, r] : R->components()) {
                Rational u = std::max(l, ra), w = std::min(r, rb);
                if (u >= w) continue;
                std::vector<Rational> ev{u, w};
                for (const auto& k : g.knots)
                    if (k > u && k < w) ev.push_back(k);
                for (const auto& k : pf->knots)
                    if (k > u && k < w) ev.push_back(k);
                std::sort(ev.begin(), ev.end());
                ev.erase(std::unique(ev.begin(), ev.end()), ev.end());
                for (std::size_t i = 0; i + 1 < ev.size(); ++i) {
                    Polynomial Q = (cell_at(*pf, ev[i], ev[i + 1]) * cell_at(g, ev[i], ev[i + 1]).derivative()).antiderivative();
                    v += Q(ev[i + 1].get_d()) - Q(ev[i].get_d());
                }
            }
        }
        return exact_result(v);
    }
    if (K->family() == Family::Ordinal && G.fn.series && is_omega(K->max())) {
        const OrdinalSeries& gs = *G.fn.series;
        std::function<double(std::uint64_t)> fi;
        if (f.fn.series && !f.fn.series->partial_sums) {
            SequenceRule r = f.fn.series->rule;
            fi = [r](std::uint64_t i) { return r(i); };
        } else if (f.fn.step && f.fn.step->jumps.empty()) {
            double c = f.fn.step->base;
            fi = [c](std::uint64_t) { return c; };
        } else {
            auto ev = f.fn.eval;
            fi = [ev](std::uint64_t i) { return ev(Point::ordinal({i})); };
        }
        SequenceRule gr = gs.rule;
        bool partial = gs.partial_sums;
        auto inc = [gr, partial](std::uint64_t i) { return partial ? gr(i) : gr(i) - gr(i - 1); };
        std::uint64_t ia = index_of(a);
        double v = f(a) * G(a);
        if (!is_omega(b)) {
            std::uint64_t ib = index_of(b);
            for (std::uint64_t i = ia + 1; i <= ib; ++i) v += fi(i) * inc(i);
            return exact_result(v);
        }
        SeriesOptions so;
        so.tol = std::max(opt.tol, 1e-12);
        so.period = gr.period();
        if (f.fn.series) so.period = std::lcm(so.period, f.fn.series->rule.period());
        IntegralResult tail = sum_series([&](std::uint64_t i) { return fi(i + ia + 1) * inc(i + ia + 1); }, so);
        IntegralResult r = tail;
        r.path = "series";
        double jump = gs.at_limit ? G(b) - left_limit(K, G, b) : 0.0;
        r.value = v + tail.value + f(b) * jump;
        for (auto& t : r.trace) t.sum += v + f(b) * jump;
        return r;
    }
    return std::nullopt;
}

Rational ceil_q(const Rational& x) {
    mpz_class q;
    mpz_cdiv_q(q.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
    return Rational(q);
}

Rational pow2(int k) {
    mpz_class d(1);
    d <<= static_cast<unsigned>(k);
    return Rational(d);
}

} // namespace

std::vector<Component> adaptive_cells(const RealLine& R, const Rational& a, const Rational& b, const std::vector<Rational>& bps,
                                      int n, std::size_t cap, bool& overflow) {
    std::vector<Component> out;
    overflow = false;
    Rational span = R.span();
    if (span == 0) return out;
    Rational h = span / pow2(n);
    Rational rho0 = span / pow2(4 * n);
    std::optional<Rational> prev;
    for (const auto& [l, r] : R.components()) {
        Rational u = std::max(l, a), w = std::min(r, b);
        if (u > w) continue;
        if (prev) out.push_back({Point::real(*prev), Point::real(u), Point::real(u)});
        prev = w;
        if (u == w) continue;
        std::vector<Rational> pts;
        for (const auto& p : bps)
            if (p >= u && p <= w) pts.push_back(p);
        if (pts.empty() || pts.front() != u) pts.insert(pts.begin(), u);
        if (pts.back() != w) pts.push_back(w);
        std::size_t m = pts.size();
        std::vector<Rational> rho(m, rho0);
        for (std::size_t i = 0; i < m; ++i) {
            if (i > 0) rho[i] = std::min(rho[i], Rational((pts[i] - pts[i - 1]) / 4));
            if (i + 1 < m) rho[i] = std::min(rho[i], Rational((pts[i + 1] - pts[i]) / 4));
        }
        for (std::size_t i = 0; i < m; ++i) {
            Point p = Point::real(pts[i]);
            if (i > 0) out.push_back({Point::real(pts[i] - rho[i] / 2), p, p});
            if (i + 1 == m) break;
            Rational s0 = pts[i] + rho[i] / 2, s1 = pts[i + 1] - rho[i + 1] / 2;
            out.push_back({p, Point::real(s0), p});
            Rational k = ceil_q((s1 - s0) / h);
            if (k < 1) k = 1;
            if (out.size() + k.get_num().get_ui() > cap || k > Rational(static_cast<long>(cap))) {
                overflow = true;
                return out;
            }
            long kk = k.get_num().get_si();
            Rational step = (s1 - s0) / kk;
            for (long j = 0; j < kk; ++j) {
                Rational lo = s0 + step * j, hi = j + 1 == kk ? s1 : Rational(s0 + step * (j + 1));
                out.push_back({Point::real(lo), Point::real(hi), Point::real((lo + hi) / 2)});
            }
        }
    }
    return out;
}

namespace {

IntegralResult adaptive(const CompactLine& K, const Integrand& f, const Integrator& G, const Point& a, const Point& b,
                        const IntegrateOptions& opt) {
    IntegralResult res;
    res.status = Status::NoCertificate;
    res.path = "adaptive";
    res.error_bound = INFINITY;
    RefinementCertifier cert(opt.tol);
    std::vector<Point> hints = structural_points(K, f.fn);
    for (const auto& p : structural_points(K, G.fn)) hints.push_back(p);
    std::sort(hints.begin(), hints.end(), PointLess{});
    hints.erase(std::unique(hints.begin(), hints.end()), hints.end());

    const RealLine* R = as_real_line(K);
    std::vector<Rational> bps;
    if (R) {
        for (const auto& p : hints) bps.push_back(p.real_value());
        bps.push_back(a.real_value());
        bps.push_back(b.real_value());
        std::sort(bps.begin(), bps.end());
        bps.erase(std::unique(bps.begin(), bps.end()), bps.end());
    }
    std::vector<Point> expose;
    for (const auto& p : hints)
        if (p > a && p <= b) expose.push_back(p);

    for (int n = 1; n <= opt.max_refine; ++n) {
        std::vector<Component> parts;
        std::string desc;
        if (R) {
            bool overflow = false;
            parts = adaptive_cells(*R, a.real_value(), b.real_value(), bps, n, opt.max_cells, overflow);
            if (overflow) break;
            desc = "h=span*2^-" + std::to_string(n) + ", breakpoint radius span*2^-" + std::to_string(4 * n);
        } else {
            double r = std::ldexp(1.0, -n);
            Gauge g = refine_and_expose(K, uniform_gauge(K, r), std::nullopt, expose);
            CousinOptions co;
            co.lo = a;
            co.hi = b;
            co.max_components = opt.max_cells;
            try {
                parts = cousin_partition(K, g, co).parts;
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::NoProgress) throw;
                break;
            }
            desc = g.provenance;
        }
        double s = f(a) * G(a), abs_sum = std::abs(s);
        double g_prev = parts.empty() ? 0.0 : G(parts.front().lo);
        for (const auto& c : parts) {
            double g_hi = G(c.hi);
            double t = f(c.tag) * (g_hi - g_prev);
            s += t;
            abs_sum += std::abs(t);
            g_prev = g_hi;
        }
        res.trace.push_back({desc, s});
        res.value = s;
        double floor = 16 * DBL_EPSILON * abs_sum;
        if (auto c = cert.push(s, floor)) {
            res.status = Status::Certified;
            res.value = c->value;
            res.error_bound = c->error_bound;
            if (c->accelerated) res.trace.push_back({"richardson", c->value});
            return res;
        }
        if (cert.stalled()) break;
    }
    res.error_bound = cert.last_difference();
    return res;
}

} // namespace

bool has_exact_path(const CompactLine& K, const Integrand& f, const Integrator& G) {
    if (K->family() == Family::Finite || G.fn.step) return true;
    const RealLine* R = as_real_line(K);
    if (R && G.fn.poly) {
        if (!right_continuous(*R, *G.fn.poly, K->min().real_value(), K->max().real_value())) return false;
        return G.fn.poly->piecewise_constant() || as_piecewise(K, f.fn).has_value();
    }
    return K->family() == Family::Ordinal && G.fn.series && is_omega(K->max());
}

IntegralResult integrate(const CompactLine& K, const Integrand& f, const Integrator& G, const Point& a, const Point& b,
                         const IntegrateOptions& opt) {
    require_member(K, a);
    require_member(K, b);
    if (a > b) throw Error(ErrorKind::EndpointsOutOfOrder, "integral over [" + to_string(a) + "," + to_string(b) + "]");
    if (a == b) {
        IntegralResult r = exact_result(f(a) * G(a));
        return r;
    }
    if (opt.allow_exact) {
        if (auto r = exact_path(K, f, G, a, b, opt)) {
            if (r->status == Status::Exact) continuity_check(K, f, G, a, b, *r);
            return *r;
        }
    }
    return adaptive(K, f, G, a, b, opt);
}

IntegralResult integrate(const CompactLine& K, const Integrand& f, const Integrator& G, const IntegrateOptions& opt) {
    return integrate(K, f, G, K->min(), K->max(), opt);
}

double singleton_integral(const CompactLine& K, const Integrator& G, const Point& c) {
    require_member(K, c);
    if (!G.at_least(Regularity::Amenable)) throw Error(ErrorKind::NotAmenable, "singleton integrals need an amenable integrator");
    return G(c) - left_limit(K, G, c);
}

namespace {

IntegralResult combine(std::initializer_list<std::pair<double, const IntegralResult*>> parts, double shift) {
    IntegralResult r;
    r.value = shift;
    r.status = Status::Exact;
    r.path = "exact";
    for (const auto& [w, p] : parts) {
        r.value += w * p->value;
        r.error_bound += std::abs(w) * p->error_bound;
        if (p->status == Status::Divergent || r.status == Status::Divergent) r.status = Status::Divergent;
        else if (p->status == Status::NoCertificate || r.status == Status::NoCertificate) r.status = Status::NoCertificate;
        else if (p->status == Status::Certified) r.status = Status::Certified;
        if (p->path != "exact") r.path = p->path;
    }
    return r;
}

} // namespace

IntegralResult indicator_integral(const CompactLine& K, const Integrand& f, const Integrator& G, const IntervalSpec& I,
                                  const IntegrateOptions& opt) {
    if (!G.at_least(Regularity::Amenable)) throw Error(ErrorKind::NotAmenable, "indicator integrals need an amenable integrator");
    IntervalSpec C = canonicalize(K, I);
    if (is_empty(K, C)) return exact_result(0);
    if (!C.lower_open && !C.upper_open) {
        IntegralResult r = integrate(K, f, G, C.lower, C.upper, opt);
        return combine({{1.0, &r}}, -f(C.lower) * left_limit(K, G, C.lower));
    }
    // Cut values of the primitive: F(p) after p, L_F(p) before p.
    auto cut_value = [&](const Cut& c, IntegralResult& store) -> double {
        if (!c.after && c.at == K->min()) {
            store = exact_result(0);
            return 0;
        }
        store = integrate(K, f, G, K->min(), c.at, opt);
        return c.after ? 0.0 : -f(c.at) * (G(c.at) - left_limit(K, G, c.at));
    };
    IntegralResult hi, lo;
    double sh = cut_value(upper_cut(C), hi);
    double sl = cut_value(lower_cut(C), lo);
    return combine({{1.0, &hi}, {-1.0, &lo}}, sh - sl);
}

Additivity additivity_check(const CompactLine& K, const Integrand& f, const Integrator& G, const Point& a, const Point& c,
                            const Point& b, const IntegrateOptions& opt) {
    if (a > c || c > b) throw Error(ErrorKind::EndpointsOutOfOrder, "additivity needs a <= c <= b");
    IntegralResult whole = integrate(K, f, G, a, b, opt);
    IntegralResult left = integrate(K, f, G, a, c, opt);
    IntegralResult right = integrate(K, f, G, c, b, opt);
    Additivity r;
    r.lhs = whole.value;
    r.rhs = left.value + right.value - f(c) * G(c);
    r.defect = std::abs(r.lhs - r.rhs);
    r.error_bound = whole.error_bound + left.error_bound + right.error_bound;
    return r;
}

Gauge epsilon_gauge(const CompactLine& K, const Integrand& f, const Integrator& G, double eps) {
    if (!(eps > 0)) throw Error(ErrorKind::ParseError, "eps must be positive");
    if (K->family() == Family::Finite) {
        return Gauge{[](const Point& x) { return IntervalSpec::closed(x, x); }, "singletons", {}};
    }
    if (G.fn.step) {
        std::vector<Point> C;
        for (const auto& j : G.fn.step->jumps)
            if (j.first != K->min()) C.push_back(j.first);
        Gauge g = refine_and_expose(K, full_gauge(K), std::nullopt, C);
        g.provenance = "exposing the jumps of G";
        return g;
    }
    const RealLine* R = as_real_line(K);
    auto pf = as_piecewise(K, f.fn);
    if (!R || !G.fn.poly || !pf) throw Error(ErrorKind::UnsupportedSet, "eps-gauges need structured f and G on a real line");
    const PiecewisePoly& g = *G.fn.poly;
    std::vector<Rational> B;
    for (const auto& k : g.knots)
        if (R->component_of(k)) B.push_back(k);
    for (const auto& k : pf->knots)
        if (R->component_of(k)) B.push_back(k);
    for (const auto& [l, r] : R->components()) {
        B.push_back(l);
        B.push_back(r);
    }
    std::sort(B.begin(), B.end());
    B.erase(std::unique(B.begin(), B.end()), B.end());
    double lip = 0, tv = 0, supg = 0;
    for (const auto& [l, r] : R->components()) {
        if (l == r) continue;
        std::vector<Rational> ev;
        for (const auto& k : B)
            if (k >= l && k <= r) ev.push_back(k);
        for (std::size_t i = 0; i + 1 < ev.size(); ++i) {
            double u = ev[i].get_d(), w = ev[i + 1].get_d();
            const Polynomial& fc = cell_at(*pf, ev[i], ev[i + 1]);
            const Polynomial& gc = cell_at(g, ev[i], ev[i + 1]);
            lip = std::max(lip, fc.derivative().max_abs(u, w));
            supg = std::max(supg, gc.derivative().max_abs(u, w));
            tv += gc.variation(u, w);
        }
    }
    double supf = sup_abs(K, f.fn, K->min(), K->max());
    double span = R->span().get_d();
    double r = lip * tv > 0 ? (eps / 4) / (lip * tv) : span;
    double rho = supf * supg > 0 ? (eps / 4) / (static_cast<double>(B.size()) * 4 * supf * supg) : span;
    r = std::min(r, span);
    rho = std::min(rho, span);
    auto Bs = std::make_shared<std::vector<Rational>>(B);
    const RealLine* Rp = R;
    CompactLine keep = K;
    Gauge base{[Bs, Rp, keep, r, rho](const Point& x) {
                   bool at_break = std::binary_search(Bs->begin(), Bs->end(), x.real_value());
                   return Rp->ball(x, from_double(at_break ? rho : r));
               },
               "eps-gauge r=" + format_double(r) + " rho=" + format_double(rho), {}};
    std::vector<Point> C;
    for (const auto& k : B)
        if (Point::real(k) != K->min()) C.push_back(Point::real(k));
    Gauge out = refine_and_expose(K, base, std::nullopt, C);
    out.provenance = base.provenance + ", exposing " + std::to_string(C.size()) + " breakpoints";
    return out;
}

TaggedSystem random_fine_system(const CompactLine& K, const Gauge& delta, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> U(0.01, 0.2);
    Gauge eta = random_gauge(K, rng(), 0.01, U(rng));
    std::vector<Point> C;
    for (const auto& p : K->sample(rng, 3))
        if (p != K->min()) C.push_back(p);
    Gauge g = refine_and_expose(K, delta, eta, C);
    TaggedPartition P = cousin_partition(K, g);
    TaggedSystem S;
    std::bernoulli_distribution keep(0.5);
    for (const auto& c : P.parts)
        if (keep(rng)) S.parts.push_back(c);
    return S;
}

Residual saks_henstock_residual(const CompactLine& K, const Integrand& f, const Integrator& G, const TaggedSystem& S,
                                const Gauge& delta, const IntegrateOptions& opt) {
    validate_system(K, S);
    if (!is_fine(K, S, delta)) throw Error(ErrorKind::SystemNotFine, "tagged system is not fine for " + delta.provenance);
    Residual r;
    for (const auto& c : S.parts) {
        IntegralResult I = integrate(K, f, G, c.lo, c.hi, opt);
        double term = f(c.tag) * (G(c.hi) - G(c.lo)) + f(c.lo) * G(c.lo) - I.value;
        r.signed_residual += term;
        r.absolute_residual += std::abs(term);
        r.error_bound += I.error_bound;
    }
    return r;
}

LineFunction primitive(const CompactLine& K, const Integrand& f, const Integrator& G, const IntegrateOptions& opt) {
    std::string label = "F[" + f.fn.label + " d" + G.fn.label + "]";
    if (G.fn.step) {
        StepJumps s;
        s.base = f(K->min()) * G(K->min());
        for (const auto& [c, j] : G.fn.step->jumps)
            if (c != K->min()) s.jumps.emplace_back(c, f(c) * j);
        return from_step(s, label);
    }
    const RealLine* R = as_real_line(K);
    if (R && G.fn.poly && has_exact_path(K, f, G)) {
        const PiecewisePoly& g = *G.fn.poly;
        auto pf = as_piecewise(K, f.fn);
        std::vector<Rational> kn;
        for (const auto& k : g.knots)
            if (R->component_of(k)) kn.push_back(k);
        if (pf)
            for (const auto& k : pf->knots)
                if (R->component_of(k)) kn.push_back(k);
        for (const auto& [l, r] : R->components()) {
            kn.push_back(l);
            kn.push_back(r);
        }
        std::sort(kn.begin(), kn.end());
        kn.erase(std::unique(kn.begin(), kn.end()), kn.end());
        PiecewisePoly F;
        F.knots = kn;
        double v = f(K->min()) * G(K->min());
        F.knot_values.push_back(v);
        F.cells.push_back(Polynomial{{v}});
        for (std::size_t i = 1; i < kn.size(); ++i) {
            const Rational &u = kn[i - 1], &w = kn[i];
            auto cu = R->component_of(u), cw = R->component_of(w);
            Point pw = Point::real(w);
            if (cu && cw && *cu == *cw) {
                Polynomial cell{{v}};
                if (!g.piecewise_constant()) {
                    Polynomial Q = (cell_at(*pf, u, w) * cell_at(g, u, w).derivative()).antiderivative();
                    cell = Q + Polynomial{{v - Q(u.get_d())}};
                }
                F.cells.push_back(cell);
                v = cell(w.get_d()) + f(pw) * (g(w) - g.left_limit(w));
            } else {
                F.cells.push_back(Polynomial{{v}});
                v += f(pw) * (g(w) - g(u));
            }
            F.knot_values.push_back(v);
        }
        F.cells.push_back(Polynomial{{v}});
        return from_poly(F, label);
    }
    if (K->family() == Family::Ordinal && G.fn.series && G.fn.series->partial_sums && is_omega(K->max())) {
        std::optional<SequenceRule> fr;
        if (f.fn.series && !f.fn.series->partial_sums) fr = f.fn.series->rule;
        else if (f.fn.step && f.fn.step->jumps.empty()) fr = constant_rule(f.fn.step->base);
        if (fr) {
            OrdinalSeries s;
            s.rule = product_rule(*fr, G.fn.series->rule);
            s.partial_sums = true;
            if (G.fn.series->at_limit) s.at_limit = integrate(K, f, G, opt).value;
            return from_series(s, label);
        }
    }
    Integrand fc = f;
    Integrator Gc = G;
    CompactLine Kc = K;
    IntegrateOptions o = opt;
    std::vector<Point> hints = structural_points(K, f.fn);
    for (const auto& p : structural_points(K, G.fn)) hints.push_back(p);
    return black_box([Kc, fc, Gc, o](const Point& x) { return integrate(Kc, fc, Gc, Kc->min(), x, o).value; }, label, hints);
}

IntegralResult absolute_integrate(const CompactLine& K, const Integrand& f, const Integrator& G, const IntegrateOptions& opt) {
    LineFunction F = primitive(K, f, G, opt);
    Variation v = total_variation(K, F);
    IntegralResult r;
    r.path = F.series ? "series" : (F.structured() ? "exact" : "adaptive");
    if (v.divergent) {
        r.value = INFINITY;
        r.error_bound = INFINITY;
        r.status = Status::Divergent;
        r.trace.push_back({"Var(F) exceeds " + format_double(kVariationCeiling), INFINITY});
        return r;
    }
    if (!G.at_least(Regularity::NondecreasingAmenable))
        throw Error(ErrorKind::NotNondecreasing, "absolute integrals need a nondecreasing amenable integrator");
    Point z = K->min();
    r.value = std::abs(f(z)) * G(z) + v.value;
    if (F.series) {
        r.status = Status::Certified;
        r.error_bound = opt.tol;
    } else if (F.structured()) {
        r.status = Status::Exact;
    } else {
        r.status = Status::NoCertificate;
        r.error_bound = INFINITY;
    }
    r.trace.push_back({"|f(0)|G(0) + Var(F)", r.value});
    return r;
}

} // namespace ks
