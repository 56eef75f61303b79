#include "ks/bridges.hpp"
#include "ks/certify.hpp"
#include "ks/errors.hpp"

#include <algorithm>
#include <cfloat>
#include <climits>
#include <cmath>
#include <random>

namespace ks {

// Time scales ----------------------------------------------------------------

namespace {

const RealLine& time_scale(const CompactLine& T) {
    const RealLine* R = as_real_line(T);
    if (!R) throw Error(ErrorKind::FamilyMismatch, "time scale expected, got " + T->describe());
    return *R;
}

} // namespace

Point backward_jump(const CompactLine& T, const Point& x) {
    const RealLine& R = time_scale(T);
    require_member(T, x);
    std::size_t j = *R.component_of(x.real_value());
    if (j > 0 && x.real_value() == R.components()[j].first) return Point::real(R.components()[j - 1].second);
    return x;
}

bool is_gamma_fine(const std::vector<Component>& parts, const NablaGauge& g) {
    for (const auto& c : parts) {
        double t = c.tag.to_double();
        if (c.lo.to_double() < t - g.gammaL(c.tag) || c.hi.to_double() > t + g.gammaR(c.tag)) return false;
    }
    return true;
}

namespace {

NablaGauge nabla_gauge(const CompactLine& T, std::vector<Rational> bps, double r) {
    auto B = std::make_shared<std::vector<Rational>>(std::move(bps));
    CompactLine keep = T;
    auto dist = [B](const Rational& x, bool right) {
        if (right) {
            auto it = std::upper_bound(B->begin(), B->end(), x);
            return it == B->end() ? INFINITY : Rational(*it - x).get_d();
        }
        auto it = std::lower_bound(B->begin(), B->end(), x);
        return it == B->begin() ? INFINITY : Rational(x - *std::prev(it)).get_d();
    };
    NablaGauge g;
    g.gammaR = [dist, r](const Point& x) { return std::min(r, dist(x.real_value(), true)); };
    g.gammaL = [dist, r, keep](const Point& x) {
        double back = Rational(x.real_value() - backward_jump(keep, x).real_value()).get_d();
        return std::max(std::min(r, dist(x.real_value(), false)), back);
    };
    g.provenance = "gamma r=" + format_double(r);
    return g;
}

} // namespace

NablaResult nabla_integrate(const CompactLine& T, const Integrand& f, const Integrator& G, const IntegrateOptions& opt) {
    const RealLine& R = time_scale(T);
    Point a = T->min(), b = T->max();
    NablaResult out;
    out.ks = integrate(T, f, G, opt);
    IntegralResult& nab = out.nabla;
    nab.path = "nabla";
    if (T->family() == Family::Finite) {
        double s = 0;
        for (std::size_t j = 1; j < R.components().size(); ++j) {
            Point lo = Point::real(R.components()[j - 1].first), hi = Point::real(R.components()[j].first);
            s += f(hi) * (G(hi) - G(lo));
        }
        nab.value = s;
        nab.status = Status::Exact;
        nab.trace.push_back({"forced partition", s});
    } else {
        std::vector<Rational> bps;
        for (const auto* fn : {&f.fn, &G.fn})
            for (const auto& p : structural_points(T, *fn)) bps.push_back(p.real_value());
        bps.push_back(a.real_value());
        bps.push_back(b.real_value());
        for (const auto& [l, r] : R.components()) {
            bps.push_back(l);
            bps.push_back(r);
        }
        std::sort(bps.begin(), bps.end());
        bps.erase(std::unique(bps.begin(), bps.end()), bps.end());
        nab.status = Status::NoCertificate;
        nab.error_bound = INFINITY;
        RefinementCertifier cert(opt.tol);
        for (int n = 1; n <= opt.max_refine; ++n) {
            bool overflow = false;
            auto parts = adaptive_cells(R, a.real_value(), b.real_value(), bps, n, opt.max_cells, overflow);
            if (overflow) break;
            NablaGauge g = nabla_gauge(T, bps, std::ldexp(R.span().get_d(), -n));
            if (!is_gamma_fine(parts, g)) throw Error(ErrorKind::SystemNotFine, "partition is not gamma-fine at level " + std::to_string(n));
            double s = 0, abs_sum = 0;
            for (const auto& c : parts) {
                double t = f(c.tag) * (G(c.hi) - G(c.lo));
                s += t;
                abs_sum += std::abs(t);
            }
            nab.trace.push_back({g.provenance, s});
            nab.value = s;
            if (auto c = cert.push(s, 16 * DBL_EPSILON * abs_sum)) {
                nab.status = Status::Certified;
                nab.value = c->value;
                nab.error_bound = c->error_bound;
                if (c->accelerated) nab.trace.push_back({"richardson", c->value});
                break;
            }
            if (cert.stalled()) break;
        }
        if (nab.status != Status::Certified) nab.error_bound = cert.last_difference();
    }
    out.defect = std::abs(out.ks.value - (f(a) * G(a) + nab.value));
    out.error_bound = out.ks.error_bound + nab.error_bound;
    return out;
}

// Simple functions -----------------------------------------------------------

LineFunction to_line_function(const CompactLine& K, const SimpleFunction& phi) {
    LineFunction acc = constant_function(0);
    for (const auto& t : phi.terms) acc = linear_combination(K, 1.0, acc, t.coefficient, indicator(K, t.sets));
    acc.label = "simple";
    return acc;
}

SimpleIntegral simple_function_integral(const CompactLine& K, const SimpleFunction& phi, const Integrator& G,
                                        const IntegrateOptions& opt) {
    if (!G.at_least(Regularity::NondecreasingAmenable))
        throw Error(ErrorKind::NotNondecreasing, "the measure side needs a nondecreasing amenable integrator");
    std::vector<IntervalSpec> all;
    for (const auto& t : phi.terms)
        for (const auto& s : t.sets) all.push_back(s);
    for (std::size_t i = 0; i < all.size(); ++i)
        for (std::size_t j = i + 1; j < all.size(); ++j)
            if (intersects(K, all[i], all[j]))
                throw Error(ErrorKind::OverlappingSets, to_string(all[i]) + " meets " + to_string(all[j]));
    SimpleIntegral r;
    IntegralResult I = integrate(K, Integrand{to_line_function(K, phi), false}, G, opt);
    r.ks_value = I.value;
    r.status = I.status;
    for (const auto& t : phi.terms)
        for (const auto& s : t.sets) r.measure_value += t.coefficient * mu_interval(K, G, s);
    r.defect = std::abs(r.ks_value - r.measure_value);
    return r;
}

// Convergence theorems -------------------------------------------------------

const char* mode_name(ConvergenceMode m) {
    switch (m) {
    case ConvergenceMode::MCT: return "MCT";
    case ConvergenceMode::DCT: return "DCT";
    case ConvergenceMode::Fatou: return "Fatou";
    }
    return "?";
}

namespace {

double neville_at_zero(const std::vector<double>& h, std::vector<double> y) {
    std::size_t n = h.size();
    for (std::size_t k = 1; k < n; ++k)
        for (std::size_t i = 0; i + k < n; ++i) y[i] = (h[i] * y[i + 1] - h[i + k] * y[i]) / (h[i] - h[i + k]);
    return y[0];
}

// Up to six indices of the given parity, evenly spaced in the upper half of [1, m_max].
// Low indices carry geometric tails such as 2^-m that a polynomial in 1/m cannot absorb.
std::vector<int> nodes(int m_max, int parity) {
    int step = std::max(2, 2 * static_cast<int>(std::lround(m_max / 24.0)));
    int k = m_max % 2 == parity ? m_max : m_max - 1;
    std::vector<int> out;
    while (out.size() < 6 && k >= std::max(1, m_max / 2)) {
        out.push_back(k);
        k -= step;
    }
    return out;
}

[[noreturn]] void violated(const std::string& what, int m, const Point& x) {
    throw Error(ErrorKind::HypothesisViolated, what + " at index " + std::to_string(m) + ", point " + to_string(x));
}

} // namespace

ConvergenceReport convergence_harness(const CompactLine& K, const Integrator& G, const ConvergenceProblem& p,
                                      const IntegrateOptions& opt) {
    if (p.m_max < 4 || p.m_max > 4096) throw Error(ErrorKind::ParseError, "m_max must lie in [4, 4096]");
    if (!G.at_least(Regularity::NondecreasingAmenable))
        throw Error(ErrorKind::NotNondecreasing, "convergence theorems need a nondecreasing amenable integrator");
    ConvergenceReport rep;
    std::mt19937_64 rng(11);
    std::vector<Point> xs = K->sample(rng, 48);
    for (const auto& q : structural_points(K, p.limit.fn)) xs.push_back(q);
    xs.push_back(K->min());
    xs.push_back(K->max());
    std::sort(xs.begin(), xs.end(), PointLess{});
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

    std::vector<Integrand> fam;
    for (int m = 1; m <= p.m_max; ++m) fam.push_back(p.family(m));

    if (p.mode == ConvergenceMode::MCT) {
        int dir = 0;
        for (int m = 1; m < p.m_max; ++m)
            for (const auto& x : xs) {
                double d = fam[m](x) - fam[m - 1](x);
                if (d == 0) continue;
                int s = d > 0 ? 1 : -1;
                if (dir == 0) dir = s;
                else if (s != dir) violated("sequence is not monotone", m, x);
            }
        rep.log.push_back(std::string("monotone ") + (dir >= 0 ? "nondecreasing" : "nonincreasing") + " on " +
                          std::to_string(xs.size()) + " points");
    } else if (p.mode == ConvergenceMode::DCT) {
        if (!p.lower || !p.upper) throw Error(ErrorKind::HypothesisViolated, "DCT needs both envelopes g and h");
        for (int m = 1; m <= p.m_max; ++m)
            for (const auto& x : xs) {
                double v = fam[m - 1](x);
                if (v < (*p.lower)(x) || v > (*p.upper)(x)) violated("f_m leaves [g, h]", m, x);
            }
        rep.log.push_back("g <= f_m <= h on " + std::to_string(xs.size()) + " points");
    } else {
        for (int m = 1; m <= p.m_max; ++m)
            for (const auto& x : xs) {
                double floor = p.lower ? (*p.lower)(x) : 0.0;
                if (fam[m - 1](x) < floor) violated("f_m below its lower bound", m, x);
            }
        rep.log.push_back("f_m bounded below on " + std::to_string(xs.size()) + " points");
    }

    for (int m = 1; m <= p.m_max; ++m) {
        IntegralResult I = integrate(K, fam[m - 1], G, opt);
        if (I.status == Status::Divergent || I.status == Status::NoCertificate)
            rep.log.push_back("m=" + std::to_string(m) + " " + status_name(I.status));
        rep.values.emplace_back(m, I.value);
    }
    double ext[2];
    for (int parity = 0; parity < 2; ++parity) {
        std::vector<double> h, y;
        for (int m : nodes(p.m_max, parity)) {
            h.push_back(1.0 / m);
            y.push_back(rep.values[m - 1].second);
        }
        ext[parity] = neville_at_zero(h, y);
    }
    rep.extrapolated = (ext[0] + ext[1]) / 2;
    rep.spread = std::abs(ext[0] - ext[1]);
    if (p.mode == ConvergenceMode::Fatou) rep.extrapolated = std::min(ext[0], ext[1]);
    IntegralResult L = integrate(K, p.limit, G, opt);
    rep.limit_integral = L.value;
    rep.defect = std::abs(rep.extrapolated - rep.limit_integral);
    rep.inequality_holds = rep.limit_integral <= rep.extrapolated + p.tol;
    rep.log.push_back("extrapolated " + format_double(rep.extrapolated) + ", limit " + format_double(rep.limit_integral));
    return rep;
}

// Vitali ---------------------------------------------------------------------

VitaliSelection vitali_select(const CompactLine& K, const Integrator& G, const std::vector<IntervalSpec>& F) {
    if (!G.at_least(Regularity::NondecreasingAmenable))
        throw Error(ErrorKind::NotNondecreasing, "Vitali selection needs a positive measure");
    VitaliSelection sel;
    double muK = mu_interval(K, G, whole_line(K));
    std::vector<int> cls;
    for (const auto& I : F) {
        double m = mu_interval(K, G, I);
        sel.measures.push_back(m);
        if (m <= 0) {
            cls.push_back(INT_MAX);
            continue;
        }
        int n = 1;
        while (n < 2000 && m <= std::ldexp(muK, -n)) ++n;
        cls.push_back(n);
    }
    std::vector<std::size_t> order(F.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return cls[a] < cls[b]; });
    for (std::size_t i : order) {
        if (is_empty(K, F[i])) continue;
        bool free = true;
        for (std::size_t j : sel.selected)
            if (intersects(K, F[i], F[j])) {
                free = false;
                break;
            }
        if (free) sel.selected.push_back(i);
    }
    for (std::size_t j : sel.selected) {
        IntervalSpec h = F[j];
        for (std::size_t i = 0; i < F.size(); ++i)
            if (intersects(K, F[i], F[j]) && 2 * sel.measures[j] >= sel.measures[i]) h = hull(K, h, F[i]);
        sel.hulls.push_back(h);
    }
    return sel;
}

namespace {

bool blocked(const CompactLine& K, const std::vector<IntervalSpec>& F, const std::vector<std::size_t>& cover,
             const std::vector<std::size_t>& cand, std::vector<std::size_t>& chosen, int depth) {
    const std::size_t* open = nullptr;
    for (const auto& i : cover) {
        bool hit = false;
        for (std::size_t j : chosen)
            if (intersects(K, F[i], F[j])) {
                hit = true;
                break;
            }
        if (!hit) {
            open = &i;
            break;
        }
    }
    if (!open) return true;
    if (depth > 64) return false;
    for (std::size_t j : cand) {
        if (!intersects(K, F[*open], F[j])) continue;
        bool disjoint = true;
        for (std::size_t c : chosen)
            if (c == j || intersects(K, F[c], F[j])) {
                disjoint = false;
                break;
            }
        if (!disjoint) continue;
        chosen.push_back(j);
        if (blocked(K, F, cover, cand, chosen, depth + 1)) return true;
        chosen.pop_back();
    }
    return false;
}

} // namespace

std::optional<AdmissibilityWitness> admissibility_witness(const CompactLine& K, const std::vector<Point>& A,
                                                          const std::vector<IntervalSpec>& F) {
    for (const auto& a : A) {
        require_member(K, a);
        std::vector<std::size_t> cover, cand;
        for (std::size_t i = 0; i < F.size(); ++i) {
            if (is_empty(K, F[i])) continue;
            (contains(K, F[i], a) ? cover : cand).push_back(i);
        }
        std::vector<std::size_t> chosen;
        if (blocked(K, F, cover, cand, chosen, 0)) return AdmissibilityWitness{a, chosen};
    }
    return std::nullopt;
}

VitaliCover vitali_cover_finite(const CompactLine& K, const Integrator& G, const std::vector<Point>& A,
                                const std::vector<IntervalSpec>& F, double eps) {
    if (!(eps > 0)) throw Error(ErrorKind::ParseError, "eps must be positive");
    if (auto w = admissibility_witness(K, A, F)) {
        std::string s = "point " + to_string(w->point) + " is cut off by {";
        for (std::size_t i = 0; i < w->blocking.size(); ++i) s += (i ? ", " : "") + to_string(F[w->blocking[i]]);
        throw Error(ErrorKind::NotAdmissible, s + "}");
    }
    VitaliSelection sel = vitali_select(K, G, F);
    std::vector<double> mus;
    for (std::size_t j : sel.selected) mus.push_back(sel.measures[j]);
    std::vector<double> sorted = mus;
    std::sort(sorted.begin(), sorted.end());
    VitaliCover out;
    out.delta = INFINITY;
    double below_all = 0;
    for (double m : sorted) below_all += m;
    if (!(below_all < eps / 5)) {
        double prefix = 0;
        out.delta = 0;
        for (std::size_t i = 0; i < sorted.size(); ++i) {
            if (sorted[i] > 0 && prefix < eps / 5) out.delta = sorted[i];
            prefix += sorted[i];
        }
    }
    double small = 0;
    for (std::size_t k = 0; k < sel.selected.size(); ++k) {
        if (mus[k] >= out.delta) out.chosen.push_back(sel.selected[k]);
        else small += mus[k];
    }
    out.bound = 5 * small;
    for (const auto& a : A) {
        bool covered = false;
        for (std::size_t j : out.chosen)
            if (contains(K, F[j], a)) {
                covered = true;
                break;
            }
        if (!covered) out.defect += mu_interval(K, G, singleton(K, a));
    }
    return out;
}

// Series on [0,w] ------------------------------------------------------------

IntegralResult ordinal_series_integral(const SequenceRule& a, const SequenceRule& f, double tol) {
    CompactLine W = make_ordinal({0, 1});
    OrdinalSeries gs;
    gs.rule = a;
    gs.partial_sums = true;
    OrdinalSeries fs;
    fs.rule = f;
    fs.at_limit = 0.0;
    Integrator G{from_series(gs, "sum a"), Regularity::Arbitrary};
    Integrand fi{from_series(fs, "f"), false};
    IntegrateOptions opt;
    opt.tol = tol;
    IntegralResult r = integrate(W, fi, G, opt);
    if (r.status == Status::Divergent) throw Error(ErrorKind::SeriesDivergent, "partial sums of f(i)a_i fail the Cauchy test");
    return r;
}

} // namespace ks
