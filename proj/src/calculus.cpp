#include "ks/calculus.hpp"
#include "ks/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ks {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool close(double a, double b) { return std::abs(a - b) <= 1e-12 * (1 + std::abs(a) + std::abs(b)); }

[[noreturn]] void not_diff(const std::string& why, const Point& x) {
    throw Error(ErrorKind::NotGDifferentiable, why + " at " + to_string(x));
}

struct Side {
    bool present = false, constant = false, stable = false;
    double value = kNaN, change = 0;
    std::vector<double> q; // indexed by level - kFirst
};

constexpr int kFirst = 4, kLast = 44, kFlat = 10;

Side probe_side(const CompactLine& K, const LineFunction& f, const Integrator& G, const Point& x, bool left, double tol) {
    Side s;
    s.present = true;
    double fx = f(x), Gx = G(x);
    int zeros = 0;
    bool f_moves = false;
    int calm = 0;
    for (int k = kFirst; k <= kLast; ++k) {
        Point y = K->approach(x, left, k);
        double dG = G(y) - Gx, df = f(y) - fx;
        if (dG == 0) {
            ++zeros;
            if (df != 0) f_moves = true;
            s.q.push_back(kNaN);
            continue;
        }
        zeros = 0;
        f_moves = false;
        double q = df / dG;
        if (!s.stable && !s.q.empty() && !std::isnan(s.q.back())) {
            double c = std::abs(q - s.q.back());
            calm = c < tol / 4 ? calm + 1 : 0;
            if (calm >= 3) {
                s.stable = true;
                s.value = q;
                s.change = c;
            }
        } else if (!s.stable) {
            calm = 0;
        }
        s.q.push_back(q);
    }
    if (zeros >= kFlat) {
        s.constant = true;
        if (f_moves) s.stable = false;
        else s.stable = true;
        s.value = kNaN;
    }
    return s;
}

} // namespace

DerivativeResult g_derivative(const CompactLine& K, const LineFunction& f, const Integrator& G, const Point& x, double tol) {
    require_member(K, x);
    if (!G.at_least(Regularity::NondecreasingAmenable))
        throw Error(ErrorKind::NotNondecreasing, "G-derivatives need a nondecreasing amenable integrator");
    double Gx = G(x), LG = left_limit(K, G, x);
    PointClass pc = classify(K, x);
    DerivativeResult r;
    if (Gx != LG) {
        double fx = f(x);
        if (pc.right_dense && !close(right_limit(K, f, x), fx)) not_diff("NotRightContinuous", x);
        r.kind = DerivativeCase::Jump;
        r.value = (fx - left_limit(K, f, x)) / (Gx - LG);
        return r;
    }
    r.kind = DerivativeCase::Dense;
    if (pc.left_isolated() && !close(f(x), left_limit(K, f, x))) not_diff("LeftLimitMismatch: f differs from L_f", x);
    Side L, R;
    if (pc.left_dense) L = probe_side(K, f, G, x, true, tol);
    if (pc.right_dense) R = probe_side(K, f, G, x, false, tol);
    for (int k = kFirst; k <= kLast; ++k) {
        std::size_t i = static_cast<std::size_t>(k - kFirst);
        if (!L.present && !R.present) break;
        r.trace.push_back({k, L.present ? L.q[i] : kNaN, R.present ? R.q[i] : kNaN});
    }
    bool live_l = L.present && !L.constant, live_r = R.present && !R.constant;
    if (!live_l && !live_r) not_diff("GConstant: G is constant on a neighborhood", x);
    if ((L.present && !L.stable) || (R.present && !R.stable)) not_diff("NoStabilization: quotients did not settle", x);
    if (live_l && live_r) {
        if (std::abs(L.value - R.value) > tol) not_diff("NoStabilization: one-sided quotients disagree", x);
        r.value = (L.value + R.value) / 2;
        r.stabilization = std::max({L.change, R.change, std::abs(L.value - R.value) / 2});
    } else {
        const Side& s = live_l ? L : R;
        r.value = s.value;
        r.stabilization = s.change;
    }
    return r;
}

StraddleReport straddle_probe(const CompactLine& K, const LineFunction& f, const Integrator& G, const Point& t, double eps,
                              std::size_t samples) {
    if (!(eps > 0)) throw Error(ErrorKind::ParseError, "eps must be positive");
    DerivativeResult d = g_derivative(K, f, G, t, std::min(1e-6, eps / 4));
    double D = d.value;
    PointClass pc = classify(K, t);
    StraddleReport rep;
    rep.jump_case = d.kind == DerivativeCase::Jump;
    if (rep.jump_case && pc.left_dense) throw Error(ErrorKind::ProbeFailed, "G jumps at the left-dense point " + to_string(t));
    int m = static_cast<int>(std::max<std::size_t>(samples, 2));
    for (int k = 1; k <= 40; ++k) {
        std::vector<Point> xs{t}, ys{t};
        IntervalSpec I;
        if (pc.left_dense && !rep.jump_case) {
            Point lo = K->approach(t, true, k);
            for (int j = 0; j < m; ++j) xs.push_back(K->approach(t, true, k + j));
            I.lower = lo;
            I.lower_open = true;
        } else {
            if (pc.predecessor) xs.push_back(*pc.predecessor);
            I.lower = t;
            I.lower_open = false;
        }
        if (pc.right_dense) {
            for (int j = 1; j <= m; ++j) ys.push_back(K->approach(t, false, k + j));
            I.upper = K->approach(t, false, k);
            I.upper_open = true;
        } else if (pc.successor) {
            I.upper = *pc.successor;
            I.upper_open = true;
        } else {
            I.upper = t;
            I.upper_open = false;
        }
        bool ok = true;
        double worst = 0;
        std::size_t pairs = 0;
        for (const auto& x : xs) {
            double fx = f(x), Gx = G(x), LGx = rep.jump_case ? left_limit(K, G, x) : 0.0;
            for (const auto& y : ys) {
                double fy = f(y), Gy = G(y);
                double lhs = std::abs(fy - fx - D * (Gy - Gx));
                double bound = eps * (rep.jump_case ? Gy - LGx : Gy - Gx);
                double slack = 1e-12 * (std::abs(fy) + std::abs(fx) + std::abs(D) * (std::abs(Gy) + std::abs(Gx)));
                ++pairs;
                if (lhs > bound + slack) ok = false;
                if (bound > 0) worst = std::max(worst, lhs / bound);
            }
        }
        if (ok) {
            rep.interval = I;
            rep.pairs = pairs;
            rep.worst_ratio = worst;
            return rep;
        }
    }
    throw Error(ErrorKind::ProbeFailed, "no interval around " + to_string(t) + " passed at the sampling resolution");
}

namespace {

std::vector<Point> left_isolated_candidates(const CompactLine& K, const LineFunction& F, const Integrand& f,
                                            const Integrator& G) {
    std::vector<Point> c;
    for (const auto* fn : {&F, &f.fn, &G.fn})
        for (const auto& p : structural_points(K, *fn)) c.push_back(p);
    if (const RealLine* R = as_real_line(K)) {
        for (const auto& comp : R->components()) c.push_back(Point::real(comp.first));
    }
    if (K->family() == Family::Ordinal) {
        Point top = K->max();
        for (std::uint64_t n = 1; n <= 64; ++n) {
            Point p = Point::ordinal({n});
            if (p <= top) c.push_back(p);
        }
    }
    std::sort(c.begin(), c.end(), PointLess{});
    c.erase(std::unique(c.begin(), c.end()), c.end());
    std::vector<Point> out;
    for (const auto& p : c)
        if (p != K->min() && K->contains(p) && classify(K, p).left_isolated()) out.push_back(p);
    return out;
}

} // namespace

FtcIntegrateReport ftc_integrate_derivative(const CompactLine& K, const LineFunction& F, const Integrand& f,
                                            const Integrator& G, const std::vector<Point>& exceptions,
                                            const IntegrateOptions& opt) {
    for (const auto& e : exceptions) {
        require_member(K, e);
        if (e != K->min() && classify(K, e).left_isolated())
            throw Error(ErrorKind::PreconditionViolated, "exception " + to_string(e) + " is left-isolated");
    }
    FtcIntegrateReport rep;
    rep.checked = left_isolated_candidates(K, F, f, G);
    for (const auto& c : rep.checked) {
        try {
            double D = g_derivative(K, F, G, c).value;
            double fc = f(c);
            if (std::abs(D - fc) > 1e-9 * (1 + std::abs(D)))
                rep.violations.push_back({c, "dF/dG = " + format_double(D) + " but f = " + format_double(fc)});
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::NotGDifferentiable) throw;
            rep.violations.push_back({c, e.detail()});
        }
    }
    IntegralResult I = integrate(K, f, G, opt);
    Point z = K->min(), o = K->max();
    rep.lhs = I.value;
    rep.rhs = F(o) - (F(z) - f(z) * G(z));
    rep.defect = std::abs(rep.lhs - rep.rhs);
    rep.error_bound = I.error_bound;
    rep.status = I.status;
    return rep;
}

FtcDifferentiateReport ftc_differentiate_integral(const CompactLine& K, const Integrand& f, const Integrator& G,
                                                  const std::vector<Point>& probes, double tol, const IntegrateOptions& opt) {
    if (!G.at_least(Regularity::NondecreasingAmenable))
        throw Error(ErrorKind::NotNondecreasing, "differentiating integrals needs a nondecreasing amenable integrator");
    LineFunction F = primitive(K, f, G, opt);
    FtcDifferentiateReport rep;
    for (const auto& x : probes) {
        require_member(K, x);
        FtcProbe p;
        p.x = x;
        p.f = f(x);
        p.jump = G(x) != left_limit(K, G, x);
        try {
            DerivativeResult d = g_derivative(K, F, G, x, tol);
            p.derivative = d.value;
            p.deviation = std::abs(d.value - p.f);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::NotGDifferentiable) throw;
            p.error = e.detail();
            p.derivative = kNaN;
            p.deviation = INFINITY;
        }
        // Jump probes are exact up to the rounding of one product and one quotient.
        double allowed = p.jump ? 8 * std::numeric_limits<double>::epsilon() * (1 + std::abs(p.f)) : tol;
        if (!(p.deviation <= allowed)) rep.exceptional.push_back(x);
        rep.probes.push_back(p);
    }
    if (!rep.exceptional.empty()) rep.outer_measure_bound = outer_measure_bound(K, G, PointSet{rep.exceptional, {}});
    return rep;
}

} // namespace ks
