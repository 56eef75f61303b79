#include "ks/cli.hpp"

#include "ks/calculus.hpp"
#include "ks/catalog.hpp"
#include "ks/errors.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <random>
#include <set>

namespace ks {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Settings {
    std::optional<double> tol;
    int max_refine = 40;
    std::string format = "table";
    std::uint64_t seed = 0;
    int probes = 16;
};

// Numbers that don't fit a row's value column go into the note.
std::string points_text(const std::vector<Point>& xs) {
    std::string s;
    for (const auto& x : xs) s += (s.empty() ? "" : " ") + to_string(x);
    return s.empty() ? "none" : s;
}

const Integrator& need_G(const Problem& p) {
    if (!p.G) throw Error(ErrorKind::ParseError, "problem: this command needs G");
    return *p.G;
}

const Integrand& need_f(const Problem& p) {
    if (!p.f) throw Error(ErrorKind::ParseError, "problem: this command needs f");
    return *p.f;
}

void add_result(Report& rep, const std::string& name, const IntegralResult& r) {
    rep.add(name, r.value, r.error_bound, status_name(r.status), r.path);
    for (const auto& t : r.trace) rep.add("trace", t.sum, kNaN, "-", t.gauge);
    if (r.continuity_check >= 0)
        rep.add("continuity_check", r.continuity_check, 0, r.continuity_check ? "PASS" : "FAIL",
                "|S - integral| within w(f) Var(G) on every partition tried");
}

const char* verdict(bool ok) { return ok ? "PASS" : "FAIL"; }

std::vector<Point> probe_points(const Problem& p, const Settings& s) {
    if (!p.points.empty()) return p.points;
    const CompactLine& K = p.line;
    std::mt19937_64 rng(s.seed);
    std::vector<Point> xs = K->sample(rng, static_cast<std::size_t>(s.probes));
    if (p.f)
        for (const auto& x : structural_points(K, p.f->fn)) xs.push_back(x);
    if (p.G)
        for (const auto& x : structural_points(K, p.G->fn)) xs.push_back(x);
    std::sort(xs.begin(), xs.end(), PointLess{});
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    return xs;
}

void cmd_classify(const Problem& p, Report& rep) {
    const CompactLine& K = p.line;
    std::vector<Point> xs = p.points;
    if (xs.empty()) xs = {K->min(), K->max()};
    rep.note("line", "-", K->describe());
    for (const auto& x : xs) {
        PointClass c = classify(K, x);
        std::string note = c.left_dense ? "left-dense" : c.predecessor ? "left-isolated, pred " + to_string(*c.predecessor) : "left-isolated, minimum";
        note += c.right_dense ? "; right-dense" : c.successor ? "; right-isolated, succ " + to_string(*c.successor) : "; right-isolated, maximum";
        rep.note(to_string(x), c.left_dense ? "left-dense" : "left-isolated", note);
    }
}

Gauge build_gauge(const Problem& p) {
    GaugeSpec g = p.gauge.value_or(GaugeSpec{});
    if (g.kind == GaugeSpec::Kind::Random) return random_gauge(p.line, g.seed, g.rmin, g.rmax);
    return uniform_gauge(p.line, g.radius);
}

void cmd_partition(const Problem& p, Report& rep) {
    const CompactLine& K = p.line;
    Gauge d = build_gauge(p);
    CousinOptions co;
    if (p.interval) {
        co.lo = p.interval->lower;
        co.hi = p.interval->upper;
    }
    TaggedPartition P = cousin_partition(K, d, co);
    bool fine = is_fine(K, P, d);
    rep.add("parts", static_cast<double>(P.parts.size()), 0, verdict(fine), d.provenance);
    for (const auto& c : P.parts) rep.note("part", "-", to_string(c));
    if (p.f && p.G) rep.add("riemann_sum", riemann_sum(K, *p.f, *p.G, P.parts), kNaN, "-", "f(0)G(0) + sum f(t) dG");
}

void cmd_integrate(const Problem& p, const IntegrateOptions& opt, double series_tol, Report& rep) {
    const CompactLine& K = p.line;
    if (p.series) {
        if (p.absolute) {
            try {
                add_result(rep, "absolute", ordinal_series_integral(abs_rule(p.series->a), abs_rule(p.series->f), series_tol));
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::SeriesDivergent) throw;
                rep.add("absolute", INFINITY, INFINITY, status_name(Status::Divergent), e.detail());
            }
            return;
        }
        try {
            add_result(rep, "integral", ordinal_series_integral(p.series->a, p.series->f, series_tol));
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::SeriesDivergent) throw;
            rep.add("integral", kNaN, INFINITY, status_name(Status::Divergent), e.detail());
        }
        return;
    }
    const Integrator& G = need_G(p);
    if (p.simple) {
        SimpleIntegral s = simple_function_integral(K, *p.simple, G, opt);
        rep.add("ks", s.ks_value, kNaN, status_name(s.status));
        rep.add("measure", s.measure_value, kNaN, "Exact", "sum of c mu(A)");
        rep.add("defect", s.defect, 1e-12, verdict(s.defect <= 1e-12));
        return;
    }
    const Integrand& f = need_f(p);
    if (p.absolute) {
        add_result(rep, "absolute", absolute_integrate(K, f, G, opt));
        return;
    }
    if (p.interval) {
        add_result(rep, "integral", indicator_integral(K, f, G, *p.interval, opt));
        return;
    }
    add_result(rep, "integral", integrate(K, f, G, opt));
}

void cmd_variation(const Problem& p, Report& rep) {
    const CompactLine& K = p.line;
    if (!p.G && !p.f) throw Error(ErrorKind::ParseError, "problem: variation needs G or f");
    const LineFunction& g = p.G ? p.G->fn : p.f->fn;
    Variation v = p.interval ? total_variation(K, g, p.interval->lower, p.interval->upper) : total_variation(K, g);
    if (v.divergent) rep.add("variation", INFINITY, INFINITY, status_name(Status::Divergent), g.label);
    else rep.add("variation", v.value, 0, status_name(Status::Exact), g.label);
    if (p.G && p.interval && p.G->at_least(Regularity::NBV))
        rep.add("mu", mu_interval(K, *p.G, *p.interval), 0, status_name(Status::Exact), to_string(*p.interval));
}

void cmd_derivative(const Problem& p, const Settings& s, double tol, Report& rep) {
    const CompactLine& K = p.line;
    const Integrator& G = need_G(p);
    if (!p.F && !p.f) throw Error(ErrorKind::ParseError, "problem: derivative needs F or f");
    const LineFunction& F = p.F ? *p.F : p.f->fn;
    for (const auto& x : probe_points(p, s)) {
        std::string at = to_string(x);
        try {
            DerivativeResult d = g_derivative(K, F, G, x, tol);
            bool jump = d.kind == DerivativeCase::Jump;
            rep.add("derivative " + at, d.value, jump ? 0 : d.stabilization, jump ? "Exact" : "Certified",
                    jump ? "jump quotient" : "dense limit over " + std::to_string(d.trace.size()) + " levels");
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::NotGDifferentiable) throw;
            rep.add("derivative " + at, kNaN, kNaN, "NotGDifferentiable", e.detail());
            continue;
        }
        try {
            StraddleReport st = straddle_probe(K, F, G, x, tol, static_cast<std::size_t>(s.probes));
            rep.add("straddle " + at, st.worst_ratio, 1, verdict(st.worst_ratio <= 1),
                    to_string(st.interval) + ", " + std::to_string(st.pairs) + " pairs");
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::ProbeFailed) throw;
            rep.note("straddle " + at, "ProbeFailed", e.detail());
        }
    }
}

void cmd_ftc(const Problem& p, const Settings& s, const IntegrateOptions& opt, double dtol, Report& rep) {
    const CompactLine& K = p.line;
    const Integrator& G = need_G(p);
    const Integrand& f = need_f(p);
    if (p.F) {
        FtcIntegrateReport r = ftc_integrate_derivative(K, *p.F, f, G, p.exceptions, opt);
        rep.add("lhs", r.lhs, r.error_bound, status_name(r.status), "integral of f dG");
        rep.add("rhs", r.rhs, 0, "Exact", "F(1) - F(0) + f(0)G(0)");
        double allowed = opt.tol + r.error_bound;
        std::string st = r.defect <= allowed ? "PASS" : r.violations.empty() ? "FAIL" : "PreconditionViolated";
        rep.add("defect", r.defect, allowed, st, std::to_string(r.checked.size()) + " left-isolated points checked");
        for (const auto& v : r.violations) rep.note("violation", "PreconditionViolated", "at " + to_string(v.at) + ": " + v.reason);
        return;
    }
    FtcDifferentiateReport r = ftc_differentiate_integral(K, f, G, probe_points(p, s), dtol, opt);
    for (const auto& q : r.probes) {
        std::string at = to_string(q.x);
        if (!q.error.empty()) {
            rep.add("probe " + at, kNaN, kNaN, "NotGDifferentiable", q.error);
            continue;
        }
        bool exceptional = std::find(r.exceptional.begin(), r.exceptional.end(), q.x) != r.exceptional.end();
        rep.add("probe " + at, q.derivative, q.deviation, exceptional ? "Exceptional" : "PASS",
                std::string(q.jump ? "jump" : "dense") + ", f = " + format_number(q.f));
    }
    rep.add("outer_measure_bound", r.outer_measure_bound, dtol, verdict(r.outer_measure_bound <= dtol),
            "Z = " + points_text(r.exceptional));
}

void cmd_nabla(const Problem& p, const IntegrateOptions& opt, Report& rep) {
    NablaResult n = nabla_integrate(p.line, need_f(p), need_G(p), opt);
    add_result(rep, "nabla", n.nabla);
    add_result(rep, "ks", n.ks);
    double allowed = std::max(opt.tol, n.error_bound);
    rep.add("defect", n.defect, allowed, verdict(n.defect <= allowed), "ks - f(a)G(a) - nabla");
}

void cmd_vitali(const Problem& p, Report& rep) {
    if (!p.vitali) throw Error(ErrorKind::ParseError, "problem: vitali needs a vitali section");
    const CompactLine& K = p.line;
    const Integrator& G = need_G(p);
    const VitaliSpec& v = *p.vitali;
    VitaliSelection sel = vitali_select(K, G, v.family);
    std::string idx;
    for (std::size_t i : sel.selected) idx += (idx.empty() ? "" : " ") + std::to_string(i);
    rep.add("selected", static_cast<double>(sel.selected.size()), 0, "-", idx.empty() ? "none" : idx);
    double worst = 0;
    for (std::size_t k = 0; k < sel.selected.size(); ++k) {
        std::size_t i = sel.selected[k];
        double hull = mu_interval(K, G, sel.hulls[k]);
        worst = std::max(worst, hull - 5 * sel.measures[i]);
        rep.add("J" + std::to_string(i), sel.measures[i], kNaN, "-", to_string(v.family[i]) + " hull " + to_string(sel.hulls[k]));
    }
    rep.add("hull_bound", worst, 1e-12, verdict(worst <= 1e-12), "max mu(phi(J)) - 5 mu(J)");
    if (v.points.empty()) return;
    if (auto w = admissibility_witness(K, v.points, v.family)) {
        std::string b;
        for (std::size_t i : w->blocking) b += (b.empty() ? "" : " ") + std::to_string(i);
        rep.note("admissible", "NotAdmissible", "point " + to_string(w->point) + " blocked by " + (b.empty() ? "none" : b));
        return;
    }
    VitaliCover c = vitali_cover_finite(K, G, v.points, v.family, v.eps);
    rep.add("delta", c.delta, kNaN, "-");
    rep.add("cover_defect", c.defect, v.eps, verdict(c.defect < v.eps), "outer measure of A left uncovered");
    rep.add("tail_bound", c.bound, kNaN, "-", "5 sum of mu(J) below delta");
}

LineFunction member(const ConvergeSpec& c, int m) {
    std::vector<double> xm(static_cast<std::size_t>(m) + 1, 0.0);
    if (c.family == "one_minus_power") {
        xm[0] = 1;
        xm[m] = -1;
    } else {
        xm[m] = c.family == "alternating_power" && m % 2 ? -1 : 1;
    }
    std::vector<double> prod = (c.factor * Polynomial{xm}).c;
    return poly_fn(prod);
}

void cmd_converge(const Problem& p, const IntegrateOptions& opt, double tol, Report& rep) {
    if (!p.converge) throw Error(ErrorKind::ParseError, "problem: converge needs a converge section");
    const ConvergeSpec& c = *p.converge;
    ConvergenceProblem cp;
    cp.mode = c.mode;
    cp.family = [c](int m) { return Integrand{member(c, m), true}; };
    cp.limit = Integrand{*c.limit, false};
    cp.lower = c.lower;
    cp.upper = c.upper;
    cp.m_max = c.m_max;
    cp.tol = tol;
    ConvergenceReport r = convergence_harness(p.line, need_G(p), cp, opt);
    for (const auto& [m, v] : r.values) rep.add("I_" + std::to_string(m), v, kNaN, "-");
    rep.add("extrapolated", r.extrapolated, r.spread, "-", "limit in m");
    rep.add("limit_integral", r.limit_integral, kNaN, "-");
    if (c.mode == ConvergenceMode::Fatou)
        rep.add("inequality", r.defect, tol, verdict(r.inequality_holds), "integral of liminf <= liminf of integrals");
    else
        rep.add("defect", r.defect, tol, verdict(r.defect <= tol), mode_name(c.mode));
}

} // namespace

int exit_code(const Report& r) {
    static const std::set<std::string> bad{"NoCertificate", "Divergent", "NotGDifferentiable", "NotAdmissible", "FAIL"};
    for (const auto& row : r.rows)
        if (bad.count(row.status)) return 2;
    return 0;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Kurzweil-Stieltjes integrals on compact lines"};
    app.require_subcommand(1);
    app.fallthrough();
    Settings s;
    app.add_option("--tol", s.tol, "Tolerance (default 1e-9; 1e-6 for series, derivatives and limits)");
    app.add_option("--max-refine", s.max_refine, "Refinement budget; KS_MAX_REFINE overrides")->check(CLI::Range(1, 999));
    app.add_option("--format", s.format, "table, csv or json")->check(CLI::IsMember({"table", "csv", "json"}));
    app.add_option("--seed", s.seed, "Seed for probes and the property suite");
    app.add_option("--probes", s.probes, "Probe count when the problem names no points")->check(CLI::Range(1, 100000));

    std::string path;
    const char* names[][2] = {{"classify", "Classify points of the line"},
                              {"partition", "Cousin partition for the gauge"},
                              {"integrate", "Integral of f dG"},
                              {"variation", "Total variation of G"},
                              {"derivative", "G-derivative at the probe points"},
                              {"ftc", "Fundamental theorem checks"},
                              {"nabla", "Nabla integral against the KS integral"},
                              {"vitali", "Vitali selection and finite cover"},
                              {"converge", "Convergence theorem harness"}};
    for (auto& n : names) app.add_subcommand(n[0], n[1])->add_option("problem", path, "Problem file")->required();
    app.add_subcommand("check", "Randomized property suite");

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : 3;
    }
    std::string cmd = app.get_subcommands().front()->get_name();

    try {
        bool loose = cmd == "derivative" || cmd == "converge" || cmd == "ftc";
        double tol = s.tol.value_or(loose ? 1e-6 : 1e-9);
        if (!(tol > 0)) throw Error(ErrorKind::ParseError, "--tol must be positive");
        IntegrateOptions opt;
        opt.tol = s.tol.value_or(1e-9);
        opt.max_refine = refine_budget(s.max_refine);
        double series_tol = s.tol.value_or(1e-6);

        Report rep;
        rep.command = cmd;
        rep.env = {{"tol", format_number(tol)},
                   {"max_refine", std::to_string(opt.max_refine)},
                   {"seed", std::to_string(s.seed)},
                   {"probes", std::to_string(s.probes)}};
        if (cmd == "check") {
            Report suite = run_suite(s.seed);
            rep.rows = suite.rows;
        } else {
            Problem p = load_problem(path);
            if (cmd == "integrate" && p.series) rep.env[0].second = format_number(series_tol);
            if (cmd == "classify") cmd_classify(p, rep);
            else if (cmd == "partition") cmd_partition(p, rep);
            else if (cmd == "integrate") cmd_integrate(p, opt, series_tol, rep);
            else if (cmd == "variation") cmd_variation(p, rep);
            else if (cmd == "derivative") cmd_derivative(p, s, tol, rep);
            else if (cmd == "ftc") cmd_ftc(p, s, opt, tol, rep);
            else if (cmd == "nabla") cmd_nabla(p, opt, rep);
            else if (cmd == "vitali") cmd_vitali(p, rep);
            else if (cmd == "converge") cmd_converge(p, opt, tol, rep);
        }
        out << render(rep, parse_format(s.format));
        return exit_code(rep);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    }
}

} // namespace ks
