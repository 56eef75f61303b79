#pragma once

#include "ks/line.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace ks {

struct Polynomial {
    std::vector<double> c; // c[k] multiplies x^k

    double operator()(double x) const;
    Polynomial derivative() const;
    Polynomial antiderivative() const;
    bool is_constant() const;
    std::size_t degree() const;

    // Real roots in the open interval (lo, hi), ascending.
    std::vector<double> roots_in(double lo, double hi) const;
    // Extremes of the polynomial on [lo, hi].
    double max_abs(double lo, double hi) const;
    // Integral of |p'| over [lo, hi].
    double variation(double lo, double hi) const;
};

Polynomial operator+(const Polynomial& a, const Polynomial& b);
Polynomial operator*(const Polynomial& a, const Polynomial& b);
Polynomial operator*(double s, const Polynomial& a);

// Cells are the open stretches between consecutive knots, plus the two unbounded ends:
// cells[0] lives left of knots[0], cells[i] between knots[i-1] and knots[i].
struct PiecewisePoly {
    std::vector<Rational> knots;
    std::vector<double> knot_values;
    std::vector<Polynomial> cells;

    double operator()(const Rational& x) const;
    // Index of the cell containing x, or of the knot when exact_knot is set.
    std::size_t cell_index(const Rational& x, bool& exact_knot) const;
    double left_limit(const Rational& x) const;
    double right_limit(const Rational& x) const;
    bool piecewise_constant() const;

    // Same function, knot set enlarged to the union with extra.
    PiecewisePoly with_knots(const std::vector<Rational>& extra) const;
};

PiecewisePoly constant_poly(double v);

// base + sum of jumps at points c <= x. Works on every line family.
struct StepJumps {
    double base = 0;
    std::vector<std::pair<Point, double>> jumps; // sorted, distinct points

    double operator()(const Point& x) const;
    double before(const Point& x) const; // base + jumps at c < x
    double jump_at(const Point& x) const;
};

StepJumps normalize(StepJumps s);

// Term rules for sequences indexed by 0, 1, 2, ...
struct SequenceRule {
    enum class Kind { AltHarmonic, Geometric, Power, Rearranged, List, Constant, Product, Sum, Abs };
    Kind kind = Kind::Constant;
    double param = 0;     // ratio, exponent or constant
    bool alternating = false;
    int p = 1, q = 1;     // rearrangement block sizes
    std::vector<double> list;
    std::vector<SequenceRule> parts; // Product / Sum operands
    double scale = 1;

    double operator()(std::uint64_t i) const;
    bool nonnegative() const;
    std::uint64_t period() const;
    std::string describe() const;
};

SequenceRule alt_harmonic();
SequenceRule geometric(double r);
SequenceRule power_rule(double exponent, bool alternating);
SequenceRule rearranged(int p, int q);
SequenceRule constant_rule(double c);
SequenceRule list_rule(std::vector<double> v);
SequenceRule product_rule(SequenceRule a, SequenceRule b);
SequenceRule sum_rule(SequenceRule a, SequenceRule b, double sa = 1, double sb = 1);
SequenceRule abs_rule(const SequenceRule& a);

// A function on [0, w]: either the terms themselves or their partial sums.
struct OrdinalSeries {
    SequenceRule rule;
    bool partial_sums = false;
    std::optional<double> at_limit; // value at w; defaults to the limit when omitted
};

struct LineFunction {
    std::function<double(const Point&)> eval;
    std::optional<PiecewisePoly> poly;
    std::optional<StepJumps> step;
    std::optional<OrdinalSeries> series;
    std::vector<Point> breakpoints; // hints for black boxes
    std::string label;

    double operator()(const Point& x) const { return eval(x); }
    bool structured() const { return poly || step || series; }
};

LineFunction from_poly(PiecewisePoly p, std::string label = "poly");
LineFunction from_step(StepJumps s, std::string label = "step");
LineFunction from_series(OrdinalSeries s, std::string label = "series");
LineFunction black_box(std::function<double(const Point&)> f, std::string label = "black-box",
                       std::vector<Point> breakpoints = {});
LineFunction constant_function(double c);

// Indicator of a union of interval specs. Structured on real lines.
LineFunction indicator(const CompactLine& K, const std::vector<IntervalSpec>& sets);

// a*f + b*g, keeping structure when both sides share it.
LineFunction linear_combination(const CompactLine& K, double a, const LineFunction& f, double b, const LineFunction& g);
LineFunction product(const CompactLine& K, const LineFunction& f, const LineFunction& g);

// Step structure on a real line rewritten as a piecewise polynomial.
std::optional<PiecewisePoly> as_piecewise(const CompactLine& K, const LineFunction& f);

// Every point where the structure of f may break: knots, jumps, limit points of a series.
std::vector<Point> structural_points(const CompactLine& K, const LineFunction& f);

struct Integrand {
    LineFunction fn;
    bool continuous = false;

    double operator()(const Point& x) const { return fn(x); }
};

enum class Regularity { Arbitrary = 0, Amenable = 1, NBV = 2, NondecreasingAmenable = 3 };

const char* regularity_name(Regularity r);
Regularity parse_regularity(const std::string& s);

struct Integrator {
    LineFunction fn;
    Regularity regularity = Regularity::Arbitrary;

    double operator()(const Point& x) const { return fn(x); }
    bool at_least(Regularity r) const;
};

// Builds an integrator and validates the declared regularity against the structure.
Integrator make_integrator(const CompactLine& K, LineFunction fn, Regularity declared);

} // namespace ks
