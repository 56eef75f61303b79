#pragma once

#include "ks/function.hpp"
#include "ks/result.hpp"

namespace ks {

// L_f(x): 0 at 0_K, f(x⁻) at left-isolated x, the left limit at left-dense x.
double left_limit(const CompactLine& K, const LineFunction& f, const Point& x);
double left_limit(const CompactLine& K, const Integrator& G, const Point& x);

// Limit from the right at right-dense x; f(x) at right-isolated x.
double right_limit(const CompactLine& K, const LineFunction& f, const Point& x);

struct Variation {
    double value = 0;
    bool divergent = false;
    bool exact = true; // false: a certified lower bound from refining divisions
};

inline constexpr double kVariationCeiling = 1e9;

Variation total_variation(const CompactLine& K, const LineFunction& G, const Point& a, const Point& b);
Variation total_variation(const CompactLine& K, const LineFunction& G);

// sup |f| over [a, b]; structured functions only give exact values.
double sup_abs(const CompactLine& K, const LineFunction& f, const Point& a, const Point& b);

double mu_interval(const CompactLine& K, const Integrator& G, const IntervalSpec& I);

struct PointSet {
    std::vector<Point> points;
    std::vector<IntervalSpec> intervals;
};

double outer_measure_bound(const CompactLine& K, const Integrator& G, const PointSet& S);

} // namespace ks
