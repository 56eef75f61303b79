#pragma once

#include "ks/function.hpp"

#include <string>
#include <vector>

namespace ks {

// Building blocks for hand-written problems.
Polynomial poly(std::vector<double> c);
LineFunction poly_fn(std::vector<double> c, std::string label = "poly");
// Piecewise polynomial from knots, the value at each knot and the cell polynomials
// (one before the first knot, one between each pair, one after the last).
LineFunction pieces_fn(std::vector<Rational> knots, std::vector<double> values, std::vector<std::vector<double>> cells,
                       std::string label = "pieces");
LineFunction step_fn(double base, std::vector<std::pair<Point, double>> jumps, std::string label = "step");
LineFunction series_fn(SequenceRule rule, bool partial_sums, std::optional<double> at_limit = std::nullopt,
                       std::string label = "series");

Point real_pt(long num, long den = 1);
Point ord_pt(const std::string& text);

struct CatalogProblem {
    std::string name;
    CompactLine K;
    Integrand f;
    Integrator G;
    Point a, c, b;
};

// Structured problems with exact or series paths on every line family.
std::vector<CatalogProblem> structured_catalog();

} // namespace ks
