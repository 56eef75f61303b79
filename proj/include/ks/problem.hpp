#pragma once

#include "ks/bridges.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace ks {

using Json = nlohmann::json;

struct GaugeSpec {
    enum class Kind { Uniform, Random } kind = Kind::Uniform;
    double radius = 0.1;
    std::uint64_t seed = 0;
    double rmin = 0.01, rmax = 0.2;
};

struct VitaliSpec {
    std::vector<IntervalSpec> family;
    std::vector<Point> points;
    double eps = 0.1;
};

struct ConvergeSpec {
    ConvergenceMode mode = ConvergenceMode::MCT;
    std::string family;      // power | alternating_power | one_minus_power
    Polynomial factor{{1}};  // multiplies every member
    std::optional<LineFunction> limit, lower, upper;
    int m_max = 64;
};

struct SeriesSpec {
    SequenceRule a, f;
};

struct Problem {
    CompactLine line;
    std::optional<Integrator> G;
    std::optional<Integrand> f;
    std::optional<LineFunction> F;
    std::optional<IntervalSpec> interval;
    std::vector<Point> points;
    std::vector<Point> exceptions;
    std::optional<GaugeSpec> gauge;
    std::optional<VitaliSpec> vitali;
    std::optional<ConvergeSpec> converge;
    std::optional<SeriesSpec> series;
    std::optional<SimpleFunction> simple;
    bool absolute = false;
};

CompactLine parse_line(const Json& j);
Point parse_point(const CompactLine& K, const Json& j);
IntervalSpec parse_interval(const CompactLine& K, const Json& j);
SequenceRule parse_rule(const Json& j);
LineFunction parse_function(const CompactLine& K, const Json& j);

Problem parse_problem(const Json& j);
Problem parse_problem_text(const std::string& text);
Problem load_problem(const std::string& path);

} // namespace ks
