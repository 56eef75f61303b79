#pragma once

#include "ks/function.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace ks {

struct Gauge {
    std::function<IntervalSpec(const Point&)> rule;
    std::string provenance;
    std::vector<Point> exposed; // left-dense targets worth reaching in one Cousin step

    IntervalSpec operator()(const Point& x) const { return rule(x); }
};

struct Component {
    Point lo, hi, tag;
};

struct TaggedPartition {
    std::vector<Component> parts;
};

struct TaggedSystem {
    std::vector<Component> parts;
};

Gauge full_gauge(const CompactLine& K);

// Radius r on real coordinates; on ordinals a limit γ + w^j gets (γ + w^(j-1)·n, x] with n = ceil(1/r).
Gauge uniform_gauge(const CompactLine& K, double r);

// Per-point radii drawn from a hash of the point, so the gauge stays a pure function.
Gauge random_gauge(const CompactLine& K, std::uint64_t seed, double rmin, double rmax);

Gauge refine_and_expose(const CompactLine& K, const Gauge& delta, const std::optional<Gauge>& eta, const std::vector<Point>& C);

struct CousinOptions {
    std::optional<Point> lo, hi;
    std::size_t max_components = 1u << 20;
};

TaggedPartition cousin_partition(const CompactLine& K, const Gauge& delta, const CousinOptions& opt = {});

bool is_fine(const CompactLine& K, const std::vector<Component>& parts, const Gauge& delta);
inline bool is_fine(const CompactLine& K, const TaggedPartition& P, const Gauge& d) { return is_fine(K, P.parts, d); }
inline bool is_fine(const CompactLine& K, const TaggedSystem& S, const Gauge& d) { return is_fine(K, S.parts, d); }

// Throws unless P runs from lo to hi with shared endpoints and tags inside their components.
void validate_partition(const CompactLine& K, const TaggedPartition& P, const Point& lo, const Point& hi);
void validate_system(const CompactLine& K, const TaggedSystem& S);

TaggedPartition merge_partitions(const std::vector<TaggedPartition>& parts);
TaggedPartition split_at_tags(const TaggedPartition& P, const std::vector<Point>& C);

// Division points z_0 < ... < z_n where each cell ends left-isolated or has oscillation below eps.
std::vector<Point> uniform_division(const CompactLine& K, const Integrand& f, double eps);

std::string to_string(const Component& c);

} // namespace ks
