#include "ks/errors.hpp"
#include "ks/line.hpp"

namespace ks {

std::strong_ordering compare_cuts(const Cut& a, const Cut& b) {
    auto c = compare_points(a.at, b.at);
    if (c != 0) return c;
    return a.after <=> b.after;
}

namespace {

// Prefer the "after p" spelling whenever the cut has an immediate left neighbour.
Cut canonical_cut(const CompactLine& K, const Cut& c) {
    if (c.after) return c;
    if (c.at == K->min()) return c;
    PointClass pc = K->classify_member(c.at);
    if (!pc.left_dense) return {*pc.predecessor, true};
    return c;
}

void check_ends(const CompactLine& K, const IntervalSpec& I) {
    require_member(K, I.lower);
    require_member(K, I.upper);
}

} // namespace

IntervalSpec whole_line(const CompactLine& K) { return IntervalSpec::closed(K->min(), K->max()); }

IntervalSpec empty_interval(const CompactLine& K) { return IntervalSpec::open(K->min(), K->min()); }

IntervalSpec singleton(const CompactLine& K, const Point& x) {
    require_member(K, x);
    return IntervalSpec::closed(x, x);
}

bool contains(const CompactLine& K, const IntervalSpec& I, const Point& x) {
    check_ends(K, I);
    require_member(K, x);
    return compare_cuts(lower_cut(I), {x, false}) <= 0 && compare_cuts(upper_cut(I), {x, true}) >= 0;
}

IntervalSpec from_cuts(const CompactLine& K, const Cut& lo, const Cut& hi) {
    Cut a = canonical_cut(K, lo), b = canonical_cut(K, hi);
    if (compare_cuts(a, b) >= 0) return empty_interval(K);
    return {a.at, b.at, a.after, !b.after};
}

IntervalSpec canonicalize(const CompactLine& K, const IntervalSpec& I) {
    check_ends(K, I);
    return from_cuts(K, lower_cut(I), upper_cut(I));
}

bool is_empty(const CompactLine& K, const IntervalSpec& I) {
    check_ends(K, I);
    return compare_cuts(canonical_cut(K, lower_cut(I)), canonical_cut(K, upper_cut(I))) >= 0;
}

bool is_open_set(const CompactLine& K, const IntervalSpec& I) {
    if (is_empty(K, I)) return true;
    IntervalSpec C = canonicalize(K, I);
    bool lower_ok = C.lower_open || C.lower == K->min();
    bool upper_ok = C.upper_open || C.upper == K->max() || !K->classify_member(C.upper).right_dense;
    return lower_ok && upper_ok;
}

IntervalSpec intersect(const CompactLine& K, const IntervalSpec& I, const IntervalSpec& J) {
    check_ends(K, I);
    check_ends(K, J);
    Cut lo = std::max(lower_cut(I), lower_cut(J), [](const Cut& a, const Cut& b) { return compare_cuts(a, b) < 0; });
    Cut hi = std::min(upper_cut(I), upper_cut(J), [](const Cut& a, const Cut& b) { return compare_cuts(a, b) < 0; });
    return from_cuts(K, lo, hi);
}

IntervalSpec hull(const CompactLine& K, const IntervalSpec& I, const IntervalSpec& J) {
    if (is_empty(K, I)) return canonicalize(K, J);
    if (is_empty(K, J)) return canonicalize(K, I);
    Cut lo = std::min(lower_cut(I), lower_cut(J), [](const Cut& a, const Cut& b) { return compare_cuts(a, b) < 0; });
    Cut hi = std::max(upper_cut(I), upper_cut(J), [](const Cut& a, const Cut& b) { return compare_cuts(a, b) < 0; });
    return from_cuts(K, lo, hi);
}

bool intersects(const CompactLine& K, const IntervalSpec& I, const IntervalSpec& J) {
    return !is_empty(K, intersect(K, I, J));
}

bool is_subset(const CompactLine& K, const IntervalSpec& I, const IntervalSpec& J) {
    if (is_empty(K, I)) return true;
    if (is_empty(K, J)) return false;
    return compare_cuts(canonical_cut(K, lower_cut(J)), canonical_cut(K, lower_cut(I))) <= 0 &&
           compare_cuts(canonical_cut(K, upper_cut(I)), canonical_cut(K, upper_cut(J))) <= 0;
}

std::string to_string(const IntervalSpec& I) {
    return std::string(I.lower_open ? "(" : "[") + to_string(I.lower) + "," + to_string(I.upper) + (I.upper_open ? ")" : "]");
}

} // namespace ks
