#pragma once

#include "ks/point.hpp"

#include <memory>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace ks {

enum class Family { Finite, TimeScale, Ordinal, Lex, DoubleArrow };

const char* family_name(Family f);

struct PointClass {
    bool left_dense = false;
    std::optional<Point> predecessor; // empty for 0_K or when left-dense
    bool right_dense = false;
    std::optional<Point> successor;   // empty for 1_K or when right-dense

    bool left_isolated() const { return !left_dense; }
    bool right_isolated() const { return !right_dense; }
};

class Line {
public:
    virtual ~Line() = default;

    virtual Family family() const = 0;
    virtual Point min() const = 0;
    virtual Point max() const = 0;
    virtual bool contains(const Point& x) const = 0;
    virtual PointClass classify_member(const Point& x) const = 0;

    // Some point of (a,b) lying close to b, or nothing when b = a⁺.
    virtual std::optional<Point> between(const Point& a, const Point& b) const = 0;

    // Left-dense points beyond y that the greedy Cousin walk tries to reach in one step.
    virtual std::vector<Point> landmarks_after(const Point& y) const = 0;

    // k-th point of a sequence converging to x from the given side; that side must be dense.
    virtual Point approach(const Point& x, bool from_left, int k) const = 0;

    virtual std::vector<Point> sample(std::mt19937_64& rng, std::size_t n) const = 0;

    virtual std::string describe() const = 0;

    virtual bool real_coordinates() const { return false; }
};

using CompactLine = std::shared_ptr<const Line>;

void require_member(const CompactLine& K, const Point& x);
std::strong_ordering compare(const CompactLine& K, const Point& x, const Point& y);
PointClass classify(const CompactLine& K, const Point& x);

// Order intervals ------------------------------------------------------------

struct IntervalSpec {
    Point lower;
    Point upper;
    bool lower_open = false;
    bool upper_open = false;

    static IntervalSpec closed(const Point& a, const Point& b) { return {a, b, false, false}; }
    static IntervalSpec open(const Point& a, const Point& b) { return {a, b, true, true}; }
    static IntervalSpec left_open(const Point& a, const Point& b) { return {a, b, true, false}; }
    static IntervalSpec right_open(const Point& a, const Point& b) { return {a, b, false, true}; }
};

// A Dedekind cut sitting just before or just after a point.
struct Cut {
    Point at;
    bool after = false;
};

std::strong_ordering compare_cuts(const Cut& a, const Cut& b);
inline Cut lower_cut(const IntervalSpec& I) { return {I.lower, I.lower_open}; }
inline Cut upper_cut(const IntervalSpec& I) { return {I.upper, !I.upper_open}; }

IntervalSpec whole_line(const CompactLine& K);
IntervalSpec empty_interval(const CompactLine& K);
IntervalSpec singleton(const CompactLine& K, const Point& x);

bool contains(const CompactLine& K, const IntervalSpec& I, const Point& x);
IntervalSpec canonicalize(const CompactLine& K, const IntervalSpec& I);
bool is_empty(const CompactLine& K, const IntervalSpec& I);
bool is_open_set(const CompactLine& K, const IntervalSpec& I);
IntervalSpec intersect(const CompactLine& K, const IntervalSpec& I, const IntervalSpec& J);
IntervalSpec hull(const CompactLine& K, const IntervalSpec& I, const IntervalSpec& J);
bool intersects(const CompactLine& K, const IntervalSpec& I, const IntervalSpec& J);
bool is_subset(const CompactLine& K, const IntervalSpec& I, const IntervalSpec& J);
IntervalSpec from_cuts(const CompactLine& K, const Cut& lo, const Cut& hi);

std::string to_string(const IntervalSpec& I);

// Families -------------------------------------------------------------------

// Shared machinery for lines of real coordinates: a finite union of closed intervals.
class RealLine : public Line {
public:
    explicit RealLine(std::vector<std::pair<Rational, Rational>> components);

    const std::vector<std::pair<Rational, Rational>>& components() const { return comps_; }
    std::optional<std::size_t> component_of(const Rational& x) const;
    Rational span() const { return comps_.back().second - comps_.front().first; }

    // (x - r, x + r) ∩ K written with endpoints in K.
    IntervalSpec ball(const Point& x, const Rational& r) const;
    IntervalSpec ball(const Point& x, const Rational& left, const Rational& right) const;

    Point min() const override { return Point::real(comps_.front().first); }
    Point max() const override { return Point::real(comps_.back().second); }
    bool contains(const Point& x) const override;
    PointClass classify_member(const Point& x) const override;
    std::optional<Point> between(const Point& a, const Point& b) const override;
    std::vector<Point> landmarks_after(const Point& y) const override;
    Point approach(const Point& x, bool from_left, int k) const override;
    std::vector<Point> sample(std::mt19937_64& rng, std::size_t n) const override;
    bool real_coordinates() const override { return true; }

protected:
    std::vector<std::pair<Rational, Rational>> comps_;
};

class FiniteLine : public RealLine {
public:
    explicit FiniteLine(const std::vector<Rational>& labels);
    Family family() const override { return Family::Finite; }
    std::string describe() const override;
};

class TimeScaleLine : public RealLine {
public:
    explicit TimeScaleLine(std::vector<std::pair<Rational, Rational>> components);
    Family family() const override { return Family::TimeScale; }
    std::string describe() const override;
};

class OrdinalLine : public Line {
public:
    OrdinalLine(std::vector<std::uint64_t> alpha, std::size_t max_degree);

    const std::vector<std::uint64_t>& alpha() const { return alpha_; }
    std::size_t max_degree() const { return max_degree_; }

    Family family() const override { return Family::Ordinal; }
    Point min() const override { return Point::ordinal({}); }
    Point max() const override { return Point::ordinal(alpha_); }
    bool contains(const Point& x) const override;
    PointClass classify_member(const Point& x) const override;
    std::optional<Point> between(const Point& a, const Point& b) const override;
    std::vector<Point> landmarks_after(const Point& y) const override;
    Point approach(const Point& x, bool from_left, int k) const override;
    std::vector<Point> sample(std::mt19937_64& rng, std::size_t n) const override;
    std::string describe() const override;

    // For a limit ordinal x: (base, degree) with x = base + w^degree.
    static std::pair<std::vector<std::uint64_t>, std::size_t> limit_decomposition(const std::vector<std::uint64_t>& x);

private:
    std::vector<std::uint64_t> alpha_;
    std::size_t max_degree_;
};

class LexLine : public Line {
public:
    LexLine(CompactLine outer, CompactLine inner);

    const CompactLine& outer() const { return outer_; }
    const CompactLine& inner() const { return inner_; }

    Family family() const override { return Family::Lex; }
    Point min() const override;
    Point max() const override;
    bool contains(const Point& x) const override;
    PointClass classify_member(const Point& x) const override;
    std::optional<Point> between(const Point& a, const Point& b) const override;
    std::vector<Point> landmarks_after(const Point& y) const override;
    Point approach(const Point& x, bool from_left, int k) const override;
    std::vector<Point> sample(std::mt19937_64& rng, std::size_t n) const override;
    std::string describe() const override;

private:
    CompactLine outer_, inner_;
};

struct SubsetDescriptor {
    enum class Kind { Whole, Points, Intervals };
    Kind kind = Kind::Whole;
    std::vector<Point> points;           // sorted
    std::vector<IntervalSpec> intervals; // closed subintervals of the base
};

class DoubleArrowLine : public Line {
public:
    DoubleArrowLine(CompactLine base, SubsetDescriptor subset);

    const CompactLine& base() const { return base_; }
    const SubsetDescriptor& subset() const { return subset_; }
    bool in_subset(const Point& x) const;

    Family family() const override { return Family::DoubleArrow; }
    Point min() const override;
    Point max() const override;
    bool contains(const Point& x) const override;
    PointClass classify_member(const Point& x) const override;
    std::optional<Point> between(const Point& a, const Point& b) const override;
    std::vector<Point> landmarks_after(const Point& y) const override;
    Point approach(const Point& x, bool from_left, int k) const override;
    std::vector<Point> sample(std::mt19937_64& rng, std::size_t n) const override;
    std::string describe() const override;

private:
    CompactLine base_;
    SubsetDescriptor subset_;
};

CompactLine make_finite(const std::vector<Rational>& labels);
CompactLine make_timescale(std::vector<std::pair<Rational, Rational>> components);
CompactLine make_interval(const Rational& a, const Rational& b);
CompactLine make_ordinal(const std::vector<std::uint64_t>& alpha, std::size_t max_degree = 3);
CompactLine make_lex(CompactLine outer, CompactLine inner);
CompactLine make_double_arrow(CompactLine base, SubsetDescriptor subset);

const RealLine* as_real_line(const CompactLine& K);

} // namespace ks
