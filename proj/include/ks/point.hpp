#pragma once

#include "ks/rational.hpp"

#include <compare>
#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace ks {

class Point;
using PointPtr = std::shared_ptr<const Point>;

struct RealPt {
    Rational value;
};

// Cantor normal form: cnf[k] is the coefficient of w^k. Trimmed: no trailing zero
// at the top degree unless the ordinal is 0, which is the empty vector.
struct OrdinalPt {
    std::vector<std::uint64_t> cnf;
};

struct PairPt {
    PointPtr left;
    PointPtr right;
};

struct ArrowPt {
    PointPtr base;
    int side = 0;
};

class Point {
public:
    using Variant = std::variant<RealPt, OrdinalPt, PairPt, ArrowPt>;

    Point() : v_(RealPt{Rational(0)}) {}
    explicit Point(Variant v) : v_(std::move(v)) {}

    static Point real(Rational q) {
        q.canonicalize();
        return Point(RealPt{std::move(q)});
    }
    static Point real(long n) { return Point(RealPt{Rational(n)}); }
    static Point ordinal(std::vector<std::uint64_t> cnf);
    static Point pair(const Point& a, const Point& b);
    static Point arrow(const Point& base, int side);

    const Variant& variant() const { return v_; }
    bool is_real() const { return std::holds_alternative<RealPt>(v_); }
    bool is_ordinal() const { return std::holds_alternative<OrdinalPt>(v_); }
    bool is_pair() const { return std::holds_alternative<PairPt>(v_); }
    bool is_arrow() const { return std::holds_alternative<ArrowPt>(v_); }

    const Rational& real_value() const;
    const std::vector<std::uint64_t>& cnf() const;
    const Point& first() const;  // pair left or arrow base
    const Point& second() const; // pair right
    int side() const;

    double to_double() const;

private:
    Variant v_;
};

// Structural order; throws FamilyMismatch across variants.
std::strong_ordering compare_points(const Point& a, const Point& b);

inline bool operator==(const Point& a, const Point& b) { return compare_points(a, b) == 0; }
inline bool operator<(const Point& a, const Point& b) { return compare_points(a, b) < 0; }
inline bool operator<=(const Point& a, const Point& b) { return compare_points(a, b) <= 0; }
inline bool operator>(const Point& a, const Point& b) { return compare_points(a, b) > 0; }
inline bool operator>=(const Point& a, const Point& b) { return compare_points(a, b) >= 0; }

std::string to_string(const Point& p);

std::string format_ordinal(const std::vector<std::uint64_t>& cnf);
std::vector<std::uint64_t> parse_ordinal(const std::string& text);

struct PointLess {
    bool operator()(const Point& a, const Point& b) const { return a < b; }
};

} // namespace ks
