#pragma once

#include <gmpxx.h>
#include <string>

namespace ks {

using Rational = mpq_class;

// Accepts "3", "-1/3", "0.25", "1e-3", "2.5e2". Decimal forms are parsed exactly.
Rational parse_rational(const std::string& text);

// Every finite binary64 value is a dyadic rational; the conversion is exact.
Rational from_double(double x);

inline double to_double(const Rational& q) { return q.get_d(); }

// "p/q" for modest denominators, otherwise the shortest round-tripping decimal.
std::string format_rational(const Rational& q);

std::string format_double(double x);

} // namespace ks
