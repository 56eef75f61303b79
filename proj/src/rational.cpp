#include "ks/rational.hpp"
#include "ks/errors.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>

namespace ks {

const char* kind_name(ErrorKind k) {
    switch (k) {
    case ErrorKind::FamilyMismatch: return "FamilyMismatch";
    case ErrorKind::PointNotInLine: return "PointNotInLine";
    case ErrorKind::EndpointsOutOfOrder: return "EndpointsOutOfOrder";
    case ErrorKind::NoProgress: return "NoProgress";
    case ErrorKind::ExposeZero: return "ExposeZero";
    case ErrorKind::JunctionMismatch: return "JunctionMismatch";
    case ErrorKind::TagAbsent: return "TagAbsent";
    case ErrorKind::NotContinuousDeclared: return "NotContinuousDeclared";
    case ErrorKind::NotRegulated: return "NotRegulated";
    case ErrorKind::NotNBV: return "NotNBV";
    case ErrorKind::UnsupportedSet: return "UnsupportedSet";
    case ErrorKind::InvalidRegularity: return "InvalidRegularity";
    case ErrorKind::NotAmenable: return "NotAmenable";
    case ErrorKind::NotNondecreasing: return "NotNondecreasing";
    case ErrorKind::SystemNotFine: return "SystemNotFine";
    case ErrorKind::NotGDifferentiable: return "NotGDifferentiable";
    case ErrorKind::ProbeFailed: return "ProbeFailed";
    case ErrorKind::PreconditionViolated: return "PreconditionViolated";
    case ErrorKind::OverlappingSets: return "OverlappingSets";
    case ErrorKind::HypothesisViolated: return "HypothesisViolated";
    case ErrorKind::NotAdmissible: return "NotAdmissible";
    case ErrorKind::SeriesDivergent: return "SeriesDivergent";
    case ErrorKind::ParseError: return "ParseError";
    }
    return "Unknown";
}

namespace {

bool all_digits(const std::string& s, std::size_t from, std::size_t to) {
    if (from >= to) return false;
    for (std::size_t i = from; i < to; ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
}

Rational pow10(long e) {
    mpz_class p;
    mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(e < 0 ? -e : e));
    return e < 0 ? Rational(mpz_class(1), p) : Rational(p);
}

} // namespace

Rational parse_rational(const std::string& raw) {
    std::string s;
    for (char c : raw)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty()) throw Error(ErrorKind::ParseError, "empty number");

    auto slash = s.find('/');
    if (slash != std::string::npos) {
        Rational num = parse_rational(s.substr(0, slash));
        Rational den = parse_rational(s.substr(slash + 1));
        if (den == 0) throw Error(ErrorKind::ParseError, "zero denominator in '" + raw + "'");
        Rational q = num / den;
        q.canonicalize();
        return q;
    }

    std::size_t i = 0;
    bool neg = false;
    if (s[i] == '+' || s[i] == '-') neg = s[i++] == '-';
    std::size_t epos = s.find_first_of("eE", i);
    std::string mant = s.substr(i, epos == std::string::npos ? std::string::npos : epos - i);
    long exponent = 0;
    if (epos != std::string::npos) {
        std::string ex = s.substr(epos + 1);
        std::size_t j = (ex.size() && (ex[0] == '+' || ex[0] == '-')) ? 1 : 0;
        if (!all_digits(ex, j, ex.size()) || ex.size() > 6)
            throw Error(ErrorKind::ParseError, "bad exponent in '" + raw + "'");
        exponent = std::stol(ex);
    }
    auto dot = mant.find('.');
    std::string digits = mant;
    if (dot != std::string::npos) {
        digits = mant.substr(0, dot) + mant.substr(dot + 1);
        exponent -= static_cast<long>(mant.size() - dot - 1);
    }
    if (!all_digits(digits, 0, digits.size()))
        throw Error(ErrorKind::ParseError, "not a number: '" + raw + "'");
    Rational q(mpz_class(digits, 10));
    q *= pow10(exponent);
    q.canonicalize();
    return neg ? Rational(-q) : q;
}

Rational from_double(double x) {
    if (!std::isfinite(x)) throw Error(ErrorKind::ParseError, "non-finite real");
    Rational q(x);
    q.canonicalize();
    return q;
}

std::string format_double(double x) {
    if (x == 0) return "0";
    char buf[64];
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, x);
        if (std::strtod(buf, nullptr) == x) break;
    }
    return buf;
}

std::string format_rational(const Rational& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    if (mpz_sizeinbase(q.get_den().get_mpz_t(), 10) <= 7) return q.get_str();
    return format_double(q.get_d());
}

} // namespace ks
