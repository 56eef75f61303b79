#include "ks/point.hpp"
#include "ks/errors.hpp"

#include <cctype>

namespace ks {

Point Point::ordinal(std::vector<std::uint64_t> cnf) {
    while (!cnf.empty() && cnf.back() == 0) cnf.pop_back();
    return Point(OrdinalPt{std::move(cnf)});
}

Point Point::pair(const Point& a, const Point& b) {
    return Point(PairPt{std::make_shared<const Point>(a), std::make_shared<const Point>(b)});
}

Point Point::arrow(const Point& base, int side) {
    return Point(ArrowPt{std::make_shared<const Point>(base), side ? 1 : 0});
}

const Rational& Point::real_value() const {
    if (auto* r = std::get_if<RealPt>(&v_)) return r->value;
    throw Error(ErrorKind::FamilyMismatch, "expected a real point, got " + to_string(*this));
}

const std::vector<std::uint64_t>& Point::cnf() const {
    if (auto* o = std::get_if<OrdinalPt>(&v_)) return o->cnf;
    throw Error(ErrorKind::FamilyMismatch, "expected an ordinal point, got " + to_string(*this));
}

const Point& Point::first() const {
    if (auto* p = std::get_if<PairPt>(&v_)) return *p->left;
    if (auto* a = std::get_if<ArrowPt>(&v_)) return *a->base;
    throw Error(ErrorKind::FamilyMismatch, "expected a compound point");
}

const Point& Point::second() const {
    if (auto* p = std::get_if<PairPt>(&v_)) return *p->right;
    throw Error(ErrorKind::FamilyMismatch, "expected a pair point");
}

int Point::side() const {
    if (auto* a = std::get_if<ArrowPt>(&v_)) return a->side;
    throw Error(ErrorKind::FamilyMismatch, "expected an arrow point");
}

double Point::to_double() const {
    if (auto* r = std::get_if<RealPt>(&v_)) return r->value.get_d();
    throw Error(ErrorKind::FamilyMismatch, "point has no real coordinate: " + to_string(*this));
}

namespace {

std::strong_ordering compare_cnf(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
    if (a.size() != b.size()) return a.size() <=> b.size();
    for (std::size_t k = a.size(); k-- > 0;)
        if (a[k] != b[k]) return a[k] <=> b[k];
    return std::strong_ordering::equal;
}

} // namespace

std::strong_ordering compare_points(const Point& a, const Point& b) {
    const auto& va = a.variant();
    const auto& vb = b.variant();
    if (va.index() != vb.index())
        throw Error(ErrorKind::FamilyMismatch, to_string(a) + " vs " + to_string(b));
    switch (va.index()) {
    case 0: {
        int c = cmp(std::get<RealPt>(va).value, std::get<RealPt>(vb).value);
        return c < 0 ? std::strong_ordering::less : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
    }
    case 1:
        return compare_cnf(std::get<OrdinalPt>(va).cnf, std::get<OrdinalPt>(vb).cnf);
    case 2: {
        const auto& pa = std::get<PairPt>(va);
        const auto& pb = std::get<PairPt>(vb);
        auto c = compare_points(*pa.left, *pb.left);
        return c != 0 ? c : compare_points(*pa.right, *pb.right);
    }
    default: {
        const auto& xa = std::get<ArrowPt>(va);
        const auto& xb = std::get<ArrowPt>(vb);
        auto c = compare_points(*xa.base, *xb.base);
        return c != 0 ? c : xa.side <=> xb.side;
    }
    }
}

std::string format_ordinal(const std::vector<std::uint64_t>& cnf) {
    if (cnf.empty()) return "0";
    std::string out;
    for (std::size_t k = cnf.size(); k-- > 0;) {
        if (cnf[k] == 0) continue;
        if (!out.empty()) out += "+";
        std::string term;
        if (k == 0) {
            term = std::to_string(cnf[k]);
        } else {
            term = k == 1 ? "w" : "w^" + std::to_string(k);
            if (cnf[k] != 1) term += "*" + std::to_string(cnf[k]);
        }
        out += term;
    }
    return out;
}

std::vector<std::uint64_t> parse_ordinal(const std::string& raw) {
    std::string s;
    for (char c : raw)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty()) throw Error(ErrorKind::ParseError, "empty ordinal");
    std::vector<std::uint64_t> cnf;
    std::size_t last_degree = SIZE_MAX;
    std::size_t pos = 0;
    auto number = [&](std::size_t& p) {
        std::size_t start = p;
        while (p < s.size() && std::isdigit(static_cast<unsigned char>(s[p]))) ++p;
        if (start == p) throw Error(ErrorKind::ParseError, "expected digits in ordinal '" + raw + "'");
        return std::stoull(s.substr(start, p - start));
    };
    while (pos < s.size()) {
        std::size_t degree = 0;
        std::uint64_t coef = 1;
        if (s[pos] == 'w') {
            ++pos;
            degree = 1;
            if (pos < s.size() && s[pos] == '^') {
                ++pos;
                degree = number(pos);
            }
            if (pos < s.size() && s[pos] == '*') {
                ++pos;
                coef = number(pos);
            }
        } else {
            coef = number(pos);
        }
        if (last_degree != SIZE_MAX && degree >= last_degree)
            throw Error(ErrorKind::ParseError, "ordinal terms must have strictly decreasing degree: '" + raw + "'");
        last_degree = degree;
        if (cnf.size() <= degree) cnf.resize(degree + 1, 0);
        cnf[degree] = coef;
        if (pos < s.size()) {
            if (s[pos] != '+') throw Error(ErrorKind::ParseError, "unexpected '" + std::string(1, s[pos]) + "' in ordinal");
            ++pos;
            if (pos == s.size()) throw Error(ErrorKind::ParseError, "dangling '+' in ordinal");
        }
    }
    while (!cnf.empty() && cnf.back() == 0) cnf.pop_back();
    return cnf;
}

std::string to_string(const Point& p) {
    const auto& v = p.variant();
    switch (v.index()) {
    case 0: return format_rational(std::get<RealPt>(v).value);
    case 1: return format_ordinal(std::get<OrdinalPt>(v).cnf);
    case 2: {
        const auto& q = std::get<PairPt>(v);
        return "(" + to_string(*q.left) + "," + to_string(*q.right) + ")";
    }
    default: {
        const auto& a = std::get<ArrowPt>(v);
        return "(" + to_string(*a.base) + ";" + std::to_string(a.side) + ")";
    }
    }
}

} // namespace ks
