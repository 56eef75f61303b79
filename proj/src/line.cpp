#include "ks/line.hpp"
#include "ks/errors.hpp"

#include <algorithm>

namespace ks {

const char* family_name(Family f) {
    switch (f) {
    case Family::Finite: return "finite";
    case Family::TimeScale: return "timescale";
    case Family::Ordinal: return "ordinal";
    case Family::Lex: return "lex";
    case Family::DoubleArrow: return "double_arrow";
    }
    return "?";
}

void require_member(const CompactLine& K, const Point& x) {
    bool ok = false;
    try {
        ok = K->contains(x);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::FamilyMismatch) throw;
    }
    if (!ok) throw Error(ErrorKind::PointNotInLine, to_string(x) + " not in " + K->describe());
}

std::strong_ordering compare(const CompactLine& K, const Point& x, const Point& y) {
    auto c = compare_points(x, y); // family check first
    require_member(K, x);
    require_member(K, y);
    return c;
}

PointClass classify(const CompactLine& K, const Point& x) {
    require_member(K, x);
    return K->classify_member(x);
}

namespace {

Rational pow2_inv(int k) {
    mpz_class d(1);
    d <<= static_cast<unsigned>(k);
    return Rational(mpz_class(1), d);
}

} // namespace

// RealLine -------------------------------------------------------------------

RealLine::RealLine(std::vector<std::pair<Rational, Rational>> components) : comps_(std::move(components)) {
    if (comps_.empty()) throw Error(ErrorKind::ParseError, "a line needs at least one point");
    for (std::size_t i = 0; i < comps_.size(); ++i) {
        comps_[i].first.canonicalize();
        comps_[i].second.canonicalize();
        if (comps_[i].first > comps_[i].second)
            throw Error(ErrorKind::EndpointsOutOfOrder, "component " + std::to_string(i) + " has left end above right end");
        if (i > 0 && comps_[i - 1].second >= comps_[i].first)
            throw Error(ErrorKind::EndpointsOutOfOrder, "components must be sorted and pairwise disjoint");
    }
}

std::optional<std::size_t> RealLine::component_of(const Rational& x) const {
    auto it = std::upper_bound(comps_.begin(), comps_.end(), x,
                               [](const Rational& v, const auto& c) { return v < c.first; });
    if (it == comps_.begin()) return std::nullopt;
    std::size_t j = static_cast<std::size_t>(it - comps_.begin()) - 1;
    if (x <= comps_[j].second) return j;
    return std::nullopt;
}

bool RealLine::contains(const Point& x) const {
    if (!x.is_real()) return false;
    return component_of(x.real_value()).has_value();
}

PointClass RealLine::classify_member(const Point& p) const {
    const Rational& x = p.real_value();
    std::size_t j = *component_of(x);
    PointClass c;
    if (x == comps_[j].first) {
        if (j > 0) c.predecessor = Point::real(comps_[j - 1].second);
    } else {
        c.left_dense = true;
    }
    if (x == comps_[j].second) {
        if (j + 1 < comps_.size()) c.successor = Point::real(comps_[j + 1].first);
    } else {
        c.right_dense = true;
    }
    return c;
}

std::optional<Point> RealLine::between(const Point& a, const Point& b) const {
    const Rational& x = a.real_value();
    const Rational& y = b.real_value();
    std::size_t j = *component_of(y);
    if (y == comps_[j].first) {
        if (j == 0) return std::nullopt;
        if (comps_[j - 1].second > x) return Point::real(comps_[j - 1].second);
        return std::nullopt;
    }
    Rational lo = std::max(x, comps_[j].first);
    Rational m = y - (y - lo) / 1024;
    return Point::real(m);
}

std::vector<Point> RealLine::landmarks_after(const Point& y) const {
    std::size_t j = *component_of(y.real_value());
    if (comps_[j].second > y.real_value()) return {Point::real(comps_[j].second)};
    return {};
}

Point RealLine::approach(const Point& p, bool from_left, int k) const {
    const Rational& x = p.real_value();
    std::size_t j = *component_of(x);
    const auto& [l, r] = comps_[j];
    if (from_left ? x == l : x == r)
        throw Error(ErrorKind::NotRegulated, "no dense side at " + to_string(p));
    Rational base = span() / 4;
    if (x > l) base = std::min(base, Rational((x - l) / 2));
    if (x < r) base = std::min(base, Rational((r - x) / 2));
    Rational h = base * pow2_inv(k);
    return Point::real(from_left ? Rational(x - h) : Rational(x + h));
}

IntervalSpec RealLine::ball(const Point& x, const Rational& r) const { return ball(x, r, r); }

IntervalSpec RealLine::ball(const Point& p, const Rational& left, const Rational& right) const {
    const Rational& x = p.real_value();
    Rational u = x - left, v = x + right;
    IntervalSpec I;
    if (u < comps_.front().first) {
        I.lower = min();
        I.lower_open = false;
    } else if (component_of(u)) {
        I.lower = Point::real(u);
        I.lower_open = true;
    } else {
        auto it = std::upper_bound(comps_.begin(), comps_.end(), u,
                                   [](const Rational& val, const auto& c) { return val < c.first; });
        I.lower = Point::real((it - 1)->second);
        I.lower_open = true;
    }
    if (v > comps_.back().second) {
        I.upper = max();
        I.upper_open = false;
    } else if (component_of(v)) {
        I.upper = Point::real(v);
        I.upper_open = true;
    } else {
        auto it = std::upper_bound(comps_.begin(), comps_.end(), v,
                                   [](const Rational& val, const auto& c) { return val < c.first; });
        I.upper = Point::real(it->first);
        I.upper_open = true;
    }
    return I;
}

std::vector<Point> RealLine::sample(std::mt19937_64& rng, std::size_t n) const {
    std::vector<std::size_t> dense;
    for (std::size_t i = 0; i < comps_.size(); ++i)
        if (comps_[i].first < comps_[i].second) dense.push_back(i);
    std::vector<Point> out;
    std::uniform_int_distribution<std::size_t> pick(0, comps_.size() - 1);
    std::uniform_int_distribution<long> grid(0, 1L << 16);
    std::uniform_real_distribution<double> coin(0, 1);
    for (std::size_t k = 0; k < n; ++k) {
        if (dense.empty() || coin(rng) < 0.2) {
            const auto& c = comps_[pick(rng)];
            out.push_back(Point::real(coin(rng) < 0.5 ? c.first : c.second));
        } else {
            std::uniform_int_distribution<std::size_t> pd(0, dense.size() - 1);
            const auto& c = comps_[dense[pd(rng)]];
            Rational t(grid(rng), 1L << 16);
            out.push_back(Point::real(c.first + (c.second - c.first) * t));
        }
    }
    return out;
}

namespace {

std::vector<std::pair<Rational, Rational>> degenerate(const std::vector<Rational>& labels) {
    std::vector<std::pair<Rational, Rational>> c;
    for (const auto& x : labels) c.emplace_back(x, x);
    return c;
}

} // namespace

FiniteLine::FiniteLine(const std::vector<Rational>& labels) : RealLine(degenerate(labels)) {}

std::string FiniteLine::describe() const {
    std::string s = "finite{";
    for (std::size_t i = 0; i < comps_.size(); ++i) s += (i ? "," : "") + format_rational(comps_[i].first);
    return s + "}";
}

TimeScaleLine::TimeScaleLine(std::vector<std::pair<Rational, Rational>> components) : RealLine(std::move(components)) {}

std::string TimeScaleLine::describe() const {
    std::string s = "timescale[";
    for (std::size_t i = 0; i < comps_.size(); ++i)
        s += (i ? ",[" : "[") + format_rational(comps_[i].first) + "," + format_rational(comps_[i].second) + "]";
    return s + "]";
}

// OrdinalLine ----------------------------------------------------------------

OrdinalLine::OrdinalLine(std::vector<std::uint64_t> alpha, std::size_t max_degree)
    : alpha_(std::move(alpha)), max_degree_(max_degree) {
    while (!alpha_.empty() && alpha_.back() == 0) alpha_.pop_back();
    if (alpha_.size() > max_degree_ + 1)
        throw Error(ErrorKind::ParseError, "ordinal " + format_ordinal(alpha_) + " exceeds degree " + std::to_string(max_degree_));
}

bool OrdinalLine::contains(const Point& x) const {
    if (!x.is_ordinal()) return false;
    return compare_points(x, max()) <= 0;
}

std::pair<std::vector<std::uint64_t>, std::size_t> OrdinalLine::limit_decomposition(const std::vector<std::uint64_t>& x) {
    std::size_t j = 0;
    while (j < x.size() && x[j] == 0) ++j;
    auto base = x;
    base[j] -= 1;
    while (!base.empty() && base.back() == 0) base.pop_back();
    return {base, j};
}

PointClass OrdinalLine::classify_member(const Point& p) const {
    const auto& x = p.cnf();
    PointClass c;
    if (!x.empty()) {
        if (x[0] > 0) {
            auto pred = x;
            pred[0] -= 1;
            c.predecessor = Point::ordinal(pred);
        } else {
            c.left_dense = true;
        }
    }
    if (x != alpha_) {
        auto succ = x;
        if (succ.empty()) succ.push_back(0);
        succ[0] += 1;
        c.successor = Point::ordinal(succ);
    }
    return c;
}

std::optional<Point> OrdinalLine::between(const Point& a, const Point& b) const {
    const auto& y = b.cnf();
    if (y.empty()) return std::nullopt;
    if (y[0] > 0) {
        auto pred = y;
        pred[0] -= 1;
        Point p = Point::ordinal(pred);
        if (p > a) return p;
        return std::nullopt;
    }
    auto [base, j] = limit_decomposition(y);
    Point gamma = Point::ordinal(base);
    std::uint64_t n = 1;
    if (a >= gamma) {
        const auto& x = a.cnf();
        std::uint64_t m = x.size() > j - 1 ? x[j - 1] : 0;
        n = m >= (1ULL << 62) ? m + 1 : 2 * m + 1;
    }
    auto z = base;
    if (z.size() < j) z.resize(j, 0);
    z[j - 1] = n;
    return Point::ordinal(z);
}

std::vector<Point> OrdinalLine::landmarks_after(const Point& y) const {
    std::vector<Point> out;
    const auto& x = y.cnf();
    for (std::size_t j = 1; j <= max_degree_; ++j) {
        auto z = x;
        if (z.size() < j + 1) z.resize(j + 1, 0);
        for (std::size_t i = 0; i < j; ++i) z[i] = 0;
        z[j] += 1;
        Point p = Point::ordinal(z);
        if (contains(p)) out.push_back(p);
    }
    Point top = max();
    if (!alpha_.empty() && alpha_[0] == 0 && top > y) out.push_back(top);
    std::sort(out.begin(), out.end(), PointLess{});
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

Point OrdinalLine::approach(const Point& p, bool from_left, int k) const {
    const auto& x = p.cnf();
    if (!from_left || x.empty() || x[0] != 0)
        throw Error(ErrorKind::NotRegulated, "no dense side at " + to_string(p));
    auto [base, j] = limit_decomposition(x);
    if (base.size() < j) base.resize(j, 0);
    base[j - 1] = 1ULL << std::min(k, 62);
    return Point::ordinal(base);
}

std::vector<Point> OrdinalLine::sample(std::mt19937_64& rng, std::size_t n) const {
    std::vector<Point> out;
    std::uniform_int_distribution<std::uint64_t> coef(0, 12);
    std::uniform_real_distribution<double> coin(0, 1);
    while (out.size() < n) {
        std::vector<std::uint64_t> c(alpha_.size(), 0);
        for (std::size_t k = 0; k < c.size(); ++k) c[k] = std::min<std::uint64_t>(coef(rng), k + 1 == c.size() ? alpha_[k] : 12);
        if (!c.empty() && coin(rng) < 0.25) c[0] = 0;
        Point p = Point::ordinal(c);
        if (contains(p)) out.push_back(p);
        else if (coin(rng) < 0.3) out.push_back(max());
    }
    return out;
}

std::string OrdinalLine::describe() const { return "ordinal[0," + format_ordinal(alpha_) + "]"; }

// LexLine --------------------------------------------------------------------

LexLine::LexLine(CompactLine outer, CompactLine inner) : outer_(std::move(outer)), inner_(std::move(inner)) {}

Point LexLine::min() const { return Point::pair(outer_->min(), inner_->min()); }
Point LexLine::max() const { return Point::pair(outer_->max(), inner_->max()); }

bool LexLine::contains(const Point& x) const {
    if (!x.is_pair()) return false;
    return outer_->contains(x.first()) && inner_->contains(x.second());
}

PointClass LexLine::classify_member(const Point& p) const {
    const Point& k = p.first();
    const Point& l = p.second();
    PointClass c;
    Point l0 = inner_->min(), l1 = inner_->max();
    PointClass cl = inner_->classify_member(l);
    if (l != l0) {
        c.left_dense = cl.left_dense;
        if (!cl.left_dense) c.predecessor = Point::pair(k, *cl.predecessor);
    } else if (k != outer_->min()) {
        PointClass ck = outer_->classify_member(k);
        c.left_dense = ck.left_dense;
        if (!ck.left_dense) c.predecessor = Point::pair(*ck.predecessor, l1);
    }
    if (l != l1) {
        c.right_dense = cl.right_dense;
        if (!cl.right_dense) c.successor = Point::pair(k, *cl.successor);
    } else if (k != outer_->max()) {
        PointClass ck = outer_->classify_member(k);
        c.right_dense = ck.right_dense;
        if (!ck.right_dense) c.successor = Point::pair(*ck.successor, l0);
    }
    return c;
}

std::optional<Point> LexLine::between(const Point& a, const Point& b) const {
    const Point& ka = a.first();
    const Point& kb = b.first();
    const Point& la = a.second();
    const Point& lb = b.second();
    Point l0 = inner_->min();
    if (ka == kb) {
        auto m = inner_->between(la, lb);
        if (m) return Point::pair(kb, *m);
        return std::nullopt;
    }
    if (lb != l0) {
        auto m = inner_->between(l0, lb);
        return Point::pair(kb, m ? *m : l0);
    }
    auto m = outer_->between(ka, kb);
    if (m) return Point::pair(*m, inner_->max());
    if (la != inner_->max()) return Point::pair(ka, inner_->max());
    return std::nullopt;
}

std::vector<Point> LexLine::landmarks_after(const Point& y) const {
    std::vector<Point> out;
    for (const auto& t : inner_->landmarks_after(y.second())) out.push_back(Point::pair(y.first(), t));
    for (const auto& t : outer_->landmarks_after(y.first())) out.push_back(Point::pair(t, inner_->min()));
    return out;
}

Point LexLine::approach(const Point& p, bool from_left, int k) const {
    const Point& kk = p.first();
    const Point& l = p.second();
    if (from_left) {
        if (l != inner_->min()) return Point::pair(kk, inner_->approach(l, true, k));
        return Point::pair(outer_->approach(kk, true, k), inner_->max());
    }
    if (l != inner_->max()) return Point::pair(kk, inner_->approach(l, false, k));
    return Point::pair(outer_->approach(kk, false, k), inner_->min());
}

std::vector<Point> LexLine::sample(std::mt19937_64& rng, std::size_t n) const {
    auto a = outer_->sample(rng, n);
    auto b = inner_->sample(rng, n);
    std::vector<Point> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(Point::pair(a[i], b[i]));
    return out;
}

std::string LexLine::describe() const { return "lex(" + outer_->describe() + "," + inner_->describe() + ")"; }

// DoubleArrowLine ------------------------------------------------------------

DoubleArrowLine::DoubleArrowLine(CompactLine base, SubsetDescriptor subset)
    : base_(std::move(base)), subset_(std::move(subset)) {
    for (const auto& p : subset_.points) require_member(base_, p);
    std::sort(subset_.points.begin(), subset_.points.end(), PointLess{});
    for (const auto& I : subset_.intervals) {
        require_member(base_, I.lower);
        require_member(base_, I.upper);
        if (I.lower > I.upper) throw Error(ErrorKind::EndpointsOutOfOrder, "subset interval " + to_string(I));
    }
}

bool DoubleArrowLine::in_subset(const Point& x) const {
    switch (subset_.kind) {
    case SubsetDescriptor::Kind::Whole: return true;
    case SubsetDescriptor::Kind::Points:
        return std::binary_search(subset_.points.begin(), subset_.points.end(), x, PointLess{});
    case SubsetDescriptor::Kind::Intervals:
        for (const auto& I : subset_.intervals)
            if (ks::contains(base_, I, x)) return true;
        return false;
    }
    return false;
}

Point DoubleArrowLine::min() const { return Point::arrow(base_->min(), 0); }
Point DoubleArrowLine::max() const {
    Point top = base_->max();
    return Point::arrow(top, in_subset(top) ? 1 : 0);
}

bool DoubleArrowLine::contains(const Point& x) const {
    if (!x.is_arrow()) return false;
    if (!base_->contains(x.first())) return false;
    return x.side() == 0 || in_subset(x.first());
}

PointClass DoubleArrowLine::classify_member(const Point& p) const {
    const Point& x = p.first();
    PointClass c;
    PointClass cb = base_->classify_member(x);
    if (p.side() == 0) {
        if (x != base_->min()) {
            c.left_dense = cb.left_dense;
            if (!cb.left_dense) c.predecessor = Point::arrow(*cb.predecessor, in_subset(*cb.predecessor) ? 1 : 0);
        }
        if (in_subset(x)) {
            c.successor = Point::arrow(x, 1);
        } else if (x != base_->max()) {
            c.right_dense = cb.right_dense;
            if (!cb.right_dense) c.successor = Point::arrow(*cb.successor, 0);
        }
    } else {
        c.predecessor = Point::arrow(x, 0);
        if (x != base_->max()) {
            c.right_dense = cb.right_dense;
            if (!cb.right_dense) c.successor = Point::arrow(*cb.successor, 0);
        }
    }
    return c;
}

std::optional<Point> DoubleArrowLine::between(const Point& a, const Point& b) const {
    const Point& xb = b.first();
    if (b.side() == 1) {
        Point p = Point::arrow(xb, 0);
        if (p > a) return p;
        return std::nullopt;
    }
    if (xb == base_->min()) return std::nullopt;
    PointClass cb = base_->classify_member(xb);
    if (!cb.left_dense) {
        Point top = Point::arrow(*cb.predecessor, in_subset(*cb.predecessor) ? 1 : 0);
        if (top > a) return top;
        return std::nullopt;
    }
    auto m = base_->between(a.first(), xb);
    if (!m) return std::nullopt;
    return Point::arrow(*m, 0);
}

std::vector<Point> DoubleArrowLine::landmarks_after(const Point& y) const {
    std::vector<Point> out;
    for (const auto& t : base_->landmarks_after(y.first())) out.push_back(Point::arrow(t, 0));
    return out;
}

Point DoubleArrowLine::approach(const Point& p, bool from_left, int k) const {
    const Point& x = p.first();
    if (from_left) {
        if (p.side() != 0) throw Error(ErrorKind::NotRegulated, "no dense side at " + to_string(p));
        return Point::arrow(base_->approach(x, true, k), 0);
    }
    if (p.side() == 0 && in_subset(x)) throw Error(ErrorKind::NotRegulated, "no dense side at " + to_string(p));
    return Point::arrow(base_->approach(x, false, k), 0);
}

std::vector<Point> DoubleArrowLine::sample(std::mt19937_64& rng, std::size_t n) const {
    auto a = base_->sample(rng, n);
    std::uniform_int_distribution<int> side(0, 1);
    std::vector<Point> out;
    for (auto& x : a) out.push_back(Point::arrow(x, in_subset(x) ? side(rng) : 0));
    return out;
}

std::string DoubleArrowLine::describe() const {
    std::string s = "double_arrow(" + base_->describe() + ",";
    switch (subset_.kind) {
    case SubsetDescriptor::Kind::Whole: s += "all"; break;
    case SubsetDescriptor::Kind::Points:
        s += "{";
        for (std::size_t i = 0; i < subset_.points.size(); ++i) s += (i ? "," : "") + to_string(subset_.points[i]);
        s += "}";
        break;
    case SubsetDescriptor::Kind::Intervals:
        for (std::size_t i = 0; i < subset_.intervals.size(); ++i) s += (i ? "u" : "") + to_string(subset_.intervals[i]);
        break;
    }
    return s + ")";
}

// Factories ------------------------------------------------------------------

CompactLine make_finite(const std::vector<Rational>& labels) { return std::make_shared<FiniteLine>(labels); }
CompactLine make_timescale(std::vector<std::pair<Rational, Rational>> c) { return std::make_shared<TimeScaleLine>(std::move(c)); }
CompactLine make_interval(const Rational& a, const Rational& b) { return make_timescale({{a, b}}); }
CompactLine make_ordinal(const std::vector<std::uint64_t>& alpha, std::size_t max_degree) {
    return std::make_shared<OrdinalLine>(alpha, max_degree);
}
CompactLine make_lex(CompactLine outer, CompactLine inner) { return std::make_shared<LexLine>(std::move(outer), std::move(inner)); }
CompactLine make_double_arrow(CompactLine base, SubsetDescriptor subset) {
    return std::make_shared<DoubleArrowLine>(std::move(base), std::move(subset));
}

const RealLine* as_real_line(const CompactLine& K) { return dynamic_cast<const RealLine*>(K.get()); }

} // namespace ks
