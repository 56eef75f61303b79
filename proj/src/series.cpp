#include "ks/series.hpp"

#include <cfloat>
#include <cmath>

namespace ks {

const char* status_name(Status s) {
    switch (s) {
    case Status::Exact: return "Exact";
    case Status::Certified: return "Certified";
    case Status::NoCertificate: return "NoCertificate";
    case Status::Divergent: return "Divergent";
    }
    return "?";
}

namespace {

bool looks_alternating(const std::function<double(std::uint64_t)>& term) {
    int sign = 0, count = 0;
    for (std::uint64_t i = 0; i < 512; ++i) {
        double t = term(i);
        if (t == 0) continue;
        int s = t > 0 ? 1 : -1;
        if (sign != 0 && s == sign) return false;
        sign = s;
        ++count;
    }
    return count >= 8;
}

} // namespace

IntegralResult sum_series(const std::function<double(std::uint64_t)>& term, const SeriesOptions& opt) {
    IntegralResult res;
    res.status = Status::NoCertificate;
    const bool alternating = looks_alternating(term);

    double sum = 0, comp = 0, abs_sum = 0, last_term = 0;
    std::uint64_t i = 0;
    std::vector<double> est, diff;
    int slow = 0;
    for (int k = opt.min_log2; k <= opt.max_log2; ++k) {
        std::uint64_t N = opt.period << k;
        for (; i < N; ++i) {
            double t = term(i);
            double y = sum + t;
            comp += std::abs(sum) >= std::abs(t) ? (sum - y) + t : (t - y) + sum;
            sum = y;
            abs_sum += std::abs(t);
            last_term = t;
        }
        double S = sum + comp;
        double E = alternating ? S - 0.5 * last_term : S;
        est.push_back(E);
        res.trace.push_back({"delta(n)={n}, delta(w)=(" + std::to_string(N - 1) + ",w]", E});
        res.value = E;
        if (!std::isfinite(E) || std::abs(E) > opt.ceiling) {
            res.status = Status::Divergent;
            res.error_bound = INFINITY;
            return res;
        }
        if (est.size() < 2) continue;
        diff.push_back(std::abs(est[est.size() - 1] - est[est.size() - 2]));
        const double floor = 8 * DBL_EPSILON * abs_sum;
        std::size_t m = diff.size();
        if (m >= 2 && diff[m - 1] <= floor && diff[m - 2] <= floor) {
            res.status = Status::Certified;
            res.error_bound = floor;
            return res;
        }
        if (m < 3) continue;
        double r1 = diff[m - 1] / std::max(diff[m - 2], DBL_MIN);
        double r2 = diff[m - 2] / std::max(diff[m - 3], DBL_MIN);
        double q = std::max(r1, r2);
        if (q <= 0.9) {
            double eps = diff[m - 1] / (1 - q) + floor;
            if (eps < opt.tol) {
                res.status = Status::Certified;
                res.error_bound = eps;
                return res;
            }
        }
        slow = (r1 >= 0.97 && diff[m - 1] > 10 * opt.tol) ? slow + 1 : 0;
        if (k >= 14 && slow >= 5) {
            res.status = Status::Divergent;
            res.error_bound = INFINITY;
            return res;
        }
    }
    std::size_t m = diff.size();
    double q = m >= 2 ? diff[m - 1] / std::max(diff[m - 2], DBL_MIN) : 1.0;
    if (q > 0.9 && m >= 1 && diff[m - 1] > opt.tol) {
        res.status = Status::Divergent;
        res.error_bound = INFINITY;
    } else {
        res.error_bound = m >= 1 ? diff[m - 1] / std::max(1 - q, 0.1) : INFINITY;
    }
    return res;
}

IntegralResult sum_rule(const SequenceRule& rule, double tol) {
    SeriesOptions opt;
    opt.tol = tol;
    opt.period = rule.period();
    return sum_series([&rule](std::uint64_t i) { return rule(i); }, opt);
}

IntegralResult tail_sum(const SequenceRule& rule, std::uint64_t n, double tol) {
    SeriesOptions opt;
    opt.tol = tol;
    opt.period = rule.period();
    return sum_series([&rule, n](std::uint64_t i) { return rule(i + n + 1); }, opt);
}

} // namespace ks
