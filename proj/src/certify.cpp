#include "ks/certify.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>

namespace ks {

std::optional<double> RefinementCertifier::contraction(const std::vector<double>& d, double cap) {
    std::size_t m = d.size();
    if (m < 3) return std::nullopt;
    double q = std::max(d[m - 1] / std::max(d[m - 2], DBL_MIN), d[m - 2] / std::max(d[m - 3], DBL_MIN));
    if (q > cap) return std::nullopt;
    return d[m - 1] / (1 - q);
}

std::optional<Certificate> RefinementCertifier::push(double s, double floor) {
    raw_.push_back(s);
    if (raw_.size() < 2) return std::nullopt;
    raw_diff_.push_back(std::abs(raw_[raw_.size() - 1] - raw_[raw_.size() - 2]));
    std::size_t m = raw_diff_.size();
    if (m >= 2 && raw_diff_[m - 1] <= floor && raw_diff_[m - 2] <= floor) return Certificate{s, floor, false};
    if (auto e = contraction(raw_diff_, 0.9); e && *e + floor < tol_) return Certificate{s, *e + floor, false};

    double prev = raw_[raw_.size() - 2];
    rich_.push_back(s + (s - prev) / 3);
    if (rich_.size() >= 2) rich_diff_.push_back(std::abs(rich_[rich_.size() - 1] - rich_[rich_.size() - 2]));
    if (auto e = contraction(rich_diff_, 0.5); e && *e + floor < tol_) return Certificate{rich_.back(), *e + floor, true};
    return std::nullopt;
}

bool RefinementCertifier::stalled() const {
    std::size_t m = raw_diff_.size();
    if (m < 6) return false;
    for (std::size_t i = m - 5; i < m; ++i)
        if (raw_diff_[i] <= 0.9 * raw_diff_[i - 1]) return false;
    return true;
}

double RefinementCertifier::last_difference() const { return raw_diff_.empty() ? INFINITY : raw_diff_.back(); }

} // namespace ks
