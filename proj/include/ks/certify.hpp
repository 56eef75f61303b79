#pragma once

#include <optional>
#include <vector>

namespace ks {

struct Certificate {
    double value = 0;
    double error_bound = 0;
    bool accelerated = false;
};

// Watches a refinement sequence of sums. Certifies when the differences contract
// geometrically, either for the raw sums or for their Richardson combination (4S_n - S_{n-1})/3.
class RefinementCertifier {
public:
    explicit RefinementCertifier(double tol) : tol_(tol) {}

    std::optional<Certificate> push(double s, double floor);
    bool stalled() const;
    double last_difference() const;

private:
    static std::optional<double> contraction(const std::vector<double>& d, double cap);

    double tol_;
    std::vector<double> raw_, raw_diff_, rich_, rich_diff_;
};

} // namespace ks
