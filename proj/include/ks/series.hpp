#pragma once

#include "ks/function.hpp"
#include "ks/result.hpp"

#include <cstdint>
#include <functional>

namespace ks {

struct SeriesOptions {
    double tol = 1e-6;
    double ceiling = 1e9;
    int min_log2 = 4;
    int max_log2 = 24;
    std::uint64_t period = 1; // checkpoints are period * 2^k
};

// Sum of term(0) + term(1) + ... certified by contraction of checkpoint differences.
// Alternating tails are estimated by the mean of consecutive partial sums.
IntegralResult sum_series(const std::function<double(std::uint64_t)>& term, const SeriesOptions& opt);

IntegralResult sum_rule(const SequenceRule& rule, double tol);

// Sum over i > n only.
IntegralResult tail_sum(const SequenceRule& rule, std::uint64_t n, double tol);

} // namespace ks
