#pragma once

#include "ks/engine.hpp"

#include <string>
#include <vector>

namespace ks {

enum class DerivativeCase { Jump, Dense };

struct QuotientLevel {
    int level = 0;
    double left = 0, right = 0; // NaN when that side is absent
};

struct DerivativeResult {
    double value = 0;
    DerivativeCase kind = DerivativeCase::Jump;
    double stabilization = 0; // last change of the accepted quotient; 0 for jumps
    std::vector<QuotientLevel> trace;
};

// Errors carry the reason first in the detail: GConstant, NotRightContinuous, NoStabilization, LeftLimitMismatch.
DerivativeResult g_derivative(const CompactLine& K, const LineFunction& f, const Integrator& G, const Point& x,
                              double tol = 1e-6);

struct StraddleReport {
    IntervalSpec interval;
    bool jump_case = false;
    std::size_t pairs = 0;
    double worst_ratio = 0; // max defect / allowed bound over the sampled pairs
};

StraddleReport straddle_probe(const CompactLine& K, const LineFunction& f, const Integrator& G, const Point& t, double eps,
                              std::size_t samples = 16);

struct FtcViolation {
    Point at;
    std::string reason;
};

struct FtcIntegrateReport {
    double lhs = 0, rhs = 0, defect = 0, error_bound = 0;
    Status status = Status::Exact;
    std::vector<Point> checked;
    std::vector<FtcViolation> violations;
};

// Throws PreconditionViolated when a declared exception is left-isolated and not 0_K.
// Left-isolated points where F fails to have derivative f are reported as violations.
FtcIntegrateReport ftc_integrate_derivative(const CompactLine& K, const LineFunction& F, const Integrand& f,
                                            const Integrator& G, const std::vector<Point>& exceptions,
                                            const IntegrateOptions& opt = {});

struct FtcProbe {
    Point x;
    bool jump = false;
    double derivative = 0, f = 0, deviation = 0;
    std::string error;
};

struct FtcDifferentiateReport {
    std::vector<FtcProbe> probes;
    std::vector<Point> exceptional;
    double outer_measure_bound = 0;
};

FtcDifferentiateReport ftc_differentiate_integral(const CompactLine& K, const Integrand& f, const Integrator& G,
                                                  const std::vector<Point>& probes, double tol = 1e-6,
                                                  const IntegrateOptions& opt = {});

} // namespace ks
