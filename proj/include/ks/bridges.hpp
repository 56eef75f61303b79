#pragma once

#include "ks/engine.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace ks {

// Time scales ----------------------------------------------------------------

Point backward_jump(const CompactLine& T, const Point& x);

struct NablaGauge {
    std::function<double(const Point&)> gammaL, gammaR;
    std::string provenance;
};

// [x_{i-1}, x_i] within [t - gammaL(t), t + gammaR(t)] for every component.
bool is_gamma_fine(const std::vector<Component>& parts, const NablaGauge& g);

struct NablaResult {
    IntegralResult nabla;
    IntegralResult ks;
    double defect = 0;
    double error_bound = 0;
};

NablaResult nabla_integrate(const CompactLine& T, const Integrand& f, const Integrator& G, const IntegrateOptions& opt = {});

// Simple functions -----------------------------------------------------------

struct SimpleTerm {
    double coefficient = 0;
    std::vector<IntervalSpec> sets;
};

struct SimpleFunction {
    std::vector<SimpleTerm> terms;
};

struct SimpleIntegral {
    double ks_value = 0, measure_value = 0, defect = 0;
    Status status = Status::Exact;
};

LineFunction to_line_function(const CompactLine& K, const SimpleFunction& phi);
SimpleIntegral simple_function_integral(const CompactLine& K, const SimpleFunction& phi, const Integrator& G,
                                        const IntegrateOptions& opt = {});

// Convergence theorems -------------------------------------------------------

enum class ConvergenceMode { MCT, DCT, Fatou };

const char* mode_name(ConvergenceMode m);

struct ConvergenceProblem {
    ConvergenceMode mode = ConvergenceMode::MCT;
    std::function<Integrand(int)> family;
    Integrand limit;
    std::optional<LineFunction> lower, upper; // DCT envelopes g <= f_m <= h
    int m_max = 64;
    double tol = 1e-6;
};

struct ConvergenceReport {
    std::vector<std::pair<int, double>> values;
    double extrapolated = 0;
    double spread = 0; // disagreement between the even and odd extrapolations
    double limit_integral = 0;
    double defect = 0;
    bool inequality_holds = true; // Fatou: integral of liminf <= liminf of integrals
    std::vector<std::string> log;
};

ConvergenceReport convergence_harness(const CompactLine& K, const Integrator& G, const ConvergenceProblem& p,
                                      const IntegrateOptions& opt = {});

// Vitali ---------------------------------------------------------------------

struct VitaliSelection {
    std::vector<std::size_t> selected; // indices into the family
    std::vector<IntervalSpec> hulls;   // phi(J) for each selected J
    std::vector<double> measures;      // mu of every family member
};

VitaliSelection vitali_select(const CompactLine& K, const Integrator& G, const std::vector<IntervalSpec>& F);

// Empty when F is admissible for A; otherwise the witness point and the blocking disjoint subfamily.
struct AdmissibilityWitness {
    Point point;
    std::vector<std::size_t> blocking;
};

std::optional<AdmissibilityWitness> admissibility_witness(const CompactLine& K, const std::vector<Point>& A,
                                                          const std::vector<IntervalSpec>& F);

struct VitaliCover {
    std::vector<std::size_t> chosen;
    double delta = 0;
    double defect = 0; // outer measure of A minus the union of the chosen intervals
    double bound = 0;  // 5 * sum of mu(J) over selected J below delta
};

VitaliCover vitali_cover_finite(const CompactLine& K, const Integrator& G, const std::vector<Point>& A,
                                const std::vector<IntervalSpec>& F, double eps);

// Series on [0,w] ------------------------------------------------------------

// Integral of f against the partial sums of a over [0,w], with f(w) = 0.
IntegralResult ordinal_series_integral(const SequenceRule& a, const SequenceRule& f, double tol = 1e-6);

} // namespace ks
