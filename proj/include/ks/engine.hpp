#pragma once

#include "ks/integrator.hpp"
#include "ks/partition.hpp"
#include "ks/result.hpp"

#include <random>

namespace ks {

struct IntegrateOptions {
    double tol = 1e-9;
    int max_refine = 40;
    std::size_t max_cells = 1u << 18;
    bool allow_exact = true;
};

// Budget from KS_MAX_REFINE when set, otherwise the given default.
int refine_budget(int fallback);

// Tagged cells of the adaptive real-line partition at level n, clipped to [a,b].
std::vector<Component> adaptive_cells(const RealLine& R, const Rational& a, const Rational& b, const std::vector<Rational>& bps,
                                      int n, std::size_t cap, bool& overflow);

double riemann_sum(const CompactLine& K, const Integrand& f, const Integrator& G, const std::vector<Component>& parts);

IntegralResult integrate(const CompactLine& K, const Integrand& f, const Integrator& G, const Point& a, const Point& b,
                         const IntegrateOptions& opt = {});
IntegralResult integrate(const CompactLine& K, const Integrand& f, const Integrator& G, const IntegrateOptions& opt = {});

bool has_exact_path(const CompactLine& K, const Integrand& f, const Integrator& G);

double singleton_integral(const CompactLine& K, const Integrator& G, const Point& c);

IntegralResult indicator_integral(const CompactLine& K, const Integrand& f, const Integrator& G, const IntervalSpec& I,
                                  const IntegrateOptions& opt = {});

struct Additivity {
    double lhs = 0, rhs = 0, defect = 0, error_bound = 0;
};

Additivity additivity_check(const CompactLine& K, const Integrand& f, const Integrator& G, const Point& a, const Point& c,
                            const Point& b, const IntegrateOptions& opt = {});

// A gauge under which every fine partition has |S - A| < eps; structured problems only.
Gauge epsilon_gauge(const CompactLine& K, const Integrand& f, const Integrator& G, double eps);

// A random subsystem of a fine partition for a random refinement of delta.
TaggedSystem random_fine_system(const CompactLine& K, const Gauge& delta, std::mt19937_64& rng);

struct Residual {
    double signed_residual = 0, absolute_residual = 0, error_bound = 0;
};

Residual saks_henstock_residual(const CompactLine& K, const Integrand& f, const Integrator& G, const TaggedSystem& S,
                                const Gauge& delta, const IntegrateOptions& opt = {});

// F(x) = integral of f dG over [0_K, x]; structured whenever f and G are.
LineFunction primitive(const CompactLine& K, const Integrand& f, const Integrator& G, const IntegrateOptions& opt = {});

IntegralResult absolute_integrate(const CompactLine& K, const Integrand& f, const Integrator& G, const IntegrateOptions& opt = {});

} // namespace ks
