#pragma once

#include <functional>
#include <vector>

#include "nmq/errors.hpp"

namespace nmq {

using RealFunction = std::function<double(double)>;

// Observation window for trajectory-based quantities. Times are in the
// model's natural units (1/omega_c, 1/lambda, 1/beta).
struct TimeWindow {
    double t_start = 0.0;
    double t_end = 20.0;
    int grid_points = 2000;

    void validate() const;
};

struct Interval {
    double a;
    double b;
};

// Disjoint, ascending intervals inside a window. The last interval may be
// open-ended, reported with b == t_end.
using IntervalList = std::vector<Interval>;

// Adaptive Gauss-Kronrod 15(7) with bisection. The error of each panel is
// estimated from the embedded pair; panels are split until the combined
// estimate meets max(abs_tol, rel_tol*|result|). Throws ToleranceNotReached
// when the subdivision budget is exhausted (callers treat that as a
// divergence signal).
double integrate_adaptive(const RealFunction& f, double a, double b,
                          double rel_tol = 1e-10, double abs_tol = 1e-12);

// Symmetric difference quotient (f(t+h) - f(t-h)) / 2h.
double derivative(const RealFunction& f, double t, double h);

// Maximal subintervals of the window where f < 0, endpoints refined by
// bisection to refine_tol. Doubles the scan grid (up to a cap) when the
// sign pattern looks under-resolved, then throws GridTooCoarse.
IntervalList find_sign_changes(const RealFunction& f, const TimeWindow& window,
                               double refine_tol = 1e-8);

struct IncreaseResult {
    double total = 0.0;      // sum of f(b_i) - f(a_i) over increase intervals
    IntervalList intervals;  // where f strictly increases
};

// Total variation of f restricted to its intervals of increase, i.e. the
// integral of (df/dt)_+ by the fundamental theorem. Interval endpoints
// (local extrema) are refined by golden-section search.
IncreaseResult accumulate_increase(const RealFunction& f, const TimeWindow& window,
                                   double refine_tol = 1e-8);

}  // namespace nmq
