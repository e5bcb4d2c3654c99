#pragma once

#include <functional>

namespace nanotrap::quad {

struct Options {
    double rel_tol = 1e-8;
    double abs_tol = 0.0;
    int max_depth = 40;
};

/// Adaptive Gauss-Kronrod (7,15) integration of f over [a, b].
double integrate(const std::function<double(double)>& f, double a, double b,
                 const Options& opt = {});

/// Nested adaptive 2D integral of f over the rectangle [ax,bx]×[ay,by].
double integrate2d(const std::function<double(double, double)>& f, double ax, double bx,
                   double ay, double by, const Options& opt = {});

/// Integral of f over [a,b] where f ~ sqrt near both endpoints (classical
/// turning points). Uses the substitution x = a + (b-a)·sin²θ.
double integrate_sqrt_endpoints(const std::function<double(double)>& f, double a, double b,
                                const Options& opt = {});

} // namespace nanotrap::quad
