#pragma once

#include <vector>

namespace nanotrap::bessel {

// Modified Bessel functions, exponentially scaled to stay in double range:
//   i*e(x) = I(x)·e^{-x},  k*e(x) = K(x)·e^{x},  x > 0.

double i0e(double x);
double i1e(double x);
double k0e(double x);
double k1e(double x);

/// K1(x), unscaled (underflows to 0 for large x).
double k1(double x);

/// I_m(x)·e^{-x} for integer m >= 0 (Miller downward recurrence).
double besseli_scaled(int m, double x);

/// K_m(x)·e^{x} for integer m >= 0 (upward recurrence). Returns +inf on
/// overflow, which callers treat as a vanishing I/K ratio.
double besselk_scaled(int m, double x);

struct ScaledPair {
    double fm;    // order m
    double fm1;   // order m-1 (order 1 for m = 0, by symmetry)
};

ScaledPair besseli_scaled_pair(int m, double x);
ScaledPair besselk_scaled_pair(int m, double x);

/// Fill out[0..mmax] with I_m(x)e^{-x} in one downward Miller pass.
void besseli_scaled_array(int mmax, double x, std::vector<double>& out);

/// Fill out[0..mmax] with K_m(x)e^{x}; entries are +inf past the first
/// overflow (their I/K ratios vanish).
void besselk_scaled_array(int mmax, double x, std::vector<double>& out);

} // namespace nanotrap::bessel
