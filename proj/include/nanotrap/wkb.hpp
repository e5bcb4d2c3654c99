#pragma once

#include <functional>
#include <vector>

#include "nanotrap/types.hpp"

// One-dimensional WKB barrier transmission and the X-wire control curves.
namespace nanotrap::wkb {

/// Potential of the crossing-wire barrier along the guide axis:
///   V(x) = μ_A B0 + (μ_A μ0 I_cross / 2π) · z/(z² + x²).
double x_barrier_potential(double I_cross, double B0, double z, double x,
                           const AtomSpecies& species);

struct Transmission {
    double P = 0.0;
    bool over_barrier = false;
    double x1 = 0.0, x2 = 0.0;  // classical turning points (x1 < x2)
};

/// P = exp(-(1/ħ)∫ dx sqrt(2m(V-E))) between the turning points bracketed
/// inside [x_lo, x_hi]. E above the barrier peak returns P = 1 flagged.
/// Throws std::domain_error when no turning points exist below the peak.
Transmission transmission(const std::function<double(double)>& V, double E,
                          const AtomSpecies& species, double x_lo, double x_hi);

struct ControlCurve {
    double I_ref = 0.0;                              // A, solves P = P_ref
    double barrier_height = 0.0;                     // J above the floor at I_ref
    std::vector<std::pair<double, double>> points;   // (ΔI/I_ref, P)
};

/// Solve P(I_cross) = P_ref at height d and kinetic energy E_kin by
/// bisection (monotone), then sweep the relative current change.
ControlCurve tunneling_control_curve(double d, double E_kin, double P_ref,
                                     const AtomSpecies& species,
                                     const std::vector<double>& dI_over_I);

/// Barrier height that maintains P = P_ref at height d (the control-curve
/// solve without the sweep).
double barrier_height_for(double d, double E_kin, double P_ref, const AtomSpecies& species);

} // namespace nanotrap::wkb
