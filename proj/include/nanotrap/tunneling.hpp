#pragma once

#include <functional>
#include <vector>

#include "nanotrap/gp.hpp"
#include "nanotrap/trap.hpp"
#include "nanotrap/types.hpp"

// WKB tunneling of a trapped condensate through the CP-lowered barrier,
// column by column along z.
namespace nanotrap::tunneling {

struct Result {
    double gamma = 0.0;           // 1/s
    double open_weight = 0.0;     // density fraction in columns with no barrier
    int open_columns = 0;
    int contributing_columns = 0;
    std::vector<double> weighted_map;  // integrand of the rate, per (x,y) column
    int nx = 0, ny = 0;
};

struct ColumnBarrier {
    double action = 0.0;  // ∫ sqrt(2m(U-mu)) dz over the barrier (J·s/m·m)
    bool open = false;    // no barrier below the well
};

/// Barrier action for the column at (x, y), scanning down from z_start.
/// Lets callers evaluate the potential directly instead of relying on the
/// (possibly masked) GP grid.
using BarrierFn = std::function<ColumnBarrier(double x, double y, double z_start)>;

/// Γ = Σ_(x,y) P(x,y) ω_att(x,y) exp(-2∫ dz sqrt(2m(U-μ))/ħ), with
/// P the column density weight, ω_att = ħ sqrt(<k_z²>)/(2mL) from the
/// wavefunction inside the well, and the barrier integral between the
/// turning points below the well. Columns with no barrier below the well
/// contribute their full attempt rate and are flagged. When `barrier` is
/// given it supplies the action; otherwise the grid columns are used.
Result surface_tunneling_rate(const trap::PotentialGrid& U, const gpsolver::GPGroundState& state,
                              double mu_abs, const AtomSpecies& species,
                              const BarrierFn* barrier = nullptr);

/// Barrier function that evaluates a trap system directly with fine z
/// scanning and turning points bisected to 1e-12 m.
BarrierFn make_barrier_fn(const trap::TrapSystem& sys, double mu_abs, double z_floor = 2e-9);

} // namespace nanotrap::tunneling
