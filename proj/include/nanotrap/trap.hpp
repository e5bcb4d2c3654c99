#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "nanotrap/casimir.hpp"
#include "nanotrap/field.hpp"
#include "nanotrap/types.hpp"
#include "nanotrap/vec.hpp"

// Total trapping potential, trap characterization (minimum, frequencies,
// depth) on sampled grids.
namespace nanotrap::trap {

/// Sampled total potential on a uniform 3D grid. Excluded cells (inside a
/// body or in the CP divergence zone) are flagged and carry U = -1e30.
struct PotentialGrid {
    Vec3 origin;
    Vec3 spacing;
    int nx = 0, ny = 0, nz = 0;

    std::vector<double> U;            // J
    std::vector<std::uint8_t> excluded;

    std::size_t idx(int ix, int iy, int iz) const {
        return (static_cast<std::size_t>(ix) * ny + iy) * nz + iz;
    }
    Vec3 point(int ix, int iy, int iz) const {
        return {origin.x + ix * spacing.x, origin.y + iy * spacing.y, origin.z + iz * spacing.z};
    }
    std::size_t size() const { return static_cast<std::size_t>(nx) * ny * nz; }
};

/// Longitudinal corrugation field added to B_x, evaluated as
/// δB_x(x, ρ) = Σ_n amp_n K1(k_n ρ) cos(k_n x + φ_n).
struct CorrugationModes {
    struct Mode {
        double k = 0.0;     // rad/m
        double amp = 0.0;   // T (before the K1(kρ) factor)
        double phase = 0.0;
    };
    std::vector<Mode> modes;
    double bx(double x, double rho) const;
    bool empty() const { return modes.empty(); }
};

struct TrapSystem {
    fieldsolver::FieldFn field;             // B(r), bias included
    AtomSpecies species;
    const casimir::CPProvider* cp = nullptr;          // nullptr = none
    const CorrugationModes* corrugation = nullptr;    // optional
    bool gravity = true;
    /// axis-distance helper for the corrugation ρ (wire along x̂ at height
    /// wire_axis_z); unused when corrugation is null
    double wire_axis_z = 0.0;

    /// U = μ_A |B| + m g z (optional) + U_CP. Throws inside bodies.
    double potential(const Vec3& r) const;
};

struct GridExtent {
    Vec3 lo, hi;
    int nx = 0, ny = 0, nz = 0;
};

/// Fill a potential grid (parallel); body cells and cells below
/// `cp_floor` (J) are flagged excluded.
PotentialGrid fill_grid(const TrapSystem& sys, const GridExtent& ext, double cp_floor);

struct TrapCharacterization {
    Vec3 r_min;
    double U_min = 0.0;          // J at the minimum
    double height_d = 0.0;       // above the wire top surface (m)
    double omega[3] = {};        // principal angular frequencies, sorted desc
    Vec3 axes[3];                // matching principal directions
    double f_radial = 0.0;       // Hz, geometric mean of the two tightest
    double f_long = 0.0;         // Hz
    double depth = 0.0;          // J
    bool depth_grid_capped = false;  // escape found only through the grid edge
    double B_min = 0.0;          // T
    double larmor = 0.0;         // rad/s
};

struct MinimizeResult {
    Vec3 r;
    double U;
};

/// Derivative-free descent refined by Newton steps on the smooth potential.
MinimizeResult find_minimum(const TrapSystem& sys, Vec3 seed, double scale);

/// Principal frequencies from the central-difference Hessian at r_min.
/// Throws std::runtime_error on a negative eigenvalue (saddle).
void principal_frequencies(const TrapSystem& sys, const Vec3& r_min, double step,
                           TrapCharacterization& out);

/// Trap depth by threshold flood fill: the lowest energy whose basin
/// (6-connected, U <= E) reaches the surface-adjacent region, minus U_min.
/// Bisected to 1% of the depth.
double flood_fill_depth(const PotentialGrid& g, const Vec3& r_min, double U_min,
                        double surface_z, bool* grid_capped = nullptr);

/// Full characterization: minimum, frequencies, depth on the given grid
/// extent. `wire_top_z` defines height_d; `surface_z` seeds escape cells.
TrapCharacterization characterize(const TrapSystem& sys, Vec3 seed, const GridExtent& depth_grid,
                                  double wire_top_z, double surface_z);

} // namespace nanotrap::trap
