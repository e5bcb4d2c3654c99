#pragma once

#include <vector>

#include "nanotrap/trap.hpp"
#include "nanotrap/types.hpp"

// Gross-Pitaevskii ground states by imaginary-time propagation with
// operator splitting (Crank-Nicolson kinetic steps per axis).
namespace nanotrap::gpsolver {

struct GPProblem {
    trap::PotentialGrid potential;  // J; excluded cells are hard walls
    double N = 0.0;                 // atom count
    AtomSpecies species;
};

struct GPGroundState {
    Vec3 origin, spacing;
    int nx = 0, ny = 0, nz = 0;
    std::vector<double> psi;  // real non-negative amplitude, m^{-3/2}
    double mu = 0.0;            // J, absolute (includes the potential offset)
    double mu_above_min = 0.0;  // J above the trap minimum
    double energy = 0.0;        // J
    double residual = 0.0;      // ||(H-mu)psi|| / ||mu psi|| (shifted)
    int iterations = 0;
    bool resolution_warning = false;  // healing/oscillator length vs spacing

    std::size_t idx(int ix, int iy, int iz) const {
        return (static_cast<std::size_t>(ix) * ny + iy) * nz + iz;
    }
    double cell_volume() const { return spacing.x * spacing.y * spacing.z; }
};

struct SolveOptions {
    double tol = 1e-4;          // residual target
    int max_iters = 12000;
    int check_every = 25;
    double dt_start = 1e-4;     // s of imaginary time
    double dt_min = 1e-6;
    const std::vector<double>* initial = nullptr;  // warm start (same grid)
    std::vector<double>* energy_history = nullptr;  // appended at each check
};

/// Imaginary-time ground state. Energy is non-increasing between checks
/// (dt shrinks on any increase); throws std::runtime_error when the
/// residual target is unreachable within max_iters.
GPGroundState solve_ground_state(const GPProblem& p, const SolveOptions& opt = {});

struct LineDensity {
    std::vector<double> x;    // m
    std::vector<double> n1;   // 1/m
    double std_relative = 0.0;  // over the central 80% of the cloud extent
};

LineDensity line_density_stats(const GPGroundState& s);

/// Column densities integrated along one axis (0=x, 1=y, 2=z), in m^-2.
std::vector<double> density_map(const GPGroundState& s, int axis);

/// Total energy split, for virial checks: kinetic, potential (above the
/// grid minimum), interaction.
struct EnergyParts {
    double kinetic = 0.0, potential = 0.0, interaction = 0.0;
};
EnergyParts energy_parts(const GPProblem& p, const GPGroundState& s);

/// Trilinear resample of a converged state onto another grid (warm starts
/// for refined solves). Target cells outside the source box get 0.
std::vector<double> resample_psi(const GPGroundState& s, const trap::PotentialGrid& target);

} // namespace nanotrap::gpsolver
