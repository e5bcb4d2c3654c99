#pragma once

#include <numbers>

// Fundamental physical constants (CODATA 2018), SI units throughout.
namespace nanotrap::constants {

inline constexpr double pi = std::numbers::pi_v<double>;

/// Vacuum permeability [T·m/A].
inline constexpr double mu0 = 1.25663706212e-6;

/// Reduced Planck constant [J·s].
inline constexpr double hbar = 1.054571817e-34;

/// Boltzmann constant [J/K].
inline constexpr double kB = 1.380649e-23;

/// Bohr magneton [J/T].
inline constexpr double muB = 9.2740100783e-24;

/// Speed of light in vacuum [m/s].
inline constexpr double c = 299792458.0;

/// Vacuum permittivity [F/m].
inline constexpr double eps0 = 8.8541878128e-12;

/// Standard gravitational acceleration [m/s²].
inline constexpr double g_earth = 9.80665;

/// Atomic mass unit [kg].
inline constexpr double amu = 1.66053906660e-27;

} // namespace nanotrap::constants
