#pragma once

#include <vector>

#include "nanotrap/types.hpp"

// Size-dependent resistivity of rectangular nanowires in the
// Fuchs-Sondheimer surface-scattering model, and ohmic-heating current
// limits.
namespace nanotrap::wiremodel {

/// Suppression s(y;z) of the current density by diffusive scattering at the
/// y=0 wall of a wire with the other wall at y=w and faces at z=0, z=h:
///   s = (3/4π) ∫dφ ∫dθ sinθ cos²θ exp(-y/(l sinθ cosφ)),
/// φ ∈ [-arctan(z/y), arctan((h-z)/y)], θ ∈ [0,π]. Result in [0, 1/2];
/// the y→0 limit is handled analytically.
double scattering_suppression(double y, double z, double h, double mfp);

struct CurrentProfile {
    int n = 0;                  // grid is n×n cell centers
    double w = 0.0, h = 0.0;    // m
    std::vector<double> j;      // J(y,z)/J0, row-major over (iy, iz)

    double at(int iy, int iz) const { return j[static_cast<std::size_t>(iy) * n + iz]; }
    double mean() const;
};

/// J(y,z)/J0 = 1 - s(y;z) - s(w-y;z) - s(z;y) - s(h-z;y), clamped at 0.
/// Sampled at n×n cell centers.
CurrentProfile current_density_profile(const CrossSection& cs, double mfp, int n = 64);

/// Fully diffusive (p=0) conductivity ratio (ρ0/ρ) = mean of the profile.
double diffuse_conductivity_ratio(const CrossSection& cs, double mfp, int n = 64);

/// ρ/ρ0 >= 1 from the partially specular series
///   (ρ0/ρ)_{p,l} = (1-p)² Σ_k k p^{k-1} (ρ0/ρ)_{p=0, l/k},
/// truncated when the tail bound drops below 1e-4 relative.
double resistivity_ratio(const CrossSection& cs, const Material& mat, int n = 64);

struct MaxCurrentResult {
    double I_max = 0.0;   // A
    double J_max = 0.0;   // A/m²
    double ratio = 0.0;   // ρ/ρ0 used
};

/// Safe-current limit from the heat balance
///   J_max = sqrt(κ ΔT / (h ρ(T0) [1 + α ΔT])),  ρ(T0) = ρ0 · (ρ/ρ0)(w,h).
MaxCurrentResult max_current(const CrossSection& cs, const Material& mat, double dT_max);

/// ΔT that raises the resistivity by 50%: 1/(2α).
inline double default_dT_max(const Material& mat) { return 1.0 / (2.0 * mat.alphaT); }

} // namespace nanotrap::wiremodel
