#pragma once

#include <array>
#include <vector>

#include "nanotrap/types.hpp"
#include "nanotrap/vec.hpp"

// Johnson-noise magnetic correlations near conductors (quasi-static) and
// the loss/decoherence rates they drive.
namespace nanotrap::lossmodel {

using Tensor3 = std::array<std::array<double, 3>, 3>;

/// Axis-aligned conductor box with uniform resistivity.
struct ConductorBox {
    Vec3 lo, hi;
    bool contains(const Vec3& r) const {
        return r.x >= lo.x && r.x <= hi.x && r.y >= lo.y && r.y <= hi.y && r.z >= lo.z &&
               r.z <= hi.z;
    }
};

struct NoiseGeometry {
    std::vector<ConductorBox> boxes;
    double rho = 0.0;  // Ω·m, uniform in scope
    double T = 293.0;  // K

    bool inside(const Vec3& r) const {
        for (const auto& b : boxes)
            if (b.contains(r)) return true;
        return false;
    }
};

struct QuadratureOptions {
    double rel_tol = 1e-4;
    int max_subdivision = 24;
};

/// Geometrical correlation tensor (units 1/m):
///   X_jk = (1/2) ∫_V d³x' (x1-x')_j (x2-x')_k / (|x1-x'|³ |x2-x'|³),
/// by adaptive cell subdivision. Throws std::domain_error inside the metal.
Tensor3 geometric_factor(const Vec3& x1, const Vec3& x2, const NoiseGeometry& geom,
                         const QuadratureOptions& opt = {});

/// Magnetic noise correlation tensor (T²·s):
///   S_B = kB T μ0²/(4π²ρ) [Tr{X} δ_jk − X_jk].
struct NoiseCorrelation {
    Tensor3 S;
    bool skin_depth_warning = false;  // distances not << skin depth
};
NoiseCorrelation noise_correlation(const Vec3& x1, const Vec3& x2, const NoiseGeometry& geom,
                                   double larmor = 2.0e6 * 6.283,
                                   const QuadratureOptions& opt = {});

/// Skin depth sqrt(2ρ/μ0 ω).
double skin_depth(double rho, double omega);

struct ThermalRateResult {
    double rate = 0.0;  // 1/s
    bool no_lower_state = false;
};

/// ΔmF = -1 thermal spin-flip rate from Johnson noise:
///   Γ = (μB² gF²/ħ²) Σ_{j,k⊥} ⟨i|F_j|f⟩⟨f|F_k|i⟩ S_B^{jk}(x,x),
/// with the ladder matrix elements of |F,mF⟩ → |F,mF−1⟩ and the
/// perpendicular components taken relative to B_axis.
ThermalRateResult thermal_spinflip_rate(const Vec3& x, const NoiseGeometry& geom,
                                        const AtomSpecies& species, const Vec3& B_axis,
                                        const QuadratureOptions& opt = {});

struct MajoranaFlags {
    bool larmor_ok = true;     // ω_L >> ω_r
    bool field_ok = true;      // B0 above ~50 mG
};

/// Γ_M = (π ω_r/2) exp(−(2|μ_A| B0 + ħω_r)/(2 ħω_r)).
double majorana_rate(double omega_r, double B0, const AtomSpecies& species,
                     MajoranaFlags* flags = nullptr);

/// B0 with majorana_rate(ω_r, B0) = 1/tau (closed-form inversion).
double ioffe_for_lifetime(double tau, double omega_r, const AtomSpecies& species);

/// Γ_dec = (mF² gF² μB²/2ħ²)[S∥(x1,x1) + S∥(x2,x2) − 2 S∥(x1,x2)] with the
/// component along the quantization axis.
double decoherence_rate(const Vec3& x1, const Vec3& x2, const NoiseGeometry& geom,
                        const AtomSpecies& species, const Vec3& quant_axis,
                        const QuadratureOptions& opt = {});

struct LossBudget {
    double gamma_th = 0.0;
    double gamma_majorana = 0.0;
    double gamma_tunnel = 0.0;
    double gamma_dec = 0.0;
    double lifetime() const { return 1.0 / (gamma_th + gamma_majorana + gamma_tunnel); }
};

} // namespace nanotrap::lossmodel
