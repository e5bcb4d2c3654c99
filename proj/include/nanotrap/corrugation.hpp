#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "nanotrap/trap.hpp"
#include "nanotrap/types.hpp"

// Wire-edge roughness spectra, the induced longitudinal field corrugation,
// and engineered-potential resolution limits.
namespace nanotrap::corrugation {

/// Power-law edge spectrum δy_c(k) = δy0 (k0/k)^α e^{iφ} on discrete modes
/// k_n = 2πn/L, n = 1..⌊L/λ_min⌋, with counter-based random phases.
struct RoughnessSpectrum {
    double dy0 = 0.0;         // m, amplitude at k0
    double k0 = 0.0;          // rad/m
    double alpha_exp = 0.0;   // in [0,1]
    double lambda_min = 0.0;  // m
    double L = 0.0;           // m (longest model wavelength)
    std::uint64_t seed = 0;

    void validate() const;
    int mode_count() const;
    double k_n(int n) const;      // n = 1..mode_count
    double amp_n(int n) const;    // δy0 (k0/k_n)^α
    double phase_n(int n) const;  // deterministic in (seed, n)

    /// rms over the band: sqrt(Σ_n amp_n²).
    double band_rms() const;

    /// Spectrum normalized so that band_rms() == rms, with k0 = 2π/λ_min.
    static RoughnessSpectrum from_band_rms(double rms, double lambda_min, double L,
                                           double alpha_exp, std::uint64_t seed);
};

struct EdgeRealization {
    std::vector<double> x;   // m
    std::vector<double> dy;  // m
    double rms() const;
};

/// Sampled centre-line deviation δy(x) = Σ_n √2 amp_n cos(k_n x + φ_n) on a
/// uniform grid over [0, L). Deterministic given the seed.
EdgeRealization edge_realization(const RoughnessSpectrum& spec, int samples = 0);

struct CorrugationResult {
    std::vector<double> k_values;             // rad/m
    std::vector<std::complex<double>> dBx_k;  // T, one-sided spectral amplitudes
    double dBx_rms = 0.0;                     // T, sqrt(Σ |dBx_k|²)
    double relative = 0.0;                    // dBx_rms / B0, B0 = Iμ0/2πz
    bool narrow_wire_warning = false;         // set when w > z/2
};

/// Per-mode field corrugation δB_x(k) = (Iμ0/2π) k² δy_c(k) K1(|k|z).
CorrugationResult dBx_spectrum(const RoughnessSpectrum& spec, double I, double z,
                               double wire_width = 0.0);

/// Closed-form rms ratio  A(α)·δy_rms/(2z)^{3/2-α}  with
/// A(α)² = (L/π)/Σ_n k_n^{-2α} · [1 + (π/4)(3-2α)] Γ(3-2α).
double dBx_rms_relative(const RoughnessSpectrum& spec, double z);

/// Exact mode-sum cross-validation:
/// ⟨δB_x²⟩ = (Iμ0 δy0 k0^α/2π)² Σ_{k≠0} k^{4-2α} K1(|k|z)², relative to B0.
double dBx_rms_relative_modesum(const RoughnessSpectrum& spec, double z);

/// Symmetric transverse current response of one edge mode (per unit J0):
///   δJ_y(k,y)/J0 = i k (δy⁺_k + δy⁻_k) e^{-|k|w/2} cosh(ky) / (1+e^{-|k|w}).
std::complex<double> symmetric_current_fluctuation(double k, std::complex<double> dy_plus_k,
                                                   std::complex<double> dy_minus_k, double w,
                                                   double y);

struct ResolutionResult {
    double d_max = 0.0;       // m
    bool unsatisfiable = false;
};

/// Largest height d where a wire meander of amplitude dy and period lambda
/// still yields a longitudinal barrier V0 = μ_A μ0 I k² dy K1(kd) above
/// (η²/16) ħ²k²/m. Bisection on the monotone K1.
ResolutionResult potential_resolution(double I, double lambda, double dy, double eta,
                                      const AtomSpecies& species);

/// Field modes for trap/GP potentials: δB_x(x,ρ) = Σ amp_n K1(k_n ρ) cos(k_n x + φ_n)
/// with amp_n = (Iμ0/2π) k_n² √2 δy0 (k0/k_n)^α.
trap::CorrugationModes field_modes(const RoughnessSpectrum& spec, double I);

} // namespace nanotrap::corrugation
