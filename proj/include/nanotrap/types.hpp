#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "nanotrap/constants.hpp"

namespace nanotrap {

/// A trappable atom in a fixed Zeeman state.
///
/// The polarizability alpha0 is stored as a volume (m³, Gaussian-unit
/// convention) so the Casimir-Polder prefactor ħ·c·α0/2π applies directly.
struct AtomSpecies {
    double mass = 0.0;     // kg
    double F = 0.0;        // total spin quantum number
    double mF = 0.0;       // magnetic quantum number
    double gF = 0.0;       // Landé factor
    double alpha0 = 0.0;   // static polarizability as a volume, m³
    double a_scatt = 0.0;  // s-wave scattering length, m

    void validate() const {
        if (mass <= 0.0) throw std::invalid_argument("AtomSpecies: mass must be > 0");
        if (std::abs(mF) > F + 1e-12) throw std::invalid_argument("AtomSpecies: |mF| must be <= F");
        if (a_scatt < 0.0) throw std::invalid_argument("AtomSpecies: a_scatt must be >= 0");
    }

    /// Magnetic moment projection mF·gF·μB [J/T].
    double magnetic_moment() const { return mF * gF * constants::muB; }

    /// Atom-atom coupling constant g = 4πħ²a/m [J·m³].
    double coupling_g() const {
        return 4.0 * constants::pi * constants::hbar * constants::hbar * a_scatt / mass;
    }
};

/// Conductor material for wires: bulk resistivity, its temperature
/// coefficient, electron mean free path, wall specularity and the thermal
/// contact to the wafer.
struct Material {
    double rho0 = 0.0;        // bulk resistivity at T0, Ω·m
    double alphaT = 0.0;      // linear temperature coefficient, 1/K
    double mfp = 0.0;         // electron mean free path, m
    double specular_p = 0.0;  // specular reflection fraction in [0,1]
    double kappa = 0.0;       // wire-wafer thermal contact conductance, W·m⁻²·K⁻¹
    double T0 = 293.0;        // reference / wafer temperature, K

    void validate() const {
        if (rho0 <= 0.0) throw std::invalid_argument("Material: rho0 must be > 0");
        if (specular_p < 0.0 || specular_p > 1.0)
            throw std::invalid_argument("Material: specular_p must be in [0,1]");
        if (mfp <= 0.0) throw std::invalid_argument("Material: mfp must be > 0");
        if (kappa <= 0.0) throw std::invalid_argument("Material: kappa must be > 0");
    }

    bool operator==(const Material&) const = default;
};

/// Dielectric layer stack from the top surface down to the substrate.
struct WaferLayer {
    double thickness = 0.0;  // m
    double epsilon = 1.0;    // static dielectric constant
    bool operator==(const WaferLayer&) const = default;
};

struct WaferStack {
    std::vector<WaferLayer> layers;   // ordered top-down
    double substrate_epsilon = 1.0;

    void validate() const {
        for (const auto& l : layers) {
            if (l.thickness <= 0.0) throw std::invalid_argument("WaferStack: layer thickness must be > 0");
            if (l.epsilon < 1.0) throw std::invalid_argument("WaferStack: dielectric constant must be >= 1");
        }
        if (substrate_epsilon < 1.0)
            throw std::invalid_argument("WaferStack: substrate epsilon must be >= 1");
    }

    bool operator==(const WaferStack&) const = default;
};

/// Rectangular wire cross-section: width w along ŷ, thickness h along ẑ.
struct CrossSection {
    double w = 0.0;  // m
    double h = 0.0;  // m

    void validate() const {
        if (w <= 0.0 || h <= 0.0) throw std::invalid_argument("CrossSection: w and h must be > 0");
    }

    double area() const { return w * h; }
    bool operator==(const CrossSection&) const = default;
};

namespace presets {

/// ⁸⁷Rb in |F=2, mF=2⟩ with the ground-state static polarizability.
inline AtomSpecies rb87_22() {
    AtomSpecies s;
    s.mass = 86.909180527 * constants::amu;
    s.F = 2.0;
    s.mF = 2.0;
    s.gF = 0.5;
    s.alpha0 = 47.3e-30;  // 47.3e-24 cm³
    s.a_scatt = 5.4e-9;
    return s;
}

/// Evaporated gold at room temperature.
inline Material gold() {
    Material m;
    m.rho0 = 2.2e-8;
    m.alphaT = 0.0037;
    m.mfp = 40e-9;
    m.specular_p = 0.5;
    m.kappa = 4.0e6;
    m.T0 = 293.0;
    return m;
}

/// 100 nm SiO₂ (ε=4) on a silicon substrate (ε=12).
inline WaferStack si_sio2() {
    WaferStack w;
    w.layers.push_back({100e-9, 4.0});
    w.substrate_epsilon = 12.0;
    return w;
}

} // namespace presets

inline bool operator==(const AtomSpecies& a, const AtomSpecies& b) {
    return a.mass == b.mass && a.F == b.F && a.mF == b.mF && a.gF == b.gF &&
           a.alpha0 == b.alpha0 && a.a_scatt == b.a_scatt;
}

} // namespace nanotrap
