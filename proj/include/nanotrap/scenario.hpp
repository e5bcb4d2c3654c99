#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "nanotrap/casimir.hpp"
#include "nanotrap/corrugation.hpp"
#include "nanotrap/field.hpp"
#include "nanotrap/gp.hpp"
#include "nanotrap/noise.hpp"
#include "nanotrap/trap.hpp"
#include "nanotrap/types.hpp"

// Scenario configuration and the full trap -> GP -> loss pipeline.
namespace nanotrap::scenario {

/// Configuration errors carry the offending line/key for exit code 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Physics errors (no trap, saddle, open trap) map to exit code 3.
struct PhysicsError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class CPMode { None, Wafer, Wire, Both };

struct WireEntry {
    std::string material;
    CrossSection cs;
    double current = 0.0;
    std::string shape = "z";  // z | straight
    double bar = 50e-6;
    double lead = 1e-3;
};

struct Scenario {
    std::uint64_t seed = 1;
    AtomSpecies species = presets::rb87_22();
    std::map<std::string, Material> materials;
    WaferStack wafer = presets::si_sio2();
    std::vector<WireEntry> wires;
    Vec3 bias{};
    bool gravity = true;
    CPMode cp = CPMode::Both;
    double atoms = 1000.0;

    bool roughness_on = false;
    double rough_rms = 2e-9;
    double rough_lambda_min = 100e-9;
    double rough_alpha = 0.0;

    // GP grid: box side lengths centred on the trap and point counts
    double grid_x = 60e-6, grid_y = 3e-6, grid_z = 3e-6;
    int grid_nx = 512, grid_ny = 32, grid_nz = 32;

    std::string out_dir = "out";
    std::string source_text;  // canonical text for the provenance hash

    const Material& wire_material(const WireEntry& w) const;
};

Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::string& path);

/// The bundled nanowire Z-trap example configuration.
std::string builtin_z50_config();

/// FNV-1a hash of the canonical configuration text (hex).
std::string scenario_hash(const Scenario& sc);

/// Assembled field + CP system for a single-wire scenario.
struct System {
    fieldsolver::FieldConfiguration field;
    std::shared_ptr<casimir::PlanarCP> wafer_cp;
    std::shared_ptr<casimir::CylinderCP> wire_cp;
    std::shared_ptr<const casimir::CPProvider> cp;  // per scenario mode
    trap::TrapSystem sys;
    double wire_top = 0.0;   // z of the wire top surface
    double wire_mid = 0.0;   // z of the filament
    double bar = 0.0;
    lossmodel::NoiseGeometry noise;
};

System build_system(const Scenario& sc, CPMode mode_override = CPMode::Both,
                    bool use_scenario_mode = true);

/// Trap characterization with a depth grid sized from the scenario geometry.
trap::TrapCharacterization characterize(const System& s, const Scenario& sc);

/// GP potential grid centred on the trap minimum, corrugation included when
/// the scenario enables roughness (seed controls the realization), escape
/// basin masked.
trap::PotentialGrid build_gp_grid(const System& s, const Scenario& sc,
                                  const trap::TrapCharacterization& ch,
                                  const trap::CorrugationModes* modes, int refine_transverse = 1);

/// Corrugation field modes for the scenario realization.
trap::CorrugationModes make_modes(const Scenario& sc, std::uint64_t seed_override);

/// GP solve on the scenario grid with an automatic coarse-grid warm start
/// (or the supplied one). grid_out receives the potential grid used.
gpsolver::GPGroundState solve_gp(const System& s, const Scenario& sc,
                                 const trap::TrapCharacterization& ch,
                                 const trap::CorrugationModes* modes, int refine_transverse,
                                 trap::PotentialGrid* grid_out,
                                 const std::vector<double>* warm = nullptr);

struct RunResult {
    trap::TrapCharacterization ch;
    gpsolver::GPGroundState state;
    lossmodel::LossBudget budget;
    double frag_std = 0.0;           // relative
    double mu_nK = 0.0;              // above the trap bottom
    double depth_uK = 0.0;
    double d_um = 0.0;
};

/// Full pipeline: characterize -> GP -> loss budget. Writes report.csv,
/// n1.csv and density_map.csv under sc.out_dir unless write_files is false.
RunResult run_scenario(const Scenario& sc, bool write_files = true,
                       int refine_transverse = 2);

} // namespace nanotrap::scenario
