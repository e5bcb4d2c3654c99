#include "nanotrap/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <sstream>

#include "nanotrap/constants.hpp"
#include "nanotrap/csvio.hpp"
#include "nanotrap/rng.hpp"
#include "nanotrap/tunneling.hpp"
#include "nanotrap/units.hpp"
#include "nanotrap/util.hpp"
#include "nanotrap/wire_resistivity.hpp"

namespace nanotrap::scenario {

using constants::kB;
using constants::mu0;
using constants::pi;

const Material& Scenario::wire_material(const WireEntry& w) const {
    auto it = materials.find(w.material);
    if (it == materials.end())
        throw ConfigError("wire references unknown material '" + w.material + "'");
    return it->second;
}

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

struct Line {
    int no;
    std::string key, value;
};

bool parse_on_off(const Line& l) {
    if (l.value == "on" || l.value == "true") return true;
    if (l.value == "off" || l.value == "false") return false;
    throw ConfigError("line " + std::to_string(l.no) + ": expected on/off for '" + l.key + "'");
}

double qty(const Line& l, units::Kind kind) {
    try {
        return units::parse_as(l.value, kind);
    } catch (const units::ParseError& e) {
        throw ConfigError("line " + std::to_string(l.no) + ": " + e.what());
    }
}

double num(const Line& l) {
    try {
        return units::parse_number(l.value);
    } catch (const units::ParseError& e) {
        throw ConfigError("line " + std::to_string(l.no) + ": " + e.what());
    }
}

} // namespace

Scenario parse_scenario(const std::string& text) {
    Scenario sc;
    sc.source_text = text;
    sc.materials.clear();
    sc.wires.clear();

    std::istringstream in(text);
    std::string raw;
    int no = 0;
    std::string section = "";
    std::string section_arg = "";
    Material cur_material;
    WireEntry cur_wire;
    bool wafer_layers_cleared = false;

    auto flush_section = [&]() {
        if (section == "material") {
            sc.materials[section_arg] = cur_material;
        } else if (section == "wire") {
            sc.wires.push_back(cur_wire);
        }
    };

    while (std::getline(in, raw)) {
        ++no;
        std::string line = raw;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("line " + std::to_string(no) + ": malformed section header");
            flush_section();
            std::string inner = trim(line.substr(1, line.size() - 2));
            const auto sp = inner.find(' ');
            section = sp == std::string::npos ? inner : inner.substr(0, sp);
            section_arg = sp == std::string::npos ? "" : trim(inner.substr(sp + 1));
            if (section == "material") {
                if (section_arg.empty())
                    throw ConfigError("line " + std::to_string(no) + ": material needs a name");
                cur_material = Material{};
            } else if (section == "wire") {
                cur_wire = WireEntry{};
            } else if (section == "wafer") {
                // layers are re-specified
            } else if (section != "bias" && section != "roughness" && section != "grid") {
                throw ConfigError("line " + std::to_string(no) + ": unknown section '" + section +
                                  "'");
            }
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(no) + ": expected key = value");
        Line l{no, trim(line.substr(0, eq)), trim(line.substr(eq + 1))};
        if (l.key.empty() || l.value.empty())
            throw ConfigError("line " + std::to_string(no) + ": empty key or value");

        if (section.empty()) {
            if (l.key == "seed") sc.seed = static_cast<std::uint64_t>(num(l));
            else if (l.key == "species") {
                if (l.value != "rb87")
                    throw ConfigError("line " + std::to_string(no) + ": unknown species '" +
                                      l.value + "' (only the rb87 preset is built in)");
                sc.species = presets::rb87_22();
            } else if (l.key == "gravity") sc.gravity = parse_on_off(l);
            else if (l.key == "cp") {
                if (l.value == "none") sc.cp = CPMode::None;
                else if (l.value == "wafer") sc.cp = CPMode::Wafer;
                else if (l.value == "wire") sc.cp = CPMode::Wire;
                else if (l.value == "both") sc.cp = CPMode::Both;
                else
                    throw ConfigError("line " + std::to_string(no) +
                                      ": cp must be none/wafer/wire/both");
            } else if (l.key == "atoms") sc.atoms = num(l);
            else if (l.key == "out_dir") sc.out_dir = l.value;
            else
                throw ConfigError("line " + std::to_string(no) + ": unknown key '" + l.key + "'");
        } else if (section == "material") {
            if (l.key == "preset") {
                if (l.value != "gold")
                    throw ConfigError("line " + std::to_string(no) + ": unknown material preset '" +
                                      l.value + "'");
                cur_material = presets::gold();
            } else if (l.key == "rho0") cur_material.rho0 = num(l);
            else if (l.key == "alphaT") cur_material.alphaT = num(l);
            else if (l.key == "mfp") cur_material.mfp = qty(l, units::Kind::Length);
            else if (l.key == "specular") cur_material.specular_p = num(l);
            else if (l.key == "kappa") cur_material.kappa = num(l);
            else if (l.key == "T0") cur_material.T0 = qty(l, units::Kind::Temperature);
            else
                throw ConfigError("line " + std::to_string(no) + ": unknown material key '" +
                                  l.key + "'");
        } else if (section == "wafer") {
            if (l.key == "layer") {
                const auto colon = l.value.find(':');
                if (colon == std::string::npos)
                    throw ConfigError("line " + std::to_string(no) +
                                      ": layer wants 'thickness : epsilon'");
                Line th{no, "layer", trim(l.value.substr(0, colon))};
                Line ep{no, "layer", trim(l.value.substr(colon + 1))};
                if (!wafer_layers_cleared) {
                    sc.wafer.layers.clear();
                    wafer_layers_cleared = true;
                }
                sc.wafer.layers.push_back({qty(th, units::Kind::Length), num(ep)});
            } else if (l.key == "substrate") sc.wafer.substrate_epsilon = num(l);
            else
                throw ConfigError("line " + std::to_string(no) + ": unknown wafer key '" + l.key +
                                  "'");
        } else if (section == "wire") {
            if (l.key == "shape") {
                if (l.value != "z" && l.value != "straight")
                    throw ConfigError("line " + std::to_string(no) + ": shape must be z/straight");
                cur_wire.shape = l.value;
            } else if (l.key == "material") cur_wire.material = l.value;
            else if (l.key == "width") cur_wire.cs.w = qty(l, units::Kind::Length);
            else if (l.key == "height") cur_wire.cs.h = qty(l, units::Kind::Length);
            else if (l.key == "bar") cur_wire.bar = qty(l, units::Kind::Length);
            else if (l.key == "lead") cur_wire.lead = qty(l, units::Kind::Length);
            else if (l.key == "current") cur_wire.current = qty(l, units::Kind::Current);
            else
                throw ConfigError("line " + std::to_string(no) + ": unknown wire key '" + l.key +
                                  "'");
        } else if (section == "bias") {
            if (l.key == "bx") sc.bias.x = qty(l, units::Kind::Field);
            else if (l.key == "by") sc.bias.y = qty(l, units::Kind::Field);
            else if (l.key == "bz") sc.bias.z = qty(l, units::Kind::Field);
            else
                throw ConfigError("line " + std::to_string(no) + ": unknown bias key '" + l.key +
                                  "'");
        } else if (section == "roughness") {
            if (l.key == "enabled") sc.roughness_on = parse_on_off(l);
            else if (l.key == "rms") sc.rough_rms = qty(l, units::Kind::Length);
            else if (l.key == "lambda_min") sc.rough_lambda_min = qty(l, units::Kind::Length);
            else if (l.key == "alpha") sc.rough_alpha = num(l);
            else
                throw ConfigError("line " + std::to_string(no) + ": unknown roughness key '" +
                                  l.key + "'");
        } else if (section == "grid") {
            if (l.key == "x") sc.grid_x = qty(l, units::Kind::Length);
            else if (l.key == "y") sc.grid_y = qty(l, units::Kind::Length);
            else if (l.key == "z") sc.grid_z = qty(l, units::Kind::Length);
            else if (l.key == "nx") sc.grid_nx = static_cast<int>(num(l));
            else if (l.key == "ny") sc.grid_ny = static_cast<int>(num(l));
            else if (l.key == "nz") sc.grid_nz = static_cast<int>(num(l));
            else
                throw ConfigError("line " + std::to_string(no) + ": unknown grid key '" + l.key +
                                  "'");
        }
    }
    flush_section();

    if (sc.wires.empty()) throw ConfigError("scenario defines no wires");
    for (const auto& w : sc.wires) {
        sc.wire_material(w);  // validates the cross-reference
        w.cs.validate();
    }
    sc.species.validate();
    sc.wafer.validate();
    return sc;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open scenario file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str());
}

std::string builtin_z50_config() {
    return R"(# nanowire Z-trap example (bundled defaults)
seed = 1
species = rb87
gravity = on
cp = both
atoms = 1000

[material gold]
preset = gold

[wafer]
layer = 100 nm : 4
substrate = 12

[wire]
shape = z
material = gold
width = 50 nm
height = 50 nm
bar = 50 um
lead = 1 mm
current = 40 uA

[bias]
by = 132 mG
bx = 83 mG

[roughness]
enabled = on
rms = 2 nm
lambda_min = 100 nm
alpha = 0

[grid]
x = 60 um
y = 3 um
z = 3 um
nx = 512
ny = 32
nz = 32
)";
}

std::string scenario_hash(const Scenario& sc) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(rng::hash_string(sc.source_text)));
    return buf;
}

System build_system(const Scenario& sc, CPMode mode_override, bool use_scenario_mode) {
    if (sc.wires.empty()) throw ConfigError("scenario defines no wires");
    System s;
    const WireEntry& w = sc.wires.front();
    const Material& mat = sc.wire_material(w);

    fieldsolver::WireSpec spec;
    if (w.shape == "z")
        spec = fieldsolver::make_z_wire(w.bar, w.lead, w.cs, mat, w.current);
    else
        spec = fieldsolver::make_straight_wire(w.bar, w.cs, mat, w.current);
    spec.validate();
    s.field.wires = {spec};
    s.field.bias = sc.bias;
    s.wire_top = w.cs.h;
    s.wire_mid = 0.5 * w.cs.h;
    s.bar = w.bar;

    const CPMode mode = use_scenario_mode ? sc.cp : mode_override;
    s.wafer_cp = std::make_shared<casimir::PlanarCP>(sc.wafer, sc.species.alpha0, 0.0);
    s.wire_cp = std::make_shared<casimir::CylinderCP>(0.5 * w.cs.h, Vec3{0, 0, 0.5 * w.cs.h},
                                                      Vec3{1, 0, 0}, sc.species.alpha0);
    switch (mode) {
        case CPMode::None: s.cp = std::make_shared<casimir::ZeroCP>(); break;
        case CPMode::Wafer: s.cp = s.wafer_cp; break;
        case CPMode::Wire: s.cp = s.wire_cp; break;
        case CPMode::Both: s.cp = std::make_shared<casimir::PaaCP>(s.wafer_cp, s.wire_cp); break;
    }

    const fieldsolver::FieldConfiguration& cfg = s.field;
    s.sys.field = [cfg](const Vec3& r) { return cfg.field_at(r); };
    s.sys.species = sc.species;
    s.sys.cp = s.cp.get();
    s.sys.gravity = sc.gravity;
    s.sys.wire_axis_z = s.wire_mid;

    // Johnson-noise geometry: the nanowire bar with size-corrected resistivity
    s.noise.boxes.push_back(
        {{-0.5 * w.bar, -0.5 * w.cs.w, 0.0}, {0.5 * w.bar, 0.5 * w.cs.w, w.cs.h}});
    s.noise.rho = mat.rho0 * wiremodel::resistivity_ratio(w.cs, mat, 48);
    s.noise.T = mat.T0;
    return s;
}

trap::TrapCharacterization characterize(const System& s, const Scenario& sc) {
    const WireEntry& w = sc.wires.front();
    double d_guess = 1e-6;
    const double bperp = std::hypot(sc.bias.y, sc.bias.z);
    if (bperp > 0.0 && w.current != 0.0)
        d_guess = mu0 * std::abs(w.current) / (2.0 * pi * bperp);
    const Vec3 seed{0.0, 0.0, s.wire_mid + d_guess};

    trap::GridExtent ext;
    const double d = d_guess;
    const double dz = d / 20.0;
    ext.lo = {-0.5 * s.bar - 3e-6, -2.0 * d, std::max(0.3 * dz, 0.02 * d)};
    ext.hi = {0.5 * s.bar + 3e-6, 2.0 * d, 4.0 * d};
    const double dx = std::min(2.5e-7, std::max(dz, (ext.hi.x - ext.lo.x) / 480.0));
    ext.nx = static_cast<int>((ext.hi.x - ext.lo.x) / dx) + 1;
    ext.ny = static_cast<int>(4.0 * d / dz) + 1;
    ext.nz = static_cast<int>((ext.hi.z - ext.lo.z) / dz) + 1;

    try {
        return trap::characterize(s.sys, seed, ext, s.wire_top, 0.0);
    } catch (const std::runtime_error& e) {
        throw PhysicsError(std::string("trap characterization failed: ") + e.what());
    }
}

trap::CorrugationModes make_modes(const Scenario& sc, std::uint64_t seed_override) {
    trap::CorrugationModes modes;
    if (!sc.roughness_on) return modes;
    const WireEntry& w = sc.wires.front();
    auto spec = corrugation::RoughnessSpectrum::from_band_rms(
        sc.rough_rms, sc.rough_lambda_min, w.bar, sc.rough_alpha,
        rng::derive_seed(seed_override, "edge-phase-root"));
    return corrugation::field_modes(spec, w.current);
}

namespace {

// Mark every cell reachable from the surface-adjacent set through U <= cap.
void mask_escape_basin(trap::PotentialGrid& g, double cap, double surface_z) {
    std::vector<std::uint8_t> mark(g.size(), 0);
    std::deque<std::size_t> queue;
    for (int ix = 0; ix < g.nx; ++ix)
        for (int iy = 0; iy < g.ny; ++iy)
            for (int iz = 0; iz < g.nz; ++iz) {
                const std::size_t id = g.idx(ix, iy, iz);
                const double z = g.origin.z + iz * g.spacing.z;
                if (g.excluded[id] || z <= surface_z + g.spacing.z) {
                    mark[id] = 1;
                    queue.push_back(id);
                }
            }
    const int nz = g.nz, ny = g.ny, nx = g.nx;
    while (!queue.empty()) {
        const std::size_t id = queue.front();
        queue.pop_front();
        const int iz = static_cast<int>(id % nz);
        const int iy = static_cast<int>((id / nz) % ny);
        const int ix = static_cast<int>(id / (static_cast<std::size_t>(ny) * nz));
        const int d[6][3] = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
        for (auto& dd : d) {
            const int jx = ix + dd[0], jy = iy + dd[1], jz = iz + dd[2];
            if (jx < 0 || jx >= nx || jy < 0 || jy >= ny || jz < 0 || jz >= nz) continue;
            const std::size_t jd = g.idx(jx, jy, jz);
            if (mark[jd] || g.U[jd] > cap) continue;
            mark[jd] = 1;
            queue.push_back(jd);
        }
    }
    for (std::size_t i = 0; i < g.size(); ++i)
        if (mark[i] && !g.excluded[i]) {
            g.excluded[i] = 1;
            g.U[i] = -1e30;
        }
}

} // namespace

trap::PotentialGrid build_gp_grid(const System& s, const Scenario& sc,
                                  const trap::TrapCharacterization& ch,
                                  const trap::CorrugationModes* modes, int refine_transverse) {
    trap::TrapSystem sys = s.sys;
    sys.corrugation = (modes && !modes->empty()) ? modes : nullptr;

    trap::GridExtent ext;
    const double dz0 = sc.grid_z / sc.grid_nz;
    const double zlo = -2.0 * dz0;
    ext.lo = {ch.r_min.x - 0.5 * sc.grid_x, ch.r_min.y - 0.5 * sc.grid_y, zlo};
    ext.hi = {ch.r_min.x + 0.5 * sc.grid_x, ch.r_min.y + 0.5 * sc.grid_y, zlo + sc.grid_z};
    ext.nx = sc.grid_nx;
    ext.ny = sc.grid_ny * refine_transverse;
    ext.nz = sc.grid_nz * refine_transverse;

    const double cp_floor = ch.U_min - 10.0 * kB * 1e-6;
    trap::PotentialGrid g = trap::fill_grid(sys, ext, cp_floor);
    mask_escape_basin(g, ch.U_min + 0.90 * ch.depth, 0.0);
    return g;
}

gpsolver::GPGroundState solve_gp(const System& s, const Scenario& sc,
                                 const trap::TrapCharacterization& ch,
                                 const trap::CorrugationModes* modes, int refine_transverse,
                                 trap::PotentialGrid* grid_out,
                                 const std::vector<double>* warm) {
    trap::PotentialGrid grid = build_gp_grid(s, sc, ch, modes, refine_transverse);
    gpsolver::GPProblem prob;
    prob.N = sc.atoms;
    prob.species = sc.species;

    gpsolver::GPGroundState coarse_state;
    std::vector<double> warm_fine;
    if (!warm) {
        // coarse pre-solve at half resolution
        Scenario csc = sc;
        csc.grid_nx = std::max(96, sc.grid_nx / 2);
        csc.grid_ny = std::max(12, sc.grid_ny / 2);
        csc.grid_nz = std::max(12, sc.grid_nz / 2);
        trap::PotentialGrid cgrid = build_gp_grid(s, csc, ch, modes, 1);
        gpsolver::GPProblem cprob{std::move(cgrid), sc.atoms, sc.species};
        gpsolver::SolveOptions copt;
        copt.tol = 1e-3;
        coarse_state = gpsolver::solve_ground_state(cprob, copt);
        warm_fine = gpsolver::resample_psi(coarse_state, grid);
        warm = &warm_fine;
    }

    prob.potential = std::move(grid);
    gpsolver::SolveOptions opt;
    opt.initial = warm;
    auto st = gpsolver::solve_ground_state(prob, opt);
    if (grid_out) *grid_out = std::move(prob.potential);
    return st;
}

RunResult run_scenario(const Scenario& sc, bool write_files, int refine_transverse) {
    RunResult out;
    System s = build_system(sc);
    out.ch = characterize(s, sc);
    // distance from the filament, the paper's convention for the trap height
    out.d_um = (out.ch.r_min.z - s.wire_mid) * 1e6;
    out.depth_uK = out.ch.depth / kB * 1e6;

    trap::CorrugationModes modes = make_modes(sc, sc.seed);
    trap::PotentialGrid grid;
    try {
        out.state = solve_gp(s, sc, out.ch, &modes, refine_transverse, &grid);
    } catch (const std::runtime_error& e) {
        throw std::runtime_error(std::string("gp: ") + e.what());
    }
    gpsolver::GPProblem prob;
    prob.potential = std::move(grid);
    prob.N = sc.atoms;
    prob.species = sc.species;
    out.mu_nK = (out.state.mu - out.ch.U_min) / kB * 1e9;
    auto ld = gpsolver::line_density_stats(out.state);
    out.frag_std = ld.std_relative;

    // loss budget at the trap minimum
    const Vec3 baxis = s.field.field_at(out.ch.r_min);
    out.budget.gamma_th =
        lossmodel::thermal_spinflip_rate(out.ch.r_min, s.noise, sc.species, baxis).rate;
    out.budget.gamma_majorana =
        lossmodel::majorana_rate(2.0 * pi * out.ch.f_radial, out.ch.B_min, sc.species);
    auto bfn = tunneling::make_barrier_fn(s.sys, out.state.mu);
    auto tun = tunneling::surface_tunneling_rate(prob.potential, out.state, out.state.mu,
                                                 sc.species, &bfn);
    out.budget.gamma_tunnel = tun.gamma;
    out.budget.gamma_dec = lossmodel::decoherence_rate(
        out.ch.r_min - Vec3{5.0 * out.ch.r_min.z, 0, 0},
        out.ch.r_min + Vec3{5.0 * out.ch.r_min.z, 0, 0}, s.noise, sc.species, baxis);

    if (write_files) {
        const std::string hash = scenario_hash(sc);
        csv::Writer rep;
        rep.provenance(hash, sc.seed);
        rep.header({"d_um", "depth_uK", "f_radial_Hz", "mu_nK", "tau_thermal_s", "tau_majorana_s",
                    "tau_tunnel_s", "tau_total_s", "frag_std_pct"});
        rep.row({out.d_um, out.depth_uK, out.ch.f_radial, out.mu_nK, 1.0 / out.budget.gamma_th,
                 1.0 / out.budget.gamma_majorana, 1.0 / out.budget.gamma_tunnel,
                 out.budget.lifetime(), 100.0 * out.frag_std});
        rep.save(sc.out_dir + "/report.csv");

        csv::Writer n1w;
        n1w.provenance(hash, sc.seed);
        n1w.header({"x_m", "n1_per_m"});
        for (std::size_t i = 0; i < ld.x.size(); ++i) n1w.row({ld.x[i], ld.n1[i]});
        n1w.save(sc.out_dir + "/n1.csv");

        auto map = gpsolver::density_map(out.state, 1);
        csv::Writer mw;
        mw.provenance(hash, sc.seed);
        mw.header({"x_m", "z_m", "column_density_per_m2"});
        for (int ix = 0; ix < out.state.nx; ++ix)
            for (int iz = 0; iz < out.state.nz; ++iz)
                mw.row({out.state.origin.x + ix * out.state.spacing.x,
                        out.state.origin.z + iz * out.state.spacing.z,
                        map[static_cast<std::size_t>(ix) * out.state.nz + iz]});
        mw.save(sc.out_dir + "/density_map.csv");
    }
    return out;
}

} // namespace nanotrap::scenario
