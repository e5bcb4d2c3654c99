// nanotrap: magnetic nanowire microtrap design tool.
//
// Subcommands cover wire physics (resistivity, maxcurrent), trap
// characterization, corrugation spectra, Casimir-Polder potentials, loss
// budgets, GP ground states, scenario pipelines and the figure datasets.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <iostream>

#include "nanotrap/casimir.hpp"
#include "nanotrap/constants.hpp"
#include "nanotrap/corrugation.hpp"
#include "nanotrap/csvio.hpp"
#include "nanotrap/gp.hpp"
#include "nanotrap/noise.hpp"
#include "nanotrap/rng.hpp"
#include "nanotrap/scenario.hpp"
#include "nanotrap/trap.hpp"
#include "nanotrap/tunneling.hpp"
#include "nanotrap/units.hpp"
#include "nanotrap/util.hpp"
#include "nanotrap/wire_resistivity.hpp"
#include "nanotrap/wkb.hpp"

using namespace nanotrap;
using constants::kB;
using constants::mu0;
using constants::pi;

namespace {

struct GlobalOpts {
    std::uint64_t seed = 1;
    int threads = 4;
    std::string out_dir = "out";
    std::string units_mode = "strict";
};

GlobalOpts g_opts;

std::string outpath(const std::string& name) { return g_opts.out_dir + "/" + name; }

csv::Writer make_writer(const std::string& tag) {
    csv::Writer w;
    w.provenance(tag, g_opts.seed);
    return w;
}

double parse_len(const std::string& s) { return units::parse_as(s, units::Kind::Length); }

scenario::Scenario load_or_builtin(const std::string& path) {
    scenario::Scenario sc;
    if (path == "builtin:z50")
        sc = scenario::parse_scenario(scenario::builtin_z50_config());
    else
        sc = scenario::load_scenario(path);
    sc.out_dir = g_opts.out_dir;
    sc.seed = g_opts.seed;
    return sc;
}

// ---------------------------------------------------------------- figures

void figure1() {
    const AtomSpecies rb = presets::rb87_22();
    const double E = kB * 1e-6;
    std::vector<double> sweep;
    for (double f = -0.30; f <= 0.1001; f += 0.005) sweep.push_back(f);
    auto w = make_writer("figure1");
    w.header({"d_um", "dI_over_I", "P"});
    for (double d_um : {0.5, 1.0, 2.0, 5.0, 10.0}) {
        auto curve = wkb::tunneling_control_curve(d_um * 1e-6, E, 1e-3, rb, sweep);
        for (auto& [f, P] : curve.points) w.row({d_um, f, P});
    }
    w.save(outpath("fig1_tunneling.csv"));

    auto wi = make_writer("figure1-inset");
    wi.header({"d_um", "barrier_height_uK"});
    for (double d_um = 0.3; d_um <= 10.01; d_um *= 1.25) {
        const double h = wkb::barrier_height_for(d_um * 1e-6, E, 1e-3, rb);
        wi.row({d_um, h / kB * 1e6});
    }
    wi.save(outpath("fig1_inset.csv"));
}

void figure2() {
    Material gold = presets::gold();
    auto w = make_writer("figure2-resistivity");
    w.header({"side_nm", "rho_over_rho0"});
    for (double side = 20e-9; side <= 10.01e-6; side *= 1.3) {
        w.row({side * 1e9, wiremodel::resistivity_ratio({side, side}, gold, 48)});
    }
    w.save(outpath("fig2_resistivity.csv"));

    auto wc = make_writer("figure2-maxcurrent");
    wc.header({"side_nm", "I_max_A", "J_max_A_per_m2"});
    const double dT = wiremodel::default_dT_max(gold);
    for (double side = 20e-9; side <= 500.01e-9; side *= 1.2) {
        auto mc = wiremodel::max_current({side, side}, gold, dT);
        wc.row({side * 1e9, mc.I_max, mc.J_max});
    }
    wc.save(outpath("fig2_maxcurrent.csv"));
}

void figure3() {
    auto white = corrugation::RoughnessSpectrum::from_band_rms(2e-9, 100e-9, 800e-9, 0.0, g_opts.seed);
    auto pink = corrugation::RoughnessSpectrum::from_band_rms(2e-9, 100e-9, 800e-9, 1.0, g_opts.seed);
    auto w = make_writer("figure3");
    w.header({"d_um", "dBx_over_B0_white", "dBx_over_B0_pink"});
    for (double d = 0.2e-6; d <= 3.001e-6; d += 0.05e-6) {
        w.row({d * 1e6, corrugation::dBx_rms_relative(white, d),
               corrugation::dBx_rms_relative(pink, d)});
    }
    w.save(outpath("fig3_corrugation.csv"));
}

void figure4() {
    const AtomSpecies rb = presets::rb87_22();
    auto w = make_writer("figure4");
    w.header({"lambda_um", "d_um_0p05mA", "d_um_0p5mA", "d_um_5mA", "d_um_50mA"});
    for (double lam = 0.2e-6; lam <= 5.001e-6; lam *= 1.12) {
        std::vector<double> row{lam * 1e6};
        for (double I : {0.05e-3, 0.5e-3, 5e-3, 50e-3}) {
            auto r = corrugation::potential_resolution(I, lam, 50e-9, 2.0, rb);
            row.push_back(r.unsatisfiable ? 0.0 : r.d_max * 1e6);
        }
        w.row(row);
    }
    w.save(outpath("fig4_resolution.csv"));
}

void figure5() {
    const double b = 100e-9;
    const double fSi = casimir::planar_F_single(12.0);
    auto w = make_writer("figure5-planar");
    w.header({"z_um", "F_exact", "F_sio2_alone", "F_si_rescaled", "F_paa_sum"});
    for (double z = 0.1e-6; z <= 2.001e-6; z += 0.05e-6) {
        const double fex = casimir::planar_F(4.0, 12.0, b / z);
        const double flay = casimir::planar_F(4.0, 1.0, b / z);
        const double fsi = fSi * std::pow(z / (z + b), 4);
        w.row({z * 1e6, fex, flay, fsi, flay + fsi});
    }
    w.save(outpath("fig5_planar.csv"));

    // wires of diameter 2a = 50..200 nm on the wafer; F-hat rescaled to the
    // common origin at the SiO2 top (wire centre at z = a)
    auto ww = make_writer("figure5-wires");
    ww.header({"z_um", "Fhat_planar", "Fhat_2a_50nm", "Fhat_2a_100nm", "Fhat_2a_200nm"});
    for (double z = 0.15e-6; z <= 2.001e-6; z += 0.05e-6) {
        std::vector<double> row{z * 1e6, casimir::planar_F(4.0, 12.0, b / z)};
        for (double dia : {50e-9, 100e-9, 200e-9}) {
            const double a = 0.5 * dia;
            if (z <= dia) {
                row.push_back(0.0);
                continue;
            }
            const double R = z - a;
            const double gap = z - dia;
            const double F = casimir::cylinder_F(a / R);
            row.push_back(F * std::pow(z / gap, 4));
        }
        ww.row(row);
    }
    ww.save(outpath("fig5_wires.csv"));
}

scenario::Scenario z50_variant(double current, double bias_scale, scenario::CPMode cp,
                               bool rough) {
    auto sc = scenario::parse_scenario(scenario::builtin_z50_config());
    sc.wires[0].current = current;
    sc.bias.y *= bias_scale;
    sc.cp = cp;
    sc.roughness_on = rough;
    sc.seed = g_opts.seed;
    sc.out_dir = g_opts.out_dir;
    return sc;
}

double tunneling_lifetime_at(scenario::Scenario sc, double d_target, scenario::CPMode mode,
                             int nx, int ntr, const std::vector<double>* warm,
                             std::vector<double>* state_out) {
    // bias tuned so the infinite-wire distance mu0 I / 2 pi By = d_target
    const double I = sc.wires[0].current;
    sc.bias.y = mu0 * I / (2.0 * pi * d_target);
    sc.cp = mode;
    sc.roughness_on = false;
    sc.grid_nx = nx;
    sc.grid_ny = ntr;
    sc.grid_nz = ntr;
    sc.grid_y = 2.4e-6;
    sc.grid_z = 2.4e-6;
    auto s = scenario::build_system(sc);
    auto ch = scenario::characterize(s, sc);
    trap::PotentialGrid grid;
    auto state = scenario::solve_gp(s, sc, ch, nullptr, 2, &grid, warm);
    if (state_out) *state_out = state.psi;
    auto bfn = tunneling::make_barrier_fn(s.sys, state.mu);
    auto tun = tunneling::surface_tunneling_rate(grid, state, state.mu, sc.species, &bfn);
    return 1.0 / tun.gamma;
}

void figure6() {
    const AtomSpecies rb = presets::rb87_22();
    Material gold = presets::gold();
    auto w = make_writer("figure6-thermal");
    w.header({"d_um", "tau_s_25nm", "tau_s_50nm", "tau_s_100nm", "tau_s_200nm"});
    for (double d = 0.15e-6; d <= 3.001e-6; d *= 1.12) {
        std::vector<double> row{d * 1e6};
        for (double side : {25e-9, 50e-9, 100e-9, 200e-9}) {
            lossmodel::NoiseGeometry geom;
            geom.boxes.push_back({{-25e-6, -side / 2, 0.0}, {25e-6, side / 2, side}});
            geom.rho = gold.rho0 * wiremodel::resistivity_ratio({side, side}, gold, 32);
            geom.T = gold.T0;
            auto r = lossmodel::thermal_spinflip_rate({0, 0, side + d}, geom, rb, {1, 0, 0});
            row.push_back(1.0 / r.rate);
        }
        w.row(row);
    }
    w.save(outpath("fig6_thermal.csv"));

    auto wt = make_writer("figure6-tunneling");
    wt.header({"d_um", "tau_s_surface_only", "tau_s_wire_only", "tau_s_combined"});
    auto base = z50_variant(40e-6, 1.0, scenario::CPMode::Both, false);
    for (double d : {0.45e-6, 0.5e-6, 0.55e-6, 0.6e-6, 0.7e-6}) {
        std::vector<double> row{d * 1e6};
        for (auto mode : {scenario::CPMode::Wafer, scenario::CPMode::Wire, scenario::CPMode::Both})
            row.push_back(tunneling_lifetime_at(base, d, mode, 192, 16, nullptr, nullptr));
        wt.row(row);
    }
    wt.save(outpath("fig6_tunneling.csv"));
}

void figure7() {
    auto sc = z50_variant(40e-6, 1.0, scenario::CPMode::Both, true);
    auto s = scenario::build_system(sc);
    auto ch = scenario::characterize(s, sc);

    // minimum-energy path along the wire
    auto wp = make_writer("figure7-minpath");
    wp.header({"x_um", "Umin_uK_above_bottom"});
    for (double x = -30e-6; x <= 30.001e-6; x += 0.25e-6) {
        auto m = trap::find_minimum(s.sys, {x, ch.r_min.y, ch.r_min.z},
                                    0.2 * ch.r_min.z);
        // keep the slice at this x: reset x after the search
        Vec3 p = m.r;
        p.x = x;
        double u;
        try {
            u = s.sys.potential(p);
        } catch (const std::domain_error&) {
            u = ch.U_min;
        }
        wp.row({x * 1e6, (u - ch.U_min) / kB * 1e6});
    }
    wp.save(outpath("fig7_minpath.csv"));

    // weighted tunneling maps for surface-only and wire-only CP
    for (auto [mode, name] : {std::pair{scenario::CPMode::Wafer, "surface"},
                              std::pair{scenario::CPMode::Wire, "wire"}}) {
        auto scm = sc;
        scm.cp = mode;
        scm.roughness_on = false;
        auto sm = scenario::build_system(scm);
        auto chm = scenario::characterize(sm, scm);
        trap::PotentialGrid grid;
        auto state = scenario::solve_gp(sm, scm, chm, nullptr, 2, &grid);
        auto bfn = tunneling::make_barrier_fn(sm.sys, state.mu);
        auto tun = tunneling::surface_tunneling_rate(grid, state, state.mu, scm.species, &bfn);
        auto wm = make_writer(std::string("figure7-map-") + name);
        wm.header({"x_um", "y_um", "weighted_rate_per_s"});
        for (int ix = 0; ix < tun.nx; ++ix)
            for (int iy = 0; iy < tun.ny; ++iy)
                wm.row({(grid.origin.x + ix * grid.spacing.x) * 1e6,
                        (grid.origin.y + iy * grid.spacing.y) * 1e6,
                        tun.weighted_map[static_cast<std::size_t>(ix) * tun.ny + iy]});
        wm.save(outpath(std::string("fig7_map_") + name + ".csv"));
    }

    // in-situ density of the corrugated trap
    auto run = scenario::run_scenario(sc, false, 2);
    auto ld = gpsolver::line_density_stats(run.state);
    auto wn = make_writer("figure7-density");
    wn.header({"x_um", "n1_per_m"});
    for (std::size_t i = 0; i < ld.x.size(); ++i) wn.row({ld.x[i] * 1e6, ld.n1[i]});
    wn.save(outpath("fig7_n1.csv"));
}

void figure8() {
    const AtomSpecies rb = presets::rb87_22();
    lossmodel::NoiseGeometry geom;
    const double side = 50e-9;
    geom.boxes.push_back({{-1e-3, -side / 2, 0.0}, {1e-3, side / 2, side}});
    geom.rho = 2.2e-8;
    geom.T = 293.0;
    const double d = 0.5e-6;
    const double zq = side + d;
    const double far = lossmodel::decoherence_rate({-50 * d, 0, zq}, {50 * d, 0, zq}, geom, rb,
                                                   {1, 0, 0});
    auto w = make_writer("figure8-decoherence");
    w.header({"separation_over_d", "rate_over_asymptote"});
    for (double sep = 0.25; sep <= 10.001; sep += 0.25) {
        const double g = lossmodel::decoherence_rate({-0.5 * sep * d, 0, zq},
                                                     {0.5 * sep * d, 0, zq}, geom, rb, {1, 0, 0});
        w.row({sep, g / far});
    }
    w.save(outpath("fig8_decoherence.csv"));

    auto wf = make_writer("figure8-cylinderF");
    wf.header({"a_over_R", "F"});
    for (double t = 0.01; t <= 0.9801; t += 0.01) wf.row({t, casimir::cylinder_F(t)});
    wf.raw_row(csv::format_value(0.995) + "," + csv::format_value(casimir::cylinder_F(0.995)));
    wf.save(outpath("fig8_cylinderF.csv"));
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"nanowire magnetic microtrap design tool"};
    app.require_subcommand(1);

    app.add_option("--seed", g_opts.seed, "global random seed");
    app.add_option("--threads", g_opts.threads, "worker threads");
    app.add_option("--out-dir", g_opts.out_dir, "output directory");
    app.add_option("--units", g_opts.units_mode, "suffix checking: strict|loose");

    // resistivity
    std::string width_s = "50 nm", height_s = "50 nm", profile_path;
    auto* cmd_res = app.add_subcommand("resistivity", "Fuchs-Sondheimer resistivity ratio");
    cmd_res->add_option("--width", width_s, "wire width");
    cmd_res->add_option("--height", height_s, "wire thickness");
    cmd_res->add_option("--profile", profile_path, "write J(y,z)/J0 CSV here");

    // maxcurrent
    std::string dtmax_s = "";
    auto* cmd_max = app.add_subcommand("maxcurrent", "safe current from ohmic heating");
    cmd_max->add_option("--width", width_s, "wire width");
    cmd_max->add_option("--height", height_s, "wire thickness");
    cmd_max->add_option("--dtmax", dtmax_s, "allowed temperature rise (default 1/2alpha)");

    // trap
    std::string config_path = "builtin:z50", grid_dump;
    auto* cmd_trap = app.add_subcommand("trap", "characterize the scenario trap");
    cmd_trap->add_option("--config", config_path, "scenario file or builtin:z50");
    cmd_trap->add_option("--grid-dump", grid_dump, "write the potential grid CSV here");

    // corrugation
    std::string rms_s = "2 nm", lmin_s = "100 nm", lmax_s = "800 nm";
    double alpha = 0.0;
    auto* cmd_cor = app.add_subcommand("corrugation", "edge-roughness field corrugation vs height");
    cmd_cor->add_option("--rms", rms_s, "edge rms over the band");
    cmd_cor->add_option("--lambda-min", lmin_s, "shortest wavelength");
    cmd_cor->add_option("--band-max", lmax_s, "longest wavelength (model length)");
    cmd_cor->add_option("--alpha", alpha, "spectral exponent in [0,1]");

    // edge
    auto* cmd_edge = app.add_subcommand("edge", "dump a roughness realization");
    cmd_edge->add_option("--rms", rms_s, "edge rms over the band");
    cmd_edge->add_option("--lambda-min", lmin_s, "shortest wavelength");
    cmd_edge->add_option("--band-max", lmax_s, "longest wavelength (model length)");
    cmd_edge->add_option("--alpha", alpha, "spectral exponent");

    // casimir
    std::string cas_kind = "planar";
    auto* cmd_cas = app.add_subcommand("casimir", "Casimir-Polder potential tables");
    cmd_cas->add_option("kind", cas_kind, "planar|cylinder|combined");

    // lifetime
    auto* cmd_life = app.add_subcommand("lifetime", "loss rates vs height for the scenario wire");
    cmd_life->add_option("--config", config_path, "scenario file or builtin:z50");

    // decoherence
    auto* cmd_dec = app.add_subcommand("decoherence", "spatial decoherence vs separation");

    // gp
    auto* cmd_gp = app.add_subcommand("gp", "GP ground state for the scenario");
    cmd_gp->add_option("--config", config_path, "scenario file or builtin:z50");

    // figure
    int fig_n = 0;
    auto* cmd_fig = app.add_subcommand("figure", "emit a figure dataset (1..8)");
    cmd_fig->add_option("n", fig_n, "figure number")->required();

    // run
    auto* cmd_run = app.add_subcommand("run", "full scenario pipeline -> report.csv");
    cmd_run->add_option("config", config_path, "scenario file or builtin:z50");

    // example-config
    auto* cmd_ex = app.add_subcommand("example-config", "print the bundled scenario");

    CLI11_PARSE(app, argc, argv);
    util::set_thread_count(g_opts.threads);
    units::set_strict_suffixes(g_opts.units_mode != "loose");

    try {
        if (cmd_res->parsed()) {
            CrossSection cs{parse_len(width_s), parse_len(height_s)};
            Material gold = presets::gold();
            const double ratio = wiremodel::resistivity_ratio(cs, gold);
            std::printf("rho/rho0 = %.6f\n", ratio);
            if (!profile_path.empty()) {
                auto prof = wiremodel::current_density_profile(cs, gold.mfp);
                auto w = make_writer("resistivity-profile");
                w.header({"y_m", "z_m", "J_over_J0"});
                for (int iy = 0; iy < prof.n; ++iy)
                    for (int iz = 0; iz < prof.n; ++iz)
                        w.row({(iy + 0.5) * cs.w / prof.n, (iz + 0.5) * cs.h / prof.n,
                               prof.at(iy, iz)});
                w.save(profile_path);
            }
        } else if (cmd_max->parsed()) {
            CrossSection cs{parse_len(width_s), parse_len(height_s)};
            Material gold = presets::gold();
            const double dT = dtmax_s.empty() ? wiremodel::default_dT_max(gold)
                                              : units::parse_as(dtmax_s, units::Kind::Temperature);
            auto mc = wiremodel::max_current(cs, gold, dT);
            std::printf("I_max = %.6e A\nJ_max = %.6e A/m^2\n", mc.I_max, mc.J_max);
        } else if (cmd_trap->parsed()) {
            auto sc = load_or_builtin(config_path);
            auto s = scenario::build_system(sc);
            auto ch = scenario::characterize(s, sc);
            // frequencies labelled by the dominant axis of each principal direction
            double f_axis[3] = {0, 0, 0};
            bool used[3] = {false, false, false};
            for (int i = 0; i < 3; ++i) {
                int best = 0;
                double bv = -1.0;
                for (int a = 0; a < 3; ++a) {
                    const double c = std::abs(ch.axes[i][a]);
                    if (!used[a] && c > bv) {
                        bv = c;
                        best = a;
                    }
                }
                used[best] = true;
                f_axis[best] = ch.omega[i] / (2.0 * pi);
            }
            auto w = make_writer(scenario::scenario_hash(sc));
            w.header({"d_m", "depth_K", "fx_Hz", "fy_Hz", "fz_Hz", "Bmin_G"});
            w.row({ch.r_min.z - s.wire_mid, ch.depth / kB, f_axis[0], f_axis[1], f_axis[2],
                   ch.B_min * 1e4});
            w.save(outpath("trap.csv"));
            std::printf("d = %.4f um, depth = %.4f uK, f_radial = %.3f kHz, Bmin = %.2f mG\n",
                        (ch.r_min.z - s.wire_mid) * 1e6, ch.depth / kB * 1e6, ch.f_radial / 1e3,
                        ch.B_min * 1e7);
            if (!grid_dump.empty()) {
                trap::GridExtent ext;
                const double d = ch.r_min.z;
                ext.lo = {-0.6 * s.bar, -2 * d, 0.05 * d};
                ext.hi = {0.6 * s.bar, 2 * d, 4 * d};
                ext.nx = 240;
                ext.ny = 48;
                ext.nz = 96;
                auto g = trap::fill_grid(s.sys, ext, ch.U_min - 4e-28);
                auto wg = make_writer("potential-grid");
                wg.header({"x_m", "y_m", "z_m", "U_J"});
                for (int ix = 0; ix < g.nx; ++ix)
                    for (int iy = 0; iy < g.ny; ++iy)
                        for (int iz = 0; iz < g.nz; ++iz) {
                            const Vec3 r = g.point(ix, iy, iz);
                            wg.row({r.x, r.y, r.z, g.U[g.idx(ix, iy, iz)]});
                        }
                wg.save(grid_dump);
            }
        } else if (cmd_cor->parsed()) {
            auto spec = corrugation::RoughnessSpectrum::from_band_rms(
                parse_len(rms_s), parse_len(lmin_s), parse_len(lmax_s), alpha, g_opts.seed);
            auto w = make_writer("corrugation");
            w.header({"d_um", "dBx_over_B0"});
            for (double d = 0.2e-6; d <= 3.001e-6; d += 0.05e-6)
                w.row({d * 1e6, corrugation::dBx_rms_relative(spec, d)});
            w.save(outpath("corrugation.csv"));
        } else if (cmd_edge->parsed()) {
            auto spec = corrugation::RoughnessSpectrum::from_band_rms(
                parse_len(rms_s), parse_len(lmin_s), parse_len(lmax_s), alpha,
                rng::derive_seed(g_opts.seed, "edge-phase-root"));
            auto r = corrugation::edge_realization(spec);
            auto w = make_writer("edge");
            w.header({"x_m", "dy_m"});
            for (std::size_t i = 0; i < r.x.size(); ++i) w.row({r.x[i], r.dy[i]});
            w.save(outpath("edge.csv"));
        } else if (cmd_cas->parsed()) {
            const double alpha0 = presets::rb87_22().alpha0;
            auto w = make_writer("casimir-" + cas_kind);
            if (cas_kind == "planar") {
                WaferStack stack = presets::si_sio2();
                w.header({"z_m", "U_J", "F"});
                for (double z = 0.05e-6; z <= 2.001e-6; z += 0.025e-6) {
                    const double U = casimir::planar_U(z, stack, alpha0);
                    w.row({z, U, casimir::planar_F(4.0, 12.0, 100e-9 / z)});
                }
            } else if (cas_kind == "cylinder") {
                const double a = 25e-9;
                w.header({"R_m", "U_J", "F"});
                for (double R = 30e-9; R <= 2.001e-6; R *= 1.08)
                    w.row({R, casimir::cylinder_U(R, a, alpha0), casimir::cylinder_F(a / R)});
            } else if (cas_kind == "combined") {
                casimir::PlanarCP wafer(presets::si_sio2(), alpha0);
                casimir::CylinderCP wire(25e-9, {0, 0, 25e-9}, {1, 0, 0}, alpha0);
                w.header({"z_m", "U_J", "F"});
                for (double z = 0.08e-6; z <= 2.001e-6; z += 0.025e-6) {
                    const double U = wafer.potential({0, 0, z}) + wire.potential({0, 0, z});
                    w.row({z, U, -U * 2.0 * pi * std::pow(z, 4) /
                                     (constants::hbar * constants::c * alpha0)});
                }
            } else {
                throw scenario::ConfigError("casimir kind must be planar|cylinder|combined");
            }
            w.save(outpath("casimir_" + cas_kind + ".csv"));
        } else if (cmd_life->parsed()) {
            auto sc = load_or_builtin(config_path);
            auto s = scenario::build_system(sc);
            const AtomSpecies& rb = sc.species;
            auto w = make_writer("lifetime");
            w.header({"d_um", "gamma_th_per_s", "tau_th_s", "gamma_M_per_s", "tau_M_s",
                      "tau_combined_s"});
            for (double d = 0.2e-6; d <= 2.001e-6; d *= 1.1) {
                const Vec3 x{0, 0, s.wire_top + d};
                const double gth = lossmodel::thermal_spinflip_rate(x, s.noise, rb, {1, 0, 0}).rate;
                // Majorana at the bias-limited radial frequency for this height
                const double Bp = std::hypot(sc.bias.y, sc.bias.z) / d;
                const double B0 = std::abs(sc.bias.x) > 0 ? std::abs(sc.bias.x) : 8.3e-6;
                const double wr = std::sqrt(rb.magnetic_moment() * Bp * Bp / (rb.mass * B0));
                const double gM = lossmodel::majorana_rate(wr, B0, rb);
                w.row({d * 1e6, gth, 1.0 / gth, gM, 1.0 / gM, 1.0 / (gth + gM)});
            }
            w.save(outpath("lifetime.csv"));
        } else if (cmd_dec->parsed()) {
            const AtomSpecies rb = presets::rb87_22();
            lossmodel::NoiseGeometry geom;
            geom.boxes.push_back({{-1e-3, -25e-9, 0.0}, {1e-3, 25e-9, 50e-9}});
            geom.rho = 2.2e-8;
            const double d = 0.5e-6, zq = 50e-9 + d;
            const double far =
                lossmodel::decoherence_rate({-50 * d, 0, zq}, {50 * d, 0, zq}, geom, rb, {1, 0, 0});
            auto w = make_writer("decoherence");
            w.header({"separation_over_d", "rate_over_asymptote"});
            for (double sep = 0.25; sep <= 10.001; sep += 0.25)
                w.row({sep, lossmodel::decoherence_rate({-0.5 * sep * d, 0, zq},
                                                        {0.5 * sep * d, 0, zq}, geom, rb,
                                                        {1, 0, 0}) /
                                far});
            w.save(outpath("decoherence.csv"));
        } else if (cmd_gp->parsed()) {
            auto sc = load_or_builtin(config_path);
            auto r = scenario::run_scenario(sc, true, 2);
            std::printf("mu = %.2f nK above the trap bottom (residual %.2e, %d iterations)\n",
                        r.mu_nK, r.state.residual, r.state.iterations);
            std::printf("fragmentation std = %.2f %%\n", 100.0 * r.frag_std);
        } else if (cmd_fig->parsed()) {
            switch (fig_n) {
                case 1: figure1(); break;
                case 2: figure2(); break;
                case 3: figure3(); break;
                case 4: figure4(); break;
                case 5: figure5(); break;
                case 6: figure6(); break;
                case 7: figure7(); break;
                case 8: figure8(); break;
                default:
                    std::fprintf(stderr, "figure number must be in 1..8\n");
                    return 1;
            }
        } else if (cmd_run->parsed()) {
            auto sc = load_or_builtin(config_path);
            auto r = scenario::run_scenario(sc, true, 2);
            std::printf("report written to %s/report.csv\n", sc.out_dir.c_str());
            std::printf("d = %.3f um, depth = %.3f uK, mu = %.1f nK, frag = %.2f %%\n", r.d_um,
                        r.depth_uK, r.mu_nK, 100.0 * r.frag_std);
        } else if (cmd_ex->parsed()) {
            std::fputs(scenario::builtin_z50_config().c_str(), stdout);
        }
    } catch (const scenario::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const units::ParseError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const scenario::PhysicsError& e) {
        std::fprintf(stderr, "physics error: %s\n", e.what());
        return 3;
    } catch (const std::domain_error& e) {
        std::fprintf(stderr, "physics error: %s\n", e.what());
        return 3;
    } catch (const std::runtime_error& e) {
        std::fprintf(stderr, "numerical error: %s\n", e.what());
        return 4;
    }
    return 0;
}
