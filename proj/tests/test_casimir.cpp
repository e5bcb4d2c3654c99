#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <memory>

#include "nanotrap/casimir.hpp"
#include "nanotrap/constants.hpp"

using namespace nanotrap;
using constants::pi;

TEST_CASE("planar F: conductor limit and single-interface b-independence") {
    // thick near-perfect conductor -> 3/4
    CHECK(casimir::planar_F(1e6, 1e6, 10.0) == doctest::Approx(0.75).epsilon(0.01));

    // eps1 == eps2 means no buried interface: independent of b/z to 1e-4
    const double f1 = casimir::planar_F(4.0, 4.0, 0.01);
    const double f2 = casimir::planar_F(4.0, 4.0, 1.0);
    const double f3 = casimir::planar_F(4.0, 4.0, 100.0);
    CHECK(std::abs(f1 - f2) < 1e-4 * f2);
    CHECK(std::abs(f3 - f2) < 1e-4 * f2);
}

TEST_CASE("planar F: bilayer limits approach single-interface values") {
    // z >> b (b/z small): deeper layer dominates
    CHECK(casimir::planar_F(4.0, 12.0, 1e-3) ==
          doctest::Approx(casimir::planar_F_single(12.0)).epsilon(0.02));
    // z << b: outer layer dominates
    CHECK(casimir::planar_F(4.0, 12.0, 1e3) ==
          doctest::Approx(casimir::planar_F_single(4.0)).epsilon(0.02));
}

TEST_CASE("planar F monotone in the dielectric constants") {
    CHECK(casimir::planar_F(4.0, 12.0, 1.0) > casimir::planar_F(3.0, 12.0, 1.0));
    CHECK(casimir::planar_F(4.0, 12.0, 1.0) > casimir::planar_F(4.0, 6.0, 1.0));
}

TEST_CASE("planar U: perfect-conductor closed form and z^-4 scaling") {
    WaferStack metal;
    metal.substrate_epsilon = 1e8;
    const double alpha0 = 47.3e-30;
    const double z = 0.5e-6;
    const double expected = -3.0 * constants::hbar * constants::c * alpha0 /
                            (8.0 * pi * z * z * z * z);
    CHECK(casimir::planar_U(z, metal, alpha0) == doctest::Approx(expected).epsilon(0.01));

    WaferStack stack = presets::si_sio2();
    const double u1 = casimir::planar_U(0.4e-6, stack, alpha0);
    // if F were fixed, doubling z would scale U by 1/16; F drifts slowly
    const double F1 = -u1 * std::pow(0.4e-6, 4) / (constants::hbar * constants::c * alpha0 / (2 * pi));
    const double u2 = -F1 * (constants::hbar * constants::c * alpha0 / (2 * pi)) / std::pow(0.8e-6, 4);
    CHECK(u2 == doctest::Approx(u1 / 16.0).epsilon(1e-12));

    CHECK_THROWS_AS(casimir::planar_U(-1e-9, stack, alpha0), std::domain_error);
}

TEST_CASE("PAA over-estimates the exact bilayer by 8-15%") {
    const double b = 100e-9;
    const double fSi = casimir::planar_F_single(12.0);
    for (double z : {0.2e-6, 0.35e-6, 0.6e-6, 1.0e-6, 1.5e-6}) {
        const double exact = casimir::planar_F(4.0, 12.0, b / z);
        const double layer = casimir::planar_F(4.0, 1.0, b / z);
        const double si = fSi * std::pow(z / (z + b), 4);
        const double ratio = (layer + si) / exact;
        CHECK(ratio > 1.07);
        CHECK(ratio < 1.16);
    }
}

TEST_CASE("cylinder F: paper limits") {
    // proximity limit -> plane conductor value 3/4
    CHECK(casimir::cylinder_F(0.995) == doctest::Approx(0.75).epsilon(0.03));
    // near-linear region
    CHECK(casimir::cylinder_F(0.5) == doctest::Approx(0.53 * 0.5 + 0.22).epsilon(0.06));
    // thin-wire logarithmic drop, m=0 dominated
    CHECK(casimir::cylinder_F(0.01) == doctest::Approx(-2.0 / (3.0 * std::log(0.01))).epsilon(0.30));
}

TEST_CASE("cylinder F monotone increasing on a sampled grid, bounded by 3/4") {
    double prev = 0.0;
    for (double t : {0.02, 0.05, 0.1, 0.2, 0.35, 0.5, 0.65, 0.8, 0.9}) {
        const double f = casimir::cylinder_F(t, 3e-4);
        CHECK(f > prev);
        CHECK(f <= 0.751);
        prev = f;
    }
}

TEST_CASE("quadrature convergence: halving tolerance stays within stated tolerance") {
    const double a = casimir::planar_F(4.0, 12.0, 0.25, 1e-5);
    const double b = casimir::planar_F(4.0, 12.0, 0.25, 5e-6);
    CHECK(std::abs(a - b) <= 1e-4 * std::abs(b));
    const double c1 = casimir::cylinder_F(0.3, 1e-4);
    const double c2 = casimir::cylinder_F(0.3, 5e-5);
    CHECK(std::abs(c1 - c2) <= 1e-3 * std::abs(c2));
}

TEST_CASE("cylinder U: quartic divergence and domain checks") {
    const double alpha0 = 47.3e-30;
    const double a = 25e-9;
    // halving the gap at (nearly) fixed a/R regime grows |U| ~16x
    const double g1 = 400e-9, g2 = 200e-9;
    const double u1 = casimir::cylinder_U(a + g1, a, alpha0);
    const double u2 = casimir::cylinder_U(a + g2, a, alpha0);
    CHECK(std::abs(u2 / u1) > 12.0);
    CHECK(std::abs(u2 / u1) < 22.0);
    CHECK(u1 < 0.0);
    CHECK_THROWS_AS(casimir::cylinder_U(20e-9, a, alpha0), std::domain_error);
}

TEST_CASE("PAA provider: additivity and dominance regions") {
    const double alpha0 = 47.3e-30;
    auto planar = std::make_shared<casimir::PlanarCP>(presets::si_sio2(), alpha0);
    const double aw = 25e-9;
    auto cyl = std::make_shared<casimir::CylinderCP>(aw, Vec3{0, 0, aw}, Vec3{1, 0, 0}, alpha0);
    casimir::PaaCP paa(planar, cyl);

    // far from the wire laterally: planar term dominates to 1%
    Vec3 far{0.0, 50e-6, 0.5e-6};
    CHECK(paa.potential(far) == doctest::Approx(planar->potential(far)).epsilon(0.01));

    // directly above the wire at gap < 2a: cylinder term > 50% of total
    Vec3 near{0.0, 0.0, aw + aw + 40e-9};
    const double uc = cyl->potential(near);
    const double tot = paa.potential(near);
    CHECK(uc / tot > 0.5);

    // additivity is exact
    CHECK(paa.potential(near) ==
          doctest::Approx(planar->potential(near) + cyl->potential(near)).epsilon(1e-14));

    CHECK(paa.inside_body({0, 0, -1e-9}));
    CHECK(paa.inside_body({0, 0, aw}));
    CHECK(!paa.inside_body(far));
    CHECK_THROWS_AS(planar->potential({0, 0, -1e-9}), std::domain_error);
}

TEST_CASE("scaled-distance curves reproduce the bilayer/PAA ordering") {
    // F-hat(z) = -U 2π z⁴/(ħcα0): PAA above exact everywhere in [0.2, 2] um
    const double b = 100e-9;
    const double fSi = casimir::planar_F_single(12.0);
    for (double z = 0.2e-6; z <= 2.0e-6; z += 0.3e-6) {
        const double exact = casimir::planar_F(4.0, 12.0, b / z);
        const double paa = casimir::planar_F(4.0, 1.0, b / z) + fSi * std::pow(z / (z + b), 4);
        CHECK(paa > exact);
    }
}
