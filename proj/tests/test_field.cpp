#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "nanotrap/constants.hpp"
#include "nanotrap/field.hpp"
#include "nanotrap/quadrature.hpp"
#include "nanotrap/rng.hpp"
#include "nanotrap/trap.hpp"

using namespace nanotrap;
using constants::mu0;
using constants::pi;

namespace {

// Independent Biot-Savart oracle: adaptive line-integral quadrature along
// the polyline, component by component.
Vec3 biot_savart_oracle(const fieldsolver::WireSpec& w, const Vec3& r) {
    Vec3 B{};
    for (std::size_t i = 1; i < w.path.size(); ++i) {
        const Vec3 a = w.path[i - 1];
        const Vec3 b = w.path[i];
        const Vec3 u = b - a;
        for (int comp = 0; comp < 3; ++comp) {
            auto f = [&](double t) {
                const Vec3 p = a + u * t;
                const Vec3 d = r - p;
                const double dn = d.norm();
                const Vec3 cr = u.cross(d);
                return (comp == 0 ? cr.x : comp == 1 ? cr.y : cr.z) / (dn * dn * dn);
            };
            const double v = quad::integrate(f, 0.0, 1.0, {1e-10, 1e-30, 40});
            const double val = mu0 * w.current / (4.0 * pi) * v;
            if (comp == 0) B.x += val;
            else if (comp == 1) B.y += val;
            else B.z += val;
        }
    }
    return B;
}

} // namespace

TEST_CASE("single long wire reproduces mu0 I / 2 pi d") {
    auto w = fieldsolver::make_straight_wire(1.0, {50e-9, 50e-9}, presets::gold(), 40e-6);
    fieldsolver::FieldConfiguration cfg;
    cfg.wires = {w};
    const double d = 0.6e-6;
    const Vec3 B = cfg.field_at({0.0, 0.0, 25e-9 + d});
    const double expect = mu0 * 40e-6 / (2.0 * pi * d);
    CHECK(B.norm() == doctest::Approx(expect).epsilon(1e-3));
    CHECK(std::abs(B.x) < 1e-18);
    CHECK(B.y == doctest::Approx(-expect).epsilon(1e-3));  // +x current, above: -y
}

TEST_CASE("linearity: current reversal negates the wire field; superposition") {
    auto w = fieldsolver::make_z_wire(50e-6, 1e-3, {50e-9, 50e-9}, presets::gold(), 40e-6);
    fieldsolver::FieldConfiguration cfg;
    cfg.wires = {w};
    const Vec3 r{3e-6, -2e-6, 0.8e-6};
    const Vec3 B1 = cfg.field_at(r);
    cfg.wires[0].current = -40e-6;
    const Vec3 B2 = cfg.field_at(r);
    CHECK(B1.x == doctest::Approx(-B2.x).epsilon(1e-14));
    CHECK(B1.y == doctest::Approx(-B2.y).epsilon(1e-14));
    CHECK(B1.z == doctest::Approx(-B2.z).epsilon(1e-14));

    // superposition of two wires equals the sum of individual evaluations
    auto w2 = fieldsolver::make_straight_wire(20e-6, {50e-9, 50e-9}, presets::gold(), 10e-6);
    for (auto& p : w2.path) p.y += 2e-6;
    fieldsolver::FieldConfiguration both;
    both.wires = {w, w2};
    cfg.wires[0].current = 40e-6;
    fieldsolver::FieldConfiguration only2;
    only2.wires = {w2};
    const Vec3 Bs = both.field_at(r);
    const Vec3 Ba = cfg.field_at(r);
    const Vec3 Bb = only2.field_at(r);
    CHECK(Bs.x == doctest::Approx(Ba.x + Bb.x).epsilon(1e-13));
    CHECK(Bs.y == doctest::Approx(Ba.y + Bb.y).epsilon(1e-13));
    CHECK(Bs.z == doctest::Approx(Ba.z + Bb.z).epsilon(1e-13));
}

TEST_CASE("Z-wire field agrees with the quadrature oracle to 1e-6 relative") {
    auto w = fieldsolver::make_z_wire(50e-6, 1e-3, {50e-9, 50e-9}, presets::gold(), 40e-6);
    fieldsolver::FieldConfiguration cfg;
    cfg.wires = {w};
    for (const Vec3 r : {Vec3{0, 0, 0.631e-6}, Vec3{10e-6, 1e-6, 0.4e-6}, Vec3{-24e-6, -3e-6, 2e-6}}) {
        const Vec3 Bs = cfg.field_at(r);
        const Vec3 Bo = biot_savart_oracle(w, r);
        CHECK((Bs - Bo).norm() <= 1e-6 * Bo.norm());
    }
}

TEST_CASE("on-axis evaluation raises a singular-point error") {
    auto w = fieldsolver::make_straight_wire(10e-6, {50e-9, 50e-9}, presets::gold(), 1e-3);
    fieldsolver::FieldConfiguration cfg;
    cfg.wires = {w};
    CHECK_THROWS_AS(cfg.field_at({0.0, 0.0, 25e-9}), std::domain_error);
    // beyond the segment ends the axis limit is finite (zero contribution)
    CHECK_NOTHROW(cfg.field_at({6e-6, 0.0, 25e-9}));
}

TEST_CASE("div B = 0 by central differences at random points") {
    auto w = fieldsolver::make_z_wire(50e-6, 1e-3, {50e-9, 50e-9}, presets::gold(), 40e-6);
    fieldsolver::FieldConfiguration cfg;
    cfg.wires = {w};
    cfg.bias = {8.3e-6, 1.32e-5, 0.0};
    const double h = 1.5e-10;
    for (int i = 0; i < 25; ++i) {
        Vec3 r{(rng::uniform(3, 3 * i) - 0.5) * 40e-6, (rng::uniform(3, 3 * i + 1) - 0.5) * 4e-6,
               0.2e-6 + rng::uniform(3, 3 * i + 2) * 3e-6};
        const double div =
            (cfg.field_at({r.x + h, r.y, r.z}).x - cfg.field_at({r.x - h, r.y, r.z}).x +
             cfg.field_at({r.x, r.y + h, r.z}).y - cfg.field_at({r.x, r.y - h, r.z}).y +
             cfg.field_at({r.x, r.y, r.z + h}).z - cfg.field_at({r.x, r.y, r.z - h}).z) /
            (2.0 * h);
        // full Jacobian norm for normalization
        const Vec3 gx = (cfg.field_at({r.x + h, r.y, r.z}) - cfg.field_at({r.x - h, r.y, r.z})) /
                        (2.0 * h);
        const Vec3 gy = (cfg.field_at({r.x, r.y + h, r.z}) - cfg.field_at({r.x, r.y - h, r.z})) /
                        (2.0 * h);
        const Vec3 gz = (cfg.field_at({r.x, r.y, r.z + h}) - cfg.field_at({r.x, r.y, r.z - h})) /
                        (2.0 * h);
        const double gscale = std::sqrt(gx.norm2() + gy.norm2() + gz.norm2());
        CHECK(std::abs(div) <= 1e-6 * gscale);
    }
}

TEST_CASE("Ioffe-Pritchard closed form: radial frequency to 1%") {
    const AtomSpecies rb = presets::rb87_22();
    const double B0 = 8.6e-6;   // T
    const double Bp = 21.8;     // T/m
    trap::TrapSystem sys;
    sys.species = rb;
    sys.gravity = false;
    sys.field = [=](const Vec3& r) -> Vec3 {
        return {B0, Bp * r.z, Bp * r.y};  // 2D quadrupole + Ioffe along x
    };
    trap::TrapCharacterization ch;
    trap::principal_frequencies(sys, {0, 0, 0}, 2e-9, ch);
    const double expect = std::sqrt(rb.magnetic_moment() * Bp * Bp / (rb.mass * B0));
    CHECK(ch.omega[0] == doctest::Approx(expect).epsilon(0.01));
    CHECK(ch.omega[1] == doctest::Approx(expect).epsilon(0.01));
    CHECK(ch.omega[2] < 0.01 * expect);

    // quadratic-fit cross-check along a principal axis
    const double h = 5e-9;
    const double u0 = sys.potential({0, 0, 0});
    const double up = sys.potential({0, 0, h});
    const double um = sys.potential({0, 0, -h});
    const double omega_fit = std::sqrt((up - 2 * u0 + um) / (h * h) / rb.mass);
    CHECK(omega_fit == doctest::Approx(ch.omega[0]).epsilon(0.01));
}

TEST_CASE("synthetic flood-fill depth finds the saddle energy") {
    trap::PotentialGrid g;
    g.origin = {-1.0, -1.0, 0.0};
    g.nx = 41;
    g.ny = 41;
    g.nz = 81;
    g.spacing = {0.05, 0.05, 0.025};
    g.U.assign(g.size(), 0.0);
    g.excluded.assign(g.size(), 0);
    for (int ix = 0; ix < g.nx; ++ix)
        for (int iy = 0; iy < g.ny; ++iy)
            for (int iz = 0; iz < g.nz; ++iz) {
                const Vec3 r = g.point(ix, iy, iz);
                double w;
                if (r.z >= 0.4) w = (r.z - 1.0) * (r.z - 1.0);
                else w = 0.36 - 4.0 * (0.4 - r.z);  // plunge toward the surface
                g.U[g.idx(ix, iy, iz)] = w + 0.5 * (r.x * r.x + r.y * r.y);
            }
    // saddle sits at (0,0,0.4) with U = 0.36; well bottom U = 0 at (0,0,1)
    const double depth = trap::flood_fill_depth(g, {0, 0, 1.0}, 0.0, 0.02);
    CHECK(depth == doctest::Approx(0.36).epsilon(0.05));
}
