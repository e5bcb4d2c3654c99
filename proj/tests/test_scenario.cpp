#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "nanotrap/constants.hpp"
#include "nanotrap/scenario.hpp"
#include "nanotrap/util.hpp"

using namespace nanotrap;
using constants::kB;

TEST_CASE("builtin scenario parses with expected values") {
    auto sc = scenario::parse_scenario(scenario::builtin_z50_config());
    CHECK(sc.wires.size() == 1);
    CHECK(sc.wires[0].current == doctest::Approx(40e-6));
    CHECK(sc.wires[0].cs.w == doctest::Approx(50e-9));
    CHECK(sc.bias.y == doctest::Approx(1.32e-5));
    CHECK(sc.bias.x == doctest::Approx(8.3e-6));
    CHECK(sc.wafer.layers.size() == 1);
    CHECK(sc.wafer.layers[0].thickness == doctest::Approx(100e-9));
    CHECK(sc.roughness_on);
    CHECK(sc.cp == scenario::CPMode::Both);
    CHECK(sc.atoms == doctest::Approx(1000.0));
}

TEST_CASE("unknown keys and bad references are config errors") {
    CHECK_THROWS_AS(scenario::parse_scenario("bogus = 1\n[wire]\nmaterial = gold\n"),
                    scenario::ConfigError);
    CHECK_THROWS_AS(scenario::parse_scenario("[wire]\nwidth = 50 nm\nwobble = 2\n"),
                    scenario::ConfigError);
    // wire referencing a missing material names the key
    std::string cfg = R"([wire]
shape = z
material = copper
width = 50 nm
height = 50 nm
current = 40 uA
)";
    CHECK_THROWS_WITH_AS(scenario::parse_scenario(cfg), doctest::Contains("copper"),
                         scenario::ConfigError);
    // malformed quantity includes the line number
    CHECK_THROWS_WITH_AS(scenario::parse_scenario("[bias]\nby = 1.32 xG\n"),
                         doctest::Contains("line 2"), scenario::ConfigError);
    // wrong dimension suffix
    CHECK_THROWS_AS(scenario::parse_scenario("[wire]\nmaterial = gold\nwidth = 50 uA\n"),
                    scenario::ConfigError);
}

TEST_CASE("scenario hash is stable and text-sensitive") {
    auto a = scenario::parse_scenario(scenario::builtin_z50_config());
    auto b = scenario::parse_scenario(scenario::builtin_z50_config() + "\n# trailing comment\n");
    CHECK(scenario::scenario_hash(a) == scenario::scenario_hash(a));
    CHECK(scenario::scenario_hash(a) != scenario::scenario_hash(b));
}

TEST_CASE("z-trap characterization hits the worked-example anchors") {
    util::set_thread_count(4);
    auto sc = scenario::parse_scenario(scenario::builtin_z50_config());
    auto s = scenario::build_system(sc);
    auto ch = scenario::characterize(s, sc);

    // distance from the filament anchored by mu0 I / 2 pi B_y = 0.606 um
    const double d = ch.r_min.z - s.wire_mid;
    CHECK(d == doctest::Approx(0.606e-6).epsilon(0.05));
    CHECK(ch.depth / kB * 1e6 == doctest::Approx(2.9).epsilon(0.20));
    CHECK(ch.f_radial == doctest::Approx(1e4).epsilon(0.25));
    CHECK(ch.B_min == doctest::Approx(8.3e-6).epsilon(0.03));
    CHECK(ch.larmor == doctest::Approx(sc.species.magnetic_moment() * ch.B_min /
                                       constants::hbar).epsilon(1e-12));

    // CP reduces the depth: without it the trap is much deeper
    auto sc_nocp = sc;
    sc_nocp.cp = scenario::CPMode::None;
    auto s2 = scenario::build_system(sc_nocp);
    auto ch2 = scenario::characterize(s2, sc_nocp);
    CHECK(ch2.depth > 1.5 * ch.depth);

    // gravity toggle moves the depth by less than 0.2 uK
    auto sc_nog = sc;
    sc_nog.gravity = false;
    auto s3 = scenario::build_system(sc_nog);
    auto ch3 = scenario::characterize(s3, sc_nog);
    CHECK(std::abs(ch3.depth - ch.depth) / kB * 1e6 < 0.2);
}

TEST_CASE("no-trap configuration raises a physics error") {
    auto sc = scenario::parse_scenario(scenario::builtin_z50_config());
    sc.bias = {0.0, 0.0, 0.0};  // nothing cancels the wire field
    sc.cp = scenario::CPMode::None;
    auto s = scenario::build_system(sc);
    CHECK_THROWS_AS(scenario::characterize(s, sc), scenario::PhysicsError);
}
