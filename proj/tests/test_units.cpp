#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "nanotrap/constants.hpp"
#include "nanotrap/rng.hpp"
#include "nanotrap/types.hpp"
#include "nanotrap/units.hpp"

using namespace nanotrap;

TEST_CASE("unit parsing to SI") {
    CHECK(units::parse("50 nm").value == doctest::Approx(5.0e-8).epsilon(1e-14));
    CHECK(units::parse("132 mG").value == doctest::Approx(1.32e-5).epsilon(1e-14));
    CHECK(units::parse("40 uA").value == doctest::Approx(4.0e-5).epsilon(1e-14));
    CHECK(units::parse("1.5 uK").value == doctest::Approx(1.5e-6).epsilon(1e-14));
    CHECK(units::parse("2 ms").value == doctest::Approx(2e-3).epsilon(1e-14));
    CHECK(units::parse("50nm").value == doctest::Approx(5.0e-8));
    CHECK(units::parse("1e-3 T").kind == units::Kind::Field);
}

TEST_CASE("unit parse errors name the token") {
    CHECK_THROWS_WITH_AS(units::parse("50 xm"), doctest::Contains("xm"), units::ParseError);
    CHECK_THROWS_AS(units::parse("abc nm"), units::ParseError);
    CHECK_THROWS_AS(units::parse("50"), units::ParseError);
    CHECK_THROWS_AS(units::parse_as("50 nm", units::Kind::Current), units::ParseError);
}

TEST_CASE("format/parse round trip to 1e-12") {
    const char* suffixes[] = {"nm", "um", "mm", "m", "mA", "uA", "A",
                              "mG", "G", "T", "nK", "uK", "K", "s", "ms"};
    for (const char* suf : suffixes) {
        for (int i = 0; i < 200; ++i) {
            double mag = std::pow(10.0, -12.0 + 24.0 * rng::uniform(7, i));
            double v = (rng::uniform(11, i) - 0.5) * mag;
            double back = units::parse(units::format(v, suf)).value;
            CHECK(std::abs(back - v) <= 1e-12 * std::abs(v));
        }
    }
}

TEST_CASE("magnetic moment projections") {
    AtomSpecies rb = presets::rb87_22();
    CHECK(rb.magnetic_moment() == doctest::Approx(constants::muB).epsilon(1e-15));

    AtomSpecies mf0 = rb;
    mf0.mF = 0.0;
    CHECK(mf0.magnetic_moment() == 0.0);

    AtomSpecies mf1 = rb;
    mf1.mF = 1.0;
    CHECK(mf1.magnetic_moment() == doctest::Approx(0.5 * constants::muB).epsilon(1e-15));
}

TEST_CASE("descriptor validation") {
    AtomSpecies bad = presets::rb87_22();
    bad.mF = 3.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    Material m = presets::gold();
    CHECK_NOTHROW(m.validate());
    m.specular_p = 1.5;
    CHECK_THROWS_AS(m.validate(), std::invalid_argument);

    WaferStack w = presets::si_sio2();
    CHECK_NOTHROW(w.validate());
    w.layers[0].epsilon = 0.5;
    CHECK_THROWS_AS(w.validate(), std::invalid_argument);
}

TEST_CASE("value-type equality is field-wise") {
    CHECK(presets::gold() == presets::gold());
    CHECK(presets::rb87_22() == presets::rb87_22());
    Material m = presets::gold();
    m.rho0 *= 2.0;
    CHECK(!(m == presets::gold()));
}

TEST_CASE("derived seeds and counter rng are stable") {
    CHECK(rng::derive_seed(1, "edge-phase") != rng::derive_seed(1, "gp-init"));
    CHECK(rng::derive_seed(1, "edge-phase") == rng::derive_seed(1, "edge-phase"));
    double u = rng::uniform(42, 7);
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    CHECK(rng::uniform(42, 7) == u);
}
