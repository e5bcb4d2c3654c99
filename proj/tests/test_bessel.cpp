#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "nanotrap/bessel.hpp"

using namespace nanotrap;

namespace {

// Reference values computed with 30-digit arithmetic (mpmath):
// {order, x, I_m(x)e^{-x}, K_m(x)e^{x}}.
struct Ref {
    int m;
    double x;
    double ie;
    double ke;
};

constexpr Ref refs[12] = {
    {0, 0.5, 0.64503527044915007, 1.5241093857739095},
    {0, 5.0, 0.18354081260932835, 0.54780756431351899},
    {1, 1.0, 0.20791041534970845, 1.6361534862632582},
    {1, 20.0, 0.087506222183288665, 0.28542549694072645},
    {2, 3.7000000000000002, 0.11667762652305144, 1.017626978684998},
    {5, 0.10000000000000001, 2.3573294295782141e-9, 42412050.199178211},
    {5, 50.0, 0.043947497024623271, 0.22642553977184737},
    {10, 10.0, 0.00099388192221399772, 35.556339158140535},
    {20, 3.0, 7.572443832391637e-17, 326483251275269.91},
    {50, 60.0, 1.1124803610686486e-10, 57544950.780896889},
    {100, 80.0, 8.3960753968893976e-27, 4.6501729333427834e+23},
    {150, 140.0, 1.2729930418003168e-34, 1.9142644000783323e+31},
};

} // namespace

TEST_CASE("scaled I_m and K_m against tabulated references to 1e-9") {
    for (const Ref& r : refs) {
        CAPTURE(r.m);
        CAPTURE(r.x);
        CHECK(bessel::besseli_scaled(r.m, r.x) == doctest::Approx(r.ie).epsilon(1e-9));
        CHECK(bessel::besselk_scaled(r.m, r.x) == doctest::Approx(r.ke).epsilon(1e-9));
    }
}

TEST_CASE("K1 reference value and large-argument decay") {
    CHECK(bessel::k1(1.0) == doctest::Approx(0.60190723019723457).epsilon(1e-12));
    // K1(u) ~ sqrt(pi/2u) e^{-u} asymptotically
    double u = 30.0;
    double asym = std::sqrt(M_PI / (2.0 * u)) * std::exp(-u) * (1.0 + 3.0 / (8.0 * u));
    CHECK(bessel::k1(u) == doctest::Approx(asym).epsilon(1e-3));
    CHECK(bessel::k1(800.0) == 0.0);
}

TEST_CASE("wronskian I_m(x)K_m'(x) - I_m'(x)K_m(x) = -1/x") {
    for (double x : {0.3, 1.7, 6.0, 25.0, 120.0}) {
        for (int m : {0, 1, 3, 12, 40}) {
            auto ip = bessel::besseli_scaled_pair(m, x);
            auto kp = bessel::besselk_scaled_pair(m, x);
            if (!std::isfinite(kp.fm)) continue;
            const double idm = ip.fm1 - (m / x) * ip.fm;   // I_m' scaled
            const double kdm = -kp.fm1 - (m / x) * kp.fm;  // K_m' scaled
            const double wronskian = ip.fm * kdm - idm * kp.fm;  // scales cancel
            CHECK(wronskian == doctest::Approx(-1.0 / x).epsilon(1e-10));
        }
    }
}

TEST_CASE("recurrence consistency for scaled K") {
    // K_{m+1} = K_{m-1} + 2m/x K_m holds for the scaled values too.
    double x = 7.3;
    double k2 = bessel::besselk_scaled(2, x);
    double k3 = bessel::besselk_scaled(3, x);
    double k4 = bessel::besselk_scaled(4, x);
    CHECK(k4 == doctest::Approx(k2 + (6.0 / x) * k3).epsilon(1e-12));
}
