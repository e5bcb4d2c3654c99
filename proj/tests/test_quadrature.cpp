#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "nanotrap/quadrature.hpp"

using namespace nanotrap;

TEST_CASE("1d adaptive integrals against closed forms") {
    auto q = [](auto f, double a, double b) {
        return quad::integrate(f, a, b, {1e-12, 0.0, 40});
    };
    CHECK(q([](double x) { return std::sin(x); }, 0.0, M_PI) == doctest::Approx(2.0).epsilon(1e-11));
    CHECK(q([](double x) { return std::exp(-x); }, 0.0, 50.0) == doctest::Approx(1.0).epsilon(1e-11));
    CHECK(q([](double x) { return 1.0 / (1.0 + x * x); }, -40.0, 40.0) ==
          doctest::Approx(2.0 * std::atan(40.0)).epsilon(1e-11));
    // mildly singular derivative
    CHECK(q([](double x) { return std::sqrt(x); }, 0.0, 1.0) ==
          doctest::Approx(2.0 / 3.0).epsilon(1e-9));
}

TEST_CASE("2d nested integral") {
    double v = quad::integrate2d([](double x, double y) { return x * y * std::exp(-x - y); },
                                 0.0, 20.0, 0.0, 20.0, {1e-10, 0.0, 40});
    CHECK(v == doctest::Approx((1.0 - 21.0 * std::exp(-20.0)) * (1.0 - 21.0 * std::exp(-20.0))).epsilon(1e-8));
}

TEST_CASE("sqrt-endpoint transform handles turning-point integrands") {
    // int_0^1 sqrt(x(1-x)) dx = pi/8
    double v = quad::integrate_sqrt_endpoints(
        [](double x) { return std::sqrt(std::max(0.0, x * (1.0 - x))); }, 0.0, 1.0,
        {1e-12, 0.0, 40});
    CHECK(v == doctest::Approx(M_PI / 8.0).epsilon(1e-10));
}

TEST_CASE("halving tolerance changes result less than stated tolerance") {
    auto f = [](double x) { return std::cos(3.0 * x) * std::exp(-0.2 * x * x); };
    double a = quad::integrate(f, -8.0, 8.0, {1e-6, 0.0, 40});
    double b = quad::integrate(f, -8.0, 8.0, {5e-7, 0.0, 40});
    CHECK(std::abs(a - b) <= 1e-6 * std::abs(b) + 1e-15);
}
