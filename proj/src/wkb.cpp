#include "nanotrap/wkb.hpp"

#include <cmath>
#include <stdexcept>

#include "nanotrap/constants.hpp"
#include "nanotrap/quadrature.hpp"

namespace nanotrap::wkb {

using constants::hbar;
using constants::mu0;
using constants::pi;

double x_barrier_potential(double I_cross, double B0, double z, double x,
                           const AtomSpecies& species) {
    if (!(z > 0.0)) throw std::domain_error("x_barrier_potential: z must be > 0");
    const double muA = species.magnetic_moment();
    return muA * B0 + (muA * mu0 * I_cross / (2.0 * pi)) * z / (z * z + x * x);
}

namespace {

double bisect_crossing(const std::function<double(double)>& f, double a, double b) {
    // f(a), f(b) have opposite signs; refine to 1e-12 m
    double fa = f(a);
    for (int it = 0; it < 200 && (b - a) > 1e-12; ++it) {
        const double m = 0.5 * (a + b);
        const double fm = f(m);
        if ((fa <= 0.0) == (fm <= 0.0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

} // namespace

Transmission transmission(const std::function<double(double)>& V, double E,
                          const AtomSpecies& species, double x_lo, double x_hi) {
    constexpr int kScan = 2000;
    double x_pk = x_lo;
    double v_pk = -1e300;
    for (int i = 0; i <= kScan; ++i) {
        const double x = x_lo + (x_hi - x_lo) * i / kScan;
        const double v = V(x);
        if (v > v_pk) {
            v_pk = v;
            x_pk = x;
        }
    }
    Transmission out;
    if (E >= v_pk) {
        out.P = 1.0;
        out.over_barrier = true;
        out.x1 = out.x2 = x_pk;
        return out;
    }
    auto g = [&](double x) { return V(x) - E; };
    if (g(x_lo) >= 0.0 || g(x_hi) >= 0.0)
        throw std::domain_error("wkb: turning points not bracketed in the search window");
    out.x1 = bisect_crossing(g, x_lo, x_pk);
    out.x2 = bisect_crossing([&](double x) { return -g(x); }, x_pk, x_hi);
    const double m = species.mass;
    const double action = quad::integrate_sqrt_endpoints(
        [&](double x) { return std::sqrt(std::max(0.0, 2.0 * m * (V(x) - E))); }, out.x1, out.x2,
        {1e-8, 1e-300, 40});
    out.P = std::exp(-action / hbar);
    return out;
}

namespace {

Transmission barrier_P(double I, double d, double E_kin, const AtomSpecies& species) {
    // the Ioffe floor cancels between V and E; work relative to it
    auto V = [&](double x) { return x_barrier_potential(I, 0.0, d, x, species); };
    return transmission(V, E_kin, species, -40.0 * d, 40.0 * d);
}

} // namespace

ControlCurve tunneling_control_curve(double d, double E_kin, double P_ref,
                                     const AtomSpecies& species,
                                     const std::vector<double>& dI_over_I) {
    if (!(P_ref > 0.0 && P_ref < 1.0))
        throw std::domain_error("tunneling_control_curve: P_ref must be in (0,1)");
    const double muA = species.magnetic_moment();
    // barrier peak equals E_kin at I_floor: P = 1 there
    const double I_floor = 2.0 * pi * d * E_kin / (muA * mu0);
    double lo = I_floor * 1.0001;
    double hi = I_floor * 2.0;
    while (barrier_P(hi, d, E_kin, species).P > P_ref) {
        hi *= 2.0;
        if (hi > I_floor * 1e6)
            throw std::domain_error("tunneling_control_curve: root not bracketed (P too small)");
    }
    for (int it = 0; it < 200 && (hi - lo) > 1e-12 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (barrier_P(mid, d, E_kin, species).P > P_ref)
            lo = mid;
        else
            hi = mid;
    }
    ControlCurve out;
    out.I_ref = 0.5 * (lo + hi);
    out.barrier_height = muA * mu0 * out.I_ref / (2.0 * pi * d);
    out.points.reserve(dI_over_I.size());
    for (double f : dI_over_I) {
        const double I = out.I_ref * (1.0 + f);
        double P;
        if (I <= I_floor) {
            P = 1.0;
        } else {
            P = barrier_P(I, d, E_kin, species).P;
        }
        out.points.emplace_back(f, P);
    }
    return out;
}

double barrier_height_for(double d, double E_kin, double P_ref, const AtomSpecies& species) {
    return tunneling_control_curve(d, E_kin, P_ref, species, {}).barrier_height;
}

} // namespace nanotrap::wkb
