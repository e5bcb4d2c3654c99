#include "nanotrap/wire_resistivity.hpp"

#include <cmath>
#include <mutex>

#include "nanotrap/constants.hpp"
#include "nanotrap/interp.hpp"
#include "nanotrap/quadrature.hpp"
#include "nanotrap/util.hpp"

namespace nanotrap::wiremodel {

namespace {

constexpr double kTauCut = 45.0;  // kernel below exp(-45), treat as 0

// Angular kernel f(τ) = 2 ∫_0^{π/2} sinθ cos²θ exp(-τ/sinθ) dθ,
// tabulated once on a log-shifted grid. f(0) = 2/3, f'(0) = -π/2.
const CubicSpline& kernel_spline() {
    static CubicSpline spline = [] {
        const int n = 700;
        const double tau0 = 1e-4;
        std::vector<double> xs(n), ys(n);
        const double lo = std::log(tau0);
        const double hi = std::log(kTauCut + tau0);
        for (int i = 0; i < n; ++i) {
            const double u = lo + (hi - lo) * i / (n - 1);
            const double tau = std::exp(u) - tau0;
            xs[i] = u;
            ys[i] = quad::integrate(
                [tau](double th) {
                    const double s = std::sin(th);
                    const double c = std::cos(th);
                    return 2.0 * s * c * c * std::exp(-tau / s);
                },
                0.0, 0.5 * constants::pi, {1e-12, 1e-300, 40});
        }
        return CubicSpline(std::move(xs), std::move(ys));
    }();
    return spline;
}

double kernel(double tau) {
    if (tau >= kTauCut) return 0.0;
    if (tau < 1e-7) return 2.0 / 3.0 - 0.5 * constants::pi * tau;
    return kernel_spline()(std::log(tau + 1e-4));
}

} // namespace

double scattering_suppression(double y, double z, double h, double mfp) {
    const double phi1 = (y > 0.0) ? std::atan(z / y) : (z > 0.0 ? 0.5 * constants::pi : 0.0);
    const double phi2 =
        (y > 0.0) ? std::atan((h - z) / y) : (h - z > 0.0 ? 0.5 * constants::pi : 0.0);
    if (y <= 0.0) {
        // integrand reduces to f(0) = 2/3 over the angular window
        return (phi1 + phi2) / (2.0 * constants::pi);
    }
    if (y / mfp >= kTauCut) return 0.0;
    const double v = quad::integrate(
        [&](double phi) { return kernel(y / (mfp * std::cos(phi))); }, -phi1, phi2,
        {1e-9, 1e-14, 36});
    return 3.0 / (4.0 * constants::pi) * v;
}

double CurrentProfile::mean() const {
    double acc = 0.0;
    for (double v : j) acc += v;
    return acc / static_cast<double>(j.size());
}

CurrentProfile current_density_profile(const CrossSection& cs, double mfp, int n) {
    cs.validate();
    CurrentProfile p;
    p.n = n;
    p.w = cs.w;
    p.h = cs.h;
    p.j.assign(static_cast<std::size_t>(n) * n, 0.0);
    kernel_spline();  // build table before going parallel
    util::parallel_for(static_cast<std::size_t>(n), [&](std::size_t iy) {
        const double y = (static_cast<double>(iy) + 0.5) * cs.w / n;
        for (int iz = 0; iz < n; ++iz) {
            const double z = (iz + 0.5) * cs.h / n;
            double J = 1.0 - scattering_suppression(y, z, cs.h, mfp) -
                       scattering_suppression(cs.w - y, z, cs.h, mfp) -
                       scattering_suppression(z, y, cs.w, mfp) -
                       scattering_suppression(cs.h - z, y, cs.w, mfp);
            p.j[iy * n + iz] = J > 0.0 ? J : 0.0;
        }
    });
    return p;
}

double diffuse_conductivity_ratio(const CrossSection& cs, double mfp, int n) {
    cs.validate();
    // profile is mirror-symmetric in both axes: average the lower quadrant
    kernel_spline();
    const int half = (n + 1) / 2;
    std::vector<double> rows(static_cast<std::size_t>(half), 0.0);
    util::parallel_for(static_cast<std::size_t>(half), [&](std::size_t iy) {
        const double y = (static_cast<double>(iy) + 0.5) * cs.w / n;
        const double wy = (n % 2 == 1 && static_cast<int>(iy) == half - 1) ? 1.0 : 2.0;
        double acc = 0.0;
        for (int iz = 0; iz < half; ++iz) {
            const double z = (iz + 0.5) * cs.h / n;
            const double wz = (n % 2 == 1 && iz == half - 1) ? 1.0 : 2.0;
            double J = 1.0 - scattering_suppression(y, z, cs.h, mfp) -
                       scattering_suppression(cs.w - y, z, cs.h, mfp) -
                       scattering_suppression(z, y, cs.w, mfp) -
                       scattering_suppression(cs.h - z, y, cs.w, mfp);
            acc += wy * wz * (J > 0.0 ? J : 0.0);
        }
        rows[iy] = acc;
    });
    double total = 0.0;
    for (double r : rows) total += r;
    return total / (static_cast<double>(n) * n);
}

double resistivity_ratio(const CrossSection& cs, const Material& mat, int n) {
    cs.validate();
    mat.validate();
    const double p = mat.specular_p;
    if (p >= 1.0) return 1.0;
    const double w2 = (1.0 - p) * (1.0 - p);
    double acc = 0.0;
    for (int k = 1; k <= 400; ++k) {
        const double mk = diffuse_conductivity_ratio(cs, mat.mfp / k, n);
        acc += w2 * k * std::pow(p, k - 1) * mk;
        // remaining terms are bounded by (ρ0/ρ) <= 1
        const double tail = std::pow(p, k) * (k * (1.0 - p) + 1.0);
        if (tail < 1e-4 * acc) break;
    }
    return 1.0 / acc;
}

MaxCurrentResult max_current(const CrossSection& cs, const Material& mat, double dT_max) {
    if (dT_max <= 0.0) throw std::invalid_argument("max_current: dT_max must be > 0");
    MaxCurrentResult r;
    r.ratio = resistivity_ratio(cs, mat);
    const double rho = mat.rho0 * r.ratio;
    r.J_max = std::sqrt(mat.kappa * dT_max / (cs.h * rho * (1.0 + mat.alphaT * dT_max)));
    r.I_max = r.J_max * cs.w * cs.h;
    return r;
}

} // namespace nanotrap::wiremodel
