#include "nanotrap/casimir.hpp"

#include <cmath>
#include <mutex>
#include <stdexcept>

#include "nanotrap/bessel.hpp"
#include "nanotrap/constants.hpp"
#include "nanotrap/quadrature.hpp"

namespace nanotrap::casimir {

namespace {

using constants::pi;

double cp_prefactor(double alpha0) {
    return constants::hbar * constants::c * alpha0 / (2.0 * pi);
}

struct ReflPair {
    double rTE;
    double rTM;
};

// Layered reflection coefficients at imaginary frequency in the (p, μ)
// variables, p_i = p sqrt(1 + μ²(ε_i - 1)).
ReflPair reflection(double eps1, double eps2, double b_over_z, double p, double mu) {
    const double mu2 = mu * mu;
    const double p1 = p * std::sqrt(1.0 + mu2 * (eps1 - 1.0));
    const double p2 = p * std::sqrt(1.0 + mu2 * (eps2 - 1.0));
    const double rTE1 = (p - p1) / (p + p1);
    const double rTE12 = (p1 - p2) / (p1 + p2);
    const double q1 = p1 / eps1, q2 = p2 / eps2;
    const double rTM1 = (p - q1) / (p + q1);
    const double rTM12 = (q1 - q2) / (q1 + q2);
    const double ex = std::exp(-2.0 * p1 * b_over_z);
    return {(rTE1 + rTE12 * ex) / (1.0 + rTE1 * rTE12 * ex),
            (rTM1 + rTM12 * ex) / (1.0 + rTM1 * rTM12 * ex)};
}

} // namespace

double planar_F(double eps1, double eps2, double b_over_z, double rel_tol) {
    if (eps1 < 1.0 || eps2 < 1.0) throw std::domain_error("planar_F: eps must be >= 1");
    if (!(b_over_z > 0.0)) throw std::domain_error("planar_F: b/z must be > 0");
    auto inner = [&](double p) {
        // even in μ
        return 2.0 * quad::integrate(
                         [&](double mu) {
                             auto [rTE, rTM] = reflection(eps1, eps2, b_over_z, p, mu);
                             const double m2 = 0.5 * mu * mu;
                             return (1.0 - m2) * rTM - m2 * rTE;
                         },
                         0.0, 1.0, {rel_tol * 0.1, 1e-14, 36});
    };
    return quad::integrate([&](double p) { return p * p * p * std::exp(-2.0 * p) * inner(p); },
                           0.0, 22.0, {rel_tol, 1e-14, 36});
}

double planar_F_single(double eps, double rel_tol) {
    return planar_F(eps, eps, 1.0, rel_tol);
}

double planar_U(double z, const WaferStack& stack, double alpha0) {
    if (!(z > 0.0)) throw std::domain_error("planar_U: z must be > 0");
    stack.validate();
    double F;
    if (stack.layers.empty()) {
        F = planar_F_single(stack.substrate_epsilon);
    } else if (stack.layers.size() == 1) {
        F = planar_F(stack.layers[0].epsilon, stack.substrate_epsilon, stack.layers[0].thickness / z);
    } else {
        throw std::invalid_argument("planar_U: only one layer over a substrate is supported");
    }
    return -cp_prefactor(alpha0) * F / (z * z * z * z);
}

namespace {

// Batched evaluation of the mode sum: one log-x composite Gauss grid; at
// each node a single downward Miller pass gives I_m(tx) for every order and
// upward recurrences give K_m(tx), K_m(x). The exponential scalings combine
// into exp(-2x(1-t)).
double cylinder_sum(double t, int panels) {
    const double xmax = 24.0 / (1.0 - t);
    const double xmin = 1e-3;
    // orders beyond this carry e^{-2(1-t)m} < e^{-42}
    const int mmax = static_cast<int>(21.0 / (1.0 - t)) + 12;

    // 16-point Gauss-Legendre nodes on [0,1]
    static const double gx[8] = {0.0052995325041750, 0.0277124884633837, 0.0671843988060841,
                                 0.1222977958224985, 0.1910618777986781, 0.2709916111713863,
                                 0.3591982246103705, 0.4524937450811813};
    static const double gw[8] = {0.0135762297058770, 0.0311267619693239, 0.0475792558412464,
                                 0.0623144856277669, 0.0747979944082884, 0.0845782596975013,
                                 0.0913017075224618, 0.0947253052275343};

    std::vector<double> Iu, Ku, Kx;
    std::vector<double> term(static_cast<std::size_t>(mmax) + 1, 0.0);
    const double slo = std::log(xmin), shi = std::log(xmax);
    for (int pnl = 0; pnl < panels; ++pnl) {
        const double a = slo + (shi - slo) * pnl / panels;
        const double b = slo + (shi - slo) * (pnl + 1) / panels;
        for (int node = 0; node < 16; ++node) {
            const double frac = node < 8 ? gx[node] : 1.0 - gx[15 - node];
            const double wgt = (node < 8 ? gw[node] : gw[15 - node]) * (b - a);
            const double s = a + (b - a) * frac;
            const double x = std::exp(s);
            const double u = t * x;
            const double damp = std::exp(-2.0 * x * (1.0 - t));
            if (damp == 0.0) continue;
            bessel::besseli_scaled_array(mmax, u, Iu);
            bessel::besselk_scaled_array(mmax, u, Ku);
            bessel::besselk_scaled_array(mmax, x, Kx);
            const double wx = wgt * x;  // ds measure: dx = x ds
            const double lndamp = -2.0 * x * (1.0 - t);
            for (int m = 0; m <= mmax; ++m) {
                const double KeU = Ku[m];
                const double KeX = Kx[m];
                if (!std::isfinite(KeU) || !std::isfinite(KeX)) break;
                const double Ku1 = (m == 0) ? Ku[1] : Ku[m - 1];
                const double Kx1 = (m == 0) ? Kx[1] : Kx[m - 1];
                const double lnKeU = std::log(KeU);
                const double lnKeX2 = 2.0 * std::log(KeX);
                // rIK·K²·damp, with I/K ratios via logs to dodge overflow
                const double T1 = (Iu[m] > 0.0)
                                      ? std::exp(std::log(Iu[m]) - lnKeU + lnKeX2 + lndamp)
                                      : 0.0;
                // (rIK - rIK')·K²·damp = K²·damp/(u·K_m(u)·(-K'_m(u))) by the
                // Wronskian I K' - I' K = -1/u
                const double Kup_neg = Ku1 + (m / u) * KeU;  // = -K'_m(u), scaled
                const double T2 = std::exp(-std::log(u) - lnKeU - std::log(Kup_neg) + lnKeX2 + lndamp);
                const double kratio = Kx1 / KeX + m / x;  // = -K'_m(x)/K_m(x)
                const double mm = static_cast<double>(m) * m;
                const double g = x * (T1 * x * x + 0.5 * T2 * (mm + x * x * kratio * kratio));
                term[static_cast<std::size_t>(m)] += wx * g;
                if (g == 0.0 && m > 3) break;
            }
        }
    }
    double total = term[0];
    for (int m = 1; m <= mmax; ++m) total += 2.0 * term[static_cast<std::size_t>(m)];
    return total;
}

} // namespace

double cylinder_F(double a_over_R, double rel_tol) {
    const double t = a_over_R;
    if (!(t > 0.0 && t < 1.0)) throw std::domain_error("cylinder_F: a/R must be in (0,1)");
    int panels = 22 + static_cast<int>(4.0 * std::log10(1.0 / (1.0 - t)));
    double coarse = cylinder_sum(t, panels);
    double fine = cylinder_sum(t, panels + panels / 2);
    // one refinement if the composite grid is not yet converged
    if (std::abs(fine - coarse) > 0.3 * rel_tol * std::abs(fine)) {
        coarse = fine;
        fine = cylinder_sum(t, panels * 3);
    }
    const double om = 1.0 - t;
    return om * om * om * om * fine;
}

double cylinder_U(double R, double a, double alpha0) {
    if (!(R > a)) throw std::domain_error("cylinder_U: R must exceed the radius");
    const double gap = R - a;
    return -cp_prefactor(alpha0) * CylinderCP::F_cached(a / R) / (gap * gap * gap * gap);
}

PlanarCP::PlanarCP(WaferStack stack, double alpha0, double wafer_top)
    : stack_(std::move(stack)), alpha0_(alpha0), wafer_top_(wafer_top) {
    stack_.validate();
    if (stack_.layers.size() > 1)
        throw std::invalid_argument("PlanarCP: only one layer over a substrate is supported");
    if (stack_.layers.empty()) {
        eps1_ = eps2_ = stack_.substrate_epsilon;
        b_ = 0.0;
        f_shallow_ = f_deep_ = planar_F_single(eps2_);
        return;
    }
    eps1_ = stack_.layers[0].epsilon;
    eps2_ = stack_.substrate_epsilon;
    b_ = stack_.layers[0].thickness;
    f_deep_ = planar_F_single(eps2_);     // z >> b
    f_shallow_ = planar_F_single(eps1_);  // z << b
    const int n = 140;
    std::vector<double> xs(n), ys(n);
    const double lo = std::log(1e-3), hi = std::log(1e3);
    for (int i = 0; i < n; ++i) {
        const double s = lo + (hi - lo) * i / (n - 1);
        xs[i] = s;
        ys[i] = planar_F(eps1_, eps2_, std::exp(s));
    }
    f_.build(std::move(xs), std::move(ys));
}

double PlanarCP::F_at(double z) const {
    if (b_ == 0.0) return f_deep_;
    const double boz = b_ / z;
    if (boz <= 1e-3) return f_deep_;
    if (boz >= 1e3) return f_shallow_;
    return f_(std::log(boz));
}

double PlanarCP::potential(const Vec3& r) const {
    const double z = r.z - wafer_top_;
    if (z <= 0.0) throw std::domain_error("PlanarCP: point inside the wafer");
    return -cp_prefactor(alpha0_) * F_at(z) / (z * z * z * z);
}

namespace {

const CubicSpline& cylinder_table() {
    static CubicSpline table = [] {
        std::vector<double> xs, ys;
        // log-spaced below 0.1, linear up to 0.98
        for (double t = 1e-3; t < 0.1; t *= 1.35) xs.push_back(t);
        for (double t = 0.1; t <= 0.9801; t += 0.02) xs.push_back(t);
        ys.reserve(xs.size());
        for (double t : xs) ys.push_back(cylinder_F(t, 3e-4));
        return CubicSpline(std::move(xs), std::move(ys));
    }();
    return table;
}

std::once_flag cyl_once;

} // namespace

double CylinderCP::F_cached(double a_over_R) {
    std::call_once(cyl_once, [] { cylinder_table(); });
    const CubicSpline& tab = cylinder_table();
    if (a_over_R < tab.front_x()) return -2.0 / (3.0 * std::log(a_over_R));
    if (a_over_R > tab.back_x()) {
        // bridge to the proximity limit F(1) = 3/4
        const double f0 = tab(tab.back_x());
        const double w = (a_over_R - tab.back_x()) / (1.0 - tab.back_x());
        return f0 + (0.75 - f0) * w;
    }
    return tab(a_over_R);
}

CylinderCP::CylinderCP(double a, Vec3 axis_point, Vec3 axis_dir, double alpha0)
    : a_(a), p0_(axis_point), dir_(axis_dir.normalized()), alpha0_(alpha0) {
    if (!(a > 0.0)) throw std::invalid_argument("CylinderCP: radius must be > 0");
}

double CylinderCP::radial_distance(const Vec3& r) const {
    const Vec3 d = r - p0_;
    return (d - dir_ * d.dot(dir_)).norm();
}

bool CylinderCP::inside_body(const Vec3& r) const { return radial_distance(r) <= a_; }

double CylinderCP::potential(const Vec3& r) const {
    const double R = radial_distance(r);
    if (R <= a_) throw std::domain_error("CylinderCP: point inside the wire");
    const double gap = R - a_;
    return -cp_prefactor(alpha0_) * F_cached(a_ / R) / (gap * gap * gap * gap);
}

} // namespace nanotrap::casimir
