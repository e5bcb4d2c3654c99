#include "nanotrap/noise.hpp"

#include <cmath>
#include <stdexcept>

#include "nanotrap/constants.hpp"

namespace nanotrap::lossmodel {

using constants::hbar;
using constants::kB;
using constants::mu0;
using constants::muB;
using constants::pi;

namespace {

struct Cell {
    Vec3 lo, hi;
};

double dist_to_cell(const Vec3& p, const Cell& c) {
    const double dx = std::max({c.lo.x - p.x, 0.0, p.x - c.hi.x});
    const double dy = std::max({c.lo.y - p.y, 0.0, p.y - c.hi.y});
    const double dz = std::max({c.lo.z - p.z, 0.0, p.z - c.hi.z});
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

void accumulate_gauss2(const Vec3& x1, const Vec3& x2, const Cell& c, Tensor3& X) {
    static const double g = 0.5 / std::sqrt(3.0);
    const Vec3 mid = (c.lo + c.hi) * 0.5;
    const Vec3 half = (c.hi - c.lo) * 0.5;
    const double vol = (c.hi.x - c.lo.x) * (c.hi.y - c.lo.y) * (c.hi.z - c.lo.z);
    const double w = vol / 8.0;
    for (int sx = -1; sx <= 1; sx += 2)
        for (int sy = -1; sy <= 1; sy += 2)
            for (int sz = -1; sz <= 1; sz += 2) {
                const Vec3 p{mid.x + 2.0 * g * half.x * sx, mid.y + 2.0 * g * half.y * sy,
                             mid.z + 2.0 * g * half.z * sz};
                const Vec3 r1 = x1 - p;
                const Vec3 r2 = x2 - p;
                const double d1 = r1.norm(), d2 = r2.norm();
                const double den = 0.5 * w / (d1 * d1 * d1 * d2 * d2 * d2);
                const double a1[3] = {r1.x, r1.y, r1.z};
                const double a2[3] = {r2.x, r2.y, r2.z};
                for (int j = 0; j < 3; ++j)
                    for (int k = 0; k < 3; ++k) X[j][k] += den * a1[j] * a2[k];
            }
}

void integrate_cell(const Vec3& x1, const Vec3& x2, const Cell& c, Tensor3& X, int depth,
                    int max_depth) {
    const Vec3 ext = c.hi - c.lo;
    const double diam = ext.norm();
    const double d = std::min(dist_to_cell(x1, c), dist_to_cell(x2, c));
    if (depth >= max_depth || diam <= 0.2 * d) {
        accumulate_gauss2(x1, x2, c, X);
        return;
    }
    // split the longest edge
    int axis = 0;
    if (ext.y > ext.x && ext.y >= ext.z) axis = 1;
    else if (ext.z > ext.x && ext.z >= ext.y) axis = 2;
    Cell a = c, b = c;
    if (axis == 0) a.hi.x = b.lo.x = 0.5 * (c.lo.x + c.hi.x);
    else if (axis == 1) a.hi.y = b.lo.y = 0.5 * (c.lo.y + c.hi.y);
    else a.hi.z = b.lo.z = 0.5 * (c.lo.z + c.hi.z);
    integrate_cell(x1, x2, a, X, depth + 1, max_depth);
    integrate_cell(x1, x2, b, X, depth + 1, max_depth);
}

} // namespace

Tensor3 geometric_factor(const Vec3& x1, const Vec3& x2, const NoiseGeometry& geom,
                         const QuadratureOptions& opt) {
    if (geom.inside(x1) || geom.inside(x2))
        throw std::domain_error("geometric_factor: evaluation point inside the conductor");
    Tensor3 X{};
    const int extra = 4 + static_cast<int>(std::lround(std::log2(1.0 / opt.rel_tol) / 2.0));
    for (const auto& box : geom.boxes) {
        Cell c{box.lo, box.hi};
        integrate_cell(x1, x2, c, X, 0, opt.max_subdivision + extra);
    }
    return X;
}

double skin_depth(double rho, double omega) { return std::sqrt(2.0 * rho / (mu0 * omega)); }

NoiseCorrelation noise_correlation(const Vec3& x1, const Vec3& x2, const NoiseGeometry& geom,
                                   double larmor, const QuadratureOptions& opt) {
    NoiseCorrelation out;
    const Tensor3 X = geometric_factor(x1, x2, geom, opt);
    const double tr = X[0][0] + X[1][1] + X[2][2];
    const double pref = kB * geom.T * mu0 * mu0 / (4.0 * pi * pi * geom.rho);
    for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) out.S[j][k] = pref * ((j == k ? tr : 0.0) - X[j][k]);
    // quasi-static validity: atom-conductor distance small vs the skin depth
    const double delta = skin_depth(geom.rho, larmor);
    double dmin = 1e300;
    for (const auto& b : geom.boxes) {
        dmin = std::min(dmin, dist_to_cell(x1, {b.lo, b.hi}));
        dmin = std::min(dmin, dist_to_cell(x2, {b.lo, b.hi}));
    }
    out.skin_depth_warning = dmin > 0.1 * delta;
    return out;
}

namespace {

void orthonormal_frame(const Vec3& axis, Vec3& e1, Vec3& e2) {
    const Vec3 n = axis.normalized();
    const Vec3 trial = std::abs(n.x) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
    e1 = (trial - n * trial.dot(n)).normalized();
    e2 = n.cross(e1);
}

double project(const Tensor3& S, const Vec3& u, const Vec3& v) {
    const double a[3] = {u.x, u.y, u.z};
    const double b[3] = {v.x, v.y, v.z};
    double s = 0.0;
    for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) s += a[j] * S[j][k] * b[k];
    return s;
}

} // namespace

ThermalRateResult thermal_spinflip_rate(const Vec3& x, const NoiseGeometry& geom,
                                        const AtomSpecies& species, const Vec3& B_axis,
                                        const QuadratureOptions& opt) {
    ThermalRateResult out;
    if (species.mF <= -species.F + 1e-12) {
        out.no_lower_state = true;
        return out;
    }
    // |<F, mF-1| F_- |F, mF>|² = F(F+1) - mF(mF-1); each perpendicular axis
    // carries a quarter of it
    const double c2 = species.F * (species.F + 1.0) - species.mF * (species.mF - 1.0);
    Vec3 e1, e2;
    orthonormal_frame(B_axis, e1, e2);
    const NoiseCorrelation nc = noise_correlation(x, x, geom, 2.0 * pi * 1e6, opt);
    const double s_perp = project(nc.S, e1, e1) + project(nc.S, e2, e2);
    const double pref = muB * muB * species.gF * species.gF / (hbar * hbar);
    out.rate = pref * 0.25 * c2 * s_perp;
    return out;
}

double majorana_rate(double omega_r, double B0, const AtomSpecies& species,
                     MajoranaFlags* flags) {
    const double muA = std::abs(species.magnetic_moment());
    if (flags) {
        const double larmor = muA * B0 / hbar;
        flags->larmor_ok = larmor > 10.0 * omega_r;
        flags->field_ok = B0 >= 5e-6;
    }
    return 0.5 * pi * omega_r * std::exp(-(2.0 * muA * B0 + hbar * omega_r) / (2.0 * hbar * omega_r));
}

double ioffe_for_lifetime(double tau, double omega_r, const AtomSpecies& species) {
    if (!(tau > 0.0)) throw std::domain_error("ioffe_for_lifetime: tau must be > 0");
    const double muA = std::abs(species.magnetic_moment());
    const double lg = std::log(0.5 * pi * omega_r * tau);
    const double B0 = hbar * omega_r * (2.0 * lg - 1.0) / (2.0 * muA);
    if (!(B0 > 0.0))
        throw std::domain_error("ioffe_for_lifetime: lifetime unattainable at this frequency");
    return B0;
}

double decoherence_rate(const Vec3& x1, const Vec3& x2, const NoiseGeometry& geom,
                        const AtomSpecies& species, const Vec3& quant_axis,
                        const QuadratureOptions& opt) {
    const Vec3 n = quant_axis.normalized();
    const double s11 = project(noise_correlation(x1, x1, geom, 2 * pi * 1e6, opt).S, n, n);
    const double s22 = project(noise_correlation(x2, x2, geom, 2 * pi * 1e6, opt).S, n, n);
    const double s12 = project(noise_correlation(x1, x2, geom, 2 * pi * 1e6, opt).S, n, n);
    const double pref = species.mF * species.mF * species.gF * species.gF * muB * muB /
                        (2.0 * hbar * hbar);
    return pref * (s11 + s22 - 2.0 * s12);
}

} // namespace nanotrap::lossmodel
