#include "nanotrap/tunneling.hpp"

#include <cmath>
#include <stdexcept>

#include "nanotrap/constants.hpp"
#include "nanotrap/quadrature.hpp"

namespace nanotrap::tunneling {

using constants::hbar;

namespace {

// integral of sqrt(max(a + b t, 0)) dt on [0,1]: exact per linear segment
double sqrt_linear_integral(double a, double b) {
    const double f0 = std::max(a, 0.0);
    const double f1 = std::max(a + b, 0.0);
    if (f0 == 0.0 && f1 == 0.0) return 0.0;
    if (std::abs(b) < 1e-300) return std::sqrt(f0);
    // antiderivative (2/3b)(a+bt)^{3/2} between the clamped crossings
    double t0 = 0.0, t1 = 1.0;
    if (f0 == 0.0) t0 = -a / b;
    if (f1 == 0.0) t1 = -a / b;
    const double g1 = std::pow(std::max(a + b * t1, 0.0), 1.5);
    const double g0 = std::pow(std::max(a + b * t0, 0.0), 1.5);
    return (2.0 / (3.0 * b)) * (g1 - g0);
}

} // namespace

BarrierFn make_barrier_fn(const trap::TrapSystem& sys, double mu_abs, double z_floor) {
    return [&sys, mu_abs, z_floor](double x, double y, double z_start) -> ColumnBarrier {
        auto u_at = [&](double z) -> double {
            try {
                return sys.potential({x, y, z});
            } catch (const std::domain_error&) {
                return -1e30;  // inside a body: far below mu
            }
        };
        const double step = 5e-9;
        // trap-side turning point: where U rises through mu going down. In
        // transverse-tail columns U(z_start) already exceeds mu; the atom
        // enters the barrier at its own position.
        double z2 = -1.0;
        double zprev = z_start;
        double uprev = u_at(zprev);
        if (uprev >= mu_abs) {
            z2 = z_start;
        } else {
            for (double z = z_start - step; z > z_floor; z -= step) {
                const double u = u_at(z);
                if (uprev < mu_abs && u >= mu_abs) {
                    double a = z, b = zprev;  // u(a) >= mu, u(b) < mu
                    for (int it = 0; it < 80 && (b - a) > 1e-12; ++it) {
                        const double m = 0.5 * (a + b);
                        (u_at(m) >= mu_abs) ? a = m : b = m;
                    }
                    z2 = 0.5 * (a + b);
                    break;
                }
                zprev = z;
                uprev = u;
            }
        }
        if (z2 < 0.0) return {0.0, true};  // no barrier below the well

        // continue to the outer turning point (U falls back through mu)
        double z1 = -1.0;
        zprev = z2;
        for (double z = z2 - step; z > z_floor; z -= step) {
            const double u = u_at(z);
            if (u < mu_abs) {
                double a = z, b = zprev;  // u(a) < mu, u(b) >= mu
                for (int it = 0; it < 80 && (b - a) > 1e-12; ++it) {
                    const double m = 0.5 * (a + b);
                    (u_at(m) < mu_abs) ? a = m : b = m;
                }
                z1 = 0.5 * (a + b);
                break;
            }
            zprev = z;
        }
        if (z1 < 0.0) z1 = z_floor;  // barrier extends to the floor

        const double twom = 2.0 * sys.species.mass;
        const double action = quad::integrate_sqrt_endpoints(
            [&](double z) { return std::sqrt(std::max(0.0, twom * (u_at(z) - mu_abs))); }, z1, z2,
            {1e-6, 1e-40, 36});
        return {action, false};
    };
}

Result surface_tunneling_rate(const trap::PotentialGrid& U, const gpsolver::GPGroundState& state,
                              double mu_abs, const AtomSpecies& species,
                              const BarrierFn* barrier) {
    if (U.nx != state.nx || U.ny != state.ny || U.nz != state.nz)
        throw std::invalid_argument("surface_tunneling_rate: grid mismatch");
    Result out;
    out.nx = U.nx;
    out.ny = U.ny;
    out.weighted_map.assign(static_cast<std::size_t>(U.nx) * U.ny, 0.0);

    const double dz = U.spacing.z;
    const double dA = U.spacing.x * U.spacing.y;
    const double m = species.mass;

    // total atom number for the column weights
    double Ntot = 0.0;
    for (double v : state.psi) Ntot += v * v;
    Ntot *= state.cell_volume();
    if (!(Ntot > 0.0)) throw std::runtime_error("surface_tunneling_rate: empty state");

    bool any_bound = false;
    for (int ix = 0; ix < U.nx; ++ix) {
        for (int iy = 0; iy < U.ny; ++iy) {
            // column density and its peak
            double col = 0.0;
            int iz_pk = -1;
            double pk = 0.0;
            for (int iz = 0; iz < U.nz; ++iz) {
                const double v = state.psi[state.idx(ix, iy, iz)];
                col += v * v;
                if (v * v > pk) {
                    pk = v * v;
                    iz_pk = iz;
                }
            }
            const double weight = col * dz * dA / Ntot;
            if (weight < 1e-12 || iz_pk < 0) continue;
            ++out.contributing_columns;
            any_bound = true;

            auto u_at = [&](int iz) { return U.U[U.idx(ix, iy, iz)]; };

            // well edges around the density peak where U crosses mu
            int ja = iz_pk;
            while (ja > 0 && !U.excluded[U.idx(ix, iy, ja - 1)] && u_at(ja - 1) < mu_abs) --ja;
            int jb = iz_pk;
            while (jb + 1 < U.nz && u_at(jb + 1) < mu_abs) ++jb;

            // <k_z^2> inside the well from the wavefunction derivative
            double num = 0.0, den = 0.0;
            for (int iz = std::max(1, ja); iz <= std::min(U.nz - 2, jb); ++iz) {
                const double dpsi = (state.psi[state.idx(ix, iy, iz + 1)] -
                                     state.psi[state.idx(ix, iy, iz - 1)]) /
                                    (2.0 * dz);
                const double v = state.psi[state.idx(ix, iy, iz)];
                num += dpsi * dpsi;
                den += v * v;
            }
            if (den <= 0.0) continue;
            const double kz2 = num / den;
            const double L = dz * std::max(1, jb - ja);
            const double omega_att = hbar * std::sqrt(kz2) / (2.0 * m * L);

            // barrier below the well
            double action = 0.0;  // ∫ sqrt(2m(U-mu)) dz
            bool open = true;     // stays true when no barrier exists
            if (barrier) {
                const double z_start = U.origin.z + ja * U.spacing.z;
                const ColumnBarrier cb =
                    (*barrier)(U.origin.x + ix * U.spacing.x, U.origin.y + iy * U.spacing.y,
                               z_start);
                action = cb.action;
                open = cb.open;
            } else {
                bool exited = false;
                for (int iz = ja; iz > 0 && !exited; --iz) {
                    const double ua = u_at(iz);
                    const double ub = u_at(iz - 1);
                    if (U.excluded[U.idx(ix, iy, iz - 1)]) {
                        // fell into the masked surface region
                        action += sqrt_linear_integral(2.0 * m * (ua - mu_abs), 0.0) * dz;
                        exited = true;
                        break;
                    }
                    if (ua > mu_abs) open = false;
                    if (ua > mu_abs && ub < mu_abs) {
                        // partial segment down to the crossing
                        action += sqrt_linear_integral(2.0 * m * (ua - mu_abs),
                                                       2.0 * m * (ub - ua)) *
                                  dz;
                        exited = true;
                        break;
                    }
                    action +=
                        sqrt_linear_integral(2.0 * m * (ua - mu_abs), 2.0 * m * (ub - ua)) * dz;
                }
            }
            double rate;
            if (open && action == 0.0) {
                rate = weight * omega_att;  // no barrier: full attempt rate
                ++out.open_columns;
                out.open_weight += weight;
            } else {
                rate = weight * omega_att * std::exp(-2.0 * action / hbar);
            }
            out.weighted_map[static_cast<std::size_t>(ix) * U.ny + iy] = rate;
            out.gamma += rate;
        }
    }
    if (!any_bound) throw std::runtime_error("surface_tunneling_rate: trap already open");
    return out;
}

} // namespace nanotrap::tunneling
