#include "nanotrap/trap.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

#include "nanotrap/bessel.hpp"
#include "nanotrap/constants.hpp"
#include "nanotrap/util.hpp"

namespace nanotrap::trap {

using constants::g_earth;
using constants::hbar;

double CorrugationModes::bx(double x, double rho) const {
    double b = 0.0;
    for (const Mode& m : modes) {
        const double k1 = bessel::k1(m.k * rho);
        if (k1 == 0.0) continue;
        b += m.amp * k1 * std::cos(m.k * x + m.phase);
    }
    return b;
}

double TrapSystem::potential(const Vec3& r) const {
    Vec3 B = field(r);
    if (corrugation && !corrugation->empty()) {
        const double rho = std::hypot(r.y, r.z - wire_axis_z);
        B.x += corrugation->bx(r.x, rho);
    }
    double U = species.magnetic_moment() * B.norm();
    if (gravity) U += species.mass * g_earth * r.z;
    if (cp) U += cp->potential(r);
    return U;
}

PotentialGrid fill_grid(const TrapSystem& sys, const GridExtent& ext, double cp_floor) {
    PotentialGrid g;
    g.origin = ext.lo;
    g.nx = ext.nx;
    g.ny = ext.ny;
    g.nz = ext.nz;
    g.spacing = {(ext.hi.x - ext.lo.x) / (ext.nx - 1), (ext.hi.y - ext.lo.y) / (ext.ny - 1),
                 (ext.hi.z - ext.lo.z) / (ext.nz - 1)};
    g.U.assign(g.size(), 0.0);
    g.excluded.assign(g.size(), 0);
    const bool rough = sys.corrugation && !sys.corrugation->empty();
    // per-(y,z) line evaluation caches the K1(k rho) mode amplitudes
    util::parallel_for(static_cast<std::size_t>(g.ny) * g.nz, [&](std::size_t line) {
        const int iy = static_cast<int>(line / g.nz);
        const int iz = static_cast<int>(line % g.nz);
        thread_local std::vector<double> camp, cphase, ck;
        if (rough) {
            const Vec3 p0 = g.point(0, iy, iz);
            const double rho = std::hypot(p0.y, p0.z - sys.wire_axis_z);
            const auto& modes = sys.corrugation->modes;
            camp.clear();
            cphase.clear();
            ck.clear();
            for (const auto& m : modes) {
                const double k1 = bessel::k1(m.k * rho);
                if (k1 == 0.0) continue;
                camp.push_back(m.amp * k1);
                cphase.push_back(m.phase);
                ck.push_back(m.k);
            }
        }
        for (int ix = 0; ix < g.nx; ++ix) {
            const Vec3 r = g.point(ix, iy, iz);
            const std::size_t id = g.idx(ix, iy, iz);
            if (sys.cp && sys.cp->inside_body(r)) {
                g.U[id] = -1e30;
                g.excluded[id] = 1;
                continue;
            }
            double u;
            try {
                Vec3 B = sys.field(r);
                if (rough)
                    for (std::size_t n = 0; n < camp.size(); ++n)
                        B.x += camp[n] * std::cos(ck[n] * r.x + cphase[n]);
                u = sys.species.magnetic_moment() * B.norm();
                if (sys.gravity) u += sys.species.mass * g_earth * r.z;
                if (sys.cp) u += sys.cp->potential(r);
            } catch (const std::domain_error&) {
                g.U[id] = -1e30;
                g.excluded[id] = 1;
                continue;
            }
            if (u < cp_floor) {
                g.U[id] = -1e30;
                g.excluded[id] = 1;
            } else {
                g.U[id] = u;
            }
        }
    });
    return g;
}

MinimizeResult find_minimum(const TrapSystem& sys, Vec3 seed, double scale) {
    Vec3 r = seed;
    double U = sys.potential(r);
    double h = scale;
    // cyclic coordinate descent with step adaptation
    for (int round = 0; round < 400 && h > 1e-13; ++round) {
        bool moved = false;
        for (int axis = 0; axis < 3; ++axis) {
            Vec3 dir{axis == 0 ? 1.0 : 0.0, axis == 1 ? 1.0 : 0.0, axis == 2 ? 1.0 : 0.0};
            for (double sgn : {+1.0, -1.0}) {
                Vec3 cand = r + dir * (sgn * h);
                double Uc;
                try {
                    Uc = sys.potential(cand);
                } catch (const std::domain_error&) {
                    continue;
                }
                if (Uc < U) {
                    r = cand;
                    U = Uc;
                    moved = true;
                }
            }
        }
        if (!moved) h *= 0.5;
    }
    // Newton refinement on central differences
    const double fd = std::max(1e-9, scale * 1e-3);
    for (int it = 0; it < 40; ++it) {
        double grad[3], hess[3][3];
        auto at = [&](double dx, double dy, double dz) {
            return sys.potential({r.x + dx, r.y + dy, r.z + dz});
        };
        double f0;
        try {
            f0 = at(0, 0, 0);
            const double fpx = at(fd, 0, 0), fmx = at(-fd, 0, 0);
            const double fpy = at(0, fd, 0), fmy = at(0, -fd, 0);
            const double fpz = at(0, 0, fd), fmz = at(0, 0, -fd);
            grad[0] = (fpx - fmx) / (2 * fd);
            grad[1] = (fpy - fmy) / (2 * fd);
            grad[2] = (fpz - fmz) / (2 * fd);
            hess[0][0] = (fpx - 2 * f0 + fmx) / (fd * fd);
            hess[1][1] = (fpy - 2 * f0 + fmy) / (fd * fd);
            hess[2][2] = (fpz - 2 * f0 + fmz) / (fd * fd);
            hess[0][1] = hess[1][0] =
                (at(fd, fd, 0) - at(fd, -fd, 0) - at(-fd, fd, 0) + at(-fd, -fd, 0)) / (4 * fd * fd);
            hess[0][2] = hess[2][0] =
                (at(fd, 0, fd) - at(fd, 0, -fd) - at(-fd, 0, fd) + at(-fd, 0, -fd)) / (4 * fd * fd);
            hess[1][2] = hess[2][1] =
                (at(0, fd, fd) - at(0, fd, -fd) - at(0, -fd, fd) + at(0, -fd, -fd)) / (4 * fd * fd);
        } catch (const std::domain_error&) {
            break;
        }
        // solve H s = -g (Cramer)
        const double det = hess[0][0] * (hess[1][1] * hess[2][2] - hess[1][2] * hess[2][1]) -
                           hess[0][1] * (hess[1][0] * hess[2][2] - hess[1][2] * hess[2][0]) +
                           hess[0][2] * (hess[1][0] * hess[2][1] - hess[1][1] * hess[2][0]);
        if (det == 0.0) break;
        auto solve3 = [&](int col) {
            double a[3][3];
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) a[i][j] = hess[i][j];
            for (int i = 0; i < 3; ++i) a[i][col] = -grad[i];
            return (a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
                    a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
                    a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])) /
                   det;
        };
        Vec3 step{solve3(0), solve3(1), solve3(2)};
        const double maxstep = 0.25 * scale;
        const double sn = step.norm();
        if (sn > maxstep) step = step * (maxstep / sn);
        Vec3 cand = r + step;
        double Uc;
        try {
            Uc = sys.potential(cand);
        } catch (const std::domain_error&) {
            break;
        }
        if (Uc <= U) {
            r = cand;
            U = Uc;
        }
        if (sn < 1e-13) break;
    }
    return {r, U};
}

namespace {

// Jacobi eigen decomposition of a symmetric 3x3 matrix.
void eigen3(double a[3][3], double eval[3], Vec3 evec[3]) {
    double v[3][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    for (int sweep = 0; sweep < 60; ++sweep) {
        double off = std::abs(a[0][1]) + std::abs(a[0][2]) + std::abs(a[1][2]);
        if (off == 0.0) break;
        for (int p = 0; p < 2; ++p)
            for (int q = p + 1; q < 3; ++q) {
                if (std::abs(a[p][q]) < 1e-300) continue;
                const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                const double tsign = theta >= 0 ? 1.0 : -1.0;
                const double tt = tsign / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(tt * tt + 1.0);
                const double s = tt * c;
                double apq = a[p][q];
                const double app = a[p][p], aqq = a[q][q];
                a[p][p] = app - tt * apq;
                a[q][q] = aqq + tt * apq;
                a[p][q] = a[q][p] = 0.0;
                const int r = 3 - p - q;
                const double apr = a[p][r], aqr = a[q][r];
                a[p][r] = a[r][p] = c * apr - s * aqr;
                a[q][r] = a[r][q] = s * apr + c * aqr;
                for (int i = 0; i < 3; ++i) {
                    const double vip = v[i][p], viq = v[i][q];
                    v[i][p] = c * vip - s * viq;
                    v[i][q] = s * vip + c * viq;
                }
            }
    }
    for (int i = 0; i < 3; ++i) {
        eval[i] = a[i][i];
        evec[i] = {v[0][i], v[1][i], v[2][i]};
    }
}

} // namespace

void principal_frequencies(const TrapSystem& sys, const Vec3& r_min, double step,
                           TrapCharacterization& out) {
    auto at = [&](double dx, double dy, double dz) {
        return sys.potential({r_min.x + dx, r_min.y + dy, r_min.z + dz});
    };
    const double h = step;
    const double f0 = at(0, 0, 0);
    double H[3][3];
    H[0][0] = (at(h, 0, 0) - 2 * f0 + at(-h, 0, 0)) / (h * h);
    H[1][1] = (at(0, h, 0) - 2 * f0 + at(0, -h, 0)) / (h * h);
    H[2][2] = (at(0, 0, h) - 2 * f0 + at(0, 0, -h)) / (h * h);
    H[0][1] = H[1][0] = (at(h, h, 0) - at(h, -h, 0) - at(-h, h, 0) + at(-h, -h, 0)) / (4 * h * h);
    H[0][2] = H[2][0] = (at(h, 0, h) - at(h, 0, -h) - at(-h, 0, h) + at(-h, 0, -h)) / (4 * h * h);
    H[1][2] = H[2][1] = (at(0, h, h) - at(0, h, -h) - at(0, -h, h) + at(0, -h, -h)) / (4 * h * h);

    double lam[3];
    Vec3 vec[3];
    eigen3(H, lam, vec);
    // sort descending
    int order[3] = {0, 1, 2};
    std::sort(order, order + 3, [&](int a, int b) { return lam[a] > lam[b]; });
    const double scale_l = std::abs(lam[order[0]]);
    for (int i = 0; i < 3; ++i) {
        const double l = lam[order[i]];
        if (l < -1e-6 * scale_l)
            throw std::runtime_error("principal_frequencies: negative curvature (saddle point)");
        out.omega[i] = std::sqrt(std::max(0.0, l) / sys.species.mass);
        out.axes[i] = vec[order[i]];
    }
    out.f_radial = std::sqrt(out.omega[0] * out.omega[1]) / (2.0 * constants::pi);
    out.f_long = out.omega[2] / (2.0 * constants::pi);
}

namespace {

// Does the basin {U <= E} connected to the start cell touch the
// surface-adjacent set? BFS over 6-neighbours.
bool basin_escapes(const PotentialGrid& g, std::size_t start, double E,
                   const std::vector<std::uint8_t>& surface, bool* hit_boundary,
                   std::vector<std::uint8_t>& visited, std::vector<std::size_t>& queue) {
    std::fill(visited.begin(), visited.end(), 0);
    queue.clear();
    queue.push_back(start);
    visited[start] = 1;
    bool boundary = false;
    const int nx = g.nx, ny = g.ny, nz = g.nz;
    while (!queue.empty()) {
        const std::size_t id = queue.back();
        queue.pop_back();
        if (surface[id]) {
            if (hit_boundary) *hit_boundary = boundary;
            return true;
        }
        const int iz = static_cast<int>(id % nz);
        const int iy = static_cast<int>((id / nz) % ny);
        const int ix = static_cast<int>(id / (static_cast<std::size_t>(ny) * nz));
        if (ix == 0 || ix == nx - 1 || iy == 0 || iy == ny - 1 || iz == 0 || iz == nz - 1)
            boundary = true;
        const int d[6][3] = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
        for (auto& dd : d) {
            const int jx = ix + dd[0], jy = iy + dd[1], jz = iz + dd[2];
            if (jx < 0 || jx >= nx || jy < 0 || jy >= ny || jz < 0 || jz >= nz) continue;
            const std::size_t jd = g.idx(jx, jy, jz);
            if (visited[jd] || g.U[jd] > E) continue;
            visited[jd] = 1;
            queue.push_back(jd);
        }
    }
    if (hit_boundary) *hit_boundary = boundary;
    return false;
}

} // namespace

double flood_fill_depth(const PotentialGrid& g, const Vec3& r_min, double U_min,
                        double surface_z, bool* grid_capped) {
    // surface-adjacent set: near the z = surface plane, excluded cells and
    // their neighbours, or far below the trap bottom (CP-dominated)
    std::vector<std::uint8_t> surface(g.size(), 0);
    const double cp_cut = U_min - 1.5e-29;  // ~ 1 uK below the trap bottom
    for (int ix = 0; ix < g.nx; ++ix)
        for (int iy = 0; iy < g.ny; ++iy)
            for (int iz = 0; iz < g.nz; ++iz) {
                const std::size_t id = g.idx(ix, iy, iz);
                const double z = g.origin.z + iz * g.spacing.z;
                if (g.excluded[id] || z <= surface_z + g.spacing.z || g.U[id] < cp_cut)
                    surface[id] = 1;
            }

    // nearest grid cell to the minimum
    auto clampi = [](int v, int n) { return v < 0 ? 0 : (v >= n ? n - 1 : v); };
    const int ix = clampi(static_cast<int>(std::lround((r_min.x - g.origin.x) / g.spacing.x)), g.nx);
    const int iy = clampi(static_cast<int>(std::lround((r_min.y - g.origin.y) / g.spacing.y)), g.ny);
    const int iz = clampi(static_cast<int>(std::lround((r_min.z - g.origin.z) / g.spacing.z)), g.nz);
    const std::size_t start = g.idx(ix, iy, iz);
    if (surface[start])
        throw std::runtime_error("flood_fill_depth: trap minimum lies in the surface region");

    double E_hi = U_min;
    for (std::size_t i = 0; i < g.size(); ++i)
        if (!g.excluded[i]) E_hi = std::max(E_hi, g.U[i]);
    double E_lo = U_min;

    std::vector<std::uint8_t> visited(g.size());
    std::vector<std::size_t> queue;
    queue.reserve(g.size() / 8);

    bool hit_boundary = false;
    if (!basin_escapes(g, start, E_hi, surface, &hit_boundary, visited, queue)) {
        // never escapes to the surface inside this grid
        if (grid_capped) *grid_capped = true;
        return E_hi - U_min;
    }
    for (int it = 0; it < 60; ++it) {
        const double E = 0.5 * (E_lo + E_hi);
        if (basin_escapes(g, start, E, surface, nullptr, visited, queue))
            E_hi = E;
        else
            E_lo = E;
        if ((E_hi - E_lo) < 0.01 * std::max(E_lo - U_min, 1e-33)) break;
    }
    if (grid_capped) *grid_capped = false;
    return 0.5 * (E_lo + E_hi) - U_min;
}

TrapCharacterization characterize(const TrapSystem& sys, Vec3 seed, const GridExtent& depth_grid,
                                  double wire_top_z, double surface_z) {
    TrapCharacterization out;
    const double scale = std::max(1e-8, 0.2 * seed.z);
    MinimizeResult m = find_minimum(sys, seed, scale);
    out.r_min = m.r;
    out.U_min = m.U;
    out.height_d = m.r.z - wire_top_z;
    const Vec3 B = sys.field(m.r);
    out.B_min = B.norm();
    out.larmor = sys.species.magnetic_moment() * out.B_min / hbar;
    principal_frequencies(sys, m.r, std::max(2e-9, 2e-3 * m.r.z), out);

    PotentialGrid g = fill_grid(sys, depth_grid, m.U - 4e-28);
    bool capped = false;
    out.depth = flood_fill_depth(g, m.r, m.U, surface_z, &capped);
    out.depth_grid_capped = capped;
    return out;
}

} // namespace nanotrap::trap
