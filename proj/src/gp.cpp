#include "nanotrap/gp.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>
#include <stdexcept>

#include "nanotrap/constants.hpp"
#include "nanotrap/util.hpp"

namespace nanotrap::gpsolver {

using constants::hbar;

namespace {

struct Workspace {
    int nx, ny, nz;
    double dx, dy, dz;
    std::size_t n;
    const std::vector<std::uint8_t>* mask;

    std::size_t idx(int ix, int iy, int iz) const {
        return (static_cast<std::size_t>(ix) * ny + iy) * nz + iz;
    }
};

// Constant-coefficient Thomas factors for (1+2b)φ_i - b(φ_{i-1}+φ_{i+1}).
struct TriFactors {
    double beta;
    std::vector<double> cp;     // c'_i
    std::vector<double> denom;  // b - a c'_{i-1}
    void build(int n, double beta_) {
        beta = beta_;
        cp.assign(n, 0.0);
        denom.assign(n, 0.0);
        const double b = 1.0 + 2.0 * beta;
        const double a = -beta;
        denom[0] = b;
        cp[0] = a / b;
        for (int i = 1; i < n; ++i) {
            denom[i] = b - a * cp[i - 1];
            cp[i] = a / denom[i];
        }
    }
};

// One Crank-Nicolson kinetic sweep along a contiguous segment.
void cn_segment(double* v, int n, const TriFactors& tf, std::vector<double>& rhs,
                std::vector<double>& tmp) {
    const double beta = tf.beta;
    rhs.resize(n);
    tmp.resize(n);
    for (int i = 0; i < n; ++i) {
        const double left = i > 0 ? v[i - 1] : 0.0;
        const double right = i + 1 < n ? v[i + 1] : 0.0;
        rhs[i] = v[i] + beta * (left - 2.0 * v[i] + right);
    }
    const double a = -beta;
    tmp[0] = rhs[0] / tf.denom[0];
    for (int i = 1; i < n; ++i) tmp[i] = (rhs[i] - a * tmp[i - 1]) / tf.denom[i];
    v[n - 1] = tmp[n - 1];
    for (int i = n - 2; i >= 0; --i) v[i] = tmp[i] - tf.cp[i] * v[i + 1];
}

// Sweep along one axis; masked cells split lines into Dirichlet segments.
void cn_sweep(std::vector<double>& psi, const Workspace& w, int axis, const TriFactors& tf) {
    const int nline = axis == 0 ? w.nx : (axis == 1 ? w.ny : w.nz);
    const std::size_t nlines =
        axis == 0 ? static_cast<std::size_t>(w.ny) * w.nz
                  : (axis == 1 ? static_cast<std::size_t>(w.nx) * w.nz
                               : static_cast<std::size_t>(w.nx) * w.ny);
    util::parallel_for(nlines, [&](std::size_t line) {
        thread_local std::vector<double> buf, rhs, tmp;
        buf.resize(nline);
        // gather
        std::size_t base, stride;
        if (axis == 0) {
            const int iy = static_cast<int>(line / w.nz), iz = static_cast<int>(line % w.nz);
            base = w.idx(0, iy, iz);
            stride = static_cast<std::size_t>(w.ny) * w.nz;
        } else if (axis == 1) {
            const int ix = static_cast<int>(line / w.nz), iz = static_cast<int>(line % w.nz);
            base = w.idx(ix, 0, iz);
            stride = w.nz;
        } else {
            const int ix = static_cast<int>(line / w.ny), iy = static_cast<int>(line % w.ny);
            base = w.idx(ix, iy, 0);
            stride = 1;
        }
        const std::vector<std::uint8_t>& mask = *w.mask;
        for (int i = 0; i < nline; ++i) buf[i] = psi[base + i * stride];
        int seg_start = -1;
        for (int i = 0; i <= nline; ++i) {
            const bool open = i < nline && !mask[base + i * stride];
            if (open && seg_start < 0) seg_start = i;
            if (!open && seg_start >= 0) {
                cn_segment(buf.data() + seg_start, i - seg_start, tf, rhs, tmp);
                seg_start = -1;
            }
        }
        for (int i = 0; i < nline; ++i) psi[base + i * stride] = mask[base + i * stride] ? 0.0 : buf[i];
    });
}

} // namespace

GPGroundState solve_ground_state(const GPProblem& p, const SolveOptions& opt) {
    const trap::PotentialGrid& g = p.potential;
    if (g.nx < 4 || g.ny < 4 || g.nz < 4)
        throw std::invalid_argument("solve_ground_state: grid too small");
    p.species.validate();

    GPGroundState st;
    st.origin = g.origin;
    st.spacing = g.spacing;
    st.nx = g.nx;
    st.ny = g.ny;
    st.nz = g.nz;

    const std::size_t n = g.size();
    const double dV = g.spacing.x * g.spacing.y * g.spacing.z;
    const double gg = p.species.coupling_g();
    const double m = p.species.mass;

    // shifted potential W = U - min(U) over unmasked cells
    double vref = 1e300;
    for (std::size_t i = 0; i < n; ++i)
        if (!g.excluded[i]) vref = std::min(vref, g.U[i]);
    std::vector<double> W(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) W[i] = g.excluded[i] ? 0.0 : g.U[i] - vref;

    Workspace w{g.nx, g.ny, g.nz, g.spacing.x, g.spacing.y, g.spacing.z, n, &g.excluded};

    auto normalize = [&](std::vector<double>& psi) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += psi[i] * psi[i];
        const double scale = std::sqrt(p.N / (s * dV));
        for (auto& v : psi) v *= scale;
    };

    // initial guess: Thomas-Fermi when interacting, Boltzmann-like otherwise
    std::vector<double>& psi = st.psi;
    if (opt.initial != nullptr) {
        if (opt.initial->size() != n)
            throw std::invalid_argument("solve_ground_state: warm start grid mismatch");
        psi = *opt.initial;
        for (std::size_t i = 0; i < n; ++i)
            if (g.excluded[i]) psi[i] = 0.0;
    } else if (gg > 0.0) {
        double lo = 0.0, hi = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            if (!g.excluded[i]) hi = std::max(hi, W[i]);
        for (int it = 0; it < 80; ++it) {
            const double mu0 = 0.5 * (lo + hi);
            double count = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                if (!g.excluded[i] && W[i] < mu0) count += (mu0 - W[i]);
            (count * dV / gg > p.N) ? hi = mu0 : lo = mu0;
        }
        psi.assign(n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            if (!g.excluded[i]) psi[i] = std::sqrt(std::max(0.0, hi - W[i]) / gg);
    } else {
        std::vector<double> pos;
        for (std::size_t i = 0; i < n; ++i)
            if (!g.excluded[i] && W[i] > 0.0) pos.push_back(W[i]);
        std::nth_element(pos.begin(), pos.begin() + pos.size() / 10, pos.end());
        const double ws = std::max(pos[pos.size() / 10], 1e-32);
        psi.assign(n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            if (!g.excluded[i]) psi[i] = std::exp(-W[i] / (2.0 * ws));
    }
    normalize(psi);

    auto energy_of = [&](const std::vector<double>& f) {
        double ek = 0.0, ep = 0.0, ei = 0.0;
        const double cx = hbar * hbar / (2.0 * m * w.dx * w.dx);
        const double cy = hbar * hbar / (2.0 * m * w.dy * w.dy);
        const double cz = hbar * hbar / (2.0 * m * w.dz * w.dz);
        for (int ix = 0; ix < w.nx; ++ix)
            for (int iy = 0; iy < w.ny; ++iy)
                for (int iz = 0; iz < w.nz; ++iz) {
                    const std::size_t id = w.idx(ix, iy, iz);
                    const double v = f[id];
                    // bond kinetic terms (Dirichlet outside, both walls)
                    const double vr = ix + 1 < w.nx ? f[w.idx(ix + 1, iy, iz)] : 0.0;
                    ek += cx * (vr - v) * (vr - v);
                    if (ix == 0) ek += cx * v * v;
                    const double vu = iy + 1 < w.ny ? f[w.idx(ix, iy + 1, iz)] : 0.0;
                    ek += cy * (vu - v) * (vu - v);
                    if (iy == 0) ek += cy * v * v;
                    const double vt = iz + 1 < w.nz ? f[w.idx(ix, iy, iz + 1)] : 0.0;
                    ek += cz * (vt - v) * (vt - v);
                    if (iz == 0) ek += cz * v * v;
                    ep += W[id] * v * v;
                    ei += 0.5 * gg * v * v * v * v;
                }
        return (ek + ep + ei) * dV;
    };

    double dt = opt.dt_start;
    TriFactors tfx, tfy, tfz;
    std::vector<double> expW(n);
    auto rebuild = [&]() {
        tfx.build(w.nx, dt * hbar / (4.0 * m * w.dx * w.dx));
        tfy.build(w.ny, dt * hbar / (4.0 * m * w.dy * w.dy));
        tfz.build(w.nz, dt * hbar / (4.0 * m * w.dz * w.dz));
        util::parallel_for(static_cast<std::size_t>(w.nx), [&](std::size_t ix) {
            for (std::size_t i = ix * w.ny * w.nz; i < (ix + 1) * w.ny * w.nz; ++i)
                expW[i] = g.excluded[i] ? 0.0 : std::exp(-0.5 * dt * W[i] / hbar);
        });
    };
    rebuild();

    auto functional_mu = [&]() {
        GPGroundState tmp = st;
        tmp.psi = psi;
        const EnergyParts parts = energy_parts(p, tmp);
        return std::tuple{parts, (parts.kinetic + parts.potential + 2.0 * parts.interaction) / p.N};
    };

    auto residual_of = [&](double mu_sh) {
        double rnum = 0.0, rden = 0.0;
        const double cx = hbar * hbar / (2.0 * m * w.dx * w.dx);
        const double cy = hbar * hbar / (2.0 * m * w.dy * w.dy);
        const double cz = hbar * hbar / (2.0 * m * w.dz * w.dz);
        for (int ix = 0; ix < w.nx; ++ix)
            for (int iy = 0; iy < w.ny; ++iy)
                for (int iz = 0; iz < w.nz; ++iz) {
                    const std::size_t id = w.idx(ix, iy, iz);
                    if (g.excluded[id]) continue;
                    const double v = psi[id];
                    auto nb = [&](int jx, int jy, int jz) {
                        if (jx < 0 || jx >= w.nx || jy < 0 || jy >= w.ny || jz < 0 || jz >= w.nz)
                            return 0.0;
                        const std::size_t j = w.idx(jx, jy, jz);
                        return g.excluded[j] ? 0.0 : psi[j];
                    };
                    const double lap =
                        cx * (nb(ix + 1, iy, iz) - 2 * v + nb(ix - 1, iy, iz)) +
                        cy * (nb(ix, iy + 1, iz) - 2 * v + nb(ix, iy - 1, iz)) +
                        cz * (nb(ix, iy, iz + 1) - 2 * v + nb(ix, iy, iz - 1));
                    const double r = -lap + W[id] * v + gg * v * v * v - mu_sh * v;
                    rnum += r * r;
                    rden += mu_sh * mu_sh * v * v;
                }
        return std::sqrt(rnum / std::max(rden, 1e-300));
    };

    auto vstep = [&]() {
        if (gg == 0.0) {
            util::parallel_for(static_cast<std::size_t>(w.nx), [&](std::size_t ix) {
                for (std::size_t i = ix * w.ny * w.nz; i < (ix + 1) * w.ny * w.nz; ++i)
                    psi[i] *= expW[i];
            });
            return;
        }
        util::parallel_for(static_cast<std::size_t>(w.nx), [&](std::size_t ix) {
            for (std::size_t i = ix * w.ny * w.nz; i < (ix + 1) * w.ny * w.nz; ++i) {
                const double v = psi[i];
                psi[i] = v * expW[i] * std::exp(-0.5 * dt * gg * v * v / hbar);
            }
        });
    };

    // alternate split-step relaxation (handles slow modes at large dt) with
    // steepest-descent polish on the discrete Hamiltonian (removes the
    // splitting bias); lower dt between rungs while the residual is high
    double e_prev = energy_of(psi);
    int iter = 0;
    double mu_sh = 0.0;
    EnergyParts parts{};
    st.residual = 1e300;
    for (int rung = 0; rung < 8 && iter < opt.max_iters; ++rung) {
    // stage 1: split-step imaginary time until the energy flattens
    const int rung_min_iter = iter + (rung == 0 ? 0 : 300);
    for (; iter < opt.max_iters; ++iter) {
        vstep();
        cn_sweep(psi, w, 0, tfx);
        cn_sweep(psi, w, 1, tfy);
        cn_sweep(psi, w, 2, tfz);
        vstep();
        normalize(psi);
        if ((iter + 1) % opt.check_every == 0) {
            const double e = energy_of(psi);
            if (opt.energy_history) opt.energy_history->push_back(e);
            const double rel = std::abs(e - e_prev) / std::max(std::abs(e), 1e-300);
            const bool increased = e > e_prev * (1.0 + 1e-12);
            e_prev = e;
            if (increased && dt > opt.dt_min) {
                dt = std::max(opt.dt_min, 0.5 * dt);
                rebuild();
            } else if (rel < 3e-8 * opt.check_every && iter >= rung_min_iter) {
                ++iter;
                break;
            }
        }
    }

    // stage 2: polish
    std::tie(parts, mu_sh) = functional_mu();
    st.residual = residual_of(mu_sh);
    {
        const double cx = hbar * hbar / (2.0 * m * w.dx * w.dx);
        const double cy = hbar * hbar / (2.0 * m * w.dy * w.dy);
        const double cz = hbar * hbar / (2.0 * m * w.dz * w.dz);
        double wmax = 0.0, npk = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (!g.excluded[i]) wmax = std::max(wmax, W[i]);
            npk = std::max(npk, psi[i] * psi[i]);
        }
        // the density mode feels H + 2gψ² (Bogoliubov), hence the factor 3
        const double lam_max = 4.0 * (cx + cy + cz) + wmax + 3.0 * gg * npk;
        double tau = 1.0 / lam_max;
        std::vector<double> hpsi(n, 0.0);
        std::vector<double> prev(psi);  // heavy-ball memory
        const double beta = 0.85;
        const int polish_rounds = 80;
        double res_prev = st.residual;
        for (int round = 0; round < polish_rounds && st.residual >= opt.tol; ++round) {
            for (int sub = 0; sub < 40; ++sub) {
                util::parallel_for(static_cast<std::size_t>(w.nx), [&](std::size_t uix) {
                    const int ix = static_cast<int>(uix);
                    for (int iy = 0; iy < w.ny; ++iy)
                        for (int iz = 0; iz < w.nz; ++iz) {
                            const std::size_t id = w.idx(ix, iy, iz);
                            if (g.excluded[id]) {
                                hpsi[id] = 0.0;
                                continue;
                            }
                            const double v = psi[id];
                            auto nb = [&](int jx, int jy, int jz) {
                                if (jx < 0 || jx >= w.nx || jy < 0 || jy >= w.ny || jz < 0 ||
                                    jz >= w.nz)
                                    return 0.0;
                                const std::size_t j = w.idx(jx, jy, jz);
                                return g.excluded[j] ? 0.0 : psi[j];
                            };
                            const double lap =
                                cx * (nb(ix + 1, iy, iz) - 2 * v + nb(ix - 1, iy, iz)) +
                                cy * (nb(ix, iy + 1, iz) - 2 * v + nb(ix, iy - 1, iz)) +
                                cz * (nb(ix, iy, iz + 1) - 2 * v + nb(ix, iy, iz - 1));
                            hpsi[id] = v - tau * (-lap + W[id] * v + gg * v * v * v - mu_sh * v) +
                                       beta * (v - prev[id]);
                        }
                });
                prev.swap(psi);
                psi.swap(hpsi);
                normalize(psi);
                ++iter;
            }
            std::tie(parts, mu_sh) = functional_mu();
            st.residual = residual_of(mu_sh);
            if (st.residual > 1.02 * res_prev) tau *= 0.5;  // unstable mode only
            res_prev = st.residual;
        }
    }
    if (st.residual < opt.tol) break;
    dt = std::max(opt.dt_min, 0.5 * dt);
    rebuild();
    e_prev = energy_of(psi);
    }  // rung loop
    st.iterations = iter;
    if (st.residual >= opt.tol)
        throw std::runtime_error("solve_ground_state: no convergence (residual " +
                                 std::to_string(st.residual) + ")");
    for (auto& v : psi) v = std::max(v, 0.0);

    st.mu_above_min = mu_sh;
    st.mu = mu_sh + vref;
    st.energy = parts.kinetic + parts.potential + parts.interaction + vref * p.N;

    // resolution warning from the healing length at peak density
    double npk = 0.0;
    for (std::size_t i = 0; i < n; ++i) npk = std::max(npk, psi[i] * psi[i]);
    if (p.species.a_scatt > 0.0 && npk > 0.0) {
        const double xi = 1.0 / std::sqrt(8.0 * constants::pi * npk * p.species.a_scatt);
        const double smax = std::max({g.spacing.x, g.spacing.y, g.spacing.z});
        st.resolution_warning = smax > xi / 4.0;
    }
    return st;
}

LineDensity line_density_stats(const GPGroundState& s) {
    LineDensity out;
    out.x.resize(s.nx);
    out.n1.assign(s.nx, 0.0);
    const double dA = s.spacing.y * s.spacing.z;
    for (int ix = 0; ix < s.nx; ++ix) {
        out.x[ix] = s.origin.x + ix * s.spacing.x;
        double acc = 0.0;
        for (int iy = 0; iy < s.ny; ++iy)
            for (int iz = 0; iz < s.nz; ++iz) {
                const double v = s.psi[s.idx(ix, iy, iz)];
                acc += v * v;
            }
        out.n1[ix] = acc * dA;
    }
    const double peak = *std::max_element(out.n1.begin(), out.n1.end());
    int lo = 0, hi = s.nx - 1;
    while (lo < s.nx && out.n1[lo] < 0.05 * peak) ++lo;
    while (hi >= 0 && out.n1[hi] < 0.05 * peak) --hi;
    if (hi <= lo) return out;
    const int margin = static_cast<int>(0.1 * (hi - lo + 1));
    lo += margin;
    hi -= margin;
    double mean = 0.0;
    int cnt = 0;
    for (int i = lo; i <= hi; ++i) {
        mean += out.n1[i];
        ++cnt;
    }
    mean /= cnt;
    double var = 0.0;
    for (int i = lo; i <= hi; ++i) var += (out.n1[i] - mean) * (out.n1[i] - mean);
    out.std_relative = std::sqrt(var / cnt) / mean;
    return out;
}

std::vector<double> density_map(const GPGroundState& s, int axis) {
    std::vector<double> out;
    const double step = axis == 0 ? s.spacing.x : (axis == 1 ? s.spacing.y : s.spacing.z);
    if (axis == 1) {
        out.assign(static_cast<std::size_t>(s.nx) * s.nz, 0.0);
        for (int ix = 0; ix < s.nx; ++ix)
            for (int iy = 0; iy < s.ny; ++iy)
                for (int iz = 0; iz < s.nz; ++iz) {
                    const double v = s.psi[s.idx(ix, iy, iz)];
                    out[static_cast<std::size_t>(ix) * s.nz + iz] += v * v * step;
                }
    } else if (axis == 2) {
        out.assign(static_cast<std::size_t>(s.nx) * s.ny, 0.0);
        for (int ix = 0; ix < s.nx; ++ix)
            for (int iy = 0; iy < s.ny; ++iy)
                for (int iz = 0; iz < s.nz; ++iz) {
                    const double v = s.psi[s.idx(ix, iy, iz)];
                    out[static_cast<std::size_t>(ix) * s.ny + iy] += v * v * step;
                }
    } else {
        out.assign(static_cast<std::size_t>(s.ny) * s.nz, 0.0);
        for (int ix = 0; ix < s.nx; ++ix)
            for (int iy = 0; iy < s.ny; ++iy)
                for (int iz = 0; iz < s.nz; ++iz) {
                    const double v = s.psi[s.idx(ix, iy, iz)];
                    out[static_cast<std::size_t>(iy) * s.nz + iz] += v * v * step;
                }
    }
    return out;
}

std::vector<double> resample_psi(const GPGroundState& s, const trap::PotentialGrid& target) {
    std::vector<double> out(target.size(), 0.0);
    for (int ix = 0; ix < target.nx; ++ix)
        for (int iy = 0; iy < target.ny; ++iy)
            for (int iz = 0; iz < target.nz; ++iz) {
                const Vec3 r = target.point(ix, iy, iz);
                const double fx = (r.x - s.origin.x) / s.spacing.x;
                const double fy = (r.y - s.origin.y) / s.spacing.y;
                const double fz = (r.z - s.origin.z) / s.spacing.z;
                if (fx < 0 || fy < 0 || fz < 0 || fx > s.nx - 1 || fy > s.ny - 1 || fz > s.nz - 1)
                    continue;
                const int i0 = std::min(static_cast<int>(fx), s.nx - 2);
                const int j0 = std::min(static_cast<int>(fy), s.ny - 2);
                const int k0 = std::min(static_cast<int>(fz), s.nz - 2);
                const double ax = fx - i0, ay = fy - j0, az = fz - k0;
                double v = 0.0;
                for (int di = 0; di < 2; ++di)
                    for (int dj = 0; dj < 2; ++dj)
                        for (int dk = 0; dk < 2; ++dk) {
                            const double w = (di ? ax : 1 - ax) * (dj ? ay : 1 - ay) *
                                             (dk ? az : 1 - az);
                            v += w * s.psi[s.idx(i0 + di, j0 + dj, k0 + dk)];
                        }
                out[target.idx(ix, iy, iz)] =
                    target.excluded[target.idx(ix, iy, iz)] ? 0.0 : std::max(v, 0.0);
            }
    return out;
}

EnergyParts energy_parts(const GPProblem& p, const GPGroundState& s) {
    EnergyParts parts;
    const trap::PotentialGrid& g = p.potential;
    double vref = 1e300;
    for (std::size_t i = 0; i < g.size(); ++i)
        if (!g.excluded[i]) vref = std::min(vref, g.U[i]);
    const double m = p.species.mass;
    const double gg = p.species.coupling_g();
    const double cx = hbar * hbar / (2.0 * m * s.spacing.x * s.spacing.x);
    const double cy = hbar * hbar / (2.0 * m * s.spacing.y * s.spacing.y);
    const double cz = hbar * hbar / (2.0 * m * s.spacing.z * s.spacing.z);
    double ek = 0.0, ep = 0.0, ei = 0.0;
    for (int ix = 0; ix < s.nx; ++ix)
        for (int iy = 0; iy < s.ny; ++iy)
            for (int iz = 0; iz < s.nz; ++iz) {
                const std::size_t id = s.idx(ix, iy, iz);
                const double v = s.psi[id];
                const double vr = ix + 1 < s.nx ? s.psi[s.idx(ix + 1, iy, iz)] : 0.0;
                ek += cx * (vr - v) * (vr - v);
                if (ix == 0) ek += cx * v * v;
                const double vu = iy + 1 < s.ny ? s.psi[s.idx(ix, iy + 1, iz)] : 0.0;
                ek += cy * (vu - v) * (vu - v);
                if (iy == 0) ek += cy * v * v;
                const double vt = iz + 1 < s.nz ? s.psi[s.idx(ix, iy, iz + 1)] : 0.0;
                ek += cz * (vt - v) * (vt - v);
                if (iz == 0) ek += cz * v * v;
                if (!g.excluded[id]) ep += (g.U[id] - vref) * v * v;
                ei += 0.5 * gg * v * v * v * v;
            }
    const double dV = s.cell_volume();
    parts.kinetic = ek * dV;
    parts.potential = ep * dV;
    parts.interaction = ei * dV;
    return parts;
}

} // namespace nanotrap::gpsolver
