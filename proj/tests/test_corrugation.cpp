#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "nanotrap/bessel.hpp"
#include "nanotrap/constants.hpp"
#include "nanotrap/corrugation.hpp"

using namespace nanotrap;
using constants::pi;

namespace {

// Finite-difference ohmic solve of one symmetric edge mode: both edges of a
// strip of width w shifted by c(x) = δ0 cos(kx). Solved in strip coordinates
// u = y - c(x) with SOR; returns the sin(kx) amplitude of δJ_y/J0 on the
// centre line.
double ohmic_mode_amplitude(double kw, double delta_over_w) {
    const double w = 1.0;
    const double k = kw / w;
    const double lambda = 2.0 * pi / k;
    const double d0 = delta_over_w * w;
    const int Nx = 96, Nu = 64;  // Nu intervals; nodes 0..Nu
    const double dx = lambda / Nx, du = w / Nu;
    const double E0 = 1.0;
    std::vector<double> psi((Nx) * (Nu + 1), 0.0);
    auto at = [&](int i, int j) -> double& { return psi[((i + Nx) % Nx) * (Nu + 1) + j]; };
    auto cp = [&](int i) { return -d0 * k * std::sin(k * i * dx); };   // c'(x)
    auto cpp = [&](int i) { return -d0 * k * k * std::cos(k * i * dx); };

    for (int sweep = 0; sweep < 30000; ++sweep) {
        double delta_max = 0.0;
        for (int i = 0; i < Nx; ++i) {
            const double c1 = cp(i), c2 = cpp(i);
            for (int j = 0; j <= Nu; ++j) {
                double up, dn;
                if (j == 0 || j == Nu) {
                    // ghost from J·n = 0: psi_u = c'(psi_x - E0)/(1+c'^2)
                    const double px = (at(i + 1, j) - at(i - 1, j)) / (2 * dx);
                    const double g = c1 * (px - E0) / (1.0 + c1 * c1);
                    if (j == 0) {
                        dn = at(i, 1) - 2.0 * du * g;
                        up = at(i, 1);
                    } else {
                        up = at(i, Nu - 1) + 2.0 * du * g;
                        dn = at(i, Nu - 1);
                    }
                } else {
                    up = at(i, j + 1);
                    dn = at(i, j - 1);
                }
                const double pxx_n = (at(i + 1, j) + at(i - 1, j)) / (dx * dx);
                const double puu_n = (up + dn) / (du * du);
                // cross term with lagged values (interior only)
                double cross = 0.0;
                if (j > 0 && j < Nu)
                    cross = (at(i + 1, j + 1) - at(i + 1, j - 1) - at(i - 1, j + 1) +
                             at(i - 1, j - 1)) /
                            (4.0 * dx * du);
                const double pu = (up - dn) / (2.0 * du);
                const double diag = 2.0 / (dx * dx) + 2.0 * (1.0 + c1 * c1) / (du * du);
                const double rhs =
                    pxx_n + (1.0 + c1 * c1) * puu_n - 2.0 * c1 * cross - c2 * pu;
                const double newv = rhs / diag;
                const double old = at(i, j);
                const double relaxed = old + 1.7 * (newv - old);
                delta_max = std::max(delta_max, std::abs(relaxed - old));
                at(i, j) = relaxed;
            }
        }
        if (delta_max < 1e-12 * E0 * lambda) break;
    }
    // delta J_y / J0 on the centre line u = 0 (y = c(x)): -psi_u / E0
    const int jc = Nu / 2;
    double amp = 0.0;
    for (int i = 0; i < Nx; ++i) {
        const double ju = -(at(i, jc + 1) - at(i, jc - 1)) / (2.0 * du) / E0;
        amp += 2.0 * ju * std::sin(k * i * dx) / Nx;
    }
    return std::abs(amp);
}

} // namespace

TEST_CASE("edge realization: determinism, zero amplitude, band rms") {
    auto spec = corrugation::RoughnessSpectrum::from_band_rms(2e-9, 100e-9, 800e-9, 0.0, 7);
    auto r1 = corrugation::edge_realization(spec);
    auto r2 = corrugation::edge_realization(spec);
    CHECK(r1.dy == r2.dy);  // bit-identical

    CHECK(r1.rms() == doctest::Approx(2e-9).epsilon(0.10));

    auto zero = spec;
    zero.dy0 = 0.0;
    auto rz = corrugation::edge_realization(zero);
    for (double v : rz.dy) CHECK(v == 0.0);

    // different seeds give different phases
    auto spec2 = spec;
    spec2.seed = 8;
    CHECK(corrugation::edge_realization(spec2).dy != r1.dy);

    // white spectrum over [100nm, 50um] keeps the band rms by construction
    auto wide = corrugation::RoughnessSpectrum::from_band_rms(2e-9, 100e-9, 50e-6, 0.0, 3);
    CHECK(wide.band_rms() == doctest::Approx(2e-9).epsilon(1e-12));
    CHECK(corrugation::edge_realization(wide, 4000).rms() == doctest::Approx(2e-9).epsilon(0.10));
}

TEST_CASE("dBx spectrum: single-mode definition and K1 asymptotics") {
    auto spec = corrugation::RoughnessSpectrum::from_band_rms(2e-9, 100e-9, 800e-9, 0.0, 1);
    const double I = 40e-6, z = 0.6e-6;
    auto res = corrugation::dBx_spectrum(spec, I, z);
    REQUIRE(static_cast<int>(res.k_values.size()) == spec.mode_count());
    // n-th amplitude matches the one-term definition
    const int n = 3;
    const double k = spec.k_n(n);
    const double expect =
        (I * constants::mu0 / (2 * pi)) * k * k * spec.amp_n(n) * bessel::k1(k * z);
    CHECK(std::abs(res.dBx_k[n - 1]) == doctest::Approx(expect).epsilon(1e-12));

    // Parseval at the model level
    double s2 = 0.0;
    for (auto& c : res.dBx_k) s2 += std::norm(c);
    CHECK(res.dBx_rms == doctest::Approx(std::sqrt(s2)).epsilon(1e-12));

    // kz >> 1 suppression ~ e^{-kz}
    const double kbig = spec.k_n(spec.mode_count());
    CHECK(std::abs(res.dBx_k.back()) / ((I * constants::mu0 / (2 * pi)) * kbig * kbig *
                                        spec.amp_n(spec.mode_count())) <
          2.0 * std::exp(-kbig * z));

    // linearity in I and dy0
    auto res2 = corrugation::dBx_spectrum(spec, 2 * I, z);
    CHECK(res2.dBx_rms == doctest::Approx(2 * res.dBx_rms).epsilon(1e-12));
    auto spec2 = spec;
    spec2.dy0 *= 3.0;
    auto res3 = corrugation::dBx_spectrum(spec2, I, z);
    CHECK(res3.dBx_rms == doctest::Approx(3 * res.dBx_rms).epsilon(1e-12));

    // width validity flag
    CHECK(!res.narrow_wire_warning);
    CHECK(corrugation::dBx_spectrum(spec, I, z, 0.4e-6).narrow_wire_warning);
}

TEST_CASE("K1 at 1: exact vs the paper approximation within 2%") {
    const double exact = bessel::k1(1.0);
    CHECK(exact == doctest::Approx(0.60190723019723457).epsilon(1e-10));
    const double approx = std::exp(-1.0) * std::sqrt(1.0 + pi / 2.0);
    CHECK(approx == doctest::Approx(exact).epsilon(0.02));
}

TEST_CASE("rms ratio: footnote anchors and scalings") {
    // white noise, 2 nm band rms over 100-800 nm, at d = 0.6 um -> 7e-4
    auto white = corrugation::RoughnessSpectrum::from_band_rms(2e-9, 100e-9, 800e-9, 0.0, 1);
    CHECK(corrugation::dBx_rms_relative(white, 0.6e-6) == doctest::Approx(7e-4).epsilon(0.15));

    // 1/f variant -> 8e-3
    auto pink = corrugation::RoughnessSpectrum::from_band_rms(2e-9, 100e-9, 800e-9, 1.0, 1);
    CHECK(corrugation::dBx_rms_relative(pink, 0.6e-6) == doctest::Approx(8e-3).epsilon(0.20));

    // alpha = 0 mode enumeration: sum_k 1 = L/lambda_min exactly
    CHECK(white.mode_count() == 8);

    // closed form vs exact mode sum within 5% for lambda_min << z << L
    auto wide = corrugation::RoughnessSpectrum::from_band_rms(2e-9, 100e-9, 50e-6, 0.0, 1);
    const double cf = corrugation::dBx_rms_relative(wide, 0.6e-6);
    const double ms = corrugation::dBx_rms_relative_modesum(wide, 0.6e-6);
    CHECK(ms == doctest::Approx(cf).epsilon(0.05));
    auto wide1 = corrugation::RoughnessSpectrum::from_band_rms(2e-9, 100e-9, 50e-6, 1.0, 1);
    CHECK(corrugation::dBx_rms_relative_modesum(wide1, 0.6e-6) ==
          doctest::Approx(corrugation::dBx_rms_relative(wide1, 0.6e-6)).epsilon(0.05));

    // height scaling: (2z)^{3/2} times the ratio is z-independent for alpha=0
    const double lo = corrugation::dBx_rms_relative(wide, 0.3e-6) * std::pow(0.6e-6, 1.5);
    const double hi = corrugation::dBx_rms_relative(wide, 3.0e-6) * std::pow(6.0e-6, 1.5);
    CHECK(lo == doctest::Approx(hi).epsilon(0.01));
}

TEST_CASE("symmetric current fluctuation: cancellation and long-wave limit") {
    using std::complex;
    const double w = 50e-9;
    // pure width modulation (dy+ = -dy-) has no symmetric component
    auto v = corrugation::symmetric_current_fluctuation(1e6, {1e-9, 0}, {-1e-9, 0}, w, 0.0);
    CHECK(std::abs(v) == 0.0);

    // |k|w << 1 tends to J0 * d(dy_center)/dx  (amplitude k * dy_center)
    const double k = 1e-3 / w;  // kw = 1e-3
    auto s = corrugation::symmetric_current_fluctuation(k, {0.5e-9, 0}, {0.5e-9, 0}, w, 0.0);
    CHECK(std::abs(s) == doctest::Approx(k * 1e-9).epsilon(1e-3));
}

TEST_CASE("ohmic FD oracle reproduces the kw = 1 response") {
    // Eq. amplitude for dy± = d0 cos(kx): 2 k d0 e^{-kw/2}/(1+e^{-kw}) at y=0
    const double kw = 1.0;
    const double d0_w = 0.01;
    const double fd = ohmic_mode_amplitude(kw, d0_w);
    const double expect = 2.0 * kw * d0_w * std::exp(-0.5) / (1.0 + std::exp(-1.0));
    CHECK(fd == doctest::Approx(expect).epsilon(0.02));
}

TEST_CASE("potential resolution: monotonicities and figure-4 anchors") {
    const AtomSpecies rb = presets::rb87_22();
    const double dy = 50e-9, eta = 2.0, lam = 1e-6;

    auto r005 = corrugation::potential_resolution(0.05e-3, lam, dy, eta, rb);
    auto r50 = corrugation::potential_resolution(50e-3, lam, dy, eta, rb);
    CHECK(!r005.unsatisfiable);
    // d of order lambda, below ~2 um for the sub-mA curves
    CHECK(r005.d_max > 0.2 * lam);
    CHECK(r005.d_max < 2e-6);
    auto r05 = corrugation::potential_resolution(0.5e-3, lam, dy, eta, rb);
    CHECK(r05.d_max < 2e-6);
    // 1000x the current buys only ~2x the height
    CHECK(r50.d_max / r005.d_max > 1.5);
    CHECK(r50.d_max / r005.d_max < 3.0);

    // doubling eta decreases d
    auto r_eta4 = corrugation::potential_resolution(0.05e-3, lam, dy, 4.0, rb);
    CHECK(r_eta4.d_max < r005.d_max);
}
