#include "nanotrap/corrugation.hpp"

#include <cmath>
#include <stdexcept>

#include "nanotrap/bessel.hpp"
#include "nanotrap/constants.hpp"
#include "nanotrap/rng.hpp"

namespace nanotrap::corrugation {

using constants::hbar;
using constants::mu0;
using constants::pi;

void RoughnessSpectrum::validate() const {
    if (dy0 < 0.0) throw std::invalid_argument("RoughnessSpectrum: dy0 must be >= 0");
    if (alpha_exp < 0.0 || alpha_exp > 1.0)
        throw std::invalid_argument("RoughnessSpectrum: alpha must be in [0,1]");
    if (!(lambda_min > 0.0) || !(lambda_min < L))
        throw std::invalid_argument("RoughnessSpectrum: need 0 < lambda_min < L");
}

int RoughnessSpectrum::mode_count() const { return static_cast<int>(std::floor(L / lambda_min)); }

double RoughnessSpectrum::k_n(int n) const { return 2.0 * pi * n / L; }

double RoughnessSpectrum::amp_n(int n) const {
    return dy0 * std::pow(k0 / k_n(n), alpha_exp);
}

double RoughnessSpectrum::phase_n(int n) const {
    return 2.0 * pi * rng::uniform(rng::derive_seed(seed, "edge-phase"), static_cast<std::uint64_t>(n));
}

double RoughnessSpectrum::band_rms() const {
    double s2 = 0.0;
    for (int n = 1; n <= mode_count(); ++n) s2 += amp_n(n) * amp_n(n);
    return std::sqrt(s2);
}

RoughnessSpectrum RoughnessSpectrum::from_band_rms(double rms, double lambda_min, double L,
                                                   double alpha_exp, std::uint64_t seed) {
    RoughnessSpectrum s;
    s.dy0 = 1.0;
    s.k0 = 2.0 * pi / lambda_min;
    s.alpha_exp = alpha_exp;
    s.lambda_min = lambda_min;
    s.L = L;
    s.seed = seed;
    s.validate();
    const double unit = s.band_rms();
    s.dy0 = rms / unit;
    return s;
}

double EdgeRealization::rms() const {
    double s2 = 0.0;
    for (double v : dy) s2 += v * v;
    return std::sqrt(s2 / static_cast<double>(dy.size()));
}

EdgeRealization edge_realization(const RoughnessSpectrum& spec, int samples) {
    spec.validate();
    const int N = spec.mode_count();
    if (samples <= 0) samples = 8 * N;
    EdgeRealization out;
    out.x.resize(samples);
    out.dy.assign(samples, 0.0);
    for (int j = 0; j < samples; ++j) out.x[j] = spec.L * j / samples;
    const double sqrt2 = std::sqrt(2.0);
    for (int n = 1; n <= N; ++n) {
        const double a = sqrt2 * spec.amp_n(n);
        const double k = spec.k_n(n);
        const double ph = spec.phase_n(n);
        for (int j = 0; j < samples; ++j) out.dy[j] += a * std::cos(k * out.x[j] + ph);
    }
    return out;
}

CorrugationResult dBx_spectrum(const RoughnessSpectrum& spec, double I, double z,
                               double wire_width) {
    spec.validate();
    if (!(z > 0.0)) throw std::domain_error("dBx_spectrum: z must be > 0");
    CorrugationResult out;
    out.narrow_wire_warning = wire_width > 0.5 * z;
    const int N = spec.mode_count();
    out.k_values.resize(N);
    out.dBx_k.resize(N);
    double s2 = 0.0;
    for (int n = 1; n <= N; ++n) {
        const double k = spec.k_n(n);
        const double mag = (I * mu0 / (2.0 * pi)) * k * k * spec.amp_n(n) * bessel::k1(k * z);
        const double ph = spec.phase_n(n);
        out.k_values[n - 1] = k;
        out.dBx_k[n - 1] = std::polar(mag, ph);
        s2 += mag * mag;
    }
    out.dBx_rms = std::sqrt(s2);
    const double B0 = I * mu0 / (2.0 * pi * z);
    out.relative = (B0 != 0.0) ? out.dBx_rms / B0 : 0.0;
    return out;
}

double dBx_rms_relative(const RoughnessSpectrum& spec, double z) {
    spec.validate();
    const double a = spec.alpha_exp;
    double ksum = 0.0;
    for (int n = 1; n <= spec.mode_count(); ++n) ksum += std::pow(spec.k_n(n), -2.0 * a);
    const double A2 = (spec.L / pi) / ksum * (1.0 + 0.25 * pi * (3.0 - 2.0 * a)) *
                      std::tgamma(3.0 - 2.0 * a);
    return std::sqrt(A2) * spec.band_rms() / std::pow(2.0 * z, 1.5 - a);
}

double dBx_rms_relative_modesum(const RoughnessSpectrum& spec, double z) {
    spec.validate();
    const double a = spec.alpha_exp;
    double sum = 0.0;
    for (int n = 1; n <= spec.mode_count(); ++n) {
        const double k = spec.k_n(n);
        const double k1 = bessel::k1(k * z);
        sum += std::pow(k, 4.0 - 2.0 * a) * k1 * k1;
    }
    // two-sided sum over ±k
    const double mean_sq = 2.0 * std::pow(spec.dy0 * std::pow(spec.k0, a), 2.0) * sum;
    return std::sqrt(mean_sq) * z;  // divided by B0 = Iμ0/2πz, prefactors cancel
}

std::complex<double> symmetric_current_fluctuation(double k, std::complex<double> dy_plus_k,
                                                   std::complex<double> dy_minus_k, double w,
                                                   double y) {
    const double ak = std::abs(k);
    const std::complex<double> i(0.0, 1.0);
    return i * k * (dy_plus_k + dy_minus_k) * std::exp(-ak * w / 2.0) * std::cosh(k * y) /
           (1.0 + std::exp(-ak * w));
}

ResolutionResult potential_resolution(double I, double lambda, double dy, double eta,
                                      const AtomSpecies& species) {
    if (!(I > 0.0) || !(lambda > 0.0) || !(eta > 0.0))
        throw std::invalid_argument("potential_resolution: I, lambda, eta must be > 0");
    ResolutionResult out;
    const double k = 2.0 * pi / lambda;
    const double muA = species.magnetic_moment();
    // V0(d) >= (η²/16) ħ²k²/m  <=>  K1(kd) >= target
    const double target = (eta * eta / 16.0) * hbar * hbar / (species.mass * muA * mu0 * I * dy);
    if (!(target > 0.0) || !std::isfinite(target)) {
        out.unsatisfiable = true;
        return out;
    }
    double lo = lambda * 1e-6;
    if (bessel::k1(k * lo) < target) {
        out.unsatisfiable = true;
        return out;
    }
    double hi = lambda;
    while (bessel::k1(k * hi) > target) hi *= 2.0;
    for (int it = 0; it < 200 && (hi - lo) > 1e-12; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (bessel::k1(k * mid) > target)
            lo = mid;
        else
            hi = mid;
    }
    out.d_max = 0.5 * (lo + hi);
    return out;
}

trap::CorrugationModes field_modes(const RoughnessSpectrum& spec, double I) {
    spec.validate();
    trap::CorrugationModes out;
    const double sqrt2 = std::sqrt(2.0);
    out.modes.reserve(spec.mode_count());
    for (int n = 1; n <= spec.mode_count(); ++n) {
        const double k = spec.k_n(n);
        trap::CorrugationModes::Mode m;
        m.k = k;
        m.amp = (I * mu0 / (2.0 * pi)) * k * k * sqrt2 * spec.amp_n(n);
        m.phase = spec.phase_n(n);
        out.modes.push_back(m);
    }
    return out;
}

} // namespace nanotrap::corrugation
