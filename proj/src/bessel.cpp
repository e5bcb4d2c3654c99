#include "nanotrap/bessel.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace nanotrap::bessel {

namespace {

// Chebyshev coefficient tables from SLATEC FNLIB (Fullerton), double
// precision sets for the scaled I0, I1, K0, K1.
#include "bessel_tables.inc"

double dcsevl(double x, const double* cs, int n) {
    double b0 = 0.0, b1 = 0.0, b2 = 0.0;
    const double twox = 2.0 * x;
    for (int i = n - 1; i >= 0; --i) {
        b2 = b1;
        b1 = b0;
        b0 = twox * b1 - b2 + cs[i];
    }
    return 0.5 * (b0 - b2);
}

constexpr int nti0 = 11, ntai0 = 23, ntai02 = 25;
constexpr int nti1 = 11, ntai1 = 23, ntai12 = 25;
constexpr int ntk0 = 11, ntak0 = 18, ntak02 = 14;
constexpr int ntk1 = 11, ntak1 = 18, ntak12 = 14;

void check_positive(double x) {
    if (!(x > 0.0)) throw std::domain_error("bessel: argument must be > 0");
}

} // namespace

double i0e(double x) {
    check_positive(x);
    const double xsml = std::sqrt(std::numeric_limits<double>::epsilon() * 4.5);
    if (x <= 3.0) {
        if (x < xsml) return std::exp(-x);
        return std::exp(-x) * (2.75 + dcsevl(x * x / 4.5 - 1.0, bi0cs, nti0));
    } else if (x <= 8.0) {
        return (dcsevl((48.0 / x - 11.0) / 5.0, ai0cs, ntai0) + 0.375) / std::sqrt(x);
    }
    return (dcsevl(16.0 / x - 1.0, ai02cs, ntai02) + 0.375) / std::sqrt(x);
}

double i1e(double x) {
    check_positive(x);
    const double xsml = std::sqrt(std::numeric_limits<double>::epsilon() * 4.5);
    if (x <= 3.0) {
        if (x < xsml) return std::exp(-x) * 0.5 * x;
        return std::exp(-x) * x * (dcsevl(x * x / 4.5 - 1.0, bi1cs, nti1) + 0.875);
    } else if (x <= 8.0) {
        return (dcsevl((48.0 / x - 11.0) / 5.0, ai1cs, ntai1) + 0.375) / std::sqrt(x);
    }
    return (dcsevl(16.0 / x - 1.0, ai12cs, ntai12) + 0.375) / std::sqrt(x);
}

double k0e(double x) {
    check_positive(x);
    const double xsml = 2.0 * std::sqrt(std::numeric_limits<double>::epsilon());
    if (x <= 2.0) {
        const double y = (x > xsml) ? x * x : 0.0;
        const double i0 = i0e(x) * std::exp(x);
        return std::exp(x) * (-std::log(0.5 * x) * i0 - 0.25 + dcsevl(0.5 * y - 1.0, bk0cs, ntk0));
    } else if (x <= 8.0) {
        return (dcsevl((16.0 / x - 5.0) / 3.0, ak0cs, ntak0) + 1.25) / std::sqrt(x);
    }
    return (dcsevl(16.0 / x - 1.0, ak02cs, ntak02) + 1.25) / std::sqrt(x);
}

double k1e(double x) {
    check_positive(x);
    const double xsml = 2.0 * std::sqrt(std::numeric_limits<double>::epsilon());
    if (x <= 2.0) {
        const double y = (x > xsml) ? x * x : 0.0;
        const double i1 = i1e(x) * std::exp(x);
        return std::exp(x) *
               (std::log(0.5 * x) * i1 + (0.75 + dcsevl(0.5 * y - 1.0, bk1cs, ntk1)) / x);
    } else if (x <= 8.0) {
        return (dcsevl((16.0 / x - 5.0) / 3.0, ak1cs, ntak1) + 1.25) / std::sqrt(x);
    }
    return (dcsevl(16.0 / x - 1.0, ak12cs, ntak12) + 1.25) / std::sqrt(x);
}

double k1(double x) {
    if (x > 700.0) return 0.0;
    return k1e(x) * std::exp(-x);
}

namespace {

// Downward Miller recurrence for the scaled I_m, normalized against i0e.
ScaledPair miller_i(int m, double x) {
    const int start = std::max<int>(m, static_cast<int>(x)) + 20 +
                      static_cast<int>(4.5 * std::sqrt(std::max(1.0, x)));
    double q_above = 0.0;   // order j+1
    double q = 1e-280;      // order j
    double qm = (start == m) ? q : 0.0;
    double qm1 = 0.0;
    for (int j = start; j >= 1; --j) {
        const double q_below = q_above + (2.0 * j / x) * q;  // order j-1
        q_above = q;
        q = q_below;
        const int order = j - 1;
        if (order == m) qm = q;
        if (order == m - 1) qm1 = q;
        if (std::abs(q) > 1e270) {
            q *= 1e-270;
            q_above *= 1e-270;
            qm *= 1e-270;
            qm1 *= 1e-270;
        }
    }
    // q now holds order 0.
    const double scale = i0e(x) / q;
    return {qm * scale, qm1 * scale};
}

} // namespace

ScaledPair besseli_scaled_pair(int m, double x) {
    check_positive(x);
    if (m < 0) throw std::domain_error("bessel: order must be >= 0");
    if (m == 0) return {i0e(x), i1e(x)};  // I_{-1} = I_1
    if (m == 1) return {i1e(x), i0e(x)};
    return miller_i(m, x);
}

double besseli_scaled(int m, double x) { return besseli_scaled_pair(m, x).fm; }

ScaledPair besselk_scaled_pair(int m, double x) {
    check_positive(x);
    if (m < 0) throw std::domain_error("bessel: order must be >= 0");
    if (m == 0) return {k0e(x), k1e(x)};  // K_{-1} = K_1
    double km1 = k0e(x);
    double km = k1e(x);
    for (int j = 1; j < m; ++j) {
        const double next = km1 + (2.0 * j / x) * km;
        km1 = km;
        km = next;
        if (km > 1e290) return {std::numeric_limits<double>::infinity(),
                                std::numeric_limits<double>::infinity()};
    }
    return {km, km1};
}

double besselk_scaled(int m, double x) { return besselk_scaled_pair(m, x).fm; }

void besseli_scaled_array(int mmax, double x, std::vector<double>& out) {
    check_positive(x);
    out.assign(static_cast<std::size_t>(mmax) + 1, 0.0);
    const int start = std::max<int>(mmax, static_cast<int>(x)) + 20 +
                      static_cast<int>(4.5 * std::sqrt(std::max(1.0, x)));
    double q_above = 0.0;
    double q = 1e-280;
    if (start <= mmax) out[start] = q;
    for (int j = start; j >= 1; --j) {
        const double q_below = q_above + (2.0 * j / x) * q;
        q_above = q;
        q = q_below;
        const int order = j - 1;
        if (order <= mmax) out[order] = q;
        if (std::abs(q) > 1e270) {
            q *= 1e-270;
            q_above *= 1e-270;
            for (int k = order; k <= mmax; ++k) out[k] *= 1e-270;
        }
    }
    const double scale = i0e(x) / q;
    for (double& v : out) v *= scale;
}

void besselk_scaled_array(int mmax, double x, std::vector<double>& out) {
    check_positive(x);
    out.assign(static_cast<std::size_t>(mmax) + 1, std::numeric_limits<double>::infinity());
    out[0] = k0e(x);
    if (mmax >= 1) out[1] = k1e(x);
    for (int j = 1; j < mmax; ++j) {
        const double next = out[j - 1] + (2.0 * j / x) * out[j];
        if (next > 1e290) break;  // the rest stay +inf
        out[j + 1] = next;
    }
}

} // namespace nanotrap::bessel
