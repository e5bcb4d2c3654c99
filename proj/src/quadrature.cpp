#include "nanotrap/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace nanotrap::quad {

namespace {

// Gauss-Kronrod (7,15) nodes and weights on [-1,1] (QUADPACK dqk15).
constexpr double xgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.000000000000000};
constexpr double wgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
constexpr double wg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

struct Estimate {
    double kronrod;
    double err;
};

template <typename F>
Estimate gk15(const F& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double fc = f(c);
    double resg = fc * wg[3];
    double resk = fc * wgk[7];
    for (int j = 0; j < 7; ++j) {
        const double dx = h * xgk[j];
        const double f1 = f(c - dx);
        const double f2 = f(c + dx);
        resk += wgk[j] * (f1 + f2);
        if (j % 2 == 1) resg += wg[j / 2] * (f1 + f2);
    }
    return {resk * h, std::abs((resk - resg) * h)};
}

template <typename F>
double adapt(const F& f, double a, double b, double tol, int depth, int max_depth) {
    Estimate e = gk15(f, a, b);
    if (e.err <= tol || depth >= max_depth) return e.kronrod;
    const double c = 0.5 * (a + b);
    return adapt(f, a, c, 0.5 * tol, depth + 1, max_depth) +
           adapt(f, c, b, 0.5 * tol, depth + 1, max_depth);
}

} // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 const Options& opt) {
    if (a == b) return 0.0;
    Estimate first = gk15(f, a, b);
    double tol = std::max(opt.abs_tol, opt.rel_tol * std::abs(first.kronrod));
    if (tol <= 0.0) tol = 1e-300;
    if (first.err <= tol) return first.kronrod;
    const double c = 0.5 * (a + b);
    return adapt(f, a, c, 0.5 * tol, 1, opt.max_depth) +
           adapt(f, c, b, 0.5 * tol, 1, opt.max_depth);
}

double integrate2d(const std::function<double(double, double)>& f, double ax, double bx,
                   double ay, double by, const Options& opt) {
    Options inner = opt;
    inner.rel_tol = std::max(opt.rel_tol * 0.1, 1e-13);
    auto outer = [&](double x) {
        return integrate([&](double y) { return f(x, y); }, ay, by, inner);
    };
    return integrate(outer, ax, bx, opt);
}

double integrate_sqrt_endpoints(const std::function<double(double)>& f, double a, double b,
                                const Options& opt) {
    const double L = b - a;
    if (L == 0.0) return 0.0;
    auto g = [&](double t) {
        const double s = std::sin(t);
        const double x = a + L * s * s;
        return f(x) * 2.0 * L * s * std::cos(t);
    };
    constexpr double half_pi = 1.5707963267948966;
    return integrate(g, 0.0, half_pi, opt);
}

} // namespace nanotrap::quad
