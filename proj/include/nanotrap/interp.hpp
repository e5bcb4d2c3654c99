#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace nanotrap {

/// Natural cubic spline on a strictly increasing node set.
class CubicSpline {
public:
    CubicSpline() = default;
    CubicSpline(std::vector<double> xs, std::vector<double> ys) { build(std::move(xs), std::move(ys)); }

    void build(std::vector<double> xs, std::vector<double> ys) {
        if (xs.size() != ys.size() || xs.size() < 3)
            throw std::invalid_argument("CubicSpline: need >= 3 matching nodes");
        x_ = std::move(xs);
        y_ = std::move(ys);
        const std::size_t n = x_.size();
        y2_.assign(n, 0.0);
        std::vector<double> u(n - 1, 0.0);
        for (std::size_t i = 1; i + 1 < n; ++i) {
            const double sig = (x_[i] - x_[i - 1]) / (x_[i + 1] - x_[i - 1]);
            const double p = sig * y2_[i - 1] + 2.0;
            y2_[i] = (sig - 1.0) / p;
            u[i] = (y_[i + 1] - y_[i]) / (x_[i + 1] - x_[i]) -
                   (y_[i] - y_[i - 1]) / (x_[i] - x_[i - 1]);
            u[i] = (6.0 * u[i] / (x_[i + 1] - x_[i - 1]) - sig * u[i - 1]) / p;
        }
        for (std::size_t k = n - 1; k-- > 0;) y2_[k] = y2_[k] * y2_[k + 1] + u[k];
    }

    double operator()(double x) const {
        std::size_t lo = 0, hi = x_.size() - 1;
        if (x <= x_.front()) {
            hi = 1;
        } else if (x >= x_.back()) {
            lo = x_.size() - 2;
        } else {
            while (hi - lo > 1) {
                const std::size_t mid = (hi + lo) / 2;
                if (x_[mid] > x) hi = mid;
                else lo = mid;
            }
        }
        const double h = x_[hi] - x_[lo];
        const double a = (x_[hi] - x) / h;
        const double b = (x - x_[lo]) / h;
        return a * y_[lo] + b * y_[hi] +
               ((a * a * a - a) * y2_[lo] + (b * b * b - b) * y2_[hi]) * (h * h) / 6.0;
    }

    bool empty() const { return x_.empty(); }
    double front_x() const { return x_.front(); }
    double back_x() const { return x_.back(); }

private:
    std::vector<double> x_, y_, y2_;
};

} // namespace nanotrap
