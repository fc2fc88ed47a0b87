// interpolation.hpp — monotone cubic (Fritsch-Carlson) interpolation

#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace tvdiel {

// Piecewise-cubic Hermite interpolant with Fritsch-Carlson slope limiting.
// Monotone between nodes, so strictly positive samples stay positive.
class MonotoneCubic {
public:
    MonotoneCubic() = default;

    MonotoneCubic(std::vector<double> x, std::vector<double> y)
        : x_(std::move(x)), y_(std::move(y)) {
        const std::size_t n = x_.size();
        if (n < 2 || y_.size() != n) {
            throw std::invalid_argument("MonotoneCubic: need >= 2 samples");
        }
        for (std::size_t i = 0; i + 1 < n; ++i) {
            if (!(x_[i + 1] > x_[i])) {
                throw std::invalid_argument("MonotoneCubic: abscissae must increase strictly");
            }
        }
        d_.resize(n);
        std::vector<double> slope(n - 1);
        for (std::size_t i = 0; i + 1 < n; ++i) {
            slope[i] = (y_[i + 1] - y_[i]) / (x_[i + 1] - x_[i]);
        }
        d_[0] = slope[0];
        d_[n - 1] = slope[n - 2];
        for (std::size_t i = 1; i + 1 < n; ++i) {
            if (slope[i - 1] * slope[i] <= 0.0) {
                d_[i] = 0.0; // local extremum
            } else {
                const double h0 = x_[i] - x_[i - 1];
                const double h1 = x_[i + 1] - x_[i];
                const double w0 = 2.0 * h1 + h0;
                const double w1 = h1 + 2.0 * h0;
                d_[i] = (w0 + w1) / (w0 / slope[i - 1] + w1 / slope[i]);
            }
        }
        // limit endpoint slopes (Fritsch-Carlson three-slope rule)
        for (std::size_t e : {std::size_t{0}, n - 1}) {
            const std::size_t i = (e == 0) ? 0 : n - 2;
            if (slope[i] == 0.0) {
                d_[e] = 0.0;
            } else if (d_[e] / slope[i] < 0.0) {
                d_[e] = 0.0;
            } else if (std::abs(d_[e]) > 3.0 * std::abs(slope[i])) {
                d_[e] = 3.0 * slope[i];
            }
        }
    }

    double min_x() const { return x_.front(); }
    double max_x() const { return x_.back(); }
    const std::vector<double>& abscissae() const { return x_; }

    bool in_range(double x) const { return x >= x_.front() && x <= x_.back(); }

    double operator()(double x) const {
        if (!in_range(x)) {
            throw std::out_of_range("MonotoneCubic: extrapolation forbidden");
        }
        std::size_t i = segment(x);
        const double h = x_[i + 1] - x_[i];
        const double s = (x - x_[i]) / h;
        const double s2 = s * s;
        const double s3 = s2 * s;
        const double h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
        const double h10 = s3 - 2.0 * s2 + s;
        const double h01 = -2.0 * s3 + 3.0 * s2;
        const double h11 = s3 - s2;
        return h00 * y_[i] + h * h10 * d_[i] + h01 * y_[i + 1] + h * h11 * d_[i + 1];
    }

private:
    std::size_t segment(double x) const {
        std::size_t lo = 0;
        std::size_t hi = x_.size() - 1;
        while (hi - lo > 1) {
            const std::size_t mid = (lo + hi) / 2;
            if (x_[mid] <= x) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        return lo;
    }

    std::vector<double> x_;
    std::vector<double> y_;
    std::vector<double> d_;
};

} // namespace tvdiel
