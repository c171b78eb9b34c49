// SPDX-License-Identifier: Apache-2.0
//
// Shape-preserving cubic Hermite interpolation (Fritsch-Carlson derivatives).
// Monotone data yields a monotone interpolant, which the profile machinery
// relies on.

#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace vsw {

// Node derivatives for a monotone cubic through (x_i, y_i).  x strictly
// increasing; arbitrary spacing.
inline std::vector<double> pchip_derivatives(const std::vector<double>& x,
                                             const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n != y.size() || n < 2) throw std::invalid_argument("pchip: need n >= 2 matching arrays");
    std::vector<double> m(n, 0.0);
    if (n == 2) {
        m[0] = m[1] = (y[1] - y[0]) / (x[1] - x[0]);
        return m;
    }
    std::vector<double> h(n - 1), del(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        h[i] = x[i + 1] - x[i];
        if (!(h[i] > 0.0)) throw std::invalid_argument("pchip: x must be strictly increasing");
        del[i] = (y[i + 1] - y[i]) / h[i];
    }
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (del[i - 1] * del[i] <= 0.0) {
            m[i] = 0.0;
        } else {
            const double w1 = 2.0 * h[i] + h[i - 1];
            const double w2 = h[i] + 2.0 * h[i - 1];
            m[i] = (w1 + w2) / (w1 / del[i - 1] + w2 / del[i]);
        }
    }
    // One-sided three-point endpoint formula with the usual monotonicity clamp.
    auto endpoint = [](double h0, double h1, double d0, double d1) {
        double me = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
        if (me * d0 <= 0.0) return 0.0;
        if (d0 * d1 < 0.0 && std::abs(me) > 3.0 * std::abs(d0)) return 3.0 * d0;
        return me;
    };
    m[0] = endpoint(h[0], h[1], del[0], del[1]);
    m[n - 1] = endpoint(h[n - 2], h[n - 3], del[n - 2], del[n - 3]);
    return m;
}

inline double hermite_eval(double xl, double xr, double yl, double yr, double ml, double mr,
                           double xq) {
    const double h = xr - xl;
    const double t = (xq - xl) / h;
    const double t2 = t * t, t3 = t2 * t;
    return yl * (2 * t3 - 3 * t2 + 1) + h * ml * (t3 - 2 * t2 + t) + yr * (-2 * t3 + 3 * t2) +
           h * mr * (t3 - t2);
}

// Monotone cubic on an arbitrary strictly increasing grid; clamps outside.
class PchipCurve {
  public:
    PchipCurve() = default;
    PchipCurve(std::vector<double> x, std::vector<double> y)
        : x_(std::move(x)), y_(std::move(y)), m_(pchip_derivatives(x_, y_)) {}

    double operator()(double xq) const {
        if (xq <= x_.front()) return y_.front();
        if (xq >= x_.back()) return y_.back();
        std::size_t lo = 0, hi = x_.size() - 1;
        while (hi - lo > 1) {
            const std::size_t mid = (lo + hi) / 2;
            (x_[mid] <= xq ? lo : hi) = mid;
        }
        return hermite_eval(x_[lo], x_[lo + 1], y_[lo], y_[lo + 1], m_[lo], m_[lo + 1], xq);
    }

    // Abscissa where the (monotone) interpolant crosses `target`, by bisection
    // inside the bracketing cell.
    double find_crossing(double target) const {
        const bool inc = y_.back() > y_.front();
        const double ylo = inc ? y_.front() : y_.back();
        const double yhi = inc ? y_.back() : y_.front();
        if (target < ylo || target > yhi)
            throw std::domain_error("PchipCurve::find_crossing: target outside data range");
        std::size_t lo = 0, hi = x_.size() - 1;
        while (hi - lo > 1) {
            const std::size_t mid = (lo + hi) / 2;
            const bool below = inc ? (y_[mid] <= target) : (y_[mid] >= target);
            (below ? lo : hi) = mid;
        }
        double a = x_[lo], b = x_[lo + 1];
        for (int it = 0; it < 200 && (b - a) > 1e-15 * (1.0 + std::abs(a)); ++it) {
            const double mid = 0.5 * (a + b);
            const bool below = inc ? ((*this)(mid) <= target) : ((*this)(mid) >= target);
            (below ? a : b) = mid;
        }
        return 0.5 * (a + b);
    }

    const std::vector<double>& x() const { return x_; }
    const std::vector<double>& y() const { return y_; }

  private:
    std::vector<double> x_, y_, m_;
};

inline double trapz(const std::vector<double>& y, double dx) {
    if (y.size() < 2) return 0.0;
    double s = 0.5 * (y.front() + y.back());
    for (std::size_t i = 1; i + 1 < y.size(); ++i) s += y[i];
    return s * dx;
}

}  // namespace vsw
