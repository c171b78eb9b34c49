// SPDX-License-Identifier: Apache-2.0
//
// Embedded Dormand-Prince 5(4) integrator for small autonomous systems,
// used for the traveling-wave (heteroclinic) shooting.

#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

namespace vsw {

using Vec2 = std::array<double, 2>;

inline Vec2 operator+(const Vec2& a, const Vec2& b) { return {a[0] + b[0], a[1] + b[1]}; }
inline Vec2 operator*(double c, const Vec2& a) { return {c * a[0], c * a[1]}; }

struct OdeOptions {
    double abs_tol = 1e-13;
    double rel_tol = 1e-12;
    double h_init = 1e-4;
    double h_max = 1.0;
    double x_max = 1e6;            // hard span limit
    std::size_t max_steps = 20'000'000;
};

struct OdePoint {
    double x;
    Vec2 y;
};

// Integrates y' = f(y) from (0, y0) until `stop(y)` is true, recording every
// accepted step.  `escape(y)` aborts with a runtime error naming the caller's
// reason.  Returns the accepted trajectory including the initial point.
template <class F, class Stop, class Escape>
std::vector<OdePoint> integrate_dopri5(F&& f, Vec2 y0, const OdeOptions& opt, Stop&& stop,
                                       Escape&& escape, const char* escape_msg) {
    // Dormand-Prince coefficients.
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
    (void)c2; (void)c3; (void)c4; (void)c5;  // autonomous system

    std::vector<OdePoint> out;
    double x = 0.0, h = opt.h_init;
    Vec2 y = y0;
    out.push_back({x, y});
    Vec2 k1 = f(y);

    for (std::size_t step = 0; step < opt.max_steps; ++step) {
        if (stop(y)) return out;
        if (escape(y)) throw std::runtime_error(escape_msg);
        if (x > opt.x_max)
            throw std::runtime_error("integrate_dopri5: span limit exceeded before stop condition");

        h = std::min(h, opt.h_max);
        const Vec2 k2 = f(y + h * (a21 * k1));
        const Vec2 k3 = f(y + h * (a31 * k1 + a32 * k2));
        const Vec2 k4 = f(y + h * (a41 * k1 + a42 * k2 + a43 * k3));
        const Vec2 k5 = f(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
        const Vec2 k6 = f(y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        const Vec2 y5 = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        const Vec2 k7 = f(y5);  // FSAL

        double err = 0.0;
        for (int i = 0; i < 2; ++i) {
            const double ei = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                                   e6 * k6[i] + e7 * k7[i]);
            const double sc = opt.abs_tol + opt.rel_tol * std::max(std::abs(y[i]), std::abs(y5[i]));
            err = std::max(err, std::abs(ei) / sc);
        }

        if (err <= 1.0) {
            x += h;
            y = y5;
            k1 = k7;
            out.push_back({x, y});
        }
        const double fac = (err > 0.0) ? 0.9 * std::pow(err, -0.2) : 5.0;
        h *= std::min(5.0, std::max(0.2, fac));
        if (!(h > 0.0) || !std::isfinite(h))
            throw std::runtime_error("integrate_dopri5: step size underflow");
    }
    throw std::runtime_error("integrate_dopri5: max step count exceeded");
}

}  // namespace vsw
