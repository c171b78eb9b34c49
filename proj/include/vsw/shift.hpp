// SPDX-License-Identifier: Apache-2.0
//
// Asymptotic phase shift from the momentum balance.  The shift functional
//
//   I(alpha) = int_0^inf [u0(x) - U(x+alpha-beta)] dx
//            - int_0^inf s [U(-s t + alpha - beta) - u-] dt
//
// has I'(alpha) = u- - u+, and the shift is alpha = I(0)/(u+ - u-).  The
// t-integral is evaluated by substituting onto the profile grid
// (dt = -dxi/s); clamped profile tails make both quadratures finite.

#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "vsw/profile.hpp"

namespace vsw {

struct NonIntegrablePerturbationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Velocity samples on a uniform half-line grid x_i = x0 + i dx.
struct VelocityField {
    double x0 = 0.0;
    double dx = 0.0;
    std::vector<double> u;
};

struct ShiftResult {
    double alpha = 0;
    double I0 = 0;
    double beta = 0;
    double quad_tol = 0;
};

// int_{-inf}^{xi_hi} (U(xi) - u-) dxi on the clamped profile.
inline double profile_tail_integral(const ShockProfile& p, double xi_hi) {
    const double Xi = p.xi_span();
    const double um = p.shock.left.u, up = p.shock.right.u;
    if (xi_hi <= -Xi) return 0.0;
    if (xi_hi >= Xi) return p.cumU.back() + (xi_hi - Xi) * (up - um);
    const double h = p.dxi();
    std::size_t i = static_cast<std::size_t>((xi_hi - p.xi.front()) / h);
    i = std::min(i, p.xi.size() - 2);
    const double Uq = sample_profile(p, xi_hi).U;
    return p.cumU[i] + 0.5 * (xi_hi - p.xi[i]) * ((p.U[i] - um) + (Uq - um));
}

namespace detail {

inline double field_trapz(const VelocityField& u0, std::size_t stride) {
    double sum = 0.0;
    const std::size_t n = u0.u.size();
    std::size_t prev = 0;
    for (std::size_t i = stride; i < n; i += stride) {
        sum += 0.5 * (u0.u[prev] + u0.u[i]) * static_cast<double>(i - prev) * u0.dx;
        prev = i;
    }
    if (prev != n - 1)
        sum += 0.5 * (u0.u[prev] + u0.u[n - 1]) * static_cast<double>(n - 1 - prev) * u0.dx;
    return sum;
}

// int over the u0 window of U(x + alpha - beta) dx, done on the profile's own
// grid so the result is smooth in alpha.
inline double window_profile_integral(double alpha, const VelocityField& u0,
                                      const ShockProfile& p, double beta) {
    const double span = static_cast<double>(u0.u.size() - 1) * u0.dx;
    const double lo = u0.x0 + alpha - beta;
    const double hi = lo + span;
    return profile_tail_integral(p, hi) - profile_tail_integral(p, lo) +
           p.shock.left.u * span;
}

}  // namespace detail

inline double integral_I(double alpha, const VelocityField& u0, const ShockProfile& p,
                         double beta) {
    if (u0.u.size() < 2 || !(u0.dx > 0.0))
        throw std::invalid_argument("integral_I: u0 needs a uniform grid with >= 2 samples");
    if (std::abs(u0.u.back() - p.shock.right.u) > 1e-8)
        throw NonIntegrablePerturbationError(
            "integral_I: u0 does not decay to u+ at the right end of its grid");
    const double term1 =
        detail::field_trapz(u0, 1) - detail::window_profile_integral(alpha, u0, p, beta);
    const double term2 = profile_tail_integral(p, alpha - beta);
    return term1 - term2;
}

inline ShiftResult compute_alpha(const VelocityField& u0, const ShockProfile& p, double beta) {
    const double I0 = integral_I(0.0, u0, p, beta);
    const double jump = p.shock.right.u - p.shock.left.u;  // u+ - u-, nonzero by construction
    ShiftResult r;
    r.alpha = I0 / jump;
    r.I0 = I0;
    r.beta = beta;
    const double coarse = detail::field_trapz(u0, 2) -
                          detail::window_profile_integral(0.0, u0, p, beta) -
                          profile_tail_integral(p, -beta);
    r.quad_tol = std::abs(I0 - coarse) / 3.0;
    return r;
}

// A(t) = -s int_t^inf [U(-s tau + alpha - beta) - u-] dtau,  the boundary
// value of the Psi anti-derivative.
inline double boundary_A(double t, const ShockProfile& p, double alpha, double beta) {
    return -profile_tail_integral(p, -p.shock.s * t + alpha - beta);
}

}  // namespace vsw
