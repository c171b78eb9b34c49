// SPDX-License-Identifier: Apache-2.0
//
// Viscous shock profile (V, U, Theta)(xi) as the heteroclinic orbit of the
// integrated traveling-wave system
//
//   V'     = (V/(s mu)) (b1 - s^2 V - R Theta / V)
//   Theta' = (s V / kappa) (b2 - b1^2/(2 s^2) - R Theta/(gamma-1)
//                           + (s^2/2)(V - b1/s^2)^2)
//   U      = -(s V + a)
//
// connecting (v-, theta-) at xi = -inf (a saddle) to (v+, theta+) at
// xi = +inf (a stable node).  Shooting starts on the saddle's unstable
// manifold; the free phase is fixed afterwards by centering V(0) at the
// midpoint (v- + v+)/2.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "vsw/gas.hpp"
#include "vsw/hugoniot.hpp"
#include "vsw/interp.hpp"
#include "vsw/ode.hpp"

namespace vsw {

struct OrbitEscapeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct SlowConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct FitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline std::array<double, 2> profile_rhs(double V, double Theta, const ShockData& sd,
                                         const GasParams& gp) {
    if (!(V > 0.0) || !(Theta > 0.0))
        throw std::domain_error("profile_rhs: V and Theta must be positive");
    const double s = sd.s, b1 = sd.b1, b2 = sd.b2;
    const double dV = V / (s * gp.mu) * (b1 - s * s * V - gp.R * Theta / V);
    const double w = V - b1 / (s * s);
    const double dTheta = s * V / gp.kappa *
                          (b2 - b1 * b1 / (2.0 * s * s) - gp.R * Theta / (gp.gamma - 1.0) +
                           0.5 * s * s * w * w);
    return {dV, dTheta};
}

// Jacobian of the (V, Theta) system at a fixed point (P = R Theta / V there).
inline std::array<double, 4> fixed_point_jacobian(double V, double Theta, const ShockData& sd,
                                                  const GasParams& gp) {
    const double s = sd.s;
    const double P = gp.R * Theta / V;
    return {(P - s * s * V) / (s * gp.mu), -gp.R / (s * gp.mu), -s * V * P / gp.kappa,
            -s * V * gp.R / (gp.kappa * (gp.gamma - 1.0))};
}

struct TailRates {
    double left_unstable = 0;   // positive eigenvalue at (v-, theta-)
    double right_slow = 0;      // magnitude of the slow eigenvalue at (v+, theta+)
    Vec2 left_eigvec{1, 0};     // unit unstable eigenvector, V-component > 0
};

inline TailRates fixed_point_rates(const ShockData& sd, const GasParams& gp) {
    TailRates r;
    {
        const auto J = fixed_point_jacobian(sd.left.v, sd.left.theta, sd, gp);
        const double tr = J[0] + J[3], det = J[0] * J[3] - J[1] * J[2];
        const double disc = tr * tr - 4.0 * det;
        if (det >= 0.0 || disc <= 0.0)
            throw std::runtime_error("fixed_point_rates: left state is not a saddle");
        const double lam = 0.5 * (tr + std::sqrt(disc));
        r.left_unstable = lam;
        Vec2 w{1.0, (lam - J[0]) / J[1]};
        const double n = std::sqrt(w[0] * w[0] + w[1] * w[1]);
        r.left_eigvec = {w[0] / n, w[1] / n};
        if (r.left_eigvec[0] < 0.0) r.left_eigvec = {-r.left_eigvec[0], -r.left_eigvec[1]};
    }
    {
        const auto J = fixed_point_jacobian(sd.right.v, sd.right.theta, sd, gp);
        const double tr = J[0] + J[3], det = J[0] * J[3] - J[1] * J[2];
        const double disc = tr * tr - 4.0 * det;
        if (!(det > 0.0) || !(tr < 0.0) || !(disc > 0.0))
            throw std::runtime_error("fixed_point_rates: right state is not a stable node");
        r.right_slow = std::abs(0.5 * (tr + std::sqrt(disc)));
    }
    return r;
}

struct ShockProfile {
    std::vector<double> xi;           // uniform, symmetric about 0
    std::vector<double> V, U, Theta;
    std::vector<double> dV, dTheta;   // monotone-cubic node derivatives
    std::vector<double> cumU;         // int_{-Xi}^{xi_i} (U - u-) dxi'
    ShockData shock;
    GasParams params;
    double endpoint_tol = 0;          // achieved |V-v|+|Theta-theta| at the ends
    const char* centering = "V-midpoint-at-0";

    double xi_span() const { return xi.back(); }
    double dxi() const { return xi[1] - xi[0]; }
};

struct ProfilePoint {
    double V, U, Theta;
};

inline ProfilePoint sample_profile(const ShockProfile& p, double xiq) {
    if (xiq <= -p.xi_span()) return {p.shock.left.v, p.shock.left.u, p.shock.left.theta};
    if (xiq >= p.xi_span()) return {p.shock.right.v, p.shock.right.u, p.shock.right.theta};
    const double h = p.dxi();
    std::size_t i = static_cast<std::size_t>((xiq - p.xi.front()) / h);
    i = std::min(i, p.xi.size() - 2);
    const double V =
        hermite_eval(p.xi[i], p.xi[i + 1], p.V[i], p.V[i + 1], p.dV[i], p.dV[i + 1], xiq);
    const double Th = hermite_eval(p.xi[i], p.xi[i + 1], p.Theta[i], p.Theta[i + 1], p.dTheta[i],
                                   p.dTheta[i + 1], xiq);
    return {V, -(p.shock.s * V + p.shock.a), Th};
}

namespace detail {

struct Orbit {
    std::vector<double> xi, V, Th;
};

inline Orbit shoot_orbit(const ShockData& sd, const GasParams& gp, double eps, double stop_tol,
                         double tol, double max_span, const TailRates& rates) {
    const Vec2 start{sd.left.v + eps * rates.left_eigvec[0],
                     sd.left.theta + eps * rates.left_eigvec[1]};
    auto rhs = [&](const Vec2& y) -> Vec2 {
        const auto d = profile_rhs(y[0], y[1], sd, gp);
        return {d[0], d[1]};
    };
    auto stop = [&](const Vec2& y) {
        return std::abs(y[0] - sd.right.v) + std::abs(y[1] - sd.right.theta) <= stop_tol;
    };
    auto escape = [&](const Vec2& y) {
        return y[0] < sd.left.v - tol || y[0] > sd.right.v + tol || y[1] < sd.right.theta - tol ||
               y[1] > sd.left.theta + tol;
    };
    OdeOptions opt;
    opt.h_init = 1e-3 / rates.left_unstable;
    opt.h_max = 0.5 / std::min(rates.left_unstable, rates.right_slow);
    opt.x_max = max_span;
    std::vector<OdePoint> pts;
    try {
        pts = integrate_dopri5(rhs, start, opt, stop, escape,
                               "orbit escape: trajectory left [v-,v+] x [theta+,theta-]");
    } catch (const std::runtime_error& e) {
        if (std::string(e.what()).find("orbit escape") != std::string::npos)
            throw OrbitEscapeError(e.what());
        throw SlowConvergenceError(std::string("compute_profile: ") + e.what());
    }
    Orbit orb;
    orb.xi.reserve(pts.size());
    for (const auto& p : pts) {
        // Guard against roundoff-flat tail samples; pchip needs strict monotonicity.
        if (!orb.V.empty() && !(p.y[0] > orb.V.back())) continue;
        orb.xi.push_back(p.x);
        orb.V.push_back(p.y[0]);
        orb.Th.push_back(p.y[1]);
    }
    return orb;
}

}  // namespace detail

inline ShockProfile compute_profile(const ShockData& sd, const GasParams& gp, double tol = 1e-8,
                                    double max_span = 0.0) {
    gp.validate();
    if (!(tol > 0.0)) throw std::domain_error("compute_profile: tol must be positive");
    const TailRates rates = fixed_point_rates(sd, gp);
    const double rate_min = std::min(rates.left_unstable, rates.right_slow);
    if (max_span <= 0.0) max_span = 400.0 / rate_min;

    const double scale = sd.right.v + sd.left.theta;
    const double stop_floor = 3e-13 * scale;
    double stop_tol = std::max(1e-3 * tol, stop_floor);
    double eps = std::min(1e-10 * sd.d, 0.2 * tol);
    const double eps_floor = 1e3 * 2.2e-16 * scale;
    eps = std::max(eps, eps_floor);

    detail::Orbit orb;
    double xi_star = 0, Xi = 0;
    const double vmid = 0.5 * (sd.left.v + sd.right.v);

    for (int attempt = 0;; ++attempt) {
        orb = detail::shoot_orbit(sd, gp, eps, stop_tol, tol, max_span, rates);
        if (orb.xi.size() < 16)
            throw SlowConvergenceError("compute_profile: orbit produced too few samples");

        PchipCurve vcurve(orb.xi, orb.V);
        xi_star = vcurve.find_crossing(vmid);

        // Smallest half-span with both endpoint errors <= tol.
        double xi_tolL = orb.xi.front(), xi_tolR = orb.xi.back();
        for (std::size_t k = 0; k < orb.xi.size(); ++k) {
            const double le =
                std::abs(orb.V[k] - sd.left.v) + std::abs(orb.Th[k] - sd.left.theta);
            if (le <= tol) xi_tolL = orb.xi[k];
            else break;
        }
        for (std::size_t k = orb.xi.size(); k-- > 0;) {
            const double re =
                std::abs(orb.V[k] - sd.right.v) + std::abs(orb.Th[k] - sd.right.theta);
            if (re <= tol) xi_tolR = orb.xi[k];
            else break;
        }
        Xi = std::max(xi_star - xi_tolL, xi_tolR - xi_star);

        const double avail_left = xi_star - orb.xi.front();
        const double avail_right = orb.xi.back() - xi_star;
        if (avail_left >= Xi && avail_right >= Xi) break;

        if (attempt >= 3)
            throw SlowConvergenceError(
                "compute_profile: could not cover a symmetric span at the requested tolerance");
        // Extend whichever side comes up short: start deeper on the unstable
        // manifold for the left tail, integrate closer to the node for the
        // right tail.
        if (avail_left < Xi) {
            eps *= std::exp(-1.3 * (Xi - avail_left) * rates.left_unstable);
            eps = std::max(eps, eps_floor);
        }
        if (avail_right < Xi) {
            stop_tol *= std::exp(-1.3 * (Xi - avail_right) * rates.right_slow);
            stop_tol = std::max(stop_tol, stop_floor);
        }
    }

    PchipCurve vcurve(orb.xi, orb.V);
    PchipCurve tcurve(orb.xi, orb.Th);

    constexpr std::size_t kSamples = 4001;
    ShockProfile prof;
    prof.shock = sd;
    prof.params = gp;
    prof.xi.resize(kSamples);
    prof.V.resize(kSamples);
    prof.U.resize(kSamples);
    prof.Theta.resize(kSamples);
    const double h = 2.0 * Xi / static_cast<double>(kSamples - 1);
    for (std::size_t i = 0; i < kSamples; ++i) {
        const double x = -Xi + static_cast<double>(i) * h;
        prof.xi[i] = x;
        prof.V[i] = vcurve(x + xi_star);
        prof.Theta[i] = tcurve(x + xi_star);
        prof.U[i] = -(sd.s * prof.V[i] + sd.a);
    }

    const double errL =
        std::abs(prof.V.front() - sd.left.v) + std::abs(prof.Theta.front() - sd.left.theta);
    const double errR =
        std::abs(prof.V.back() - sd.right.v) + std::abs(prof.Theta.back() - sd.right.theta);
    prof.endpoint_tol = std::max(errL, errR);
    if (prof.endpoint_tol > tol)
        throw SlowConvergenceError("compute_profile: endpoint error " +
                                   std::to_string(prof.endpoint_tol) + " above tolerance");

    for (std::size_t i = 0; i + 1 < kSamples; ++i) {
        if (!(prof.V[i + 1] > prof.V[i]) || !(prof.Theta[i + 1] < prof.Theta[i]))
            throw std::runtime_error("compute_profile: resampled profile lost monotonicity");
    }

    prof.dV = pchip_derivatives(prof.xi, prof.V);
    prof.dTheta = pchip_derivatives(prof.xi, prof.Theta);

    prof.cumU.assign(kSamples, 0.0);
    const double um = sd.left.u;
    for (std::size_t i = 1; i < kSamples; ++i)
        prof.cumU[i] =
            prof.cumU[i - 1] + 0.5 * h * ((prof.U[i - 1] - um) + (prof.U[i] - um));
    return prof;
}

struct DecayFit {
    double c1_hat = 0;   // amplitude constant: |V - v| ~ c1 d exp(-c2 d |xi|)
    double c2_hat = 0;   // rate per unit (d xi), pooled over both tails
    std::array<double, 2> fit_window_left{0, 0};
    std::array<double, 2> fit_window_right{0, 0};
    double rate_left = 0, rate_right = 0;          // V-tail rates per unit xi
    double theta_rate_left = 0, theta_rate_right = 0;
    double log_rms = 0;                            // worst per-tail RMS of the log fit
    int n_left = 0, n_right = 0;
};

namespace detail {

struct TailFit {
    double rate, logc, rms, lo, hi;
    int n;
};

inline TailFit fit_tail(const std::vector<double>& xi, const std::vector<double>& amp,
                        double a_lo, double a_hi) {
    std::vector<double> xs, ys;
    double lo = 0, hi = 0;
    for (std::size_t i = 0; i < xi.size(); ++i) {
        if (amp[i] >= a_lo && amp[i] <= a_hi) {
            if (xs.empty()) lo = xi[i];
            hi = xi[i];
            xs.push_back(std::abs(xi[i]));
            ys.push_back(std::log(amp[i]));
        }
    }
    if (xs.size() < 8)
        throw FitError("decay fit: fewer than 8 tail samples above the noise floor");
    const double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double icpt = (sy - slope * sx) / n;
    double ss = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = ys[i] - (icpt + slope * xs[i]);
        ss += r * r;
    }
    return {-slope, icpt, std::sqrt(ss / n), lo, hi, static_cast<int>(xs.size())};
}

}  // namespace detail

inline DecayFit decay_fit(const ShockProfile& p) {
    const double d = p.shock.d;
    const double dth = p.shock.left.theta - p.shock.right.theta;
    const double a_lo = std::max(5.0 * p.endpoint_tol, 1e-13);
    const std::size_t n = p.xi.size();

    std::vector<double> xiL, ampL, thL, xiR, ampR, thR;
    for (std::size_t i = 0; i < n; ++i) {
        if (p.xi[i] < 0) {
            xiL.push_back(p.xi[i]);
            ampL.push_back(std::abs(p.V[i] - p.shock.left.v));
            thL.push_back(std::abs(p.Theta[i] - p.shock.left.theta));
        } else if (p.xi[i] > 0) {
            xiR.push_back(p.xi[i]);
            ampR.push_back(std::abs(p.V[i] - p.shock.right.v));
            thR.push_back(std::abs(p.Theta[i] - p.shock.right.theta));
        }
    }

    const auto fL = detail::fit_tail(xiL, ampL, a_lo, 0.02 * d);
    const auto fR = detail::fit_tail(xiR, ampR, a_lo, 0.02 * d);
    const auto tL = detail::fit_tail(xiL, thL, a_lo, 0.02 * dth);
    const auto tR = detail::fit_tail(xiR, thR, a_lo, 0.02 * dth);

    DecayFit fit;
    fit.rate_left = fL.rate;
    fit.rate_right = fR.rate;
    fit.theta_rate_left = tL.rate;
    fit.theta_rate_right = tR.rate;
    fit.c2_hat = 0.5 * (fL.rate + fR.rate) / d;
    fit.c1_hat = 0.5 * (std::exp(fL.logc) + std::exp(fR.logc)) / d;
    fit.fit_window_left = {fL.lo, fL.hi};
    fit.fit_window_right = {fR.lo, fR.hi};
    fit.log_rms = std::max(fL.rms, fR.rms);
    fit.n_left = fL.n;
    fit.n_right = fR.n;
    if (!(fit.c1_hat > 0.0) || !(fit.c2_hat > 0.0))
        throw FitError("decay fit: non-positive fitted constants");
    return fit;
}

}  // namespace vsw
