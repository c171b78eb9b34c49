// SPDX-License-Identifier: Apache-2.0
//
// Explicit finite-difference solver for the Lagrangian free-boundary system
//
//   v_t - u_x = 0
//   u_t + p_x = mu (u_x / v)_x
//   (R/(gamma-1)) theta_t = -p u_x + (kappa theta_x / v)_x + mu u_x^2 / v
//
// on 0 <= x <= L with (p - mu u_x/v)|_{x=0} = p0, theta|_{x=0} = theta-,
// Dirichlet far field, second-order central interior stencils, and Heun
// time stepping.  The momentum update is in flux form with the exact
// boundary stress sigma(0) = -p0, so the discrete momentum budget closes
// to the far-field flux.  The boundary volume update v_t(0) = u_x(0) uses
// the stress condition directly, which makes v(0,t) obey the exact
// relaxation law dv0/dt = -(p0/mu)(v0 - R theta-/p0).

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "vsw/gas.hpp"
#include "vsw/hugoniot.hpp"
#include "vsw/profile.hpp"

namespace vsw {

struct BlowUpError : std::runtime_error {
    std::size_t node;
    double time;
    BlowUpError(std::size_t node_, double time_)
        : std::runtime_error("blow-up/instability: positivity lost at node " +
                             std::to_string(node_) + ", t = " + std::to_string(time_)),
          node(node_),
          time(time_) {}
};

struct BoundaryData {
    double p0 = 0;           // prescribed total stress magnitude at x = 0
    double theta_minus = 0;  // Dirichlet temperature at x = 0
    ThermoState far;         // Dirichlet state at x = L
};

struct SimState {
    double dx = 0;
    std::vector<double> v, u, theta;
    double t = 0;
    GasParams params;
    BoundaryData bc;

    std::size_t n() const { return v.size(); }
    double x(std::size_t i) const { return static_cast<double>(i) * dx; }
    double length() const { return dx * static_cast<double>(n() - 1); }
};

struct StepControl {
    double cfl = 0.4;
    double dt_max = std::numeric_limits<double>::infinity();
    double positivity_floor = 1e-8;
};

struct GhostValues {
    double ux0;      // u_x(0) from the stress condition
    double u_ghost;  // u_{-1} = u_1 - 2 dx u_x(0)
    double v_ghost;  // linear extrapolant 2 v_0 - v_1
};

inline GhostValues boundary_closure(const SimState& s) {
    const double p0 = s.params.R * s.theta[0] / s.v[0];
    const double ux0 = (p0 - s.bc.p0) * s.v[0] / s.params.mu;
    return {ux0, s.u[1] - 2.0 * s.dx * ux0, 2.0 * s.v[0] - s.v[1]};
}

// Perturbation superposed on the shifted profile by init_state.
struct Perturbation {
    enum class Shape { none, gaussian_bump, profile_shift };
    Shape shape = Shape::none;
    double amplitude = 0;  // bump height, or the extra offset for profile_shift
    double center = 0;
    double width = 1;
    bool on_v = true, on_u = true, on_theta = true;
};

namespace detail {

struct RhsBuffers {
    std::vector<double> p, sigma, q;          // per-evaluation scratch
    std::vector<double> dv1, du1, dth1;       // stage-1 derivatives
    std::vector<double> dv2, du2, dth2;       // stage-2 derivatives
    std::vector<double> v1, u1, th1;          // predictor state storage
};

inline void eval_rhs(const SimState& s, RhsBuffers& b, std::vector<double>& dv,
                     std::vector<double>& du, std::vector<double>& dth) {
    const std::size_t M = s.n() - 1;
    const double dx = s.dx, mu = s.params.mu, kap = s.params.kappa, R = s.params.R;
    const double gm1 = s.params.gamma - 1.0;
    b.p.resize(M + 1);
    b.sigma.resize(M);
    b.q.resize(M);
    dv.resize(M + 1);
    du.resize(M + 1);
    dth.resize(M + 1);

    for (std::size_t i = 0; i <= M; ++i) b.p[i] = R * s.theta[i] / s.v[i];
    for (std::size_t i = 0; i < M; ++i) {
        const double vmid = 0.5 * (s.v[i] + s.v[i + 1]);
        b.sigma[i] = -0.5 * (b.p[i] + b.p[i + 1]) + mu * (s.u[i + 1] - s.u[i]) / (dx * vmid);
        b.q[i] = kap * (s.theta[i + 1] - s.theta[i]) / (dx * vmid);
    }

    const double ux0 = (b.p[0] - s.bc.p0) * s.v[0] / mu;
    dv[0] = ux0;
    du[0] = 2.0 * (b.sigma[0] + s.bc.p0) / dx;  // half-cell flux, sigma(0) = -p0 exact
    dth[0] = 0.0;
    for (std::size_t i = 1; i < M; ++i) {
        const double ux = (s.u[i + 1] - s.u[i - 1]) / (2.0 * dx);
        dv[i] = ux;
        du[i] = (b.sigma[i] - b.sigma[i - 1]) / dx;
        dth[i] = gm1 / R * (-b.p[i] * ux + (b.q[i] - b.q[i - 1]) / dx + mu * ux * ux / s.v[i]);
    }
    dv[M] = du[M] = dth[M] = 0.0;
}

inline void check_positivity(const SimState& s, double floor) {
    for (std::size_t i = 0; i < s.n(); ++i) {
        if (!(s.v[i] > floor) || !(s.theta[i] > floor) || !std::isfinite(s.u[i]))
            throw BlowUpError(i, s.t);
    }
}

}  // namespace detail

inline double stable_dt(const SimState& s, const StepControl& ctrl) {
    double lmax = 0.0, vmin = std::numeric_limits<double>::infinity();
    const double gR = s.params.gamma * s.params.R;
    for (std::size_t i = 0; i < s.n(); ++i) {
        lmax = std::max(lmax, std::sqrt(gR * s.theta[i]) / s.v[i]);
        vmin = std::min(vmin, s.v[i]);
    }
    const double diff = std::max(s.params.mu, s.params.kappa * (s.params.gamma - 1.0) / s.params.R);
    const double dt = ctrl.cfl * std::min(s.dx / lmax, s.dx * s.dx * vmin / (2.0 * diff));
    return std::min(dt, ctrl.dt_max);
}

// One Heun step; dt_in <= 0 means use the stability law.
inline void step(SimState& s, const StepControl& ctrl, detail::RhsBuffers& b, double dt_in = 0.0) {
    const double dt = dt_in > 0.0 ? dt_in : stable_dt(s, ctrl);
    const std::size_t n = s.n();

    detail::eval_rhs(s, b, b.dv1, b.du1, b.dth1);

    SimState stage{s.dx, {}, {}, {}, s.t + dt, s.params, s.bc};
    stage.v.swap(b.v1);
    stage.u.swap(b.u1);
    stage.theta.swap(b.th1);
    stage.v.resize(n);
    stage.u.resize(n);
    stage.theta.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        stage.v[i] = s.v[i] + dt * b.dv1[i];
        stage.u[i] = s.u[i] + dt * b.du1[i];
        stage.theta[i] = s.theta[i] + dt * b.dth1[i];
    }
    detail::check_positivity(stage, ctrl.positivity_floor);

    detail::eval_rhs(stage, b, b.dv2, b.du2, b.dth2);
    for (std::size_t i = 0; i < n; ++i) {
        s.v[i] += 0.5 * dt * (b.dv1[i] + b.dv2[i]);
        s.u[i] += 0.5 * dt * (b.du1[i] + b.du2[i]);
        s.theta[i] += 0.5 * dt * (b.dth1[i] + b.dth2[i]);
    }
    s.t += dt;
    stage.v.swap(b.v1);  // hand the storage back for the next step
    stage.u.swap(b.u1);
    stage.theta.swap(b.th1);
    detail::check_positivity(s, ctrl.positivity_floor);
}

inline void step(SimState& s, const StepControl& ctrl, double dt_in = 0.0) {
    detail::RhsBuffers b;
    step(s, ctrl, b, dt_in);
}

// Advances to t_end, invoking `observe` at t = t0 (unless suppressed), every
// `cadence` accepted steps, and at t_end.  Returns the number of steps taken.
inline std::size_t advance(SimState& s, double t_end, const StepControl& ctrl,
                           std::size_t cadence,
                           const std::function<void(const SimState&)>& observe,
                           bool observe_initial = true) {
    if (t_end < s.t) throw std::invalid_argument("advance: t_end precedes current time");
    if (cadence == 0) cadence = 1;
    detail::RhsBuffers bufs;
    if (observe && observe_initial) observe(s);
    const double eps = 1e-12 * std::max(1.0, std::abs(t_end));
    std::size_t k = 0, last_observed = 0;
    while (s.t < t_end - eps) {
        const double dt = std::min(stable_dt(s, ctrl), t_end - s.t);
        step(s, ctrl, bufs, dt);
        ++k;
        if (k % cadence == 0 && s.t < t_end - eps) {
            if (observe) observe(s);
            last_observed = k;
        }
    }
    if (k > 0 && last_observed != k && observe) observe(s);
    return k;
}

inline SimState init_state(double L, std::size_t N, const ShockProfile& profile,
                           const DecayFit& fit, const Perturbation& pert, double beta) {
    if (N < 2) throw std::invalid_argument("init_state: need N >= 2 intervals");
    const double rate = fit.c2_hat * profile.shock.d;
    if (!(L >= beta + 40.0 / rate))
        throw std::invalid_argument("init_state: configuration error: L must be >= beta + 40/(c2*d)");

    auto bump = [&](double x) {
        const double z = (x - pert.center) / pert.width;
        return pert.amplitude * std::exp(-0.5 * z * z);
    };

    SimState s;
    s.dx = L / static_cast<double>(N);
    s.params = profile.params;
    s.t = 0.0;
    const std::size_t nodes = N + 1;
    s.v.resize(nodes);
    s.u.resize(nodes);
    s.theta.resize(nodes);

    double far_pert = 0.0;
    for (std::size_t i = 0; i < nodes; ++i) {
        const double x = s.x(i);
        ProfilePoint pp = sample_profile(profile, x - beta);
        double dv = 0, du = 0, dth = 0;
        switch (pert.shape) {
            case Perturbation::Shape::none:
                break;
            case Perturbation::Shape::gaussian_bump: {
                const double g = bump(x);
                if (pert.on_v) dv = g;
                if (pert.on_u) du = g;
                if (pert.on_theta) dth = g;
                break;
            }
            case Perturbation::Shape::profile_shift: {
                ProfilePoint ps = sample_profile(profile, x - beta - pert.amplitude);
                dv = ps.V - pp.V;
                du = ps.U - pp.U;
                dth = ps.Theta - pp.Theta;
                break;
            }
        }
        if (i + 1 == nodes) far_pert = std::max({std::abs(dv), std::abs(du), std::abs(dth)});
        s.v[i] = pp.V + dv;
        s.u[i] = pp.U + du;
        s.theta[i] = pp.Theta + dth;
    }
    if (far_pert > 1e-12)
        throw std::invalid_argument(
            "init_state: configuration error: perturbation does not decay below 1e-12 at x = L");

    // Boundary compatibility: Dirichlet temperature at x = 0, exact far state.
    s.theta[0] = profile.shock.left.theta;
    s.v[nodes - 1] = profile.shock.right.v;
    s.u[nodes - 1] = profile.shock.right.u;
    s.theta[nodes - 1] = profile.shock.right.theta;

    s.bc.p0 = profile.shock.p_minus;
    s.bc.theta_minus = profile.shock.left.theta;
    s.bc.far = profile.shock.right;

    for (std::size_t i = 0; i < nodes; ++i) {
        if (!(s.v[i] > 0.0) || !(s.theta[i] > 0.0))
            throw std::invalid_argument(
                "init_state: configuration error: positivity violated after superposition");
    }
    return s;
}

}  // namespace vsw
