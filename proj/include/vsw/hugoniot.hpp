// SPDX-License-Identifier: Apache-2.0
//
// 3-shock end states from the Rankine-Hugoniot jump relations.
//
// Given the right state (v+, u+, theta+) and a left temperature theta- >
// theta+, the perfect-gas Hugoniot reduces to a single quadratic in v-:
//
//   v-^2 + b v- - (theta-/theta+) v+^2 = 0,
//   b = (theta- - theta+) (gamma+1)/(gamma-1) * v+/theta+ > 0,
//
// which has exactly one positive root, and that root always lies in (0, v+).
// The shock speed follows from s^2 = (p- - p+)/(v+ - v-) and u- from the
// mass jump.  Tests check this closed form against an independent bisection
// oracle.

#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "vsw/gas.hpp"

namespace vsw {

struct NoAdmissibleShockError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ShockData {
    ThermoState right;   // (v+, u+, theta+), state ahead of the shock
    ThermoState left;    // (v-, u-, theta-), compressed state
    double s = 0;        // shock speed, > 0
    double a = 0;        // U = -(s V + a)
    double b1 = 0;       // p +/- + s^2 v +/-
    double b2 = 0;       // e +/- + p v +/- + s^2 v^2/2
    double d = 0;        // strength v+ - v-
    double d1 = 0;       // d2/(1+d2)
    double d2 = 0;       // (gamma-1) d / (2 v+)
    double p_minus = 0;
    double p_plus = 0;

    double velocity_jump() const { return right.u - left.u; }  // u+ - u-, negative
};

struct RhResidual {
    double mass = 0;      // -s(v+ - v-) - (u+ - u-)
    double momentum = 0;  // -s(u+ - u-) + (p+ - p-)
    double energy = 0;    // -s[(e+ + u+^2/2) - (e- + u-^2/2)] + (p+ u+ - p- u-)

    double max_abs() const {
        return std::max({std::abs(mass), std::abs(momentum), std::abs(energy)});
    }
};

inline RhResidual rh_residual(const ShockData& sd, const GasParams& gp) {
    const double pp = gp.R * sd.right.theta / sd.right.v;
    const double pm = gp.R * sd.left.theta / sd.left.v;
    const double ep = internal_energy(sd.right.theta, gp);
    const double em = internal_energy(sd.left.theta, gp);
    RhResidual r;
    r.mass = -sd.s * (sd.right.v - sd.left.v) - (sd.right.u - sd.left.u);
    r.momentum = -sd.s * (sd.right.u - sd.left.u) + (pp - pm);
    r.energy = -sd.s * ((ep + 0.5 * sd.right.u * sd.right.u) - (em + 0.5 * sd.left.u * sd.left.u)) +
               (pp * sd.right.u - pm * sd.left.u);
    return r;
}

// Lax entropy condition 0 < lambda3(+) < s < lambda3(-).
inline bool check_entropy(const ShockData& sd, const GasParams& gp) {
    const double lp = lambda3(sd.right, gp);
    const double lm = lambda3(sd.left, gp);
    return 0.0 < lp && lp < sd.s && sd.s < lm;
}

// s^2 = gamma R theta- (1 - d1) / (v+ v-); also refreshes d1, d2 in sd.
inline double shock_speed_formula(ShockData& sd, const GasParams& gp) {
    sd.d2 = (gp.gamma - 1.0) * sd.d / (2.0 * sd.right.v);
    sd.d1 = sd.d2 / (1.0 + sd.d2);
    return gp.gamma * gp.R * sd.left.theta * (1.0 - sd.d1) / (sd.right.v * sd.left.v);
}

inline ShockData solve_left_state(const ThermoState& right, double theta_minus,
                                  const GasParams& gp) {
    gp.validate();
    right.validate();
    if (!(theta_minus > right.theta))
        throw NoAdmissibleShockError(
            "no admissible 3-shock: theta_minus must exceed theta_plus (got theta-=" +
            std::to_string(theta_minus) + ", theta+=" + std::to_string(right.theta) + ")");

    const double vp = right.v, tp = right.theta, tm = theta_minus;
    // v-^2 + b v- - c = 0 with b > 0, c > 0: unique positive root, written in
    // the cancellation-free form 2c / (b + sqrt(b^2 + 4c)).
    const double b = (tm - tp) * (gp.gamma + 1.0) / (gp.gamma - 1.0) * vp / tp;
    const double c = (tm / tp) * vp * vp;
    const double vm = 2.0 * c / (b + std::sqrt(b * b + 4.0 * c));

    if (!(vm > 0.0) || !(vm < vp))
        throw std::runtime_error("solve_left_state: root v-=" + std::to_string(vm) +
                                 " outside (0, v+)");

    ShockData sd;
    sd.right = right;
    sd.left = ThermoState{vm, 0.0, tm};
    sd.p_plus = gp.R * tp / vp;
    sd.p_minus = gp.R * tm / vm;
    sd.d = vp - vm;

    const double s2 = (sd.p_minus - sd.p_plus) / sd.d;
    if (!(s2 > 0.0))
        throw std::runtime_error("solve_left_state: non-positive s^2");
    sd.s = std::sqrt(s2);
    sd.left.u = right.u + sd.s * sd.d;  // mass jump: u+ - u- = -s(v+ - v-)

    sd.a = -(sd.s * vp + right.u);
    sd.b1 = sd.p_plus + s2 * vp;
    sd.b2 = internal_energy(tp, gp) + sd.p_plus * vp + 0.5 * s2 * vp * vp;
    shock_speed_formula(sd, gp);

    if (!check_entropy(sd, gp))
        throw NoAdmissibleShockError("no admissible 3-shock: Lax condition failed");

    const RhResidual res = rh_residual(sd, gp);
    const double scale = std::max({1.0, sd.p_minus, std::abs(sd.left.u), sd.s * sd.d});
    if (res.max_abs() > 1e-10 * scale)
        throw std::runtime_error("solve_left_state: jump residuals did not close (max |r| = " +
                                 std::to_string(res.max_abs()) + ")");
    return sd;
}

}  // namespace vsw
