// SPDX-License-Identifier: Apache-2.0
//
// Perfect-gas thermodynamics in Lagrangian (mass) coordinates.
// State variables: specific volume v, velocity u, absolute temperature theta.

#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace vsw {

struct GasParams {
    double gamma = 1.4;  // adiabatic exponent, > 1
    double R = 1.0;      // gas constant
    double mu = 1.0;     // viscosity
    double kappa = 1.0;  // heat conductivity

    void validate() const {
        if (!(gamma > 1.0))
            throw std::domain_error("GasParams: gamma must be > 1, got " + std::to_string(gamma));
        if (!(R > 0.0) || !(mu > 0.0) || !(kappa > 0.0))
            throw std::domain_error("GasParams: R, mu, kappa must be positive");
    }

    // The stability theorem is stated for gamma in (1, 2]; the harness warns outside.
    bool in_theorem_range() const { return gamma > 1.0 && gamma <= 2.0; }

    double cv() const { return R / (gamma - 1.0); }
};

struct ThermoState {
    double v = 1.0;      // specific volume, > 0
    double u = 0.0;      // velocity
    double theta = 1.0;  // temperature, > 0

    void validate() const {
        if (!(v > 0.0))
            throw std::domain_error("ThermoState: v must be positive, got " + std::to_string(v));
        if (!(theta > 0.0))
            throw std::domain_error("ThermoState: theta must be positive, got " +
                                    std::to_string(theta));
    }
};

// p = R theta / v
inline double pressure(const ThermoState& st, const GasParams& gp) {
    st.validate();
    return gp.R * st.theta / st.v;
}

// e = R theta / (gamma - 1); the additive constant is fixed to zero, only
// energy differences enter any balance used here.
inline double internal_energy(double theta, const GasParams& gp) {
    if (!(theta > 0.0))
        throw std::domain_error("internal_energy: theta must be positive");
    return gp.R * theta / (gp.gamma - 1.0);
}

// Third characteristic speed sqrt(gamma R theta) / v of the inviscid system.
inline double lambda3(const ThermoState& st, const GasParams& gp) {
    st.validate();
    return std::sqrt(gp.gamma * gp.R * st.theta) / st.v;
}

}  // namespace vsw
