// SPDX-License-Identifier: Apache-2.0
//
// Everything measurable about a run: perturbation fields against the shifted
// profile, integrated (anti-derivative) variables, the momentum identity,
// the boundary relaxation law, and the weighted energy E1 with
// k(V) = (b1 - s^2 V)^{-1}.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "vsw/interp.hpp"
#include "vsw/profile.hpp"
#include "vsw/shift.hpp"
#include "vsw/solver.hpp"

namespace vsw {

struct TruncationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PerturbationFields {
    std::vector<double> phi, psi, w;  // v - V, u - U, theta - Theta at xi = x - s t + alpha - beta
    double t = 0, dx = 0, alpha = 0, beta = 0;
    double far_max = 0;               // worst field magnitude at the far node
    bool truncation_warning = false;  // far_max > 1e-10
};

inline PerturbationFields perturbation(const SimState& s, const ShockProfile& p, double alpha,
                                       double beta) {
    PerturbationFields f;
    const std::size_t n = s.n();
    f.phi.resize(n);
    f.psi.resize(n);
    f.w.resize(n);
    f.t = s.t;
    f.dx = s.dx;
    f.alpha = alpha;
    f.beta = beta;
    const double off = -p.shock.s * s.t + alpha - beta;
    for (std::size_t i = 0; i < n; ++i) {
        const ProfilePoint pp = sample_profile(p, s.x(i) + off);
        f.phi[i] = s.v[i] - pp.V;
        f.psi[i] = s.u[i] - pp.U;
        f.w[i] = s.theta[i] - pp.Theta;
    }
    f.far_max = std::max({std::abs(f.phi[n - 1]), std::abs(f.psi[n - 1]), std::abs(f.w[n - 1])});
    f.truncation_warning = f.far_max > 1e-10;
    return f;
}

struct AntiDerivatives {
    std::vector<double> Phi, Psi, W, What;
    double t = 0, dx = 0, alpha = 0, beta = 0;
};

inline AntiDerivatives antiderivatives(const PerturbationFields& f, const SimState& s,
                                       const ShockProfile& p) {
    if (f.far_max > 1e-6)
        throw TruncationError(
            "antiderivatives: far-end perturbation above 1e-6, domain too short");
    const std::size_t n = f.phi.size();
    AntiDerivatives a;
    a.t = f.t;
    a.dx = f.dx;
    a.alpha = f.alpha;
    a.beta = f.beta;
    a.Phi.assign(n, 0.0);
    a.Psi.assign(n, 0.0);
    a.W.assign(n, 0.0);
    a.What.assign(n, 0.0);

    const double gm1 = s.params.gamma - 1.0, R = s.params.R;
    const double off = -p.shock.s * f.t + f.alpha - f.beta;
    std::vector<double> ew(n), Uprof(n);
    for (std::size_t i = 0; i < n; ++i) {
        const ProfilePoint pp = sample_profile(p, s.x(i) + off);
        Uprof[i] = pp.U;
        ew[i] = (R * s.theta[i] / gm1 + 0.5 * s.u[i] * s.u[i]) -
                (R * pp.Theta / gm1 + 0.5 * pp.U * pp.U);
    }
    // (Phi, Psi, W)(x) = -int_x^inf (...), zero tail beyond the grid.
    for (std::size_t i = n - 1; i-- > 0;) {
        a.Phi[i] = a.Phi[i + 1] - 0.5 * f.dx * (f.phi[i] + f.phi[i + 1]);
        a.Psi[i] = a.Psi[i + 1] - 0.5 * f.dx * (f.psi[i] + f.psi[i + 1]);
        a.W[i] = a.W[i + 1] - 0.5 * f.dx * (ew[i] + ew[i + 1]);
    }
    for (std::size_t i = 0; i < n; ++i) a.What[i] = gm1 / R * (a.W[i] - Uprof[i] * a.Psi[i]);
    return a;
}

struct DiagnosticsSeries {
    std::vector<double> times;
    std::vector<double> sup_norm;
    std::vector<double> l2_phi, l2_psi, l2_w;
    std::vector<double> h1_phi, h1_psi, h1_w;
    std::vector<double> N_of_t;  // running sup of the H1-type surrogate norm
    std::vector<double> E1;
    std::vector<double> v0, u0, Psi0;
    std::vector<double> mom_integral;   // int (u - U) dx
    std::vector<double> A_of_t;
    std::vector<double> residual_momentum;
    std::vector<double> equiv_Q;        // int (Phi^2 + Psi^2 + What^2/(gamma-1)) dx
    std::vector<double> far_max;
    std::vector<int> kv_outside;        // grid nodes with v outside [v-, v+]
    bool kv_bound_ok = true;            // end-pressure bound on b1 - s^2 v at nodes inside [v-, v+]

    std::size_t size() const { return times.size(); }
};

// E1 equivalence constants from p- <= b1 - s^2 V <= p+ (with the labels
// ordered by magnitude; for a compressive 3-shock p+ < p-).
struct EquivalenceConstants {
    double c, C;
};

inline EquivalenceConstants e1_equivalence_constants(const ShockData& sd, const GasParams& gp) {
    const double plo = std::min(sd.p_minus, sd.p_plus);
    const double phi = std::max(sd.p_minus, sd.p_plus);
    const double c =
        0.5 * std::min({1.0, sd.left.v / phi, (gp.R / phi) * (gp.R / phi)});
    const double C =
        0.5 * std::max({1.0, sd.right.v / plo, (gp.R / plo) * (gp.R / plo)});
    return {c, C};
}

inline double lyapunov_E1(const AntiDerivatives& a, const ShockProfile& p, const ShockData& sd) {
    const std::size_t n = a.Phi.size();
    const double gm1 = p.params.gamma - 1.0, R = p.params.R;
    const double off = -sd.s * a.t + a.alpha - a.beta;
    std::vector<double> dens(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double V = sample_profile(p, static_cast<double>(i) * a.dx + off).V;
        const double k = 1.0 / (sd.b1 - sd.s * sd.s * V);
        dens[i] = 0.5 * (a.Phi[i] * a.Phi[i] + k * V * a.Psi[i] * a.Psi[i] +
                         R * R / gm1 * k * k * a.What[i] * a.What[i]);
    }
    return trapz(dens, a.dx);
}

class DiagnosticsCollector {
  public:
    DiagnosticsCollector(const ShockProfile& profile, double alpha, double beta)
        : prof_(profile), alpha_(alpha), beta_(beta) {}

    void observe(const SimState& s) {
        PerturbationFields f = perturbation(s, prof_, alpha_, beta_);
        AntiDerivatives a = antiderivatives(f, s, prof_);
        const std::size_t n = s.n();
        const double dx = s.dx;

        auto l2 = [&](const std::vector<double>& g) {
            std::vector<double> sq(g.size());
            for (std::size_t i = 0; i < g.size(); ++i) sq[i] = g[i] * g[i];
            return std::sqrt(trapz(sq, dx));
        };
        auto l2diff = [&](const std::vector<double>& g) {
            double acc = 0;
            for (std::size_t i = 0; i + 1 < g.size(); ++i) {
                const double d = (g[i + 1] - g[i]) / dx;
                acc += d * d * dx;
            }
            return std::sqrt(acc);
        };

        double sup = 0;
        for (std::size_t i = 0; i < n; ++i)
            sup = std::max({sup, std::abs(f.phi[i]), std::abs(f.psi[i]), std::abs(f.w[i])});

        DiagnosticsSeries& r = series_;
        r.times.push_back(s.t);
        r.sup_norm.push_back(sup);
        r.l2_phi.push_back(l2(f.phi));
        r.l2_psi.push_back(l2(f.psi));
        r.l2_w.push_back(l2(f.w));
        const double h1p = std::hypot(r.l2_phi.back(), l2diff(f.phi));
        const double h1s = std::hypot(r.l2_psi.back(), l2diff(f.psi));
        const double h1w = std::hypot(r.l2_w.back(), l2diff(f.w));
        r.h1_phi.push_back(h1p);
        r.h1_psi.push_back(h1s);
        r.h1_w.push_back(h1w);
        const double nsur = std::sqrt(h1p * h1p + h1s * h1s + h1w * h1w);
        r.N_of_t.push_back(r.N_of_t.empty() ? nsur : std::max(r.N_of_t.back(), nsur));

        r.E1.push_back(lyapunov_E1(a, prof_, prof_.shock));
        std::vector<double> qd(n);
        const double gm1 = s.params.gamma - 1.0;
        for (std::size_t i = 0; i < n; ++i)
            qd[i] = a.Phi[i] * a.Phi[i] + a.Psi[i] * a.Psi[i] + a.What[i] * a.What[i] / gm1;
        r.equiv_Q.push_back(trapz(qd, dx));

        r.v0.push_back(s.v[0]);
        r.u0.push_back(s.u[0]);
        r.Psi0.push_back(a.Psi[0]);
        std::vector<double> psisq = f.psi;
        r.mom_integral.push_back(trapz(psisq, dx));
        const double At = boundary_A(s.t, prof_, alpha_, beta_);
        r.A_of_t.push_back(At);
        if (r.size() == 1) {
            mom0_ = r.mom_integral.back();
            A0_ = At;
        }
        r.residual_momentum.push_back(r.mom_integral.back() - mom0_ + (At - A0_));
        r.far_max.push_back(f.far_max);

        // End-pressure bound on b1 - s^2 v at nodes whose v lies inside [v-, v+];
        // others only counted.
        const ShockData& sd = prof_.shock;
        const double plo = std::min(sd.p_minus, sd.p_plus);
        const double phi_ = std::max(sd.p_minus, sd.p_plus);
        const double slack = 1e-12 * (1.0 + phi_);
        int outside = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (s.v[i] < sd.left.v || s.v[i] > sd.right.v) {
                ++outside;
                continue;
            }
            const double kinv = sd.b1 - sd.s * sd.s * s.v[i];
            if (kinv < plo - slack || kinv > phi_ + slack) r.kv_bound_ok = false;
        }
        r.kv_outside.push_back(outside);
    }

    const DiagnosticsSeries& series() const { return series_; }
    DiagnosticsSeries take_series() { return std::move(series_); }
    double alpha() const { return alpha_; }
    double beta() const { return beta_; }

  private:
    const ShockProfile& prof_;
    double alpha_, beta_;
    DiagnosticsSeries series_;
    double mom0_ = 0, A0_ = 0;
};

// Time integration with the standard observer set; the spec's `run`.
inline DiagnosticsSeries run(SimState& s, double t_end, const StepControl& ctrl,
                             DiagnosticsCollector& collector, std::size_t cadence) {
    advance(s, t_end, ctrl, cadence, [&](const SimState& st) { collector.observe(st); });
    return collector.series();
}

// residual(t) = int(u-U)dx - [int(u0-U)dx - int_0^t s(U(-s tau+alpha-beta)-u-) dtau]
inline std::vector<double> momentum_identity_residual(const DiagnosticsSeries& series,
                                                      const ShockProfile& p, double alpha,
                                                      double beta) {
    std::vector<double> res(series.size());
    if (series.size() == 0) return res;
    const double mom0 = series.mom_integral[0];
    const double A0 = boundary_A(series.times[0], p, alpha, beta);
    for (std::size_t k = 0; k < series.size(); ++k) {
        const double At = boundary_A(series.times[k], p, alpha, beta);
        res[k] = series.mom_integral[k] - mom0 + (At - A0);
    }
    return res;
}

struct RelaxationFit {
    double slope = 0;
    double intercept = 0;
    bool already_relaxed = false;
    int n_used = 0;
};

// Fits log|v(0,t) - v-|; the boundary condition makes the exact law
// v(0,t) - v- = (v(0,0) - v-) exp(-p0 t / mu).
inline RelaxationFit boundary_relaxation_check(const DiagnosticsSeries& series, double p0,
                                               double mu, double v_minus) {
    if (series.size() < 4)
        throw std::invalid_argument("boundary_relaxation_check: too few observations");
    const double span = series.times.back() - series.times.front();
    if (span < 3.0 * mu / p0)
        throw std::invalid_argument(
            "boundary_relaxation_check: series must cover at least 3 mu/p0 time units");

    const double floor = 1e-8 * std::max(1.0, std::abs(v_minus));
    std::vector<double> ts, ys;
    for (std::size_t k = 0; k < series.size(); ++k) {
        const double amp = std::abs(series.v0[k] - v_minus);
        if (amp > floor) {
            ts.push_back(series.times[k]);
            ys.push_back(std::log(amp));
        }
    }
    RelaxationFit fit;
    if (ts.size() < 4) {
        fit.already_relaxed = true;
        return fit;
    }
    const double n = static_cast<double>(ts.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        sx += ts[i];
        sy += ys[i];
        sxx += ts[i] * ts[i];
        sxy += ts[i] * ys[i];
    }
    fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    fit.intercept = (sy - fit.slope * sx) / n;
    fit.n_used = static_cast<int>(ts.size());
    return fit;
}

inline double boundary_psi_check(const DiagnosticsSeries& series, const ShockProfile& p,
                                 double alpha, double beta) {
    double worst = 0;
    for (std::size_t k = 0; k < series.size(); ++k)
        worst = std::max(worst,
                         std::abs(series.Psi0[k] - boundary_A(series.times[k], p, alpha, beta)));
    return worst;
}

// Reconstructed Eulerian free-boundary path x~(t) = int_0^t u(0,tau) dtau,
// from the observed boundary velocity trace.
inline std::vector<double> free_boundary_path(const DiagnosticsSeries& series) {
    std::vector<double> x(series.size(), 0.0);
    for (std::size_t k = 1; k < series.size(); ++k)
        x[k] = x[k - 1] + 0.5 * (series.u0[k - 1] + series.u0[k]) *
                              (series.times[k] - series.times[k - 1]);
    return x;
}

// Sup-norm distance of a state from the exactly shifted profile.
inline double sup_deviation_from_profile(const SimState& s, const ShockProfile& p, double alpha,
                                         double beta) {
    const PerturbationFields f = perturbation(s, p, alpha, beta);
    double sup = 0;
    for (std::size_t i = 0; i < f.phi.size(); ++i)
        sup = std::max({sup, std::abs(f.phi[i]), std::abs(f.psi[i]), std::abs(f.w[i])});
    return sup;
}

}  // namespace vsw
