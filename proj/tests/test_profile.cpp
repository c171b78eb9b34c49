// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "vsw/profile.hpp"

using namespace vsw;

namespace {
const GasParams kGp{1.4, 1.0, 1.0, 1.0};

ShockData base_shock() { return solve_left_state({2.0, 0.0, 1.0}, 1.125, kGp); }

// theta_minus that produces a prescribed strength d for the (2,0,1) right
// state, found by bisection on the closed-form solver.
double theta_minus_for_d(double d_target, const GasParams& gp) {
    double lo = 1.0 + 1e-9, hi = 4.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double d = solve_left_state({2.0, 0.0, 1.0}, mid, gp).d;
        (d < d_target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}
}  // namespace

TEST_CASE("profile_rhs: fixed points and midpoint slope") {
    ShockData sd = base_shock();
    auto at_plus = profile_rhs(sd.right.v, sd.right.theta, sd, kGp);
    auto at_minus = profile_rhs(sd.left.v, sd.left.theta, sd, kGp);
    CHECK(std::abs(at_plus[0]) <= 1e-13);
    CHECK(std::abs(at_plus[1]) <= 1e-13);
    CHECK(std::abs(at_minus[0]) <= 1e-13);
    CHECK(std::abs(at_minus[1]) <= 1e-13);

    auto mid = profile_rhs(0.5 * (sd.left.v + sd.right.v),
                           0.5 * (sd.left.theta + sd.right.theta), sd, kGp);
    CHECK(mid[0] > 0.0);

    CHECK_THROWS_AS(profile_rhs(-1.0, 1.0, sd, kGp), std::domain_error);
    CHECK_THROWS_AS(profile_rhs(1.0, 0.0, sd, kGp), std::domain_error);
}

TEST_CASE("orbit agrees with a fixed-step first-order oracle") {
    ShockData sd = base_shock();
    ShockProfile prof = compute_profile(sd, kGp);
    auto orb = oracles::euler_orbit(sd, kGp, 2e-5);

    // Phase-free comparison: Theta as a function of V along the connecting
    // orbit, evaluated at interior levels.
    PchipCurve theta_of_v(orb.V, orb.Th);
    for (double frac : {0.2, 0.35, 0.5, 0.65, 0.8}) {
        const double V = sd.left.v + frac * sd.d;
        // Locate Theta(V) on the computed profile.
        PchipCurve prof_theta_of_v(prof.V, prof.Theta);
        CHECK(prof_theta_of_v(V) == doctest::Approx(theta_of_v(V)).epsilon(2e-4));
    }

    // The oracle transits the V-midpoint with positive slope.
    const double vmid = 0.5 * (sd.left.v + sd.right.v);
    bool crossed = false;
    for (std::size_t i = 0; i + 1 < orb.V.size(); ++i)
        if (orb.V[i] <= vmid && orb.V[i + 1] > vmid) crossed = true;
    CHECK(crossed);
    // And reaches the right endpoint.
    CHECK(std::abs(orb.V.back() - sd.right.v) + std::abs(orb.Th.back() - sd.right.theta) <= 1e-8);
}

TEST_CASE("compute_profile: invariants") {
    ShockData sd = base_shock();
    const double tol = 1e-8;
    ShockProfile prof = compute_profile(sd, kGp, tol);

    CHECK(prof.endpoint_tol <= tol);
    CHECK(prof.xi.size() == 4001);

    for (std::size_t i = 0; i + 1 < prof.xi.size(); ++i) {
        CHECK(prof.V[i + 1] > prof.V[i]);
        CHECK(prof.Theta[i + 1] < prof.Theta[i]);
    }
    // U = -(sV + a) holds exactly on the samples.
    for (std::size_t i = 0; i < prof.xi.size(); i += 97)
        CHECK(prof.U[i] == doctest::Approx(-(sd.s * prof.V[i] + sd.a)).epsilon(1e-15));

    // Centering: V(0) = (v- + v+)/2.
    CHECK(sample_profile(prof, 0.0).V ==
          doctest::Approx(0.5 * (sd.left.v + sd.right.v)).epsilon(1e-9));

    // Velocity endpoints track u-/u+ within 1e-7 for tol = 1e-8.
    CHECK(std::abs(prof.U.front() - sd.left.u) <= 1e-7);
    CHECK(std::abs(prof.U.back() - sd.right.u) <= 1e-7);
}

TEST_CASE("sample_profile: clamped tails and node reproduction") {
    ShockData sd = base_shock();
    ShockProfile prof = compute_profile(sd, kGp);
    const double Xi = prof.xi_span();

    ProfilePoint far_left = sample_profile(prof, -10.0 * Xi);
    CHECK(far_left.V == sd.left.v);
    CHECK(far_left.U == sd.left.u);
    CHECK(far_left.Theta == sd.left.theta);
    ProfilePoint far_right = sample_profile(prof, 10.0 * Xi);
    CHECK(far_right.V == sd.right.v);
    CHECK(far_right.U == sd.right.u);
    CHECK(far_right.Theta == sd.right.theta);

    for (std::size_t i : {17u, 1234u, 2000u, 3999u}) {
        ProfilePoint p = sample_profile(prof, prof.xi[i]);
        CHECK(p.V == doctest::Approx(prof.V[i]).epsilon(1e-14));
        CHECK(p.Theta == doctest::Approx(prof.Theta[i]).epsilon(1e-14));
    }
}

TEST_CASE("shift invariance of the construction") {
    // Starting closer to the saddle translates the raw orbit; after the
    // midpoint centering the sampled profile must be unchanged.
    ShockData sd = base_shock();
    ShockProfile a = compute_profile(sd, kGp, 1e-8);
    ShockProfile b = compute_profile(sd, kGp, 1e-9);  // different eps path, tighter ends
    const double Xi = std::min(a.xi_span(), b.xi_span());
    for (double frac = -0.95; frac <= 0.95; frac += 0.1) {
        const double xi = frac * Xi;
        CHECK(sample_profile(a, xi).V == doctest::Approx(sample_profile(b, xi).V).epsilon(1e-8));
        CHECK(sample_profile(a, xi).Theta ==
              doctest::Approx(sample_profile(b, xi).Theta).epsilon(1e-8));
    }
}

TEST_CASE("ODE residual of the sampled profile converges at second order") {
    ShockData sd = base_shock();
    ShockProfile prof = compute_profile(sd, kGp);
    const double h = prof.dxi();

    // Central difference on stride-1 vs stride-2 subsets over the core.
    auto max_residual = [&](std::size_t stride) {
        double worst = 0.0;
        for (std::size_t i = 1000; i + 1000 < prof.xi.size(); i += 37) {
            const std::size_t l = i - stride, r = i + stride;
            const double dV = (prof.V[r] - prof.V[l]) / (2.0 * stride * h);
            const double dTh = (prof.Theta[r] - prof.Theta[l]) / (2.0 * stride * h);
            const auto f = profile_rhs(prof.V[i], prof.Theta[i], sd, kGp);
            worst = std::max(worst, std::max(std::abs(dV - f[0]), std::abs(dTh - f[1])));
        }
        return worst;
    };
    // Stride 1 sits at the resampling noise floor; strides 2 and 4 are in the
    // truncation-dominated regime.
    const double r2 = max_residual(2), r4 = max_residual(4);
    CHECK(r4 / r2 == doctest::Approx(4.0).epsilon(0.3));  // ratio in [~2.8, ~5.2]
}

TEST_CASE("decay fit: rates match the fixed-point eigenvalues") {
    ShockData sd = base_shock();
    ShockProfile prof = compute_profile(sd, kGp);
    DecayFit fit = decay_fit(prof);
    TailRates eig = fixed_point_rates(sd, kGp);

    CHECK(fit.c1_hat > 0.0);
    CHECK(fit.c2_hat > 0.0);
    CHECK(fit.log_rms <= 0.05);
    CHECK(fit.rate_left == doctest::Approx(eig.left_unstable).epsilon(0.05));
    CHECK(fit.rate_right == doctest::Approx(eig.right_slow).epsilon(0.05));
    // Temperature tails decay at the same rate as the volume tails.
    CHECK(fit.theta_rate_left == doctest::Approx(fit.rate_left).epsilon(0.10));
    CHECK(fit.theta_rate_right == doctest::Approx(fit.rate_right).epsilon(0.10));
}

TEST_CASE("decay rate scales with the shock strength") {
    const double tm_full = theta_minus_for_d(0.5, kGp);
    const double tm_half = theta_minus_for_d(0.25, kGp);
    ShockData sd1 = solve_left_state({2.0, 0.0, 1.0}, tm_full, kGp);
    ShockData sd2 = solve_left_state({2.0, 0.0, 1.0}, tm_half, kGp);
    DecayFit f1 = decay_fit(compute_profile(sd1, kGp));
    DecayFit f2 = decay_fit(compute_profile(sd2, kGp));
    const double ratio = (f2.c2_hat * sd2.d) / (f1.c2_hat * sd1.d);
    CHECK(ratio >= 0.4);
    CHECK(ratio <= 0.6);
}

TEST_CASE("temperature/volume slope ratio shrinks as gamma -> 1") {
    auto max_slope_ratio = [](double gamma) {
        GasParams gp{gamma, 1.0, 1.0, 1.0};
        const double tm = theta_minus_for_d(0.5, gp);
        ShockData sd = solve_left_state({2.0, 0.0, 1.0}, tm, gp);
        ShockProfile prof = compute_profile(sd, gp);
        double worst = 0.0;
        for (std::size_t i = 0; i < prof.xi.size(); i += 13) {
            const auto f = profile_rhs(prof.V[i], prof.Theta[i], sd, gp);
            worst = std::max(worst, std::abs(f[1] / f[0]));
        }
        return worst;
    };
    const double r105 = max_slope_ratio(1.05);
    const double r140 = max_slope_ratio(1.4);
    CHECK(r105 <= 0.5 * r140);
}

TEST_CASE("integration reversed from the right fixed point escapes") {
    ShockData sd = base_shock();
    auto rhs_rev = [&](const Vec2& y) -> Vec2 {
        const auto d = profile_rhs(y[0], y[1], sd, kGp);
        return {-d[0], -d[1]};
    };
    const Vec2 start{sd.right.v - 1e-6 * sd.d, sd.right.theta + 1e-7};
    OdeOptions opt;
    opt.x_max = 2000.0;
    auto never = [](const Vec2&) { return false; };
    auto escape = [&](const Vec2& y) {
        return y[0] < sd.left.v - 1e-8 || y[0] > sd.right.v + 1e-8 ||
               y[1] < sd.right.theta - 1e-8 || y[1] > sd.left.theta + 1e-8;
    };
    CHECK_THROWS_AS(integrate_dopri5(rhs_rev, start, opt, never, escape, "orbit escape"),
                    std::runtime_error);
}

TEST_CASE("slow convergence error on an impossible span budget") {
    ShockData sd = base_shock();
    CHECK_THROWS_AS(compute_profile(sd, kGp, 1e-8, 5.0), SlowConvergenceError);
}

TEST_CASE("extreme transport imbalance fails loudly, moderate one works") {
    // With mu/kappa ~ 20x apart the tail rates differ by ~3.4x and the
    // symmetric sampling window exceeds what double precision can reach on
    // the fast side; the construction must refuse rather than degrade.
    GasParams extreme{1.4, 1.0, 0.05, 1.0};
    ShockData sd_e = solve_left_state({2.0, 0.0, 1.0}, 1.4, extreme);
    CHECK_THROWS_AS(compute_profile(sd_e, extreme), SlowConvergenceError);

    GasParams moderate{1.4, 1.0, 5.0, 1.0};
    ShockData sd_m = solve_left_state({2.0, 0.0, 1.0}, 1.4, moderate);
    CHECK(compute_profile(sd_m, moderate).endpoint_tol <= 1e-8);
}

TEST_CASE("very weak and strong shocks still produce clean profiles") {
    for (double tm : {1.001, 2.0}) {
        ShockData sd = solve_left_state({2.0, 0.0, 1.0}, tm, kGp);
        ShockProfile prof = compute_profile(sd, kGp);
        CHECK(prof.endpoint_tol <= 1e-8);
        DecayFit fit = decay_fit(prof);
        TailRates eig = fixed_point_rates(sd, kGp);
        CHECK(fit.rate_left == doctest::Approx(eig.left_unstable).epsilon(0.05));
        CHECK(fit.rate_right == doctest::Approx(eig.right_slow).epsilon(0.05));
    }
}
