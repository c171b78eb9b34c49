// SPDX-License-Identifier: Apache-2.0
//
// vswlab: construct viscous shock waves for the 1-D compressible
// Navier-Stokes system in Lagrangian coordinates, simulate the free-boundary
// problem, and verify the quantitative identities behind the stability
// theory at desk scale.
//
// Subcommands: hugoniot | profile | shift | simulate | verify | sweep
// Exit code 0 only if every requested verdict passes.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "vsw/config.hpp"
#include "vsw/diagnostics.hpp"
#include "vsw/experiment.hpp"
#include "vsw/hugoniot.hpp"
#include "vsw/profile.hpp"
#include "vsw/shift.hpp"

namespace {

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::string default_out() {
    if (const char* env = std::getenv("VSWLAB_OUT_DIR")) return env;
    return "out";
}

void print_verdicts(const vsw::ExperimentReport& rep, bool quiet) {
    for (const auto& v : rep.verdicts) {
        if (!v.applicable) {
            if (!quiet)
                std::printf("[ -- ] criterion %-2s %-24s %s\n", v.criterion.c_str(),
                            v.name.c_str(), v.note.c_str());
            continue;
        }
        std::printf("[%s] criterion %-2s %-24s measured=%.6g threshold=%.6g\n",
                    v.pass ? "PASS" : "FAIL", v.criterion.c_str(), v.name.c_str(), v.measured,
                    v.threshold);
    }
    if (!rep.error.empty()) std::printf("[FAIL] run error: %s\n", rep.error.c_str());
}

void warn_gamma(const vsw::GasParams& gp) {
    if (!gp.in_theorem_range())
        std::fprintf(stderr,
                     "warning: gamma = %g outside (1, 2]; the stability theorem does not cover "
                     "this range\n",
                     gp.gamma);
}

vsw::VelocityField read_velocity_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    std::string line;
    if (!std::getline(f, line)) throw std::runtime_error(path + ": empty file");
    // Header: locate x and u columns.
    int xcol = -1, ucol = -1, col = 0;
    {
        std::stringstream ss(line);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            if (tok == "x") xcol = col;
            if (tok == "u") ucol = col;
            ++col;
        }
    }
    if (xcol < 0 || ucol < 0) throw std::runtime_error(path + ": need columns x and u");
    std::vector<double> xs, us;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string tok;
        int c = 0;
        double xv = 0, uv = 0;
        while (std::getline(ss, tok, ',')) {
            if (c == xcol) xv = std::stod(tok);
            if (c == ucol) uv = std::stod(tok);
            ++c;
        }
        xs.push_back(xv);
        us.push_back(uv);
    }
    if (xs.size() < 2) throw std::runtime_error(path + ": need at least two samples");
    const double dx = xs[1] - xs[0];
    for (std::size_t i = 1; i < xs.size(); ++i)
        if (std::abs(xs[i] - (xs[0] + static_cast<double>(i) * dx)) > 1e-9 * (1.0 + std::abs(xs[i])))
            throw std::runtime_error(path + ": grid must be uniform");
    return {xs[0], dx, std::move(us)};
}

struct CommonOpts {
    std::string config_path;
    std::string out_dir = default_out();
    bool quiet = false;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--config", o.config_path, "run configuration (JSON)")->required();
    cmd->add_option("--out", o.out_dir, "output directory");
    cmd->add_flag("--quiet", o.quiet, "suppress informational output");
}

int cmd_hugoniot(const CommonOpts& o) {
    vsw::RunConfig cfg = vsw::parse_config(slurp(o.config_path));
    warn_gamma(cfg.params);
    const vsw::ShockData sd = vsw::solve_left_state(cfg.right_state, cfg.theta_minus, cfg.params);
    const vsw::RhResidual rr = vsw::rh_residual(sd, cfg.params);
    const bool lax = vsw::check_entropy(sd, cfg.params);

    if (!o.quiet) {
        std::printf("v_minus      %.17g\n", sd.left.v);
        std::printf("u_minus      %.17g\n", sd.left.u);
        std::printf("theta_minus  %.17g\n", sd.left.theta);
        std::printf("s            %.17g\n", sd.s);
        std::printf("a            %.17g\n", sd.a);
        std::printf("b1           %.17g\n", sd.b1);
        std::printf("b2           %.17g\n", sd.b2);
        std::printf("d            %.17g\n", sd.d);
        std::printf("d1           %.17g\n", sd.d1);
        std::printf("d2           %.17g\n", sd.d2);
        std::printf("p_minus      %.17g\n", sd.p_minus);
        std::printf("p_plus       %.17g\n", sd.p_plus);
        std::printf("rh_residual  %.3g %.3g %.3g\n", rr.mass, rr.momentum, rr.energy);
        std::printf("lax          %s\n", lax ? "true" : "false");
    }
    nlohmann::json rec = {{"v_minus", sd.left.v},   {"u_minus", sd.left.u},
                          {"theta_minus", sd.left.theta}, {"s", sd.s},
                          {"a", sd.a},              {"b1", sd.b1},
                          {"b2", sd.b2},            {"d", sd.d},
                          {"d1", sd.d1},            {"d2", sd.d2},
                          {"p_minus", sd.p_minus},  {"p_plus", sd.p_plus},
                          {"rh_residual", {rr.mass, rr.momentum, rr.energy}},
                          {"lax", lax}};
    std::printf("%s\n", rec.dump().c_str());
    std::filesystem::create_directories(o.out_dir);
    std::ofstream(o.out_dir + "/hugoniot.json", std::ios::binary) << rec.dump(2) << '\n';

    const bool pass = rr.max_abs() <= vsw::thresholds::kRhResidual && lax;
    return pass ? 0 : 1;
}

int cmd_profile(const CommonOpts& o) {
    vsw::RunConfig cfg = vsw::parse_config(slurp(o.config_path));
    warn_gamma(cfg.params);
    const vsw::ShockData sd = vsw::solve_left_state(cfg.right_state, cfg.theta_minus, cfg.params);
    const vsw::ShockProfile prof =
        vsw::compute_profile(sd, cfg.params, cfg.profile_tol, cfg.profile_max_span);
    const vsw::DecayFit fit = vsw::decay_fit(prof);
    const vsw::TailRates eig = vsw::fixed_point_rates(sd, cfg.params);

    std::filesystem::create_directories(o.out_dir);
    vsw::detail::write_profile_csv(o.out_dir + "/profile.csv", prof);
    nlohmann::json rec = {{"endpoint_tol", prof.endpoint_tol},
                          {"c1_hat", fit.c1_hat},
                          {"c2_hat", fit.c2_hat},
                          {"xi_span", prof.xi_span()},
                          {"samples", prof.xi.size()},
                          {"rate_left", fit.rate_left},
                          {"rate_right", fit.rate_right},
                          {"eig_left", eig.left_unstable},
                          {"eig_right", eig.right_slow},
                          {"log_rms", fit.log_rms}};
    std::ofstream(o.out_dir + "/profile_summary.json", std::ios::binary) << rec.dump(2) << '\n';
    if (!o.quiet)
        std::printf("profile: samples=%zu xi_span=%.6g endpoint_tol=%.3g c1_hat=%.6g c2_hat=%.6g\n",
                    prof.xi.size(), prof.xi_span(), prof.endpoint_tol, fit.c1_hat, fit.c2_hat);
    std::printf("%s\n", rec.dump().c_str());

    const double gap = std::max(std::abs(fit.rate_left / eig.left_unstable - 1.0),
                                std::abs(fit.rate_right / eig.right_slow - 1.0));
    const bool pass = prof.endpoint_tol <= cfg.profile_tol && gap <= vsw::thresholds::kTailEigenRel;
    return pass ? 0 : 1;
}

int cmd_shift(const CommonOpts& o, const std::string& data_path) {
    vsw::RunConfig cfg = vsw::parse_config(slurp(o.config_path));
    warn_gamma(cfg.params);
    const vsw::ShockData sd = vsw::solve_left_state(cfg.right_state, cfg.theta_minus, cfg.params);
    const vsw::ShockProfile prof =
        vsw::compute_profile(sd, cfg.params, cfg.profile_tol, cfg.profile_max_span);
    const vsw::DecayFit fit = vsw::decay_fit(prof);

    const double rate = fit.c2_hat * sd.d;
    const double beta = cfg.beta > 0 ? cfg.beta : cfg.beta_efolds / rate;
    vsw::VelocityField u0;
    if (!data_path.empty()) {
        u0 = read_velocity_csv(data_path);
    } else {
        const double L = cfg.grid.L > 0 ? cfg.grid.L : beta + cfg.grid.L_efolds / rate;
        vsw::Perturbation pert = cfg.perturbation;
        pert.center = cfg.pert_center ? *cfg.pert_center : beta;
        const vsw::SimState st = vsw::init_state(L, cfg.grid.N, prof, fit, pert, beta);
        u0 = {0.0, st.dx, st.u};
    }

    const vsw::ShiftResult r = vsw::compute_alpha(u0, prof, beta);
    const double didb = vsw::detail::shift_derivative_fd(u0, prof, beta);
    const double target = sd.left.u - sd.right.u;  // u- - u+
    const double rel = std::abs(didb - target) / std::abs(target);

    std::printf("alpha      %.17g\n", r.alpha);
    std::printf("I0         %.17g\n", r.I0);
    std::printf("beta       %.17g\n", r.beta);
    std::printf("quad_tol   %.3g\n", r.quad_tol);
    std::printf("dI/dalpha  %.17g  (u- - u+ = %.17g, rel gap %.3g)\n", didb, target, rel);
    return rel <= vsw::thresholds::kShiftDerivativeRel ? 0 : 1;
}

int cmd_simulate(const CommonOpts& o, bool verify_mode) {
    vsw::RunConfig cfg = vsw::parse_config(slurp(o.config_path));
    warn_gamma(cfg.params);
    if (cfg.output_dir.empty()) cfg.output_dir = o.out_dir + "/" + cfg.name;
    vsw::RunOutputs out = vsw::run_experiment(cfg);
    if (!o.quiet && !verify_mode) {
        std::printf("run %s: beta=%.6g L=%.6g t_end=%.6g steps=%zu alpha=%.6g\n",
                    cfg.name.c_str(), out.report.beta, out.report.L, out.report.t_end,
                    out.report.steps, out.report.shift.alpha);
        std::printf("outputs: %s, %s\n", out.report.series_path.c_str(),
                    out.report.report_path.c_str());
        std::printf("smallness: (gamma-1)d=%.4g N0=%.4g exp(-c2 d beta)=%.3g within_regime=%s\n",
                    out.report.smallness.gamma1_d, out.report.smallness.N0_surrogate,
                    out.report.smallness.exp_c2dbeta,
                    out.report.smallness.within_regime ? "yes" : "no");
    }
    print_verdicts(out.report, o.quiet);
    return out.report.all_pass() ? 0 : 1;
}

int cmd_sweep(const CommonOpts& o) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(slurp(o.config_path));
    } catch (const nlohmann::json::parse_error& e) {
        throw vsw::ConfigError(std::string("parse error: ") + e.what());
    }
    const nlohmann::json& arr = j.is_array() ? j : j.at("configs");
    std::vector<vsw::RunConfig> configs;
    int idx = 0;
    for (const auto& cj : arr) {
        vsw::RunConfig c = vsw::config_from_json(cj);
        if (c.name == "run") c.name = "run-" + std::to_string(idx);
        if (c.output_dir.empty()) c.output_dir = o.out_dir + "/" + c.name;
        configs.push_back(std::move(c));
        ++idx;
    }
    const auto entries = vsw::sweep(configs);
    std::filesystem::create_directories(o.out_dir);
    vsw::write_sweep_csv(o.out_dir + "/sweep_summary.csv", entries);

    bool all_ok = true;
    if (!o.quiet) std::printf("%-16s %-6s %-12s %-12s %s\n", "name", "ok", "beta", "alpha", "note");
    for (const auto& e : entries) {
        if (!o.quiet)
            std::printf("%-16s %-6s %-12.6g %-12.6g %s\n", e.name.c_str(), e.ok ? "ok" : "ERR",
                        e.report.beta, e.alpha, e.error.c_str());
        all_ok = all_ok && e.ok && e.report.all_pass();
    }
    return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"viscous shock wave laboratory for the 1-D compressible Navier-Stokes "
                 "free-boundary problem"};
    app.require_subcommand(1);

    CommonOpts hug_o, prof_o, shift_o, sim_o, ver_o, sweep_o;
    std::string shift_data;

    CLI::App* hug = app.add_subcommand("hugoniot", "solve the 3-shock end states");
    add_common(hug, hug_o);
    CLI::App* prof = app.add_subcommand("profile", "compute the viscous shock profile");
    add_common(prof, prof_o);
    CLI::App* shf = app.add_subcommand("shift", "compute the phase shift alpha");
    add_common(shf, shift_o);
    shf->add_option("--initial-data", shift_data, "CSV with columns x,u (default: from config)");
    CLI::App* sim = app.add_subcommand("simulate", "run the free-boundary simulation");
    add_common(sim, sim_o);
    CLI::App* ver = app.add_subcommand("verify", "run and report verdict lines");
    add_common(ver, ver_o);
    CLI::App* swp = app.add_subcommand("sweep", "run a list of configs");
    add_common(swp, sweep_o);

    CLI11_PARSE(app, argc, argv);

    try {
        if (hug->parsed()) return cmd_hugoniot(hug_o);
        if (prof->parsed()) return cmd_profile(prof_o);
        if (shf->parsed()) return cmd_shift(shift_o, shift_data);
        if (sim->parsed()) return cmd_simulate(sim_o, false);
        if (ver->parsed()) return cmd_simulate(ver_o, true);
        if (swp->parsed()) return cmd_sweep(sweep_o);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 2;
}
