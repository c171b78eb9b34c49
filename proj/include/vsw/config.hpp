// SPDX-License-Identifier: Apache-2.0
//
// Run configuration: a strict JSON document (unknown keys rejected) with
// defaults filled.  Lengths and times may be given either absolutely or in
// units of the fitted tail scale 1/(c2 d), resolved after the profile fit.
// The grammar is documented in the README.

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "vsw/gas.hpp"
#include "vsw/solver.hpp"

namespace vsw {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GridSpec {
    std::size_t N = 2000;
    double L = 0;          // absolute domain length; 0 means "use L_efolds"
    double L_efolds = 60;  // L = beta + L_efolds / (c2 d)
};

struct RunConfig {
    std::string name = "run";
    GasParams params{1.4, 1.0, 1.0, 1.0};
    ThermoState right_state;
    double theta_minus = 0;
    double beta = 0;         // absolute offset; 0 means "use beta_efolds"
    double beta_efolds = 20; // beta = beta_efolds / (c2 d)
    Perturbation perturbation;
    std::optional<double> pert_center;  // defaults to beta at resolve time
    GridSpec grid;
    StepControl ctrl;
    double t_end = -1;          // absolute; negative means "use t_end_efolds"
    double t_end_efolds = 50;   // t_end = t_end_efolds / (s c2 d)
    std::size_t observe_every = 0;  // in steps; 0 = auto (~400 observations)
    double profile_tol = 1e-8;
    double profile_max_span = 0;
    std::uint64_t seed = 0;
    std::string output_dir;
    std::vector<double> snapshot_times;
};

namespace detail {

inline void require_keys(const nlohmann::json& j, const char* where,
                         std::initializer_list<const char*> allowed) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* k : allowed)
            if (it.key() == k) {
                ok = true;
                break;
            }
        if (!ok)
            throw ConfigError(std::string("parse error: unknown key \"") + it.key() + "\" in " +
                              where);
    }
}

inline double num(const nlohmann::json& j, const char* key, double fallback) {
    return j.contains(key) ? j.at(key).get<double>() : fallback;
}

}  // namespace detail

inline RunConfig config_from_json(const nlohmann::json& j) {
    using nlohmann::json;
    detail::require_keys(j, "top level",
                         {"name", "params", "right_state", "theta_minus", "beta", "beta_efolds",
                          "perturbation", "grid", "ctrl", "t_end", "t_end_efolds",
                          "observe_every", "profile_tol", "profile_max_span", "seed",
                          "output_dir", "snapshot_times"});
    RunConfig c;
    if (j.contains("name")) c.name = j.at("name").get<std::string>();

    if (j.contains("params")) {
        const json& p = j.at("params");
        detail::require_keys(p, "params", {"gamma", "R", "mu", "kappa"});
        c.params.gamma = detail::num(p, "gamma", c.params.gamma);
        c.params.R = detail::num(p, "R", c.params.R);
        c.params.mu = detail::num(p, "mu", c.params.mu);
        c.params.kappa = detail::num(p, "kappa", c.params.kappa);
    }
    c.params.validate();

    if (!j.contains("right_state"))
        throw ConfigError("parse error: missing required key \"right_state\"");
    {
        const json& r = j.at("right_state");
        detail::require_keys(r, "right_state", {"v", "u", "theta"});
        if (!r.contains("v") || !r.contains("theta"))
            throw ConfigError("parse error: right_state needs \"v\" and \"theta\"");
        c.right_state.v = r.at("v").get<double>();
        c.right_state.u = detail::num(r, "u", 0.0);
        c.right_state.theta = r.at("theta").get<double>();
        c.right_state.validate();
    }
    if (!j.contains("theta_minus"))
        throw ConfigError("parse error: missing required key \"theta_minus\"");
    c.theta_minus = j.at("theta_minus").get<double>();

    c.beta = detail::num(j, "beta", c.beta);
    c.beta_efolds = detail::num(j, "beta_efolds", c.beta_efolds);

    if (j.contains("perturbation")) {
        const json& p = j.at("perturbation");
        detail::require_keys(p, "perturbation", {"shape", "amplitude", "center", "width", "fields"});
        const std::string shape = p.contains("shape") ? p.at("shape").get<std::string>() : "none";
        if (shape == "none")
            c.perturbation.shape = Perturbation::Shape::none;
        else if (shape == "gaussian_bump")
            c.perturbation.shape = Perturbation::Shape::gaussian_bump;
        else if (shape == "profile_shift")
            c.perturbation.shape = Perturbation::Shape::profile_shift;
        else
            throw ConfigError("parse error: unknown perturbation shape \"" + shape + "\"");
        c.perturbation.amplitude = detail::num(p, "amplitude", 0.0);
        if (c.perturbation.amplitude < 0)
            throw ConfigError("parse error: perturbation amplitude must be >= 0");
        if (p.contains("center")) c.pert_center = p.at("center").get<double>();
        c.perturbation.width = detail::num(p, "width", 2.0);
        if (!(c.perturbation.width > 0))
            throw ConfigError("parse error: perturbation width must be positive");
        if (p.contains("fields")) {
            c.perturbation.on_v = c.perturbation.on_u = c.perturbation.on_theta = false;
            for (const auto& f : p.at("fields")) {
                const std::string s = f.get<std::string>();
                if (s == "v")
                    c.perturbation.on_v = true;
                else if (s == "u")
                    c.perturbation.on_u = true;
                else if (s == "theta")
                    c.perturbation.on_theta = true;
                else
                    throw ConfigError("parse error: unknown perturbation field \"" + s + "\"");
            }
        }
    }

    if (j.contains("grid")) {
        const json& g = j.at("grid");
        detail::require_keys(g, "grid", {"N", "L", "L_efolds"});
        if (g.contains("N")) c.grid.N = g.at("N").get<std::size_t>();
        c.grid.L = detail::num(g, "L", c.grid.L);
        c.grid.L_efolds = detail::num(g, "L_efolds", c.grid.L_efolds);
    }
    if (c.grid.N < 200) throw ConfigError("parse error: N below minimum (200)");

    if (j.contains("ctrl")) {
        const json& t = j.at("ctrl");
        detail::require_keys(t, "ctrl", {"cfl", "dt_max", "positivity_floor"});
        c.ctrl.cfl = detail::num(t, "cfl", c.ctrl.cfl);
        c.ctrl.dt_max = detail::num(t, "dt_max", c.ctrl.dt_max);
        c.ctrl.positivity_floor = detail::num(t, "positivity_floor", c.ctrl.positivity_floor);
    }
    if (!(c.ctrl.cfl > 0))
        throw ConfigError("parse error: ctrl.cfl must be positive");

    c.t_end = detail::num(j, "t_end", c.t_end);
    c.t_end_efolds = detail::num(j, "t_end_efolds", c.t_end_efolds);
    if (j.contains("observe_every")) c.observe_every = j.at("observe_every").get<std::size_t>();
    c.profile_tol = detail::num(j, "profile_tol", c.profile_tol);
    c.profile_max_span = detail::num(j, "profile_max_span", c.profile_max_span);
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("output_dir")) c.output_dir = j.at("output_dir").get<std::string>();
    if (j.contains("snapshot_times"))
        c.snapshot_times = j.at("snapshot_times").get<std::vector<double>>();
    return c;
}

inline RunConfig parse_config(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("parse error: ") + e.what());
    }
    return config_from_json(j);
}

inline nlohmann::json config_to_json(const RunConfig& c) {
    nlohmann::json j;
    j["name"] = c.name;
    j["params"] = {{"gamma", c.params.gamma},
                   {"R", c.params.R},
                   {"mu", c.params.mu},
                   {"kappa", c.params.kappa}};
    j["right_state"] = {{"v", c.right_state.v}, {"u", c.right_state.u},
                        {"theta", c.right_state.theta}};
    j["theta_minus"] = c.theta_minus;
    j["beta"] = c.beta;
    j["beta_efolds"] = c.beta_efolds;
    const char* shape = c.perturbation.shape == Perturbation::Shape::none ? "none"
                        : c.perturbation.shape == Perturbation::Shape::gaussian_bump
                            ? "gaussian_bump"
                            : "profile_shift";
    nlohmann::json fields = nlohmann::json::array();
    if (c.perturbation.on_v) fields.push_back("v");
    if (c.perturbation.on_u) fields.push_back("u");
    if (c.perturbation.on_theta) fields.push_back("theta");
    j["perturbation"] = {{"shape", shape},
                         {"amplitude", c.perturbation.amplitude},
                         {"width", c.perturbation.width},
                         {"fields", fields}};
    if (c.pert_center) j["perturbation"]["center"] = *c.pert_center;
    j["grid"] = {{"N", c.grid.N}, {"L", c.grid.L}, {"L_efolds", c.grid.L_efolds}};
    j["ctrl"] = {{"cfl", c.ctrl.cfl}, {"positivity_floor", c.ctrl.positivity_floor}};
    if (std::isfinite(c.ctrl.dt_max)) j["ctrl"]["dt_max"] = c.ctrl.dt_max;
    j["t_end"] = c.t_end;
    j["t_end_efolds"] = c.t_end_efolds;
    j["observe_every"] = c.observe_every;
    j["profile_tol"] = c.profile_tol;
    j["profile_max_span"] = c.profile_max_span;
    j["seed"] = c.seed;
    j["output_dir"] = c.output_dir;
    j["snapshot_times"] = c.snapshot_times;
    return j;
}

}  // namespace vsw
