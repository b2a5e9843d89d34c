#include "nodal/config.hpp"

#include <fstream>

namespace nodal::config {

namespace {

using nlohmann::json;

template <class T>
void read(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

void read_deg(const json& j, const char* key, double& out) {
    if (j.contains(key)) out = deg2rad(j.at(key).get<double>());
}

void read_vec6(const json& j, const char* key, Vec6& out) {
    if (!j.contains(key)) return;
    const auto v = j.at(key).get<std::vector<double>>();
    if (v.size() != 6) throw Error(ErrorCode::ConfigError, std::string(key) + " must have 6 entries");
    for (int k = 0; k < 6; ++k) out(k) = v[static_cast<std::size_t>(k)];
}

std::vector<double> as_vector(const Vec6& v) { return {v.data(), v.data() + 6}; }

}  // namespace

ClassicalElements elements_from_json(const json& j) {
    ClassicalElements el;
    el.a = j.at("a").get<double>();
    el.e = j.at("e").get<double>();
    el.i = deg2rad(j.value("i_deg", 0.0));
    el.raan = deg2rad(j.value("raan_deg", 0.0));
    el.argp = deg2rad(j.value("argp_deg", 0.0));
    el.nu = deg2rad(j.value("nu_deg", 0.0));
    try {
        validate(el);
    } catch (const Error& e) {
        throw Error(ErrorCode::ConfigError, e.what());
    }
    return wrapped(el);
}

json elements_to_json(const ClassicalElements& el) {
    return {{"a", el.a},
            {"e", el.e},
            {"i_deg", rad2deg(el.i)},
            {"raan_deg", rad2deg(el.raan)},
            {"argp_deg", rad2deg(el.argp)},
            {"nu_deg", rad2deg(el.nu)}};
}

void validate(const ScenarioConfig& cfg) {
    auto require = [](bool ok, const char* what) {
        if (!ok) throw Error(ErrorCode::ConfigError, what);
    };
    require(cfg.mu > 0.0, "mu must be positive");
    require(cfg.t_start < cfg.t_end && cfg.t_end <= 0.0, "need t_start < t_end <= 0 (relative to impact)");
    require(cfg.sample_dt > 0.0, "sample_dt must be positive");
    require(cfg.d > 0.0, "target diameter must be positive");
    require(cfg.noise.sigma_az > 0.0 && cfg.noise.sigma_el > 0.0 && cfg.noise.sigma_beta > 0.0,
            "noise standard deviations must be positive");
    require(cfg.encounter.relative_speed > 0.0, "relative speed must be positive");
    require(cfg.encounter.gamma > 0.0 && cfg.encounter.gamma < kPi, "encounter gamma must lie in (0, pi)");
    require(cfg.encounter.root == 1 || cfg.encounter.root == -1, "encounter root must be +1 or -1");
    require(cfg.mc_runs >= 1, "mc_runs must be at least 1");
    require(cfg.transient >= 0.0 && cfg.transient < cfg.t_end - cfg.t_start, "transient must fit the window");
    require(cfg.rel_tol > 0.0 && cfg.abs_tol > 0.0, "integrator tolerances must be positive");
    require((cfg.q_diag.array() >= 0.0).all() && (cfg.p0_diag.array() > 0.0).all(), "Q must be >= 0 and P0 > 0");
    require(cfg.maneuver.window_start < cfg.maneuver.window_end && cfg.maneuver.profile_step > 0.0,
            "maneuver window is empty");
}

ScenarioConfig from_json(const json& j) {
    ScenarioConfig cfg;
    try {
        read(j, "mu", cfg.mu);
        if (j.contains("target")) cfg.target = elements_from_json(j.at("target"));
        if (j.contains("spacecraft")) cfg.spacecraft = elements_from_json(j.at("spacecraft"));
        if (j.contains("encounter")) {
            const json& e = j.at("encounter");
            read(e, "impact_epoch", cfg.encounter.impact_epoch);
            read(e, "relative_speed", cfg.encounter.relative_speed);
            read(e, "radial_speed", cfg.encounter.radial_speed);
            read_deg(e, "gamma_deg", cfg.encounter.gamma);
            read_deg(e, "target_nu_deg", cfg.encounter.target_nu);
            read(e, "root", cfg.encounter.root);
        }
        read(j, "d", cfg.d);
        if (j.contains("noise_deg")) {
            const json& n = j.at("noise_deg");
            read_deg(n, "az", cfg.noise.sigma_az);
            read_deg(n, "el", cfg.noise.sigma_el);
            read_deg(n, "beta", cfg.noise.sigma_beta);
        }
        read(j, "sample_dt", cfg.sample_dt);
        read(j, "t_start", cfg.t_start);
        read(j, "t_end", cfg.t_end);
        read(j, "transient", cfg.transient);
        read(j, "init_perturb_sigma", cfg.init_perturb_sigma);
        read_vec6(j, "q_diag", cfg.q_diag);
        read_vec6(j, "p0_diag", cfg.p0_diag);
        read(j, "seed", cfg.seed);
        read(j, "mc_runs", cfg.mc_runs);
        read(j, "threads", cfg.threads);
        read(j, "cowell_truth", cfg.cowell_truth);
        read(j, "rel_tol", cfg.rel_tol);
        read(j, "abs_tol", cfg.abs_tol);
        read(j, "chi2_gate", cfg.update.chi2_gate);
        read(j, "reject_outliers", cfg.update.reject_outliers);
        if (j.contains("maneuver")) {
            const json& m = j.at("maneuver");
            read(m, "offset", cfg.maneuver.offset);
            read(m, "window_start", cfg.maneuver.window_start);
            read(m, "window_end", cfg.maneuver.window_end);
            read(m, "epoch", cfg.maneuver.epoch);
            read(m, "profile_step", cfg.maneuver.profile_step);
        }
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ConfigError, e.what());
    }
    validate(cfg);
    return cfg;
}

json to_json(const ScenarioConfig& cfg) {
    json j;
    j["mu"] = cfg.mu;
    j["target"] = elements_to_json(cfg.target);
    if (cfg.spacecraft) j["spacecraft"] = elements_to_json(*cfg.spacecraft);
    j["encounter"] = {{"impact_epoch", cfg.encounter.impact_epoch},
                      {"relative_speed", cfg.encounter.relative_speed},
                      {"radial_speed", cfg.encounter.radial_speed},
                      {"gamma_deg", rad2deg(cfg.encounter.gamma)},
                      {"target_nu_deg", rad2deg(cfg.encounter.target_nu)},
                      {"root", cfg.encounter.root}};
    j["d"] = cfg.d;
    j["noise_deg"] = {{"az", rad2deg(cfg.noise.sigma_az)},
                      {"el", rad2deg(cfg.noise.sigma_el)},
                      {"beta", rad2deg(cfg.noise.sigma_beta)}};
    j["sample_dt"] = cfg.sample_dt;
    j["t_start"] = cfg.t_start;
    j["t_end"] = cfg.t_end;
    j["transient"] = cfg.transient;
    j["init_perturb_sigma"] = cfg.init_perturb_sigma;
    j["q_diag"] = as_vector(cfg.q_diag);
    j["p0_diag"] = as_vector(cfg.p0_diag);
    j["seed"] = cfg.seed;
    j["mc_runs"] = cfg.mc_runs;
    j["threads"] = cfg.threads;
    j["cowell_truth"] = cfg.cowell_truth;
    j["rel_tol"] = cfg.rel_tol;
    j["abs_tol"] = cfg.abs_tol;
    j["chi2_gate"] = cfg.update.chi2_gate;
    j["reject_outliers"] = cfg.update.reject_outliers;
    j["maneuver"] = {{"offset", cfg.maneuver.offset},
                     {"window_start", cfg.maneuver.window_start},
                     {"window_end", cfg.maneuver.window_end},
                     {"epoch", cfg.maneuver.epoch},
                     {"profile_step", cfg.maneuver.profile_step}};
    return j;
}

ScenarioConfig load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::ConfigError, "cannot open config file " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ConfigError, path.string() + ": " + e.what());
    }
    return from_json(j);
}

void apply_paper_scale(ScenarioConfig& cfg) {
    cfg.mc_runs = 200;
    cfg.sample_dt = 5.0;
}

}  // namespace nodal::config
