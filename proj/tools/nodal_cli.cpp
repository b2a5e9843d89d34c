/**
 * @file nodal_cli.cpp
 * @brief Command-line front end: validation, propagation, screening, flyby
 *        runs, Monte Carlo campaigns and the maneuver sweep.
 */
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nodal/conjunction.hpp"
#include "nodal/cowell.hpp"
#include "nodal/experiments.hpp"
#include "nodal/output.hpp"

namespace fs = std::filesystem;
using namespace nodal;

namespace {

struct GlobalOptions {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out = "out";
    bool paper_scale = false;
    std::optional<double> mu;
    std::optional<double> tol;
};

ScenarioConfig make_config(const GlobalOptions& g) {
    ScenarioConfig cfg = g.config_path.empty() ? ScenarioConfig{} : config::load(g.config_path);
    if (g.paper_scale) config::apply_paper_scale(cfg);
    if (g.seed) cfg.seed = *g.seed;
    if (g.mu) cfg.mu = *g.mu;
    if (g.tol) cfg.rel_tol = *g.tol;
    config::validate(cfg);
    return cfg;
}

fs::path out_dir(const GlobalOptions& g) {
    fs::create_directories(g.out);
    return g.out;
}

void print(const nlohmann::json& j) { std::cout << j.dump(2) << '\n'; }

/// Orbit pair used by propagate and screen: the validation pair by default,
/// the configured flyby pair at t_start with --encounter.
struct PairChoice {
    NodalRelativeState oe;
    ReferenceParams eta;
    double t0 = 0.0;
    double mu = kMuEarth;
};

PairChoice choose_pair(const GlobalOptions& g, bool encounter) {
    if (!encounter) {
        const auto [el1, el2] = experiments::validation_pair();
        const auto [oe, eta] = relstate::oe_from_classical(el1, el2);
        return {oe, eta, 0.0, g.mu.value_or(kMuEarth)};
    }
    const ScenarioConfig cfg = make_config(g);
    const EncounterPair pair = scenario::encounter_from_config(cfg);
    const double t0 = pair.impact_epoch + cfg.t_start;
    const auto [el1, el2] = scenario::elements_at(pair, t0, cfg.mu);
    const auto [oe, eta] = relstate::oe_from_classical(el1, el2);
    return {oe, eta, t0, cfg.mu};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Nodal relative dynamics, conjunction screening and angles-only navigation"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions g;
    app.add_option("--config", g.config_path, "JSON scenario configuration")->check(CLI::ExistingFile);
    app.add_option("--seed", g.seed, "RNG seed");
    app.add_option("--out", g.out, "output directory")->capture_default_str();
    app.add_flag("--paper-scale", g.paper_scale, "200 Monte Carlo runs at a 5 s cadence");
    app.add_option("--mu", g.mu, "gravitational parameter, km^3/s^2");
    app.add_option("--tol", g.tol, "integrator relative tolerance");

    auto* validate = app.add_subcommand("validate", "nodal model versus Cowell on the reference orbit pair");
    double val_duration = 1e4;
    std::size_t val_samples = 1001;
    validate->add_option("--duration", val_duration, "s")->capture_default_str();
    validate->add_option("--samples", val_samples)->capture_default_str();

    auto* propagate = app.add_subcommand("propagate", "propagate a pair with the nodal model");
    bool prop_encounter = false, prop_forced = false;
    double prop_duration = 1e4;
    std::size_t prop_samples = 1001;
    propagate->add_flag("--encounter", prop_encounter, "use the configured flyby pair from t_start");
    propagate->add_flag("--forced", prop_forced, "apply the sinusoidal validation accelerations");
    propagate->add_option("--duration", prop_duration, "s")->capture_default_str();
    propagate->add_option("--samples", prop_samples)->capture_default_str();

    auto* screen = app.add_subcommand("screen", "intersection test, zeta and closest approach for a pair");
    bool screen_encounter = false;
    double screen_span = 1e4;
    screen->add_flag("--encounter", screen_encounter, "use the configured flyby pair from t_start to 1 day after impact");
    screen->add_option("--span", screen_span, "closest-approach search span for the default pair, s")
        ->capture_default_str();

    auto* flyby = app.add_subcommand("flyby", "single flyby run with the EKF");
    std::size_t flyby_run = 0;
    flyby->add_option("--run", flyby_run, "run index selecting the random substream")->capture_default_str();

    auto* montecarlo = app.add_subcommand("montecarlo", "Monte Carlo campaign of flyby runs");
    std::optional<int> mc_runs;
    montecarlo->add_option("--runs", mc_runs, "number of runs");

    auto* maneuver = app.add_subcommand("maneuver", "avoidance-impulse profile and Cowell replay");
    std::vector<double> offsets;
    std::size_t man_run = 0;
    maneuver->add_option("--offset", offsets, "delta zeta offsets added to 3 sigma (repeatable)");
    maneuver->add_option("--run", man_run, "flyby run index")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*validate) {
            IntegratorOptions opt;
            if (g.tol) opt.rel_tol = *g.tol;
            const ValidationResult v = experiments::run_validation(opt, g.mu.value_or(kMuEarth), val_duration, val_samples);
            const fs::path dir = out_dir(g);
            output::write_validation(dir / "validation.csv", v);
            const nlohmann::json j = output::summary(v);
            output::write_json(dir / "summary.json", j);
            print(j);
        } else if (*propagate) {
            const PairChoice p = choose_pair(g, prop_encounter);
            IntegratorOptions opt;
            if (g.tol) opt.rel_tol = *g.tol;
            const PerturbationProfile u = prop_forced ? experiments::validation_inputs() : PerturbationProfile{};
            const NodalTrajectory traj =
                dynamics::propagate(p.oe, p.eta, u, p.t0, p.t0 + prop_duration, prop_samples, p.mu, opt);
            output::write_trajectory(out_dir(g) / "trajectory.csv", traj);
            std::cout << "wrote " << traj.t.size() << " samples\n";
        } else if (*screen) {
            const PairChoice p = choose_pair(g, screen_encounter);
            const C1Verdict c1 = conjunction::c1_test(p.oe, p.eta);
            C2Options c2opt;
            if (g.tol) c2opt.integrator.rel_tol = *g.tol;
            double tf = p.t0 + screen_span;
            if (screen_encounter) {
                const ScenarioConfig cfg = make_config(g);
                tf = cfg.encounter.impact_epoch + 86400.0;
            }
            const C2Result c2 = conjunction::c2_check(p.oe, p.eta, p.t0, tf, p.mu, c2opt);
            const fs::path dir = out_dir(g);
            output::write_screening(dir / "screening.csv", p.oe, p.eta);
            nlohmann::json j = {{"c1_satisfied", c1.satisfied()},
                                {"coplanar", c1.coplanar},
                                {"zeta", conjunction::zeta(p.oe, p.eta)},
                                {"zeta_descending", conjunction::zeta_descending(p.oe, p.eta)},
                                {"node_separation_km", conjunction::node_separation(p.oe, p.eta)},
                                {"c2_collides", c2.collides},
                                {"c2_t_min", c2.t_min},
                                {"c2_d_min_km", c2.d_min}};
            output::write_json(dir / "summary.json", j);
            print(j);
        } else if (*flyby) {
            const ScenarioConfig cfg = make_config(g);
            const FlybyRun run = experiments::run_flyby(cfg, flyby_run);
            const fs::path dir = out_dir(g);
            output::write_truth_log(dir / "truth.csv", run);
            output::write_filter_log(dir / "filter.csv", run);
            output::write_screening(dir / "screening.csv", run);
            const nlohmann::json j = output::summary(run);
            output::write_json(dir / "summary.json", j);
            print(j);
        } else if (*montecarlo) {
            ScenarioConfig cfg = make_config(g);
            if (mc_runs) cfg.mc_runs = *mc_runs;
            const MonteCarloSummary mc = experiments::run_montecarlo(cfg);
            const fs::path dir = out_dir(g);
            output::write_montecarlo(dir / "montecarlo.csv", mc);
            const nlohmann::json j = output::summary(mc);
            output::write_json(dir / "summary.json", j);
            print(j);
        } else if (*maneuver) {
            const ScenarioConfig cfg = make_config(g);
            if (offsets.empty()) offsets.push_back(cfg.maneuver.offset);
            const FlybyRun run = experiments::run_flyby(cfg, man_run);
            const std::vector<ManeuverResult> results = experiments::run_maneuver_sweep(cfg, run, offsets);
            const fs::path dir = out_dir(g);
            output::write_maneuver(dir / "maneuver.csv", results);
            nlohmann::json j = nlohmann::json::array();
            for (const ManeuverResult& r : results) j.push_back(output::summary(r));
            output::write_json(dir / "summary.json", j);
            print(j);
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
