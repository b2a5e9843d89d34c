/**
 * @file experiments.hpp
 * @brief Model-versus-Cowell validation, single flyby runs with the EKF,
 *        Monte Carlo campaigns and the avoidance-maneuver sweep.
 */
#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "nodal/conjunction.hpp"
#include "nodal/config.hpp"
#include "nodal/scenario.hpp"

namespace nodal {

struct ValidationSample {
    double t = 0.0;
    Vec3 dr_model = Vec3::Zero();
    Vec3 dr_cowell = Vec3::Zero();
};

struct ValidationResult {
    double max_discrepancy = 0.0;           ///< km, forced run
    double max_discrepancy_unforced = 0.0;  ///< km, u = 0
    std::vector<ValidationSample> samples;  ///< forced run
};

struct FlybyStep {
    double t = 0.0;
    Vec6 oe_true = Vec6::Zero();
    Vec6 oe_hat = Vec6::Zero();
    Vec6 sigma = Vec6::Zero();  ///< 1 sigma from P
    ReferenceParams eta;
    double range = 0.0;         ///< true |dr|, km
    double range_err = 0.0;     ///< |dr_hat| - |dr|, km
    double range_sigma = 0.0;   ///< km
    double zeta_true = 0.0;
    double zeta_hat = 0.0;
    double zeta_sigma = 0.0;
    double node_separation = 0.0;  ///< estimated r2 - r1 at the ascending node, km
    double beta = 0.0;             ///< true apparent size, rad
    Vec3 innovation = Vec3::Zero();
    double nis = 0.0;
    double nees = 0.0;
    bool outlier = false;

    Vec6 error() const;
};

struct FlybyRun {
    EncounterPair pair;
    std::vector<FlybyStep> steps;
    double initial_range_err = 0.0;    ///< prior range error at t_start, km
    double initial_range_sigma = 0.0;  ///< from P0 at the true initial state, km
    std::size_t coverage_hits = 0;     ///< components inside 3 sigma, over all steps
    std::size_t coverage_total = 0;
    std::array<std::size_t, 6> component_hits{};
    bool detected = false;             ///< zeta 3 sigma band contains 0 at every post-transient step
};

struct MonteCarloStep {
    double t = 0.0;
    Vec6 true_sigma = Vec6::Zero();    ///< ensemble standard deviation of the error
    Vec6 filter_sigma = Vec6::Zero();  ///< rms of the filter 1 sigma
    double mean_nees = 0.0;
    double range_err_sigma = 0.0;
    double range_sigma = 0.0;          ///< rms filter range sigma
    double zeta_contains_zero = 0.0;   ///< fraction of runs
};

struct MonteCarloSummary {
    int runs = 0;
    std::uint64_t seed = 0;
    double sample_dt = 0.0;
    double detection_rate = 0.0;
    double coverage = 0.0;
    Vec6 component_coverage = Vec6::Zero();
    double final_range_err_sigma = 0.0;  ///< ensemble std at the last step, km
    double final_range_err_rms = 0.0;
    double final_filter_range_sigma = 0.0;
    double initial_range_sigma = 0.0;    ///< from P0, km
    double initial_range_err_sigma = 0.0;
    double range_reduction = 0.0;        ///< initial_range_sigma / final_range_err_sigma
    double nees_in_bounds = 0.0;         ///< fraction of steps with the ensemble-mean NEES inside 99% bounds
    double mean_nees = 0.0;
    double outlier_fraction = 0.0;
    std::vector<MonteCarloStep> steps;
};

struct ManeuverSample {
    double t = 0.0;
    double zeta_hat = 0.0;
    double zeta_sigma = 0.0;
    double delta_zeta = 0.0;
    Vec3 delta_v = Vec3::Zero();  ///< RTN_1, km/s
};

struct ManeuverResult {
    double offset = 0.0;
    std::vector<ManeuverSample> profile;
    double max_early_dv = 0.0;         ///< km/s over the early window
    ManeuverPlan plan;                 ///< at the selected epoch
    double zeta_change_exact = 0.0;    ///< true zeta after minus before, exact impulse map
    double miss_nominal = 0.0;         ///< km, Cowell replay without maneuver
    double miss_maneuvered = 0.0;      ///< km, Cowell replay with maneuver
    double t_closest = 0.0;
};

namespace experiments {

/// Orbit pair and sinusoidal accelerations used for the model-versus-Cowell check.
std::pair<ClassicalElements, ClassicalElements> validation_pair();
PerturbationProfile validation_inputs();

ValidationResult run_validation(const IntegratorOptions& opt = {}, double mu = kMuEarth, double duration = 1e4,
                                std::size_t samples = 1001);

FlybyRun run_flyby(const ScenarioConfig& cfg, std::size_t run_index = 0);

MonteCarloSummary run_montecarlo(const ScenarioConfig& cfg);

std::vector<ManeuverResult> run_maneuver_sweep(const ScenarioConfig& cfg, const FlybyRun& run,
                                               const std::vector<double>& offsets);

IntegratorOptions integrator_options(const ScenarioConfig& cfg);

}  // namespace experiments
}  // namespace nodal
