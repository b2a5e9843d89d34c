/**
 * @file config.hpp
 * @brief Scenario configuration, JSON loading and command-line overrides.
 *
 * Angles are stored in radians; the JSON representation uses degrees
 * (keys ending in `_deg`).
 */
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "json.hpp"

#include "nodal/frames.hpp"
#include "nodal/navigation.hpp"

namespace nodal {

/// Encounter geometry at the impact point, which is the relative node (theta1 = theta2 = 0).
struct EncounterSpec {
    double impact_epoch = 0.0;    ///< s
    double relative_speed = 15.0; ///< km/s
    double radial_speed = 13.0;   ///< km/s, radial component of v1 - v2 in the target RTN frame
    double gamma = deg2rad(5.0);  ///< relative inclination
    double target_nu = 0.0;       ///< target true anomaly at impact
    int root = -1;                ///< sign of the square root selecting the spacecraft transverse speed
};

struct ManeuverConfig {
    double offset = 1e-4;           ///< added to 3 sigma(zeta)
    double window_start = 86400.0;  ///< s after t_start
    double window_end = 7 * 86400.0;
    double epoch = 3 * 86400.0;     ///< selected maneuver time, s after t_start
    double profile_step = 21600.0;  ///< s
};

struct ScenarioConfig {
    double mu = kMuSun;
    /// Target (satellite 2); nu is replaced by encounter.target_nu at impact.
    ClassicalElements target{2.435 * kAstronomicalUnit, 0.164, deg2rad(3.06), deg2rad(80.9), deg2rad(250.2), 0.0};
    /// Explicit spacecraft (satellite 1) elements at impact; solved from the encounter when empty.
    std::optional<ClassicalElements> spacecraft;
    EncounterSpec encounter;

    double d = 90.0;  ///< target diameter, km
    NoiseSpec noise{deg2rad(0.001), deg2rad(0.001), deg2rad(0.001)};
    double sample_dt = 60.0;          ///< s
    double t_start = -20.0 * 86400;   ///< s relative to impact
    double t_end = -6.0 * 3600;       ///< s relative to impact
    double transient = 86400.0;       ///< s after t_start excluded from detection statistics
    double init_perturb_sigma = 1.5e-4;
    Vec6 q_diag = (Vec6() << 1e-17, 1e-20, 1e-20, 1e-20, 1e-20, 1e-20).finished();  ///< per second
    Vec6 p0_diag = Vec6::Constant(1.5e-4 * 1.5e-4);
    std::uint64_t seed = 42;
    int mc_runs = 25;
    int threads = 0;                  ///< 0: hardware concurrency
    bool cowell_truth = false;
    double rel_tol = 1e-12;
    double abs_tol = 1e-12;
    UpdateOptions update;
    ManeuverConfig maneuver;
};

namespace config {

/// @throws Error(ConfigError) on violated invariants.
void validate(const ScenarioConfig& cfg);

ScenarioConfig from_json(const nlohmann::json& j);
nlohmann::json to_json(const ScenarioConfig& cfg);

/// Reads a JSON file; unspecified keys keep their defaults.
ScenarioConfig load(const std::filesystem::path& path);

/// Paper-scale campaign: 200 runs at a 5 s cadence.
void apply_paper_scale(ScenarioConfig& cfg);

ClassicalElements elements_from_json(const nlohmann::json& j);
nlohmann::json elements_to_json(const ClassicalElements& el);

}  // namespace config
}  // namespace nodal
