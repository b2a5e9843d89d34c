/**
 * @file scenario.hpp
 * @brief Construction of a colliding spacecraft / target pair and sampling of
 *        its true nodal state.
 */
#pragma once

#include <span>
#include <vector>

#include "nodal/cartesian.hpp"
#include "nodal/config.hpp"

namespace nodal {

/// Both orbits at the impact epoch; satellite 1 is the spacecraft, satellite 2 the target.
struct EncounterPair {
    ClassicalElements el1;
    ClassicalElements el2;
    double impact_epoch = 0.0;
};

struct TruthSample {
    double t = 0.0;
    NodalRelativeState oe;
    ReferenceParams eta;
};

namespace scenario {

/**
 * Spacecraft orbit through the target's position at impact such that the
 * relative velocity has magnitude spec.relative_speed, radial component
 * spec.radial_speed and the orbit planes meet at relative inclination
 * spec.gamma with the impact point on the ascending relative node.
 *
 * @throws Error(InfeasibleEncounter) when no prograde elliptic spacecraft orbit exists.
 */
EncounterPair build_collision_scenario(const EncounterSpec& spec, const ClassicalElements& target, double mu);

/// Pair used by a configuration: explicit spacecraft elements or the solved encounter.
EncounterPair encounter_from_config(const ScenarioConfig& cfg);

/// Both satellites' elements at absolute time t by two-body motion.
std::pair<ClassicalElements, ClassicalElements> elements_at(const EncounterPair& pair, double t, double mu);

/// Sample times impact_epoch + [t_start, t_end] every sample_dt (end point included when on the grid).
std::vector<double> sample_times(const ScenarioConfig& cfg);

/// Exact two-body truth via Kepler's equation.
std::vector<TruthSample> truth_kepler(const EncounterPair& pair, std::span<const double> times, double mu);

/// Truth from Cowell integration of both Cartesian states, started at times.front().
std::vector<TruthSample> truth_cowell(const EncounterPair& pair, std::span<const double> times, double mu,
                                      const IntegratorOptions& opt = {});

}  // namespace scenario
}  // namespace nodal
