/**
 * @file output.hpp
 * @brief Plot-ready CSV writers and the JSON summary.
 *
 * Numbers are written with 17 significant digits so that identical runs give
 * byte-identical files.
 */
#pragma once

#include <filesystem>
#include <vector>

#include "json.hpp"
#include "nodal/experiments.hpp"

namespace nodal::output {

/// t, dtheta, dp, dxi_x, dxi_y, dh_x, dh_y, p1, ec, es, dr_R, dr_T, dr_N
void write_trajectory(const std::filesystem::path& path, const NodalTrajectory& traj);

/// t, true state (6), p1, ec, es, range, beta
void write_truth_log(const std::filesystem::path& path, const FlybyRun& run);

/// t, estimate (6), error (6), 3 sigma (6), range error and its 3 sigma, zeta and its 3 sigma, innovation (3)
void write_filter_log(const std::filesystem::path& path, const FlybyRun& run);

/// t, zeta, 3 sigma, ascending and descending margins, node separation (km)
void write_screening(const std::filesystem::path& path, const FlybyRun& run);

/// Single-state screening row, used by the `screen` command.
void write_screening(const std::filesystem::path& path, const NodalRelativeState& oe, const ReferenceParams& eta);

void write_montecarlo(const std::filesystem::path& path, const MonteCarloSummary& summary);

/// t, model dr (3), Cowell dr (3), |difference|
void write_validation(const std::filesystem::path& path, const ValidationResult& result);

/// offset, t, zeta, 3 sigma, delta zeta, dv RTN (3), |dv|
void write_maneuver(const std::filesystem::path& path, const std::vector<ManeuverResult>& results);

nlohmann::json summary(const MonteCarloSummary& mc);
nlohmann::json summary(const FlybyRun& run);
nlohmann::json summary(const ValidationResult& v);
nlohmann::json summary(const ManeuverResult& m);

void write_json(const std::filesystem::path& path, const nlohmann::json& j);

}  // namespace nodal::output
