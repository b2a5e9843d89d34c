/**
 * @file cowell.hpp
 * @brief Two-body Cowell propagation of a satellite pair, used as the
 *        independent oracle for the nodal model.
 */
#pragma once

#include <span>
#include <vector>

#include "nodal/cartesian.hpp"
#include "nodal/dynamics.hpp"

namespace nodal {

struct CowellTrajectory {
    std::vector<double> t;
    std::vector<CartesianPair> states;
};

namespace cowell {

/// r'' = -mu r / |r|^3 + u for one state; u is given in the satellite's own RTN frame.
Vec3 acceleration(const CartesianState& s, const Vec3& u_rtn, double mu);

/**
 * Integrates both satellites from times.front() and samples them at `times`.
 * Profile u1 acts on satellite 1, u2 on satellite 2.
 */
CowellTrajectory propagate(const CartesianPair& s0, const PerturbationProfile& u, std::span<const double> times,
                           double mu, const IntegratorOptions& opt = {});

struct ClosestApproach {
    double t = 0.0;
    double distance = 0.0;  ///< km
};

/**
 * Minimum of |r2 - r1| over [t_lo, t_hi] for the pair given at t0 <= t_lo:
 * sampled every `step` seconds, then refined by Brent minimization.
 */
ClosestApproach closest_approach(const CartesianPair& s0, double t0, double t_lo, double t_hi, double step, double mu,
                                 const IntegratorOptions& opt = {});

}  // namespace cowell
}  // namespace nodal
