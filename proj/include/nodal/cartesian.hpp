/**
 * @file cartesian.hpp
 * @brief Inertial position/velocity states, osculating-element conversions,
 *        Kepler advance and the Cartesian route to and from the nodal state.
 */
#pragma once

#include <utility>

#include "nodal/relstate.hpp"

namespace nodal {

struct CartesianState {
    Vec3 r = Vec3::Zero();  ///< km
    Vec3 v = Vec3::Zero();  ///< km/s
};

struct CartesianPair {
    CartesianState s1;
    CartesianState s2;
};

/// Osculating elements plus the conventions applied to degenerate orbits.
struct OsculatingElements {
    ClassicalElements el;
    bool circular = false;    ///< e below threshold: argp = 0, phase folded into nu
    bool equatorial = false;  ///< node undefined: raan = 0
};

/// Satellite 2 relative to satellite 1 in RTN_1.
struct RelativeCartesian {
    Vec3 dr = Vec3::Zero();
    Vec3 dv = Vec3::Zero();
};

namespace cartesian {

inline constexpr double kCircularThreshold = 1e-11;
inline constexpr double kEquatorialThreshold = 1e-11;

CartesianState elements_to_cartesian(const ClassicalElements& el, double mu);

/// @throws Error(InvalidArgument) for r = 0, rectilinear or non-elliptic states.
OsculatingElements cartesian_to_elements(const CartesianState& s, double mu);

/// Eccentric anomaly from Kepler's equation M = E - e sin E (Newton, e < 1).
double solve_kepler(double mean_anomaly, double e);
double true_to_mean(double nu, double e);
double mean_to_true(double mean_anomaly, double e);

/// Elements after dt seconds of two-body motion (only nu changes).
ClassicalElements kepler_advance(const ClassicalElements& el, double dt, double mu);

/// PCI to RTN rotation built from the state itself.
Mat3 pci_to_rtn(const CartesianState& s);

/// RTN_1 components of r2 - r1 and of the relative velocity seen from the rotating frame.
RelativeCartesian relative_rtn(const CartesianState& s1, const CartesianState& s2);

/**
 * Cartesian pair consistent with (oe, eta), expressed in the node frame of
 * satellite 1 (X along the relative node, Z along the angular momentum of
 * orbit 1). When dh = 0 the node is taken at theta1 = 0.
 */
CartesianPair canonical_pair(const NodalRelativeState& oe, const ReferenceParams& eta, double mu);

/// Nodal state of an inertial pair. Coplanar pairs use orbit 1's ascending node as reference.
std::pair<NodalRelativeState, ReferenceParams> oe_from_cartesian(const CartesianPair& pair, double mu);

/// Instantaneous delta-v (RTN_1, km/s) on satellite 1, mapped exactly through Cartesian states.
std::pair<NodalRelativeState, ReferenceParams> apply_impulse(const NodalRelativeState& oe,
                                                             const ReferenceParams& eta,
                                                             const Vec3& dv_rtn1, double mu);

}  // namespace cartesian
}  // namespace nodal
