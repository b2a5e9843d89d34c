/**
 * @file frames.hpp
 * @brief Elementary rotations, direction cosine matrices and the extraction of
 *        the relative orientation (gamma, alpha_j, lambda_j, theta_j) of two orbits.
 *
 * All rotations are coordinate-basis (passive) rotations: rot_z(t) maps the
 * coordinates of a vector in frame A to its coordinates in the frame obtained
 * by rotating A by +t about its Z axis.
 */
#pragma once

#include "nodal/types.hpp"

namespace nodal {

using Dcm = Mat3;

/// Classical osculating elements of one satellite in the primary-centred inertial frame.
struct ClassicalElements {
    double a = 0.0;     ///< semimajor axis [km]
    double e = 0.0;     ///< eccentricity, 0 <= e < 1
    double i = 0.0;     ///< inclination [rad], [0, pi]
    double raan = 0.0;  ///< right ascension of the ascending node [rad]
    double argp = 0.0;  ///< argument of periapsis [rad]
    double nu = 0.0;    ///< true anomaly [rad]

    double semiparameter() const { return a * (1.0 - e * e); }
};

/// Throws InvalidArgument unless a > 0, 0 <= e < 1, 0 <= i <= pi and all fields are finite.
void validate(const ClassicalElements& el);

/// Returns a copy with raan, argp and nu wrapped to (-pi, pi].
ClassicalElements wrapped(const ClassicalElements& el);

/// Relative orientation of orbit 2 with respect to orbit 1, referred to the
/// relative node (ascending crossing of satellite 2 through the plane of satellite 1).
struct RelativeOrientation {
    double gamma = 0.0;    ///< relative inclination, [0, pi)
    double alpha1 = 0.0;   ///< angle from ascending node 1 to the relative node
    double alpha2 = 0.0;   ///< angle from ascending node 2 to the relative node
    double lambda1 = 0.0;  ///< periapsis 1 measured from the relative node
    double lambda2 = 0.0;
    double theta1 = 0.0;   ///< position 1 measured from the relative node
    double theta2 = 0.0;
    /// gamma below kCoplanarThreshold: alpha1 is pinned to 0 (relative node at
    /// the ascending node of orbit 1).
    bool coplanar = false;
};

inline constexpr double kCoplanarThreshold = 1e-9;  // rad
inline constexpr double kRetrogradeMargin = 1e-6;   // rad, gamma > pi - margin is rejected

namespace frames {

Dcm rot_x(double theta);
Dcm rot_z(double theta);

/// T_Z(argp) T_X(i) T_Z(raan): PCI coordinates to the satellite's perifocal frame.
Dcm pci_to_pqw(const ClassicalElements& el);

/// PCI coordinates to the satellite's RTN frame, T_Z(nu) * pci_to_pqw(el).
Dcm pci_to_rtn(const ClassicalElements& el);

/// T_X(i1) T_Z(raan1 - raan2) T_X(-i2), the inertial side of the node identity.
Dcm node_identity_inertial(const ClassicalElements& el1, const ClassicalElements& el2);

/// T_Z(-alpha1) T_X(-gamma) T_Z(alpha2), the relative-node side of the node identity.
Dcm node_identity_relative(double alpha1, double gamma, double alpha2);

/**
 * Solves node_identity_relative(alpha1, gamma, alpha2) = node_identity_inertial(el1, el2)
 * with gamma in [0, pi), then lambda_j = argp_j - alpha_j and theta_j = nu_j + lambda_j.
 *
 * With M the inertial side, the extraction uses
 *   gamma          = atan2(hypot(M02, M12), M22)
 *   alpha1         = atan2(M02, -M12)
 *   alpha2 - alpha1 = atan2(M01 - M10, M00 + M11)
 * The last form stays well conditioned as gamma -> 0, so theta2 - theta1 and
 * theta1 - lambda2 are accurate for nearly coplanar pairs.
 *
 * @throws Error(RetrogradeSingularity) if gamma > pi - kRetrogradeMargin.
 */
RelativeOrientation relative_orientation(const ClassicalElements& el1, const ClassicalElements& el2);

/// T_Z(theta1) T_X(-gamma) T_Z(-theta2): RTN_2 coordinates to RTN_1 coordinates.
Dcm dcm_rtn2_to_rtn1(double theta1, double gamma, double theta2);

/// Largest elementwise deviation of D^T D from identity.
double orthonormality_error(const Dcm& d);

}  // namespace frames
}  // namespace nodal
