/**
 * @file relstate.hpp
 * @brief Nodal relative state, reference parameters, and the maps to
 *        classical elements and to local RTN_1 position / velocity.
 */
#pragma once

#include <optional>
#include <utility>

#include "nodal/frames.hpp"

namespace nodal {

/// Six relative states of satellite 2 with respect to satellite 1.
struct NodalRelativeState {
    double dtheta = 0.0;  ///< theta2 - theta1, wrapped to (-pi, pi]
    double dp = 0.0;      ///< (p2 - p1) / p1
    double dxi_x = 0.0;   ///< e2 cos(theta1 - lambda2) - e1 cos(theta1 - lambda1)
    double dxi_y = 0.0;   ///< e2 sin(theta1 - lambda2) - e1 sin(theta1 - lambda1)
    double dh_x = 0.0;    ///< tan(gamma/2) cos(theta1)
    double dh_y = 0.0;    ///< tan(gamma/2) sin(theta1)

    Vec6 vector() const;
    static NodalRelativeState from_vector(const Vec6& v);

    double dxi() const { return std::hypot(dxi_x, dxi_y); }
    double dh() const { return std::hypot(dh_x, dh_y); }
};

/// Reference-orbit parameters eta = [p1, e1 cos v1, e1 sin v1].
struct ReferenceParams {
    double p1 = 0.0;  ///< semiparameter of orbit 1 [km]
    double ec = 0.0;  ///< e1 cos v1
    double es = 0.0;  ///< e1 sin v1

    double e1() const { return std::hypot(ec, es); }
    double v1() const { return std::atan2(es, ec); }
    Vec3 vector() const { return {p1, ec, es}; }
    static ReferenceParams from_vector(const Vec3& v) { return {v(0), v(1), v(2)}; }
};

/// Throws InvalidArgument unless the state is finite, dp > -1, p1 > 0 and e1 < 1.
void validate(const NodalRelativeState& oe, const ReferenceParams& eta);

/// Node-referenced angles that are only recoverable when the planes are distinct.
struct NodeAngles {
    double theta1 = 0.0;
    double theta2 = 0.0;
    double lambda1 = 0.0;
    double lambda2 = 0.0;
};

/// Orbit invariants recovered from (oe, eta).
struct RecoveredElements {
    double a2 = 0.0;
    double e2 = 0.0;
    double gamma = 0.0;
    double dtheta = 0.0;
    double dlambda = 0.0;  ///< lambda2 - lambda1
    /// Empty when gamma is below the coplanar threshold: theta1 cannot be read off dh.
    std::optional<NodeAngles> nodes;
};

struct EccIncVectors {
    Vec2 de = Vec2::Zero();  ///< relative eccentricity vector, node-aligned frame
    Vec2 di = Vec2::Zero();  ///< relative inclination vector, node-aligned frame
    double dxi_mag = 0.0;
    double dh_mag = 0.0;
    /// Phase between the inclination and eccentricity vectors; empty if either vanishes.
    std::optional<double> dphi;
    /// False when dh = 0; de and di are then expressed with theta1 = 0.
    bool node_defined = false;
};

/// Result of the position mapping dr / r1 = q b - [1 0 0]^T.
struct RelativePosition {
    Vec3 dr = Vec3::Zero();  ///< RTN_1 position of satellite 2 relative to 1 [km]
    double r1 = 0.0;
    double r2 = 0.0;
    double q = 1.0;          ///< r2 / r1
    Vec3 b = Vec3::UnitX();  ///< unit direction of satellite 2 in RTN_1
    double range = 0.0;      ///< |dr|, evaluated without cancellation
};

struct PositionJacobians {
    Mat36 d_oe = Mat36::Zero();   ///< d(dr)/d(oe)
    Mat3 d_eta = Mat3::Zero();    ///< d(dr)/d(eta)
};

namespace relstate {

/// Relative state and reference parameters of a classical element pair.
std::pair<NodalRelativeState, ReferenceParams> oe_from_classical(const ClassicalElements& el1,
                                                                 const ClassicalElements& el2);

/// Same map, starting from an already extracted relative orientation.
NodalRelativeState oe_from_orientation(const ClassicalElements& el1, const ClassicalElements& el2,
                                       const RelativeOrientation& ro);

RecoveredElements classical_from_oe(const NodalRelativeState& oe, const ReferenceParams& eta);

EccIncVectors ecc_inc_vectors(const NodalRelativeState& oe, const ReferenceParams& eta);

/// Denominator 1 + (dxi_x + e1 cos v1) cos dtheta - (dxi_y + e1 sin v1) sin dtheta = p2 / r2.
double radius2_denominator(const NodalRelativeState& oe, const ReferenceParams& eta);

/// @throws Error(GeometryError) if the r2 denominator is not positive.
RelativePosition relative_position(const NodalRelativeState& oe, const ReferenceParams& eta);

/// Analytic partials of the position map.
PositionJacobians position_jacobians(const NodalRelativeState& oe, const ReferenceParams& eta);

/// RTN_1 relative velocity under Keplerian motion, d(dr)/d(oe) f + d(dr)/d(eta) f_eta.
Vec3 relative_velocity(const NodalRelativeState& oe, const ReferenceParams& eta, double mu);

/// Angle between the two position vectors from hav psi = hav dtheta + sin th1 sin th2 hav gamma.
double haversine_psi(double theta1, double theta2, double gamma);

}  // namespace relstate
}  // namespace nodal
