#include "nodal/relstate.hpp"

#include <algorithm>
#include <string>

#include "nodal/dynamics.hpp"

namespace nodal {

Vec6 NodalRelativeState::vector() const {
    Vec6 v;
    v << dtheta, dp, dxi_x, dxi_y, dh_x, dh_y;
    return v;
}

NodalRelativeState NodalRelativeState::from_vector(const Vec6& v) {
    return {wrap_angle(v(0)), v(1), v(2), v(3), v(4), v(5)};
}

void validate(const NodalRelativeState& oe, const ReferenceParams& eta) {
    if (!oe.vector().allFinite() || !eta.vector().allFinite()) {
        throw Error(ErrorCode::InvalidArgument, "non-finite relative state or reference parameters");
    }
    if (!(oe.dp > -1.0)) throw Error(ErrorCode::InvalidArgument, "dp must exceed -1");
    if (!(eta.p1 > 0.0)) throw Error(ErrorCode::InvalidArgument, "p1 must be positive");
    if (!(eta.ec * eta.ec + eta.es * eta.es < 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "reference orbit must be elliptic");
    }
}

namespace relstate {

NodalRelativeState oe_from_orientation(const ClassicalElements& el1, const ClassicalElements& el2,
                                       const RelativeOrientation& ro) {
    const double p1 = el1.semiparameter();
    const double p2 = el2.semiparameter();
    // theta1 - lambda1 = v1; theta1 - lambda2 = v1 + (argp1 - argp2) + (alpha2 - alpha1).
    const double v1 = el1.nu;
    const double alpha_diff = wrap_angle(ro.alpha2 - ro.alpha1);
    const double phase2 = v1 + (el1.argp - el2.argp) + alpha_diff;
    const double t = std::tan(0.5 * ro.gamma);

    NodalRelativeState oe;
    oe.dtheta = wrap_angle((el2.nu + el2.argp) - (el1.nu + el1.argp) - alpha_diff);
    oe.dp = (p2 - p1) / p1;
    oe.dxi_x = el2.e * std::cos(phase2) - el1.e * std::cos(v1);
    oe.dxi_y = el2.e * std::sin(phase2) - el1.e * std::sin(v1);
    oe.dh_x = t * std::cos(ro.theta1);
    oe.dh_y = t * std::sin(ro.theta1);
    return oe;
}

std::pair<NodalRelativeState, ReferenceParams> oe_from_classical(const ClassicalElements& el1,
                                                                 const ClassicalElements& el2) {
    const RelativeOrientation ro = frames::relative_orientation(el1, el2);
    const ReferenceParams eta{el1.semiparameter(), el1.e * std::cos(el1.nu), el1.e * std::sin(el1.nu)};
    return {oe_from_orientation(el1, el2, ro), eta};
}

RecoveredElements classical_from_oe(const NodalRelativeState& oe, const ReferenceParams& eta) {
    validate(oe, eta);
    const double e1 = eta.e1();
    const double v1 = eta.v1();
    const double cv = std::cos(v1);
    const double sv = std::sin(v1);

    RecoveredElements rec;
    // sqrt(dxi^2 + e1^2 + 2 e1 (dxi_x cos v1 + dxi_y sin v1)), written as a norm.
    rec.e2 = std::hypot(oe.dxi_x + eta.ec, oe.dxi_y + eta.es);
    if (rec.e2 >= 1.0) throw Error(ErrorCode::GeometryError, "recovered orbit 2 is not elliptic");
    rec.dlambda = std::atan2(oe.dxi_x * sv - oe.dxi_y * cv, oe.dxi_x * cv + oe.dxi_y * sv + e1);
    const double p2 = eta.p1 * (1.0 + oe.dp);
    rec.a2 = p2 / (1.0 - rec.e2 * rec.e2);
    rec.gamma = 2.0 * std::atan(oe.dh());
    rec.dtheta = wrap_angle(oe.dtheta);
    if (rec.gamma >= kCoplanarThreshold) {
        NodeAngles n;
        n.theta1 = std::atan2(oe.dh_y, oe.dh_x);
        n.theta2 = wrap_angle(n.theta1 + oe.dtheta);
        n.lambda1 = wrap_angle(n.theta1 - v1);
        n.lambda2 = wrap_angle(n.lambda1 + rec.dlambda);
        rec.nodes = n;
    }
    return rec;
}

EccIncVectors ecc_inc_vectors(const NodalRelativeState& oe, const ReferenceParams& /*eta*/) {
    EccIncVectors out;
    out.dxi_mag = oe.dxi();
    out.dh_mag = oe.dh();
    out.node_defined = out.dh_mag > 0.0;
    const double theta1 = out.node_defined ? std::atan2(oe.dh_y, oe.dh_x) : 0.0;
    const Mat2 back = planar_rotation(-theta1);
    const Vec2 de_flipped = back * Vec2(oe.dxi_x, oe.dxi_y);  // [de_x, -de_y]
    out.de = Vec2(de_flipped(0), -de_flipped(1));
    out.di = back * Vec2(oe.dh_x, oe.dh_y);
    if (out.dxi_mag > 0.0 && out.dh_mag > 0.0) {
        out.dphi = wrap_angle(std::atan2(oe.dh_y, oe.dh_x) - std::atan2(oe.dxi_y, oe.dxi_x));
    }
    return out;
}

double radius2_denominator(const NodalRelativeState& oe, const ReferenceParams& eta) {
    return 1.0 + (oe.dxi_x + eta.ec) * std::cos(oe.dtheta) - (oe.dxi_y + eta.es) * std::sin(oe.dtheta);
}

RelativePosition relative_position(const NodalRelativeState& oe, const ReferenceParams& eta) {
    const double den = radius2_denominator(oe, eta);
    if (!(den > 0.0)) {
        throw Error(ErrorCode::GeometryError, "r2 denominator is not positive (" + std::to_string(den) + ")");
    }
    const double c = std::cos(oe.dtheta);
    const double s = std::sin(oe.dtheta);
    const double hx = oe.dh_x;
    const double hy = oe.dh_y;
    const double norm = 1.0 + hx * hx + hy * hy;

    RelativePosition out;
    out.r1 = eta.p1 / (1.0 + eta.ec);
    out.r2 = eta.p1 * (1.0 + oe.dp) / den;
    out.q = out.r2 / out.r1;
    out.b << ((1.0 + hx * hx - hy * hy) * c - 2.0 * hx * hy * s) / norm,
             ((1.0 - hx * hx + hy * hy) * s - 2.0 * hx * hy * c) / norm,
             (2.0 * hy * c + 2.0 * hx * s) / norm;

    // 1 - b1 and q - 1 in cancellation-free form; both vanish at a collision.
    const double sh = std::sin(0.5 * oe.dtheta);
    const double ch = std::cos(0.5 * oe.dtheta);
    const double tilt = hx * sh + hy * ch;
    const double one_minus_b1 = 2.0 * (sh * sh + tilt * tilt) / norm;
    const double q_num = oe.dp * (1.0 + eta.ec) + eta.ec * 2.0 * sh * sh - oe.dxi_x * c + (oe.dxi_y + eta.es) * s;
    const double q_minus_1 = q_num / den;

    out.dr << out.r1 * (q_minus_1 - out.q * one_minus_b1), out.r2 * out.b(1), out.r2 * out.b(2);
    out.range = out.r1 * std::sqrt(q_minus_1 * q_minus_1 + 2.0 * out.q * one_minus_b1);
    return out;
}

PositionJacobians position_jacobians(const NodalRelativeState& oe, const ReferenceParams& eta) {
    const RelativePosition pos = relative_position(oe, eta);
    const double c = std::cos(oe.dtheta);
    const double s = std::sin(oe.dtheta);
    const double ex = oe.dxi_x + eta.ec;
    const double ey = oe.dxi_y + eta.es;
    const double den = 1.0 + ex * c - ey * s;
    const double e_theta = ex * s + ey * c;
    const double hx = oe.dh_x;
    const double hy = oe.dh_y;
    const double norm = 1.0 + hx * hx + hy * hy;
    const double r2 = pos.r2;
    const Vec3& b = pos.b;

    // Numerators of b and their partials.
    const Vec3 n_dtheta(-(1.0 + hx * hx - hy * hy) * s - 2.0 * hx * hy * c,
                        (1.0 - hx * hx + hy * hy) * c + 2.0 * hx * hy * s,
                        -2.0 * hy * s + 2.0 * hx * c);
    const Vec3 n_hx(2.0 * hx * c - 2.0 * hy * s, -2.0 * hx * s - 2.0 * hy * c, 2.0 * s);
    const Vec3 n_hy(-2.0 * hy * c - 2.0 * hx * s, 2.0 * hy * s - 2.0 * hx * c, 2.0 * c);
    const Vec3 b_dtheta = n_dtheta / norm;
    const Vec3 b_hx = (n_hx - b * 2.0 * hx) / norm;
    const Vec3 b_hy = (n_hy - b * 2.0 * hy) / norm;

    PositionJacobians j;
    j.d_oe.col(0) = (r2 * e_theta / den) * b + r2 * b_dtheta;
    j.d_oe.col(1) = (r2 / (1.0 + oe.dp)) * b;
    j.d_oe.col(2) = (-r2 * c / den) * b;
    j.d_oe.col(3) = (r2 * s / den) * b;
    j.d_oe.col(4) = r2 * b_hx;
    j.d_oe.col(5) = r2 * b_hy;

    const double one_plus_ec = 1.0 + eta.ec;
    j.d_eta.col(0) = (r2 / eta.p1) * b - Vec3(1.0 / one_plus_ec, 0.0, 0.0);
    j.d_eta.col(1) = (-r2 * c / den) * b + Vec3(eta.p1 / (one_plus_ec * one_plus_ec), 0.0, 0.0);
    j.d_eta.col(2) = (r2 * s / den) * b;
    return j;
}

Vec3 relative_velocity(const NodalRelativeState& oe, const ReferenceParams& eta, double mu) {
    const PositionJacobians j = position_jacobians(oe, eta);
    return j.d_oe * dynamics::f_unperturbed(oe, eta, mu) + j.d_eta * dynamics::f_eta(eta, mu);
}

double haversine_psi(double theta1, double theta2, double gamma) {
    const double hav_dtheta = std::pow(std::sin(0.5 * (theta2 - theta1)), 2);
    const double hav_gamma = std::pow(std::sin(0.5 * gamma), 2);
    const double hav_psi = std::clamp(hav_dtheta + std::sin(theta1) * std::sin(theta2) * hav_gamma, 0.0, 1.0);
    return 2.0 * std::asin(std::sqrt(hav_psi));
}

}  // namespace relstate
}  // namespace nodal
