#include "nodal/frames.hpp"

#include <string>

namespace nodal {

void validate(const ClassicalElements& el) {
    const bool finite = std::isfinite(el.a) && std::isfinite(el.e) && std::isfinite(el.i) &&
                        std::isfinite(el.raan) && std::isfinite(el.argp) && std::isfinite(el.nu);
    if (!finite) throw Error(ErrorCode::InvalidArgument, "non-finite classical element");
    if (!(el.a > 0.0)) throw Error(ErrorCode::InvalidArgument, "semimajor axis must be positive");
    if (!(el.e >= 0.0 && el.e < 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "eccentricity must lie in [0, 1), got " + std::to_string(el.e));
    }
    if (!(el.i >= 0.0 && el.i <= kPi)) throw Error(ErrorCode::InvalidArgument, "inclination outside [0, pi]");
}

ClassicalElements wrapped(const ClassicalElements& el) {
    ClassicalElements out = el;
    out.raan = wrap_angle(el.raan);
    out.argp = wrap_angle(el.argp);
    out.nu = wrap_angle(el.nu);
    return out;
}

namespace frames {

Dcm rot_x(double theta) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    Dcm m;
    m << 1.0, 0.0, 0.0,
         0.0, c, s,
         0.0, -s, c;
    return m;
}

Dcm rot_z(double theta) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    Dcm m;
    m << c, s, 0.0,
         -s, c, 0.0,
         0.0, 0.0, 1.0;
    return m;
}

Dcm pci_to_pqw(const ClassicalElements& el) {
    return rot_z(el.argp) * rot_x(el.i) * rot_z(el.raan);
}

Dcm pci_to_rtn(const ClassicalElements& el) {
    return rot_z(el.nu) * pci_to_pqw(el);
}

Dcm node_identity_inertial(const ClassicalElements& el1, const ClassicalElements& el2) {
    return rot_x(el1.i) * rot_z(el1.raan - el2.raan) * rot_x(-el2.i);
}

Dcm node_identity_relative(double alpha1, double gamma, double alpha2) {
    return rot_z(-alpha1) * rot_x(-gamma) * rot_z(alpha2);
}

RelativeOrientation relative_orientation(const ClassicalElements& el1, const ClassicalElements& el2) {
    validate(el1);
    validate(el2);
    const Dcm m = node_identity_inertial(el1, el2);

    RelativeOrientation ro;
    ro.gamma = std::atan2(std::hypot(m(0, 2), m(1, 2)), m(2, 2));
    if (ro.gamma > kPi - kRetrogradeMargin) {
        throw Error(ErrorCode::RetrogradeSingularity,
                    "relative inclination " + std::to_string(ro.gamma) + " rad is too close to pi");
    }
    const double alpha_diff = std::atan2(m(0, 1) - m(1, 0), m(0, 0) + m(1, 1));
    if (ro.gamma < kCoplanarThreshold) {
        ro.coplanar = true;
        ro.alpha1 = 0.0;
    } else {
        ro.alpha1 = std::atan2(m(0, 2), -m(1, 2));
    }
    ro.alpha2 = wrap_angle(ro.alpha1 + alpha_diff);

    ro.lambda1 = wrap_angle(el1.argp - ro.alpha1);
    ro.lambda2 = wrap_angle(el2.argp - ro.alpha2);
    ro.theta1 = wrap_angle(el1.nu + ro.lambda1);
    ro.theta2 = wrap_angle(el2.nu + ro.lambda2);
    return ro;
}

Dcm dcm_rtn2_to_rtn1(double theta1, double gamma, double theta2) {
    return rot_z(theta1) * rot_x(-gamma) * rot_z(-theta2);
}

double orthonormality_error(const Dcm& d) {
    return (d.transpose() * d - Mat3::Identity()).cwiseAbs().maxCoeff();
}

}  // namespace frames
}  // namespace nodal
