#include "nodal/cartesian.hpp"

#include <string>

namespace nodal::cartesian {

CartesianState elements_to_cartesian(const ClassicalElements& el, double mu) {
    validate(el);
    const double p = el.semiparameter();
    const double c = std::cos(el.nu);
    const double s = std::sin(el.nu);
    const double r = p / (1.0 + el.e * c);
    const Mat3 to_pci = frames::pci_to_pqw(el).transpose();
    const double vs = std::sqrt(mu / p);
    return {to_pci * Vec3(r * c, r * s, 0.0), to_pci * Vec3(-vs * s, vs * (el.e + c), 0.0)};
}

OsculatingElements cartesian_to_elements(const CartesianState& s, double mu) {
    const double rn = s.r.norm();
    if (!(rn > 0.0) || !s.r.allFinite() || !s.v.allFinite()) {
        throw Error(ErrorCode::InvalidArgument, "state must have finite, nonzero position");
    }
    const Vec3 h = s.r.cross(s.v);
    const double hn = h.norm();
    if (!(hn > 0.0)) throw Error(ErrorCode::InvalidArgument, "rectilinear state has no orbital plane");
    const double inv_a = 2.0 / rn - s.v.squaredNorm() / mu;
    if (!(inv_a > 0.0)) throw Error(ErrorCode::InvalidArgument, "state is not on an elliptic orbit");

    const Vec3 h_hat = h / hn;
    const Vec3 e_vec = s.v.cross(h) / mu - s.r / rn;

    OsculatingElements out;
    ClassicalElements& el = out.el;
    el.a = 1.0 / inv_a;
    el.e = e_vec.norm();
    el.i = std::atan2(std::hypot(h.x(), h.y()), h.z());

    Vec3 n_hat(-h.y(), h.x(), 0.0);
    if (n_hat.norm() < kEquatorialThreshold * hn) {
        out.equatorial = true;
        n_hat = Vec3::UnitX();
        el.raan = 0.0;
    } else {
        n_hat.normalize();
        el.raan = std::atan2(h.x(), -h.y());
    }
    const Vec3 m_hat = h_hat.cross(n_hat);
    const double arg_lat = std::atan2(s.r.dot(m_hat), s.r.dot(n_hat));
    if (el.e < kCircularThreshold) {
        out.circular = true;
        el.argp = 0.0;
        el.nu = arg_lat;
    } else {
        el.argp = std::atan2(e_vec.dot(m_hat), e_vec.dot(n_hat));
        el.nu = wrap_angle(arg_lat - el.argp);
    }
    if (el.e >= 1.0) throw Error(ErrorCode::InvalidArgument, "state is not on an elliptic orbit");
    return out;
}

double solve_kepler(double mean_anomaly, double e) {
    const double m = wrap_angle(mean_anomaly);
    double ecc = e < 0.8 ? m + e * std::sin(m) : (m >= 0.0 ? kPi : -kPi);
    for (int it = 0; it < 50; ++it) {
        const double f = ecc - e * std::sin(ecc) - m;
        const double step = f / (1.0 - e * std::cos(ecc));
        ecc -= step;
        if (std::abs(step) < 1e-15) break;
    }
    return ecc;
}

double true_to_mean(double nu, double e) {
    const double ecc = std::atan2(std::sqrt(1.0 - e * e) * std::sin(nu), e + std::cos(nu));
    return ecc - e * std::sin(ecc);
}

double mean_to_true(double mean_anomaly, double e) {
    const double ecc = solve_kepler(mean_anomaly, e);
    return 2.0 * std::atan2(std::sqrt(1.0 + e) * std::sin(0.5 * ecc), std::sqrt(1.0 - e) * std::cos(0.5 * ecc));
}

ClassicalElements kepler_advance(const ClassicalElements& el, double dt, double mu) {
    validate(el);
    const double n = std::sqrt(mu / (el.a * el.a * el.a));
    // Reduce n dt first so long spans keep full precision in the wrapped anomaly.
    const double m = true_to_mean(el.nu, el.e) + std::remainder(n * dt, kTwoPi);
    ClassicalElements out = el;
    out.nu = wrap_angle(mean_to_true(m, el.e));
    return out;
}

Mat3 pci_to_rtn(const CartesianState& s) {
    const Vec3 r_hat = s.r.normalized();
    const Vec3 n_hat = s.r.cross(s.v).normalized();
    Mat3 c;
    c.row(0) = r_hat.transpose();
    c.row(1) = n_hat.cross(r_hat).transpose();
    c.row(2) = n_hat.transpose();
    return c;
}

RelativeCartesian relative_rtn(const CartesianState& s1, const CartesianState& s2) {
    const Mat3 c = pci_to_rtn(s1);
    const double r1 = s1.r.norm();
    const Vec3 omega(0.0, 0.0, s1.r.cross(s1.v).norm() / (r1 * r1));
    RelativeCartesian out;
    out.dr = c * (s2.r - s1.r);
    out.dv = c * (s2.v - s1.v) - omega.cross(out.dr);
    return out;
}

CartesianPair canonical_pair(const NodalRelativeState& oe, const ReferenceParams& eta, double mu) {
    validate(oe, eta);
    const double den = relstate::radius2_denominator(oe, eta);
    if (!(den > 0.0)) throw Error(ErrorCode::GeometryError, "r2 denominator is not positive");
    const double theta1 = oe.dh() > 0.0 ? std::atan2(oe.dh_y, oe.dh_x) : 0.0;
    const double theta2 = theta1 + oe.dtheta;
    const double gamma = 2.0 * std::atan(oe.dh());
    const double p1 = eta.p1;
    const double p2 = p1 * (1.0 + oe.dp);
    const double e_theta = (oe.dxi_x + eta.ec) * std::sin(oe.dtheta) + (oe.dxi_y + eta.es) * std::cos(oe.dtheta);

    // In-plane states in each satellite's node frame, then plane 2 tilted onto plane 1.
    const Mat3 rtn1_to_n1 = frames::rot_z(theta1).transpose();
    const Mat3 rtn2_to_n1 = frames::rot_x(-gamma) * frames::rot_z(theta2).transpose();
    const double r1 = p1 / (1.0 + eta.ec);
    const double r2 = p2 / den;
    CartesianPair pair;
    pair.s1.r = rtn1_to_n1 * Vec3(r1, 0.0, 0.0);
    pair.s1.v = rtn1_to_n1 * (std::sqrt(mu / p1) * Vec3(eta.es, 1.0 + eta.ec, 0.0));
    pair.s2.r = rtn2_to_n1 * Vec3(r2, 0.0, 0.0);
    pair.s2.v = rtn2_to_n1 * (std::sqrt(mu / p2) * Vec3(e_theta, den, 0.0));
    return pair;
}

std::pair<NodalRelativeState, ReferenceParams> oe_from_cartesian(const CartesianPair& pair, double mu) {
    const CartesianState& a = pair.s1;
    const CartesianState& b = pair.s2;
    const Vec3 h1 = a.r.cross(a.v);
    const Vec3 h2 = b.r.cross(b.v);
    const double h1n = h1.norm();
    const double h2n = h2.norm();
    if (!(h1n > 0.0) || !(h2n > 0.0)) throw Error(ErrorCode::InvalidArgument, "rectilinear state has no orbital plane");
    const Vec3 n1 = h1 / h1n;
    const Vec3 n2 = h2 / h2n;
    const Vec3 cross = n1.cross(n2);
    const double gamma = std::atan2(cross.norm(), n1.dot(n2));
    if (gamma > kPi - kRetrogradeMargin) {
        throw Error(ErrorCode::RetrogradeSingularity, "relative inclination too close to pi");
    }

    Vec3 k;
    if (gamma >= kCoplanarThreshold) {
        k = cross.normalized();
    } else {
        const Vec3 node = Vec3::UnitZ().cross(n1);
        k = node.norm() > kEquatorialThreshold ? node.normalized() : Vec3::UnitX();
    }

    auto position_angle = [&k](const Vec3& r, const Vec3& n) { return std::atan2(k.cross(r).dot(n), k.dot(r)); };
    const double theta1 = position_angle(a.r, n1);
    const double theta2 = position_angle(b.r, n2);

    // (e cos(theta1 - lambda), e sin(theta1 - lambda)) from each eccentricity vector.
    auto projected = [&](const CartesianState& s, const Vec3& h, const Vec3& n) {
        const Vec3 e_vec = s.v.cross(h) / mu - s.r.normalized();
        const double ec = e_vec.dot(k);
        const double es = k.cross(e_vec).dot(n);
        return Vec2(std::cos(theta1) * ec + std::sin(theta1) * es, std::sin(theta1) * ec - std::cos(theta1) * es);
    };
    const Vec2 x1 = projected(a, h1, n1);
    const Vec2 x2 = projected(b, h2, n2);

    const double p1 = h1n * h1n / mu;
    const double p2 = h2n * h2n / mu;
    const double t = std::tan(0.5 * gamma);
    NodalRelativeState oe;
    oe.dtheta = wrap_angle(theta2 - theta1);
    oe.dp = (p2 - p1) / p1;
    oe.dxi_x = x2(0) - x1(0);
    oe.dxi_y = x2(1) - x1(1);
    oe.dh_x = t * std::cos(theta1);
    oe.dh_y = t * std::sin(theta1);
    return {oe, ReferenceParams{p1, x1(0), x1(1)}};
}

std::pair<NodalRelativeState, ReferenceParams> apply_impulse(const NodalRelativeState& oe,
                                                             const ReferenceParams& eta,
                                                             const Vec3& dv_rtn1, double mu) {
    CartesianPair pair = canonical_pair(oe, eta, mu);
    pair.s1.v += pci_to_rtn(pair.s1).transpose() * dv_rtn1;
    return oe_from_cartesian(pair, mu);
}

}  // namespace nodal::cartesian
