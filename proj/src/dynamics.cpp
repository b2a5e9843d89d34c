#include "nodal/dynamics.hpp"

#include <string>

namespace nodal::dynamics {

double v1_rate(const ReferenceParams& eta, double mu) {
    const double k = 1.0 + eta.ec;
    return std::sqrt(mu / (eta.p1 * eta.p1 * eta.p1)) * k * k;
}

Vec6 f_unperturbed(const NodalRelativeState& oe, const ReferenceParams& eta, double mu) {
    const double w = v1_rate(eta, mu);
    const double den = relstate::radius2_denominator(oe, eta);
    const double k = 1.0 + eta.ec;
    const double shape = (den * den) / (k * k * std::pow(1.0 + oe.dp, 1.5));
    Vec6 f;
    f << w * (shape - 1.0), 0.0, -w * oe.dxi_y, w * oe.dxi_x, -w * oe.dh_y, w * oe.dh_x;
    return f;
}

Vec3 f_eta(const ReferenceParams& eta, double mu) {
    const double w = v1_rate(eta, mu);
    return {0.0, -w * eta.es, w * eta.ec};
}

Mat6 state_jacobian(const NodalRelativeState& oe, const ReferenceParams& eta, double mu) {
    const double w = v1_rate(eta, mu);
    const double c = std::cos(oe.dtheta);
    const double s = std::sin(oe.dtheta);
    const double ex = oe.dxi_x + eta.ec;
    const double ey = oe.dxi_y + eta.es;
    const double den = 1.0 + ex * c - ey * s;
    const double e_theta = ex * s + ey * c;
    const double k2 = (1.0 + eta.ec) * (1.0 + eta.ec);
    const double kk = k2 * std::pow(1.0 + oe.dp, 1.5);

    Mat6 f = Mat6::Zero();
    f(0, 0) = -w * 2.0 * den * e_theta / kk;
    f(0, 1) = -1.5 * w * den * den / (k2 * std::pow(1.0 + oe.dp, 2.5));
    f(0, 2) = w * 2.0 * den * c / kk;
    f(0, 3) = -w * 2.0 * den * s / kk;
    f(2, 3) = -w;
    f(3, 2) = w;
    f(4, 5) = -w;
    f(5, 4) = w;
    return f;
}

AnalyticPartial analytic_step(const NodalRelativeState& oe0, double dv1) {
    const Mat2 r = planar_rotation(dv1);
    AnalyticPartial out;
    out.dp = oe0.dp;
    out.dxi = r * Vec2(oe0.dxi_x, oe0.dxi_y);
    out.dh = r * Vec2(oe0.dh_x, oe0.dh_y);
    return out;
}

InputMatrices input_matrices(const NodalRelativeState& oe, const ReferenceParams& eta, double mu) {
    const double den = relstate::radius2_denominator(oe, eta);
    if (!(den > 0.0)) {
        throw Error(ErrorCode::GeometryError, "r2 denominator is not positive (" + std::to_string(den) + ")");
    }
    const double c = std::cos(oe.dtheta);
    const double s = std::sin(oe.dtheta);
    const double ex = oe.dxi_x + eta.ec;
    const double ey = oe.dxi_y + eta.es;
    const double hx = oe.dh_x;
    const double hy = oe.dh_y;
    const double p1 = eta.p1;
    const double p2 = p1 * (1.0 + oe.dp);
    const double r1 = p1 / (1.0 + eta.ec);
    const double r2 = p2 / den;
    const double dh_theta = hx * s + hy * c;
    const double e_theta = ex * s + ey * c;
    const double half_norm = 0.5 * (1.0 + hx * hx + hy * hy);

    InputMatrices m;
    m.g2 << 0.0, 0.0, dh_theta,
            0.0, 2.0 * (1.0 + oe.dp), 0.0,
            p2 / r2 * s, 2.0 * p2 / r2 * c + e_theta * s, ey * dh_theta,
            p2 / r2 * c, -2.0 * p2 / r2 * s + e_theta * c, -ex * dh_theta,
            0.0, 0.0, half_norm * c,
            0.0, 0.0, -half_norm * s;
    m.g2 *= r2 / std::sqrt(mu * p2);

    m.g1 << 0.0, 0.0, -hy,
            0.0, 2.0 * (1.0 + oe.dp), 0.0,
            0.0, 2.0 * p1 / r1, -ey * hy,
            p1 / r1, eta.es, ex * hy,
            0.0, 0.0, 0.5 * (1.0 + hx * hx - hy * hy),
            0.0, 0.0, hx * hy;
    m.g1 *= r1 / std::sqrt(mu * p1);

    m.g_eta << 0.0, 2.0 * p1, 0.0,
               0.0, 2.0 * p1 / r1, 0.0,
               p1 / r1, eta.es, 0.0;
    m.g_eta *= r1 / std::sqrt(mu * p1);
    return m;
}

StateDerivative perturbed_derivative(const NodalRelativeState& oe, const ReferenceParams& eta,
                                     const PerturbationInput& u, double mu) {
    StateDerivative d;
    d.d_oe = f_unperturbed(oe, eta, mu);
    d.d_eta = f_eta(eta, mu);
    if (u.u1.isZero(0.0) && u.u2.isZero(0.0)) return d;
    const InputMatrices m = input_matrices(oe, eta, mu);
    d.d_oe += m.g2 * u.u2 - m.g1 * u.u1;
    d.d_eta += m.g_eta * u.u1;
    return d;
}

NodalRates nodal_variational(const NodalVariationalInput& in, double mu) {
    const bool normal_forcing = in.u.u1(2) != 0.0 || in.u.u2(2) != 0.0;
    if (in.gamma < kCoplanarThreshold && normal_forcing) {
        throw Error(ErrorCode::CoplanarNormalInput, "normal acceleration on a coplanar pair leaves the node undefined");
    }
    const double r1 = in.p1 / (1.0 + in.e1 * std::cos(in.nu1));
    const double r2 = in.p2 / (1.0 + in.e2 * std::cos(in.nu2));
    const Vec3 ut1 = in.u.u1 * (r1 / std::sqrt(mu * in.p1));
    const Vec3 ut2 = in.u.u2 * (r2 / std::sqrt(mu * in.p2));
    const double st1 = std::sin(in.theta1);
    const double st2 = std::sin(in.theta2);

    // Normal-forcing couplings; they vanish identically without normal inputs.
    double cross1 = 0.0;  // sin(theta1) cot(gamma) uN1 - sin(theta2)/sin(gamma) uN2
    double cross2 = 0.0;  // -sin(theta2) cot(gamma) uN2 + sin(theta1)/sin(gamma) uN1
    NodalRates r;
    if (normal_forcing) {
        const double cot_g = std::cos(in.gamma) / std::sin(in.gamma);
        const double csc_g = 1.0 / std::sin(in.gamma);
        cross1 = st1 * cot_g * ut1(2) - st2 * csc_g * ut2(2);
        cross2 = -st2 * cot_g * ut2(2) + st1 * csc_g * ut1(2);
        r.alpha1 = st2 * csc_g * ut2(2) -
                   (st1 * cot_g + std::sin(in.theta1 + in.alpha1) / std::tan(in.i1)) * ut1(2);
        r.alpha2 = (st2 * cot_g - std::sin(in.theta2 + in.alpha2) / std::tan(in.i2)) * ut2(2) -
                   st1 * csc_g * ut1(2);
        r.gamma = std::cos(in.theta2) * ut2(2) - std::cos(in.theta1) * ut1(2);
    }
    r.theta1 = std::sqrt(mu * in.p1) / (r1 * r1) + cross1;
    r.theta2 = std::sqrt(mu * in.p2) / (r2 * r2) + cross2;

    auto in_plane = [](double p, double rad, double e, double nu, const Vec3& ut) {
        if (ut(0) == 0.0 && ut(1) == 0.0) return 0.0;
        return (p + rad) / (rad * e) * std::sin(nu) * ut(1) - p / (rad * e) * std::cos(nu) * ut(0);
    };
    r.lambda1 = in_plane(in.p1, r1, in.e1, in.nu1, ut1) + cross1;
    r.lambda2 = in_plane(in.p2, r2, in.e2, in.nu2, ut2) + cross2;
    return r;
}

std::vector<double> linspace(double t0, double tf, std::size_t n) {
    if (n < 2) throw Error(ErrorCode::InvalidArgument, "linspace needs at least two points");
    std::vector<double> t(n);
    const double h = (tf - t0) / static_cast<double>(n - 1);
    for (std::size_t k = 0; k < n; ++k) t[k] = t0 + h * static_cast<double>(k);
    t.back() = tf;
    return t;
}

NodalTrajectory propagate(const NodalRelativeState& oe0, const ReferenceParams& eta0,
                          const PerturbationProfile& u, std::span<const double> times, double mu,
                          const IntegratorOptions& opt) {
    validate(oe0, eta0);
    using State = detail::OdeState<9>;
    State x{};
    Eigen::Map<Vec6>(x.data()) = oe0.vector();
    Eigen::Map<Vec3>(x.data() + 6) = eta0.vector();

    auto rhs = [&](const State& s, State& dsdt, double t) {
        const auto oe = NodalRelativeState::from_vector(Eigen::Map<const Vec6>(s.data()));
        const auto eta = ReferenceParams::from_vector(Eigen::Map<const Vec3>(s.data() + 6));
        const StateDerivative d = perturbed_derivative(oe, eta, u.at(t), mu);
        Eigen::Map<Vec6>(dsdt.data()) = d.d_oe;
        Eigen::Map<Vec3>(dsdt.data() + 6) = d.d_eta;
    };

    NodalTrajectory traj;
    traj.t.reserve(times.size());
    traj.oe.reserve(times.size());
    traj.eta.reserve(times.size());
    detail::integrate_times<9>(rhs, x, times, opt, [&](const State& s, double t) {
        traj.t.push_back(t);
        traj.oe.push_back(NodalRelativeState::from_vector(Eigen::Map<const Vec6>(s.data())));
        traj.eta.push_back(ReferenceParams::from_vector(Eigen::Map<const Vec3>(s.data() + 6)));
    });
    return traj;
}

NodalTrajectory propagate(const NodalRelativeState& oe0, const ReferenceParams& eta0,
                          const PerturbationProfile& u, double t0, double tf, std::size_t samples,
                          double mu, const IntegratorOptions& opt) {
    if (!(tf > t0)) throw Error(ErrorCode::InvalidArgument, "propagation needs tf > t0");
    const std::vector<double> times = linspace(t0, tf, samples);
    return propagate(oe0, eta0, u, times, mu, opt);
}

}  // namespace nodal::dynamics
