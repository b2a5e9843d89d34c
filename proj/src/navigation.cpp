#include "nodal/navigation.hpp"

#include <algorithm>
#include <array>

namespace nodal::navigation {

MeasurementTriple ideal_measurement(const Vec3& dr, double d) {
    const double rho = dr.norm();
    if (!(rho > 0.0)) throw Error(ErrorCode::ZeroRange, "line of sight undefined for co-located satellites");
    return {std::atan2(dr.y(), dr.x()), std::asin(std::clamp(dr.z() / rho, -1.0, 1.0)), d / rho};
}

Mat3 measurement_partials(const Vec3& dr, double d) {
    const double rho2 = dr.squaredNorm();
    const double rho = std::sqrt(rho2);
    const double horiz2 = dr.x() * dr.x() + dr.y() * dr.y();
    const double horiz = std::sqrt(horiz2);
    Mat3 j;
    j.row(0) << -dr.y() / horiz2, dr.x() / horiz2, 0.0;
    j.row(1) << -dr.x() * dr.z() / (rho2 * horiz), -dr.y() * dr.z() / (rho2 * horiz), horiz / rho2;
    j.row(2) = -d / (rho2 * rho) * dr.transpose();
    return j;
}

PredictedMeasurement predict_measurement(const NodalRelativeState& oe, const ReferenceParams& eta, double d) {
    const RelativePosition pos = relstate::relative_position(oe, eta);
    PredictedMeasurement out;
    out.y = ideal_measurement(pos.dr, d);
    const double horiz = std::hypot(pos.dr.x(), pos.dr.y());
    out.gimbal_degenerate = horiz <= kGimbalTol * pos.dr.norm();
    if (out.gimbal_degenerate) return out;  // H left at zero: azimuth carries no usable gradient
    out.H = measurement_partials(pos.dr, d) * relstate::position_jacobians(oe, eta).d_oe;
    return out;
}

Mat6 symmetrized(const Mat6& P) { return 0.5 * (P + P.transpose()); }

PropagatedFilter ekf_propagate(const FilterState& fs, const ReferenceParams& eta, double dt, const Mat6& Q, double mu,
                               const IntegratorOptions& opt) {
    if (!(dt > 0.0)) throw Error(ErrorCode::InvalidArgument, "ekf_propagate needs dt > 0");
    validate(fs.oe_hat, eta);
    const double e1 = eta.e1();
    const double v1_0 = eta.v1();
    const NodalRelativeState& x0 = fs.oe_hat;

    auto state_at = [&](double dtheta, double dv1) {
        const AnalyticPartial rot = dynamics::analytic_step(x0, dv1);
        const NodalRelativeState oe{dtheta, rot.dp, rot.dxi(0), rot.dxi(1), rot.dh(0), rot.dh(1)};
        const ReferenceParams e{eta.p1, e1 * std::cos(v1_0 + dv1), e1 * std::sin(v1_0 + dv1)};
        return std::pair{oe, e};
    };

    // [dtheta, v1 - v1(t0), Phi (column-major)]
    using State = detail::OdeState<38>;
    State x{};
    x[0] = x0.dtheta;
    Eigen::Map<Mat6>(x.data() + 2) = Mat6::Identity();

    auto rhs = [&](const State& s, State& dsdt, double) {
        const auto [oe, e] = state_at(s[0], s[1]);
        dsdt[0] = dynamics::f_unperturbed(oe, e, mu)(0);
        dsdt[1] = dynamics::v1_rate(e, mu);
        Eigen::Map<Mat6>(dsdt.data() + 2) = dynamics::state_jacobian(oe, e, mu) * Eigen::Map<const Mat6>(s.data() + 2);
    };

    const std::array<double, 2> times{0.0, dt};
    State end{};
    detail::integrate_times<38>(rhs, x, times, opt, [&](const State& s, double) { end = s; });

    const auto [oe, e] = state_at(end[0], end[1]);
    PropagatedFilter out;
    out.phi = Eigen::Map<const Mat6>(end.data() + 2);
    out.fs.oe_hat = NodalRelativeState::from_vector(oe.vector());
    out.fs.P = symmetrized(out.phi * fs.P * out.phi.transpose() + Q * dt);
    out.eta = e;
    return out;
}

UpdateResult ekf_update(const FilterState& fs, const ReferenceParams& eta, const MeasurementTriple& z,
                        const NoiseSpec& noise, double d, const UpdateOptions& opt) {
    const PredictedMeasurement pred = predict_measurement(fs.oe_hat, eta, d);
    UpdateResult out;
    out.fs = fs;
    out.innovation = z.vector() - pred.y.vector();
    out.innovation(0) = wrap_angle(out.innovation(0));

    const Mat3 R = noise.covariance();
    const Mat3 S = pred.H * fs.P * pred.H.transpose() + R;
    const Eigen::LDLT<Mat3> s_ldlt(S);
    out.nis = out.innovation.dot(s_ldlt.solve(out.innovation));
    out.outlier = out.nis > opt.chi2_gate;
    if (out.outlier && opt.reject_outliers) return out;

    // K = P H^T S^-1, via the symmetric solve S K^T = H P.
    const Eigen::Matrix<double, 6, 3> K = s_ldlt.solve(pred.H * fs.P).transpose();
    out.fs.oe_hat = NodalRelativeState::from_vector(fs.oe_hat.vector() + K * out.innovation);
    const Mat6 I_KH = Mat6::Identity() - K * pred.H;
    out.fs.P = symmetrized(I_KH * fs.P * I_KH.transpose() + K * R * K.transpose());
    return out;
}

}  // namespace nodal::navigation
