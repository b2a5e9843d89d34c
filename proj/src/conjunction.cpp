#include "nodal/conjunction.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include <boost/math/tools/minima.hpp>

namespace nodal::conjunction {

namespace {

double inclination_norm(const NodalRelativeState& oe) {
    const double h = oe.dh();
    if (!(h > 0.0)) throw Error(ErrorCode::ZetaUndefined, "dh = 0, the relative node is undefined");
    return h;
}

double range_at(const NodalRelativeState& oe, const ReferenceParams& eta) {
    return relstate::relative_position(oe, eta).range;
}

double orbit_period(double a, double mu) { return kTwoPi * std::sqrt(a * a * a / mu); }

}  // namespace

CoplanarAmplitude coplanar_amplitude(const NodalRelativeState& oe, const ReferenceParams& eta) {
    const RecoveredElements rec = relstate::classical_from_oe(oe, eta);
    const double e1 = eta.e1();
    const double k = 1.0 + oe.dp;
    const double a = k * e1 - rec.e2 * std::cos(rec.dlambda);
    const double b = rec.e2 * std::sin(rec.dlambda);
    return {std::hypot(a, b), std::atan2(b, a)};
}

NodeMargins node_margins(const NodalRelativeState& oe, const ReferenceParams& eta, double coplanar_tol) {
    const double h = oe.dh();
    if (!(h > coplanar_tol)) {
        throw Error(ErrorCode::Theta1Degenerate, "node margins need a distinct relative node (dh above tolerance)");
    }
    const double e1_cos_l1 = (oe.dh_x * eta.ec + oe.dh_y * eta.es) / h;   // e1 cos(lambda1)
    const double de_x = (oe.dh_x * oe.dxi_x + oe.dh_y * oe.dxi_y) / h;    // dxi cos(dphi)
    return {oe.dp * (1.0 + e1_cos_l1) - de_x, oe.dp * (1.0 - e1_cos_l1) + de_x};
}

C1Verdict c1_test(const NodalRelativeState& oe, const ReferenceParams& eta, const C1Options& opt) {
    validate(oe, eta);
    C1Verdict v;
    v.coplanar = oe.dh() <= opt.coplanar_tol;
    if (v.coplanar) {
        const CoplanarAmplitude amp = coplanar_amplitude(oe, eta);
        v.coplanar_margin = oe.dp * oe.dp - amp.drho * amp.drho;
        v.coplanar_satisfied = *v.coplanar_margin <= 0.0;
        return v;
    }
    const NodeMargins m = node_margins(oe, eta, opt.coplanar_tol);
    v.ascending_margin = m.ascending;
    v.descending_margin = m.descending;
    v.ascending_satisfied = std::abs(m.ascending) <= opt.node_tol;
    v.descending_satisfied = std::abs(m.descending) <= opt.node_tol;
    return v;
}

C2Result c2_check(const NodalRelativeState& oe0, const ReferenceParams& eta0, double t0, double tf, double mu,
                  const C2Options& opt) {
    if (!(tf > t0)) throw Error(ErrorCode::InvalidArgument, "c2_check needs tf > t0");
    const RecoveredElements rec = relstate::classical_from_oe(oe0, eta0);
    const double e1 = eta0.e1();
    const double a1 = eta0.p1 / (1.0 - e1 * e1);
    const double t_short = std::min(orbit_period(a1, mu), orbit_period(rec.a2, mu));
    const double span = tf - t0;
    const double h = std::min(t_short / opt.samples_per_period, span / static_cast<double>(opt.min_samples));
    const auto n = static_cast<std::size_t>(std::ceil(span / h)) + 1;
    const std::vector<double> times = dynamics::linspace(t0, tf, std::max<std::size_t>(n, 2));
    const NodalTrajectory traj = dynamics::propagate(oe0, eta0, opt.u, times, mu, opt.integrator);

    std::size_t best = 0;
    double best_d = range_at(traj.oe[0], traj.eta[0]);
    for (std::size_t k = 1; k < traj.t.size(); ++k) {
        const double d = range_at(traj.oe[k], traj.eta[k]);
        if (d < best_d) {
            best_d = d;
            best = k;
        }
    }

    // Brent search (golden section with parabolic steps) on the bracket around
    // the best sample; each evaluation is re-propagated from the bracket start.
    const std::size_t lo_idx = best == 0 ? 0 : best - 1;
    const std::size_t hi_idx = std::min(best + 1, traj.t.size() - 1);
    const double t_anchor = traj.t[lo_idx];
    const NodalRelativeState oe_anchor = traj.oe[lo_idx];
    const ReferenceParams eta_anchor = traj.eta[lo_idx];
    auto distance = [&](double t) {
        if (t <= t_anchor) return range_at(oe_anchor, eta_anchor);
        const std::array<double, 2> tt{t_anchor, t};
        const NodalTrajectory seg = dynamics::propagate(oe_anchor, eta_anchor, opt.u, tt, mu, opt.integrator);
        return range_at(seg.oe.back(), seg.eta.back());
    };

    const auto [dt_min, d_min] = boost::math::tools::brent_find_minima(
        [&](double dt) { return distance(t_anchor + dt); }, 0.0, traj.t[hi_idx] - t_anchor,
        std::numeric_limits<double>::digits / 2);
    C2Result out{false, traj.t[best], best_d};
    if (d_min < out.d_min) {
        out.d_min = d_min;
        out.t_min = t_anchor + dt_min;
    }
    out.collides = out.d_min <= opt.miss_tol;
    return out;
}

double zeta(const NodalRelativeState& oe, const ReferenceParams& eta) {
    const double h = inclination_norm(oe);
    return oe.dp - (oe.dh_x * (oe.dxi_x - oe.dp * eta.ec) + oe.dh_y * (oe.dxi_y - oe.dp * eta.es)) / h;
}

double zeta_descending(const NodalRelativeState& oe, const ReferenceParams& eta) {
    const double h = inclination_norm(oe);
    return oe.dp - oe.dp * (oe.dh_x * eta.ec + oe.dh_y * eta.es) / h + (oe.dh_x * oe.dxi_x + oe.dh_y * oe.dxi_y) / h;
}

double node_separation(const NodalRelativeState& oe, const ReferenceParams& eta) {
    const double h = inclination_norm(oe);
    const double e1_cos_l1 = (oe.dh_x * eta.ec + oe.dh_y * eta.es) / h;
    const double e2_cos_l2 = e1_cos_l1 + (oe.dh_x * oe.dxi_x + oe.dh_y * oe.dxi_y) / h;
    return eta.p1 * zeta(oe, eta) / ((1.0 + e1_cos_l1) * (1.0 + e2_cos_l2));
}

ZetaGradient zeta_gradient(const NodalRelativeState& oe, const ReferenceParams& eta) {
    const double h = inclination_norm(oe);
    const double h3 = h * h * h;
    const double ux = oe.dxi_x - oe.dp * eta.ec;
    const double uy = oe.dxi_y - oe.dp * eta.es;
    const double s = oe.dh_x * ux + oe.dh_y * uy;

    ZetaGradient g;
    g.d_oe << 0.0,
              1.0 + (oe.dh_x * eta.ec + oe.dh_y * eta.es) / h,
              -oe.dh_x / h,
              -oe.dh_y / h,
              -(ux / h - s * oe.dh_x / h3),
              -(uy / h - s * oe.dh_y / h3);
    g.d_eta << 0.0, oe.dp * oe.dh_x / h, oe.dp * oe.dh_y / h;
    return g;
}

Vec3 zeta_sensitivity(const NodalRelativeState& oe, const ReferenceParams& eta, double mu) {
    const ZetaGradient grad = zeta_gradient(oe, eta);
    const InputMatrices m = dynamics::input_matrices(oe, eta, mu);
    return (grad.d_eta * m.g_eta - grad.d_oe * m.g1).transpose();
}

ManeuverPlan plan_avoidance(const NodalRelativeState& oe, const ReferenceParams& eta, double delta_zeta, double mu,
                            double t_m) {
    const Vec3 g = zeta_sensitivity(oe, eta, mu);
    const double gn = g.norm();
    if (!(gn >= kMinSensitivity)) throw Error(ErrorCode::ZeroSensitivity, "zeta is insensitive to impulses on satellite 1");
    ManeuverPlan plan;
    plan.t_m = t_m;
    plan.g = g;
    plan.delta_zeta = delta_zeta;
    plan.delta_v = g * (delta_zeta / (gn * gn));
    return plan;
}

}  // namespace nodal::conjunction
