#include "nodal/cowell.hpp"

#include <algorithm>
#include <array>
#include <limits>

#include <boost/math/tools/minima.hpp>

namespace nodal::cowell {

Vec3 acceleration(const CartesianState& s, const Vec3& u_rtn, double mu) {
    const double rn = s.r.norm();
    Vec3 a = -mu / (rn * rn * rn) * s.r;
    if (!u_rtn.isZero(0.0)) a += cartesian::pci_to_rtn(s).transpose() * u_rtn;
    return a;
}

CowellTrajectory propagate(const CartesianPair& s0, const PerturbationProfile& u, std::span<const double> times,
                           double mu, const IntegratorOptions& opt) {
    using State = detail::OdeState<12>;
    State x{};
    Eigen::Map<Vec3>(x.data()) = s0.s1.r;
    Eigen::Map<Vec3>(x.data() + 3) = s0.s1.v;
    Eigen::Map<Vec3>(x.data() + 6) = s0.s2.r;
    Eigen::Map<Vec3>(x.data() + 9) = s0.s2.v;

    auto unpack = [](const State& s, std::size_t off) {
        return CartesianState{Eigen::Map<const Vec3>(s.data() + off), Eigen::Map<const Vec3>(s.data() + off + 3)};
    };
    auto rhs = [&](const State& s, State& dsdt, double t) {
        const PerturbationInput in = u.at(t);
        const CartesianState a = unpack(s, 0);
        const CartesianState b = unpack(s, 6);
        Eigen::Map<Vec3>(dsdt.data()) = a.v;
        Eigen::Map<Vec3>(dsdt.data() + 3) = acceleration(a, in.u1, mu);
        Eigen::Map<Vec3>(dsdt.data() + 6) = b.v;
        Eigen::Map<Vec3>(dsdt.data() + 9) = acceleration(b, in.u2, mu);
    };

    CowellTrajectory traj;
    traj.t.reserve(times.size());
    traj.states.reserve(times.size());
    detail::integrate_times<12>(rhs, x, times, opt, [&](const State& s, double t) {
        traj.t.push_back(t);
        traj.states.push_back({unpack(s, 0), unpack(s, 6)});
    });
    return traj;
}

ClosestApproach closest_approach(const CartesianPair& s0, double t0, double t_lo, double t_hi, double step, double mu,
                                 const IntegratorOptions& opt) {
    if (!(t_lo >= t0 && t_hi > t_lo && step > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "closest_approach needs t0 <= t_lo < t_hi and step > 0");
    }
    const auto n = static_cast<std::size_t>(std::ceil((t_hi - t_lo) / step)) + 1;
    std::vector<double> times = dynamics::linspace(t_lo, t_hi, std::max<std::size_t>(n, 2));
    if (t_lo > t0) times.insert(times.begin(), t0);
    const CowellTrajectory traj = propagate(s0, {}, times, mu, opt);
    auto separation = [](const CartesianPair& p) { return (p.s2.r - p.s1.r).norm(); };

    const std::size_t first = t_lo > t0 ? 1 : 0;
    std::size_t best = first;
    for (std::size_t k = first + 1; k < traj.t.size(); ++k) {
        if (separation(traj.states[k]) < separation(traj.states[best])) best = k;
    }
    const std::size_t lo = best > first ? best - 1 : best;
    const std::size_t hi = std::min(best + 1, traj.t.size() - 1);
    auto distance = [&](double t) {
        if (t <= traj.t[lo]) return separation(traj.states[lo]);
        const std::array<double, 2> tt{traj.t[lo], t};
        return separation(propagate(traj.states[lo], {}, tt, mu, opt).states.back());
    };

    // Brent search (golden section with parabolic steps) on the offset from
    // the bracket start, so the tolerance is relative to the bracket width.
    const double t_ref = traj.t[lo];
    const auto [dt_min, d_min] = boost::math::tools::brent_find_minima(
        [&](double dt) { return distance(t_ref + dt); }, 0.0, traj.t[hi] - t_ref, std::numeric_limits<double>::digits / 2);
    ClosestApproach out{traj.t[best], separation(traj.states[best])};
    if (d_min < out.distance) out = {t_ref + dt_min, d_min};
    return out;
}

}  // namespace nodal::cowell
