#include "nodal/scenario.hpp"

#include <cmath>

#include "nodal/cowell.hpp"

namespace nodal::scenario {

EncounterPair build_collision_scenario(const EncounterSpec& spec, const ClassicalElements& target, double mu) {
    ClassicalElements el2 = target;
    el2.nu = spec.target_nu;
    el2 = wrapped(el2);
    const CartesianState s2 = cartesian::elements_to_cartesian(el2, mu);

    const Mat3 rtn = cartesian::pci_to_rtn(s2);
    const Vec3 r_hat = rtn.row(0).transpose();
    const Vec3 t_hat = rtn.row(1).transpose();
    const Vec3 n_hat = rtn.row(2).transpose();
    const double v_r2 = s2.v.dot(r_hat);
    const double v_t2 = s2.v.dot(t_hat);

    // |v1 - v2|^2 = w_r^2 + v_t1^2 - 2 v_t1 v_t2 cos(gamma) + v_t2^2 with v1 tilted by gamma about R.
    const double w = spec.relative_speed;
    const double w_r = spec.radial_speed;
    const double sg = std::sin(spec.gamma);
    const double cg = std::cos(spec.gamma);
    const double disc = w * w - w_r * w_r - v_t2 * v_t2 * sg * sg;
    if (!(std::abs(w_r) < w) || !(disc >= 0.0)) {
        throw Error(ErrorCode::InfeasibleEncounter, "requested relative speed cannot be met at this inclination");
    }
    const double v_t1 = v_t2 * cg + spec.root * std::sqrt(disc);
    if (!(v_t1 > 0.0)) throw Error(ErrorCode::InfeasibleEncounter, "spacecraft transverse speed would be non-positive");

    CartesianState s1{s2.r, (v_r2 + w_r) * r_hat + v_t1 * (cg * t_hat - sg * n_hat)};
    if (!(2.0 / s1.r.norm() - s1.v.squaredNorm() / mu > 0.0)) {
        throw Error(ErrorCode::InfeasibleEncounter, "spacecraft orbit would not be elliptic");
    }
    EncounterPair pair;
    pair.el1 = cartesian::cartesian_to_elements(s1, mu).el;
    pair.el2 = el2;
    pair.impact_epoch = spec.impact_epoch;
    return pair;
}

EncounterPair encounter_from_config(const ScenarioConfig& cfg) {
    if (!cfg.spacecraft) return build_collision_scenario(cfg.encounter, cfg.target, cfg.mu);
    EncounterPair pair;
    pair.el1 = *cfg.spacecraft;
    pair.el2 = cfg.target;
    pair.impact_epoch = cfg.encounter.impact_epoch;
    return pair;
}

std::pair<ClassicalElements, ClassicalElements> elements_at(const EncounterPair& pair, double t, double mu) {
    const double dt = t - pair.impact_epoch;
    return {cartesian::kepler_advance(pair.el1, dt, mu), cartesian::kepler_advance(pair.el2, dt, mu)};
}

std::vector<double> sample_times(const ScenarioConfig& cfg) {
    const double span = cfg.t_end - cfg.t_start;
    const auto n = static_cast<std::size_t>(std::floor(span / cfg.sample_dt + 1e-9)) + 1;
    std::vector<double> t(n);
    for (std::size_t k = 0; k < n; ++k) {
        t[k] = cfg.encounter.impact_epoch + cfg.t_start + static_cast<double>(k) * cfg.sample_dt;
    }
    return t;
}

std::vector<TruthSample> truth_kepler(const EncounterPair& pair, std::span<const double> times, double mu) {
    std::vector<TruthSample> out;
    out.reserve(times.size());
    for (double t : times) {
        const auto [el1, el2] = elements_at(pair, t, mu);
        const auto [oe, eta] = relstate::oe_from_classical(el1, el2);
        out.push_back({t, oe, eta});
    }
    return out;
}

std::vector<TruthSample> truth_cowell(const EncounterPair& pair, std::span<const double> times, double mu,
                                      const IntegratorOptions& opt) {
    if (times.empty()) return {};
    const auto [el1, el2] = elements_at(pair, times.front(), mu);
    const CartesianPair s0{cartesian::elements_to_cartesian(el1, mu), cartesian::elements_to_cartesian(el2, mu)};
    const CowellTrajectory traj = cowell::propagate(s0, {}, times, mu, opt);
    std::vector<TruthSample> out;
    out.reserve(times.size());
    for (std::size_t k = 0; k < traj.t.size(); ++k) {
        const auto [oe, eta] = cartesian::oe_from_cartesian(traj.states[k], mu);
        out.push_back({traj.t[k], oe, eta});
    }
    return out;
}

}  // namespace nodal::scenario
