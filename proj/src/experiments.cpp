#include "nodal/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <thread>

#include <boost/math/distributions/chi_squared.hpp>

#include "nodal/cowell.hpp"
#include "nodal/navigation.hpp"
#include "nodal/random.hpp"

namespace nodal {

Vec6 FlybyStep::error() const {
    Vec6 e = oe_hat - oe_true;
    e(0) = wrap_angle(e(0));
    return e;
}

namespace experiments {

namespace {

/// 1-sigma of |dr| induced by P at state oe.
double range_sigma(const NodalRelativeState& oe, const ReferenceParams& eta, const Mat6& P) {
    const RelativePosition pos = relstate::relative_position(oe, eta);
    const Row6 j = (pos.dr / pos.range).transpose() * relstate::position_jacobians(oe, eta).d_oe;
    return std::sqrt(std::max(0.0, (j * P * j.transpose())(0, 0)));
}

double sample_std(double sum, double sum_sq, double n) {
    if (n < 2.0) return 0.0;
    const double mean = sum / n;
    return std::sqrt(std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0)));
}

}  // namespace

IntegratorOptions integrator_options(const ScenarioConfig& cfg) {
    IntegratorOptions opt;
    opt.rel_tol = cfg.rel_tol;
    opt.abs_tol = cfg.abs_tol;
    opt.initial_step = cfg.sample_dt;
    return opt;
}

std::pair<ClassicalElements, ClassicalElements> validation_pair() {
    const ClassicalElements el1{8.9e3, 0.5, deg2rad(10.0), deg2rad(20.0), deg2rad(0.0), deg2rad(30.0)};
    const ClassicalElements el2{6.8e3, 0.1, deg2rad(40.0), deg2rad(90.0), deg2rad(30.0), deg2rad(70.0)};
    return {el1, el2};
}

PerturbationProfile validation_inputs() {
    PerturbationProfile u;
    u.u1 = [](double t) -> Vec3 {
        return Vec3(std::sin(kTwoPi * t / 900.0), std::sin(kTwoPi * t / 1100.0 + 1.0),
                    std::sin(kTwoPi * t / 1300.0 + 2.0)) * 1e-3;
    };
    u.u2 = [](double t) -> Vec3 {
        return Vec3(std::sin(kTwoPi * t / 1000.0 + 0.5), std::sin(kTwoPi * t / 1200.0 + 1.5),
                    std::sin(kTwoPi * t / 1400.0 + 2.5)) * 1e-3;
    };
    return u;
}

ValidationResult run_validation(const IntegratorOptions& opt, double mu, double duration, std::size_t samples) {
    const auto [el1, el2] = validation_pair();
    const auto [oe0, eta0] = relstate::oe_from_classical(el1, el2);
    const CartesianPair s0{cartesian::elements_to_cartesian(el1, mu), cartesian::elements_to_cartesian(el2, mu)};
    const std::vector<double> times = dynamics::linspace(0.0, duration, samples);

    ValidationResult out;
    for (const bool forced : {true, false}) {
        const PerturbationProfile u = forced ? validation_inputs() : PerturbationProfile{};
        const NodalTrajectory model = dynamics::propagate(oe0, eta0, u, times, mu, opt);
        const CowellTrajectory oracle = cowell::propagate(s0, u, times, mu, opt);
        double worst = 0.0;
        for (std::size_t k = 0; k < times.size(); ++k) {
            const Vec3 dr_model = relstate::relative_position(model.oe[k], model.eta[k]).dr;
            const Vec3 dr_cowell = cartesian::relative_rtn(oracle.states[k].s1, oracle.states[k].s2).dr;
            worst = std::max(worst, (dr_model - dr_cowell).norm());
            if (forced) out.samples.push_back({times[k], dr_model, dr_cowell});
        }
        (forced ? out.max_discrepancy : out.max_discrepancy_unforced) = worst;
    }
    return out;
}

FlybyRun run_flyby(const ScenarioConfig& cfg, std::size_t run_index) {
    config::validate(cfg);
    const IntegratorOptions iopt = integrator_options(cfg);
    FlybyRun run;
    run.pair = scenario::encounter_from_config(cfg);
    const std::vector<double> times = scenario::sample_times(cfg);
    const std::vector<TruthSample> truth = cfg.cowell_truth ? scenario::truth_cowell(run.pair, times, cfg.mu, iopt)
                                                            : scenario::truth_kepler(run.pair, times, cfg.mu);

    Philox4x32 rng(cfg.seed, run_index);
    std::normal_distribution<double> n01(0.0, 1.0);
    Vec6 x0 = truth.front().oe.vector();
    for (int k = 0; k < 6; ++k) x0(k) += cfg.init_perturb_sigma * n01(rng);

    FilterState fs{NodalRelativeState::from_vector(x0), Mat6(cfg.p0_diag.asDiagonal())};
    const Mat6 Q = cfg.q_diag.asDiagonal();
    const double range0 = relstate::relative_position(truth.front().oe, truth.front().eta).range;
    run.initial_range_err = relstate::relative_position(fs.oe_hat, truth.front().eta).range - range0;
    run.initial_range_sigma = range_sigma(truth.front().oe, truth.front().eta, fs.P);

    const double detect_from = times.front() + cfg.transient;
    run.detected = true;
    run.steps.reserve(times.size());
    for (std::size_t k = 0; k < times.size(); ++k) {
        const TruthSample& tr = truth[k];
        if (k > 0) fs = navigation::ekf_propagate(fs, truth[k - 1].eta, times[k] - times[k - 1], Q, cfg.mu, iopt).fs;

        const RelativePosition pos = relstate::relative_position(tr.oe, tr.eta);
        const MeasurementTriple z = navigation::measure(pos.dr, cfg.d, cfg.noise, rng);
        const UpdateResult upd = navigation::ekf_update(fs, tr.eta, z, cfg.noise, cfg.d, cfg.update);
        fs = upd.fs;

        FlybyStep s;
        s.t = times[k];
        s.oe_true = tr.oe.vector();
        s.oe_hat = fs.oe_hat.vector();
        s.sigma = fs.P.diagonal().cwiseMax(0.0).cwiseSqrt();
        s.eta = tr.eta;
        s.range = pos.range;
        s.range_err = relstate::relative_position(fs.oe_hat, tr.eta).range - pos.range;
        s.range_sigma = range_sigma(fs.oe_hat, tr.eta, fs.P);
        s.zeta_true = conjunction::zeta(tr.oe, tr.eta);
        s.zeta_hat = conjunction::zeta(fs.oe_hat, tr.eta);
        const ZetaGradient zg = conjunction::zeta_gradient(fs.oe_hat, tr.eta);
        s.zeta_sigma = std::sqrt(std::max(0.0, (zg.d_oe * fs.P * zg.d_oe.transpose())(0, 0)));
        s.node_separation = conjunction::node_separation(fs.oe_hat, tr.eta);
        s.beta = cfg.d / pos.range;
        s.innovation = upd.innovation;
        s.nis = upd.nis;
        s.outlier = upd.outlier;
        const Vec6 e = s.error();
        s.nees = e.dot(fs.P.ldlt().solve(e));

        for (int i = 0; i < 6; ++i) {
            const bool inside = std::abs(e(i)) <= 3.0 * s.sigma(i);
            run.coverage_hits += inside;
            run.component_hits[static_cast<std::size_t>(i)] += inside;
        }
        run.coverage_total += 6;
        if (s.t >= detect_from && std::abs(s.zeta_hat) > 3.0 * s.zeta_sigma) run.detected = false;
        run.steps.push_back(s);
    }
    return run;
}

MonteCarloSummary run_montecarlo(const ScenarioConfig& cfg) {
    config::validate(cfg);
    if (cfg.mc_runs < 2) throw Error(ErrorCode::InvalidArgument, "a Monte Carlo campaign needs at least 2 runs");
    const auto runs = static_cast<std::size_t>(cfg.mc_runs);
    const std::size_t workers = std::max<std::size_t>(
        1, cfg.threads > 0 ? static_cast<std::size_t>(cfg.threads) : std::thread::hardware_concurrency());
    const std::size_t n_steps = scenario::sample_times(cfg).size();

    struct Accum {
        Vec6 e = Vec6::Zero(), e2 = Vec6::Zero(), var = Vec6::Zero();
        double nees = 0.0, re = 0.0, re2 = 0.0, rs2 = 0.0, contains = 0.0;
    };
    std::vector<Accum> acc(n_steps);
    MonteCarloSummary sum;
    sum.runs = cfg.mc_runs;
    sum.seed = cfg.seed;
    sum.sample_dt = cfg.sample_dt;
    std::vector<double> times(n_steps);
    std::size_t hits = 0, total = 0, detected = 0, outliers = 0;
    std::array<std::size_t, 6> comp{};
    double init_sigma = 0.0, init_err = 0.0, init_err2 = 0.0;

    // Runs are computed in batches of `workers` and reduced in run order, so
    // results do not depend on the thread count.
    for (std::size_t first = 0; first < runs; first += workers) {
        const std::size_t count = std::min(workers, runs - first);
        std::vector<FlybyRun> batch(count);
        std::vector<std::exception_ptr> errors(count);
        {
            std::vector<std::jthread> pool;
            for (std::size_t w = 0; w < count; ++w) {
                pool.emplace_back([&, w] {
                    try {
                        batch[w] = run_flyby(cfg, first + w);
                    } catch (...) {
                        errors[w] = std::current_exception();
                    }
                });
            }
        }
        for (const auto& e : errors) {
            if (e) std::rethrow_exception(e);
        }
        for (const FlybyRun& r : batch) {
            hits += r.coverage_hits;
            total += r.coverage_total;
            detected += r.detected;
            for (std::size_t i = 0; i < 6; ++i) comp[i] += r.component_hits[i];
            init_sigma += r.initial_range_sigma;
            init_err += r.initial_range_err;
            init_err2 += r.initial_range_err * r.initial_range_err;
            for (std::size_t k = 0; k < n_steps; ++k) {
                const FlybyStep& s = r.steps[k];
                Accum& a = acc[k];
                const Vec6 e = s.error();
                times[k] = s.t;
                a.e += e;
                a.e2 += e.cwiseProduct(e);
                a.var += s.sigma.cwiseProduct(s.sigma);
                a.nees += s.nees;
                a.re += s.range_err;
                a.re2 += s.range_err * s.range_err;
                a.rs2 += s.range_sigma * s.range_sigma;
                a.contains += std::abs(s.zeta_hat) <= 3.0 * s.zeta_sigma;
                outliers += s.outlier;
            }
        }
    }

    const double n = static_cast<double>(runs);
    const boost::math::chi_squared chi2(6.0 * n);
    const double nees_lo = boost::math::quantile(chi2, 0.005) / n;
    const double nees_hi = boost::math::quantile(chi2, 0.995) / n;
    std::size_t in_bounds = 0;
    double nees_total = 0.0;
    sum.steps.reserve(n_steps);
    for (std::size_t k = 0; k < n_steps; ++k) {
        const Accum& a = acc[k];
        MonteCarloStep s;
        s.t = times[k];
        for (int i = 0; i < 6; ++i) s.true_sigma(i) = sample_std(a.e(i), a.e2(i), n);
        s.filter_sigma = (a.var / n).cwiseSqrt();
        s.mean_nees = a.nees / n;
        s.range_err_sigma = sample_std(a.re, a.re2, n);
        s.range_sigma = std::sqrt(a.rs2 / n);
        s.zeta_contains_zero = a.contains / n;
        in_bounds += s.mean_nees >= nees_lo && s.mean_nees <= nees_hi;
        nees_total += s.mean_nees;
        sum.steps.push_back(s);
    }
    const Accum& last = acc.back();
    sum.detection_rate = static_cast<double>(detected) / n;
    sum.coverage = static_cast<double>(hits) / static_cast<double>(total);
    for (std::size_t i = 0; i < 6; ++i) {
        sum.component_coverage(static_cast<int>(i)) = static_cast<double>(comp[i]) * 6.0 / static_cast<double>(total);
    }
    sum.final_range_err_sigma = sample_std(last.re, last.re2, n);
    sum.final_range_err_rms = std::sqrt(last.re2 / n);
    sum.final_filter_range_sigma = std::sqrt(last.rs2 / n);
    sum.initial_range_sigma = init_sigma / n;
    sum.initial_range_err_sigma = sample_std(init_err, init_err2, n);
    sum.range_reduction = sum.final_range_err_sigma > 0.0 ? sum.initial_range_sigma / sum.final_range_err_sigma : 0.0;
    sum.nees_in_bounds = static_cast<double>(in_bounds) / static_cast<double>(n_steps);
    sum.mean_nees = nees_total / static_cast<double>(n_steps);
    sum.outlier_fraction = static_cast<double>(outliers) / (n * static_cast<double>(n_steps));
    return sum;
}

std::vector<ManeuverResult> run_maneuver_sweep(const ScenarioConfig& cfg, const FlybyRun& run,
                                               const std::vector<double>& offsets) {
    if (run.steps.empty()) throw Error(ErrorCode::InvalidArgument, "maneuver sweep needs a completed flyby run");
    const IntegratorOptions iopt = integrator_options(cfg);
    const double t0 = run.steps.front().t;
    const double t_impact = run.pair.impact_epoch;
    const auto stride = static_cast<std::size_t>(std::max(1.0, std::round(cfg.maneuver.profile_step / cfg.sample_dt)));

    auto nearest_step = [&](double t) {
        const auto it = std::min_element(run.steps.begin(), run.steps.end(), [t](const FlybyStep& a, const FlybyStep& b) {
            return std::abs(a.t - t) < std::abs(b.t - t);
        });
        return static_cast<std::size_t>(it - run.steps.begin());
    };
    auto replay = [&](double t_m, const Vec3& dv_rtn) {
        const auto [el1, el2] = scenario::elements_at(run.pair, t_m, cfg.mu);
        CartesianPair s{cartesian::elements_to_cartesian(el1, cfg.mu), cartesian::elements_to_cartesian(el2, cfg.mu)};
        s.s1.v += cartesian::pci_to_rtn(s.s1).transpose() * dv_rtn;
        const double half = 2.0 * 86400.0;
        return cowell::closest_approach(s, t_m, std::max(t_m, t_impact - half), t_impact + half, 60.0, cfg.mu, iopt);
    };

    std::vector<ManeuverResult> results;
    for (double offset : offsets) {
        ManeuverResult res;
        res.offset = offset;
        auto plan_at = [&](const FlybyStep& s) {
            const NodalRelativeState oe_hat = NodalRelativeState::from_vector(s.oe_hat);
            return conjunction::plan_avoidance(oe_hat, s.eta, 3.0 * s.zeta_sigma + offset, cfg.mu, s.t);
        };
        for (std::size_t k = nearest_step(t0 + cfg.maneuver.window_start); k < run.steps.size(); k += stride) {
            const FlybyStep& s = run.steps[k];
            const ManeuverPlan plan = plan_at(s);
            res.profile.push_back({s.t, s.zeta_hat, s.zeta_sigma, plan.delta_zeta, plan.delta_v});
            if (s.t <= t0 + cfg.maneuver.window_end) res.max_early_dv = std::max(res.max_early_dv, plan.delta_v.norm());
        }

        const FlybyStep& sel = run.steps[nearest_step(t0 + cfg.maneuver.epoch)];
        res.plan = plan_at(sel);
        const NodalRelativeState oe_true = NodalRelativeState::from_vector(sel.oe_true);
        const auto [oe_after, eta_after] = cartesian::apply_impulse(oe_true, sel.eta, res.plan.delta_v, cfg.mu);
        res.zeta_change_exact = conjunction::zeta(oe_after, eta_after) - conjunction::zeta(oe_true, sel.eta);
        res.miss_nominal = replay(sel.t, Vec3::Zero()).distance;
        const cowell::ClosestApproach ca = replay(sel.t, res.plan.delta_v);
        res.miss_maneuvered = ca.distance;
        res.t_closest = ca.t;
        results.push_back(std::move(res));
    }
    return results;
}

}  // namespace experiments
}  // namespace nodal
