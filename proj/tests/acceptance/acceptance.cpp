/**
 * @file acceptance.cpp
 * @brief End-to-end acceptance checks. Prints one PASS/FAIL line per criterion
 *        and exits nonzero if any of them fails.
 */
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>

#include "support.hpp"

#include "nodal/experiments.hpp"
#include "nodal/navigation.hpp"

using namespace nodal;
using namespace nodal::test;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

int failures = 0;

void criterion(int id, const char* name, double time_limit, const std::function<Outcome()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
        out = body();
    } catch (const std::exception& e) {
        out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (time_limit > 0.0 && secs > time_limit) {
        out.pass = false;
        out.detail += fmt("; runtime %.1f s exceeds %.0f s", secs, time_limit);
    }
    if (!out.pass) ++failures;
    std::printf("criterion %d: %s  %s  (%s) [%.2f s]\n", id, out.pass ? "PASS" : "FAIL", name, out.detail.c_str(), secs);
    std::fflush(stdout);
}

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

int main() {
    criterion(1, "nodal model matches Cowell under forcing", 30.0, [] {
        IntegratorOptions opt;
        opt.rel_tol = 1e-12;
        const ValidationResult v = experiments::run_validation(opt);
        return Outcome{v.max_discrepancy <= 1e-3,
                       fmt("max |dr - dr_cowell| = %.3e km, unforced %.3e km, tol 1e-3 km", v.max_discrepancy,
                           v.max_discrepancy_unforced)};
    });

    criterion(2, "element map round trip", 5.0, [] {
        std::mt19937_64 rng(2024);
        double worst = 0.0;
        int missing_nodes = 0;
        for (int n = 0; n < 1000; ++n) {
            const auto [el1, el2] = random_pair(rng);
            const RelativeOrientation ro = frames::relative_orientation(el1, el2);
            const auto [oe, eta] = relstate::oe_from_classical(el1, el2);
            const RecoveredElements rec = relstate::classical_from_oe(oe, eta);
            if (!rec.nodes) {
                ++missing_nodes;
                continue;
            }
            worst = std::max({worst, rel(rec.a2, el2.a), rel(rec.e2, el2.e), rel(rec.gamma, ro.gamma),
                              std::abs(wrap_angle(rec.nodes->lambda1 - ro.lambda1)),
                              std::abs(wrap_angle(rec.nodes->lambda2 - ro.lambda2)),
                              std::abs(wrap_angle(rec.dtheta - (ro.theta2 - ro.theta1)))});
        }
        return Outcome{worst <= 1e-10 && missing_nodes == 0,
                       fmt("1000 pairs, worst relative error %.2e, tol 1e-10", worst)};
    });

    criterion(3, "unperturbed invariants over 10 orbits", 0.0, [] {
        std::mt19937_64 rng(3);
        double d_p = 0.0, d_xi = 0.0, d_h = 0.0, d_phi = 0.0, d_rot = 0.0;
        for (int n = 0; n < 20; ++n) {
            const auto [el1, el2] = random_pair(rng, 0.05);
            const auto [oe, eta] = relstate::oe_from_classical(el1, el2);
            const double t_end = 10.0 * kTwoPi * std::sqrt(std::pow(el1.a, 3) / kMuEarth);
            const NodalTrajectory tr = dynamics::propagate(oe, eta, {}, 0.0, t_end, 1001, kMuEarth);
            const EccIncVectors v0 = relstate::ecc_inc_vectors(oe, eta);
            double unwrapped_v1 = eta.v1();
            double prev_v1 = eta.v1();
            for (std::size_t k = 0; k < tr.t.size(); ++k) {
                const NodalRelativeState& x = tr.oe[k];
                const EccIncVectors v = relstate::ecc_inc_vectors(x, tr.eta[k]);
                d_p = std::max(d_p, std::abs(x.dp - oe.dp));
                d_xi = std::max(d_xi, std::abs(x.dxi() - oe.dxi()));
                d_h = std::max(d_h, std::abs(x.dh() - oe.dh()));
                d_phi = std::max(d_phi, std::abs(wrap_angle(*v.dphi - *v0.dphi)));
                unwrapped_v1 += wrap_angle(tr.eta[k].v1() - prev_v1);
                prev_v1 = tr.eta[k].v1();
                const AnalyticPartial a = dynamics::analytic_step(oe, unwrapped_v1 - eta.v1());
                d_rot = std::max({d_rot, (a.dxi - Vec2(x.dxi_x, x.dxi_y)).norm(), (a.dh - Vec2(x.dh_x, x.dh_y)).norm()});
            }
        }
        const bool ok = d_p <= 1e-12 && d_xi <= 1e-10 && d_h <= 1e-10 && d_phi <= 1e-10 && d_rot <= 1e-10;
        return Outcome{ok, fmt("20 pairs: dp %.1e, |dxi| %.1e, |dh| %.1e, dphi %.1e, rotation %.1e", d_p, d_xi, d_h,
                               d_phi, d_rot)};
    });

    criterion(4, "Jacobians against central differences", 0.0, [] {
        std::mt19937_64 rng(4);
        double w_pos = 0.0, w_zeta = 0.0, w_h = 0.0;
        for (int n = 0; n < 100; ++n) {
            const auto [oe, eta] = random_state(rng);
            const Vec6 x0 = oe.vector();

            const PositionJacobians pj = relstate::position_jacobians(oe, eta);
            auto pos = [&](const Vec6& x) { return relstate::relative_position(NodalRelativeState::from_vector(x), eta).dr; };
            w_pos = std::max(w_pos, column_rel_error(pj.d_oe, fd_jacobian<3>(pos, x0)));

            const ZetaGradient zg = conjunction::zeta_gradient(oe, eta);
            auto z = [&](const Vec6& x) {
                return Eigen::Matrix<double, 1, 1>(conjunction::zeta(NodalRelativeState::from_vector(x), eta));
            };
            w_zeta = std::max(w_zeta, column_rel_error(zg.d_oe, fd_jacobian<1>(z, x0)));

            const PredictedMeasurement pm = navigation::predict_measurement(oe, eta, 90.0);
            auto y = [&](const Vec6& x) {
                Vec3 m = navigation::predict_measurement(NodalRelativeState::from_vector(x), eta, 90.0).y.vector();
                m(0) = pm.y.az + wrap_angle(m(0) - pm.y.az);
                return m;
            };
            const Mat36 fd = fd_jacobian<3>(y, x0);
            for (int r = 0; r < 3; ++r) {
                w_h = std::max(w_h, (pm.H.row(r) - fd.row(r)).norm() / pm.H.row(r).norm());
            }
        }
        return Outcome{w_pos <= 1e-6 && w_zeta <= 1e-6 && w_h <= 1e-6,
                       fmt("100 states: position %.1e, zeta %.1e, H %.1e, tol 1e-6", w_pos, w_zeta, w_h)};
    });

    criterion(5, "collision test soundness", 0.0, [] {
        std::mt19937_64 rng(5);
        int hit_ok = 0, miss_ok = 0, c2_hits = 0, c2_hits_c1 = 0;
        for (int n = 0; n < 1000; ++n) {
            const ClassicalElements el1 = random_elements(rng, 7000.0, 12000.0, 0.4);
            const ClassicalElements el2 = orbit_through(el1, rng);
            const auto [oe, eta] = relstate::oe_from_classical(el1, el2);
            const C1Verdict v = conjunction::c1_test(oe, eta);
            const bool ascending = std::abs(std::atan2(oe.dh_y, oe.dh_x)) < kPi / 2;
            hit_ok += ascending ? v.ascending_satisfied : v.descending_satisfied;

            ClassicalElements apart = el2;
            apart.a *= 1.0 + uniform(rng, 1e-3, 1e-2);
            const auto [oe2, eta2] = relstate::oe_from_classical(el1, apart);
            miss_ok += !conjunction::c1_test(oe2, eta2).satisfied();

            // Both satellites start at the shared point: C2 must report a collision, and C1 must agree.
            if (n < 200) {
                for (const auto& [o, e] : {std::pair{oe, eta}, std::pair{oe2, eta2}}) {
                    const C2Result c2 = conjunction::c2_check(o, e, 0.0, 2000.0, kMuEarth);
                    if (c2.collides) {
                        ++c2_hits;
                        c2_hits_c1 += conjunction::c1_test(o, e).satisfied();
                    }
                }
            }
        }

        // Circular reference, coplanar: dp^2 - dxi^2 <= 0 iff the orbits cross, by a direction scan.
        int reduction_ok = 0;
        for (int n = 0; n < 200; ++n) {
            const double p1 = uniform(rng, 7000.0, 9000.0);
            const double dp = uniform(rng, -0.05, 0.05);
            const double e2 = uniform(rng, 0.0, 0.08);
            const double w2 = uniform(rng, -kPi, kPi);
            const NodalRelativeState oe{0.3, dp, e2 * std::cos(w2), e2 * std::sin(w2), 0.0, 0.0};
            const C1Verdict v = conjunction::c1_test(oe, ReferenceParams{p1, 0.0, 0.0});
            const double margin = dp * dp - e2 * e2;
            double lo = 1e300, hi = -1e300;
            for (int k = 0; k < 20000; ++k) {
                const double phi = kTwoPi * k / 20000.0;
                const double gap = p1 * (1.0 + dp) / (1.0 + e2 * std::cos(phi - w2)) - p1;
                lo = std::min(lo, gap);
                hi = std::max(hi, gap);
            }
            const bool cross = lo <= 0.0 && hi >= 0.0;
            reduction_ok += v.coplanar && std::abs(*v.coplanar_margin - margin) <= 1e-15 && v.coplanar_satisfied == cross;
        }

        const bool ok = hit_ok == 1000 && miss_ok == 1000 && c2_hits > 0 && c2_hits_c1 == c2_hits && reduction_ok == 200;
        return Outcome{ok, fmt("intersecting %d/1000, separated %d/1000, C2 collisions with C1 %d/%d, e1 = 0 reduction %d/200",
                               hit_ok, miss_ok, c2_hits_c1, c2_hits, reduction_ok)};
    });

    criterion(6, "haversine limit at small inclination", 0.0, [] {
        std::mt19937_64 rng(6);
        double worst = 0.0;
        bool shrinking = true;
        for (int n = 0; n < 100; ++n) {
            const double th1 = uniform(rng, -kPi, kPi);
            const double th2 = uniform(rng, -kPi, kPi);
            const double dth = wrap_angle(th2 - th1);
            const double at_min = std::abs(std::abs(dth) - relstate::haversine_psi(th1, th2, 1e-8));
            worst = std::max(worst, at_min);
            double prev = 1e300;
            for (double g : {1e-2, 1e-4, 1e-6}) {
                const double gap = std::abs(std::abs(dth) - relstate::haversine_psi(th1, th2, g));
                shrinking = shrinking && gap <= prev + 1e-15;
                prev = gap;
            }
        }
        return Outcome{worst <= 1e-6 && shrinking, fmt("max | |dtheta| - psi | at gamma = 1e-8: %.2e rad, tol 1e-6", worst)};
    });

    criterion(7, "flyby detection, 25 runs at 60 s", 600.0, [] {
        const ScenarioConfig cfg;
        const MonteCarloSummary mc = experiments::run_montecarlo(cfg);
        const double min_cov = mc.component_coverage.minCoeff();
        const bool a = mc.detection_rate >= 0.95;
        const bool b = mc.coverage >= 0.97 && min_cov >= 0.97;
        const bool c = mc.final_range_err_sigma >= 50.0 && mc.final_range_err_sigma <= 5000.0;
        const bool d = mc.range_reduction >= 100.0;
        return Outcome{a && b && c && d,
                       fmt("(a) detection %.3f %s; (b) coverage %.4f, worst component %.4f %s; (c) final range sigma "
                           "%.1f km %s; (d) initial/final %.1f %s",
                           mc.detection_rate, a ? "ok" : "LOW", mc.coverage, min_cov, b ? "ok" : "LOW",
                           mc.final_range_err_sigma, c ? "ok" : "OUT", mc.range_reduction, d ? "ok" : "< 100")};
    });

    criterion(8, "avoidance maneuver efficacy", 0.0, [] {
        const ScenarioConfig cfg;
        const FlybyRun run = experiments::run_flyby(cfg, 0);
        const ManeuverResult m = experiments::run_maneuver_sweep(cfg, run, {1e-4}).front();
        const bool miss_ok = m.miss_maneuvered >= 1500.0 && m.miss_maneuvered <= 6000.0;
        const bool dv_ok = m.max_early_dv * 1e3 <= 10.0;
        return Outcome{miss_ok && dv_ok, fmt("miss %.0f km (nominal %.3f km), max early |dv| %.2f m/s, selected %.2f m/s",
                                             m.miss_maneuvered, m.miss_nominal, m.max_early_dv * 1e3,
                                             m.plan.delta_v.norm() * 1e3)};
    });

    criterion(9, "montecarlo --seed 42 is byte-identical", 0.0, [] {
        const std::filesystem::path dir = std::filesystem::current_path() / "acceptance_determinism";
        std::filesystem::remove_all(dir);
        for (const char* k : {"a", "b"}) {
            const std::string cmd = std::string("\"") + NODAL_CLI_PATH + "\" montecarlo --seed 42 --out \"" +
                                    (dir / k).string() + "\" > /dev/null";
            if (std::system(cmd.c_str()) != 0) return Outcome{false, "nodal_cli montecarlo failed"};
        }
        const std::string a = slurp(dir / "a" / "summary.json");
        const std::string b = slurp(dir / "b" / "summary.json");
        return Outcome{!a.empty() && a == b, fmt("summary.json %zu bytes, %s", a.size(), a == b ? "identical" : "differs")};
    });

    std::printf("%d criterion(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}
