#include "doctest.h"
#include "support.hpp"

#include "nodal/navigation.hpp"
#include "nodal/random.hpp"
#include "nodal/scenario.hpp"

using namespace nodal;
using namespace nodal::test;

TEST_CASE("ideal measurement") {
    const MeasurementTriple a = navigation::ideal_measurement(Vec3(500.0, 0.0, 0.0), 90.0);
    CHECK(a.az == 0.0);
    CHECK(a.el == 0.0);
    CHECK(a.beta == doctest::Approx(90.0 / 500.0).epsilon(1e-15));

    CHECK(navigation::ideal_measurement(Vec3(0.0, 3.0, 0.0), 1.0).az == doctest::Approx(kPi / 2).epsilon(1e-15));
    CHECK(navigation::ideal_measurement(Vec3(0.0, 0.0, -2.0), 1.0).el == doctest::Approx(-kPi / 2).epsilon(1e-15));

    // 90 km at 5e6 km is about one pixel of 0.001 deg.
    const MeasurementTriple far = navigation::ideal_measurement(Vec3(3e6, 4e6, 0.0), 90.0);
    CHECK(far.beta == doctest::Approx(1.8e-5).epsilon(1e-14));
    CHECK(rad2deg(far.beta) == doctest::Approx(0.00103).epsilon(0.01));

    CHECK_THROWS_AS(navigation::ideal_measurement(Vec3::Zero(), 90.0), Error);
    CHECK_THROWS_AS(navigation::predict_measurement(NodalRelativeState{}, ReferenceParams{7000.0, 0.1, 0.0}, 90.0), Error);
}

TEST_CASE("measurement noise statistics") {
    const NoiseSpec noise{1e-3, 2e-3, 3e-3};
    const Vec3 dr(1000.0, 2000.0, -500.0);
    const Vec3 y0 = navigation::ideal_measurement(dr, 90.0).vector();
    Philox4x32 rng(7, 3);
    const int n = 20000;
    Vec3 sum = Vec3::Zero(), sq = Vec3::Zero();
    for (int k = 0; k < n; ++k) {
        Vec3 e = navigation::measure(dr, 90.0, noise, rng).vector() - y0;
        e(0) = wrap_angle(e(0));
        sum += e;
        sq += e.cwiseProduct(e);
    }
    const Vec3 sigma(1e-3, 2e-3, 3e-3);
    for (int i = 0; i < 3; ++i) {
        CHECK(std::abs(sum(i) / n) < 4.0 * sigma(i) / std::sqrt(double(n)));
        CHECK(std::sqrt(sq(i) / n) == doctest::Approx(sigma(i)).epsilon(0.03));
    }
}

TEST_CASE("measurement Jacobian against finite differences") {
    std::mt19937_64 rng(61);
    for (int n = 0; n < 100; ++n) {
        const auto [oe, eta] = random_state(rng);
        const PredictedMeasurement pm = navigation::predict_measurement(oe, eta, 90.0);
        if (pm.gimbal_degenerate) continue;
        auto f = [&](const Vec6& x) {
            Vec3 y = navigation::predict_measurement(NodalRelativeState::from_vector(x), eta, 90.0).y.vector();
            y(0) = pm.y.az + wrap_angle(y(0) - pm.y.az);
            return y;
        };
        const Mat36 fd = fd_jacobian<3>(f, oe.vector());
        for (int r = 0; r < 3; ++r) {
            CHECK((pm.H.row(r) - fd.row(r)).norm() <= 1e-6 * pm.H.row(r).norm());
        }
        const RelativePosition rp = relstate::relative_position(oe, eta);
        CHECK(pm.y.beta == doctest::Approx(90.0 / rp.range).epsilon(1e-14));
    }
}

TEST_CASE("apparent size decreases along a receding trajectory") {
    ScenarioConfig cfg;
    const EncounterPair pair = scenario::encounter_from_config(cfg);
    std::vector<double> times;
    for (int k = 1; k <= 200; ++k) times.push_back(pair.impact_epoch + 600.0 * k);
    const std::vector<TruthSample> truth = scenario::truth_kepler(pair, times, cfg.mu);
    double prev = std::numeric_limits<double>::infinity();
    for (const TruthSample& s : truth) {
        const double beta = navigation::predict_measurement(s.oe, s.eta, cfg.d).y.beta;
        CHECK(beta < prev);
        prev = beta;
    }
}

TEST_CASE("EKF propagation") {
    std::mt19937_64 rng(67);
    SUBCASE("noise-free mean tracks the model") {
        for (int n = 0; n < 10; ++n) {
            const auto [oe, eta] = random_state(rng);
            FilterState fs{oe, Mat6::Zero()};
            ReferenceParams e = eta;
            const NodalTrajectory tr = dynamics::propagate(oe, eta, {}, 0.0, 5000.0, 11, kMuEarth);
            for (std::size_t k = 1; k < tr.t.size(); ++k) {
                const PropagatedFilter pf = navigation::ekf_propagate(fs, e, 500.0, Mat6::Zero(), kMuEarth);
                fs = pf.fs;
                e = pf.eta;
                CHECK(fs.P.norm() == 0.0);
                Vec6 d = fs.oe_hat.vector() - tr.oe[k].vector();
                d(0) = wrap_angle(d(0));
                CHECK(d.norm() < 1e-9);
                CHECK((e.vector() - tr.eta[k].vector()).norm() < 1e-9 * eta.p1);
            }
        }
    }
    SUBCASE("transition matrix against finite differences") {
        const auto [oe, eta] = random_state(rng);
        const PropagatedFilter pf = navigation::ekf_propagate(FilterState{oe, Mat6::Zero()}, eta, 3000.0, Mat6::Zero(), kMuEarth);
        auto flow = [&](const Vec6& x) {
            Vec6 y = navigation::ekf_propagate(FilterState{NodalRelativeState::from_vector(x), Mat6::Zero()}, eta, 3000.0,
                                               Mat6::Zero(), kMuEarth)
                         .fs.oe_hat.vector();
            y(0) = pf.fs.oe_hat.dtheta + wrap_angle(y(0) - pf.fs.oe_hat.dtheta);
            return y;
        };
        CHECK(column_rel_error(pf.phi, fd_jacobian<6>(flow, oe.vector(), 1e-6)) < 1e-6);
    }
    SUBCASE("one circular orbit leaves the eccentricity and inclination blocks unchanged") {
        const ReferenceParams circ{7000.0, 0.0, 0.0};
        const NodalRelativeState oe{0.2, 0.01, 0.02, -0.01, 0.03, 0.01};
        const double period = kTwoPi * std::sqrt(std::pow(7000.0, 3) / kMuEarth);
        const PropagatedFilter pf = navigation::ekf_propagate(FilterState{oe, Mat6::Zero()}, circ, period, Mat6::Zero(), kMuEarth);
        CHECK((pf.phi.block<4, 4>(2, 2) - Eigen::Matrix4d::Identity()).cwiseAbs().maxCoeff() < 1e-8);
        CHECK((pf.fs.oe_hat.vector().tail<4>() - oe.vector().tail<4>()).norm() < 1e-10);
    }
    SUBCASE("trace does not shrink far from the encounter") {
        ScenarioConfig cfg;
        const EncounterPair pair = scenario::encounter_from_config(cfg);
        const std::vector<double> t0{pair.impact_epoch + cfg.t_start};
        const TruthSample s = scenario::truth_kepler(pair, t0, cfg.mu).front();
        FilterState fs{s.oe, Mat6(cfg.p0_diag.asDiagonal())};
        ReferenceParams e = s.eta;
        const Mat6 Q = cfg.q_diag.asDiagonal();
        for (int k = 0; k < 48; ++k) {
            const PropagatedFilter pf = navigation::ekf_propagate(fs, e, 3600.0, Q, cfg.mu);
            CHECK(pf.fs.P.trace() >= fs.P.trace() * (1.0 - 1e-12));
            fs = pf.fs;
            e = pf.eta;
        }
    }
    SUBCASE("non-positive step") {
        const auto [oe, eta] = random_state(rng);
        CHECK_THROWS_AS(navigation::ekf_propagate(FilterState{oe, Mat6::Identity()}, eta, 0.0, Mat6::Zero(), kMuEarth), Error);
        CHECK_THROWS_AS(navigation::ekf_propagate(FilterState{oe, Mat6::Identity()}, eta, -1.0, Mat6::Zero(), kMuEarth), Error);
    }
}

TEST_CASE("EKF update") {
    std::mt19937_64 rng(71);
    const NoiseSpec noise{1e-5, 1e-5, 1e-7};
    SUBCASE("no prior uncertainty leaves the state unchanged") {
        const auto [oe, eta] = random_state(rng);
        const PredictedMeasurement pm = navigation::predict_measurement(oe, eta, 90.0);
        MeasurementTriple z = pm.y;
        z.el += 1e-4;
        const UpdateResult u = navigation::ekf_update(FilterState{oe, Mat6::Zero()}, eta, z, noise, 90.0);
        CHECK((u.fs.oe_hat.vector() - oe.vector()).norm() == 0.0);
        CHECK(u.innovation(1) == doctest::Approx(1e-4).epsilon(1e-9));
    }
    SUBCASE("diffuse prior matches the observed directions") {
        for (int n = 0; n < 20; ++n) {
            const auto [oe, eta] = random_state(rng);
            const PredictedMeasurement pm = navigation::predict_measurement(oe, eta, 90.0);
            MeasurementTriple z = pm.y;
            z.az = wrap_angle(z.az + 1e-6);
            z.el += -2e-6;
            z.beta *= 1.0 + 1e-6;
            const NoiseSpec tiny{1e-12, 1e-12, 1e-14};
            const UpdateResult u = navigation::ekf_update(FilterState{oe, 1e6 * Mat6::Identity()}, eta, z, tiny, 90.0);
            Vec6 dx = u.fs.oe_hat.vector() - oe.vector();
            dx(0) = wrap_angle(dx(0));
            const Vec3 predicted = pm.H * dx;
            CHECK((predicted - u.innovation).norm() <= 1e-5 * u.innovation.norm());
        }
    }
    SUBCASE("azimuth residual is wrapped") {
        int tested = 0;
        while (tested < 5) {
            const auto [oe, eta] = random_state(rng);
            const PredictedMeasurement pm = navigation::predict_measurement(oe, eta, 90.0);
            if (std::abs(pm.y.az) < kPi - 0.05) continue;
            MeasurementTriple z = pm.y;
            const double step = pm.y.az > 0.0 ? 0.1 : -0.1;  // across the branch cut
            z.az = wrap_angle(pm.y.az + step);
            REQUIRE(std::abs(z.az - pm.y.az) > kPi);
            const UpdateResult u = navigation::ekf_update(FilterState{oe, 1e-8 * Mat6::Identity()}, eta, z, noise, 90.0);
            CHECK(u.innovation(0) == doctest::Approx(step).epsilon(1e-9));
            ++tested;
        }
    }
    SUBCASE("covariance stays symmetric positive semidefinite") {
        for (int n = 0; n < 50; ++n) {
            const auto [oe, eta] = random_state(rng);
            Mat6 a = Mat6::Random();
            const Mat6 P = 1e-6 * a * a.transpose();
            const PredictedMeasurement pm = navigation::predict_measurement(oe, eta, 90.0);
            const UpdateResult u = navigation::ekf_update(FilterState{oe, P}, eta, pm.y, noise, 90.0);
            CHECK((u.fs.P - u.fs.P.transpose()).norm() == 0.0);
            const Eigen::SelfAdjointEigenSolver<Mat6> es(u.fs.P);
            CHECK(es.eigenvalues().minCoeff() >= -1e-12 * es.eigenvalues().maxCoeff());
            CHECK(u.fs.P.trace() <= P.trace() * (1.0 + 1e-12));
        }
    }
    SUBCASE("outliers are flagged and optionally rejected") {
        const auto [oe, eta] = random_state(rng);
        const PredictedMeasurement pm = navigation::predict_measurement(oe, eta, 90.0);
        MeasurementTriple z = pm.y;
        z.el += 1e-2;
        const FilterState fs{oe, 1e-10 * Mat6::Identity()};
        const UpdateResult kept = navigation::ekf_update(fs, eta, z, noise, 90.0);
        CHECK(kept.outlier);
        CHECK(kept.nis > 16.2662);
        CHECK((kept.fs.oe_hat.vector() - oe.vector()).norm() > 0.0);
        UpdateOptions strict;
        strict.reject_outliers = true;
        const UpdateResult dropped = navigation::ekf_update(fs, eta, z, noise, 90.0, strict);
        CHECK(dropped.outlier);
        CHECK((dropped.fs.oe_hat.vector() - oe.vector()).norm() == 0.0);
    }
}

TEST_CASE("symmetrized") {
    Mat6 a = Mat6::Random();
    const Mat6 s = navigation::symmetrized(a);
    CHECK((s - s.transpose()).norm() == 0.0);
    CHECK((s - 0.5 * (a + a.transpose())).norm() < 1e-15);
}
