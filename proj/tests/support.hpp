/**
 * @file support.hpp
 * @brief Independent oracles and random generators shared by the unit tests.
 *
 * The Cartesian oracle here is written from the textbook perifocal-to-inertial
 * direction cosines and does not call into the library.
 */
#pragma once

#include <cmath>
#include <random>

#include "nodal/cartesian.hpp"

namespace nodal::test {

struct OracleState {
    Vec3 r;
    Vec3 v;
};

inline OracleState oracle_cartesian(const ClassicalElements& el, double mu) {
    const double p = el.a * (1.0 - el.e * el.e);
    const double cn = std::cos(el.nu), sn = std::sin(el.nu);
    const double r = p / (1.0 + el.e * cn);
    const Vec3 r_pqw(r * cn, r * sn, 0.0);
    const Vec3 v_pqw = std::sqrt(mu / p) * Vec3(-sn, el.e + cn, 0.0);
    const double cO = std::cos(el.raan), sO = std::sin(el.raan);
    const double cw = std::cos(el.argp), sw = std::sin(el.argp);
    const double ci = std::cos(el.i), si = std::sin(el.i);
    Mat3 q;
    q << cO * cw - sO * sw * ci, -cO * sw - sO * cw * ci, sO * si,
         sO * cw + cO * sw * ci, -sO * sw + cO * cw * ci, -cO * si,
         sw * si, cw * si, ci;
    return {q * r_pqw, q * v_pqw};
}

/// Rows are the R, T, N unit vectors of the state in inertial coordinates.
inline Mat3 oracle_rtn(const OracleState& s) {
    const Vec3 r_hat = s.r.normalized();
    const Vec3 n_hat = s.r.cross(s.v).normalized();
    Mat3 c;
    c.row(0) = r_hat.transpose();
    c.row(1) = n_hat.cross(r_hat).transpose();
    c.row(2) = n_hat.transpose();
    return c;
}

/// RTN_1 position and rotating-frame velocity of satellite 2 relative to satellite 1.
inline std::pair<Vec3, Vec3> oracle_relative(const ClassicalElements& el1, const ClassicalElements& el2, double mu) {
    const OracleState s1 = oracle_cartesian(el1, mu);
    const OracleState s2 = oracle_cartesian(el2, mu);
    const Mat3 c = oracle_rtn(s1);
    const Vec3 dr = c * (s2.r - s1.r);
    const Vec3 omega(0.0, 0.0, s1.r.cross(s1.v).norm() / s1.r.squaredNorm());
    const Vec3 dv = c * (s2.v - s1.v) - omega.cross(dr);
    return {dr, dv};
}

inline Mat3 tx(double t) {
    const double c = std::cos(t), s = std::sin(t);
    Mat3 m;
    m << 1, 0, 0, 0, c, s, 0, -s, c;
    return m;
}

inline Mat3 tz(double t) {
    const double c = std::cos(t), s = std::sin(t);
    Mat3 m;
    m << c, s, 0, -s, c, 0, 0, 0, 1;
    return m;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline ClassicalElements random_elements(std::mt19937_64& rng, double a_lo = 7000.0, double a_hi = 20000.0,
                                         double e_hi = 0.6) {
    return {uniform(rng, a_lo, a_hi), uniform(rng, 0.0, e_hi), uniform(rng, 0.0, kPi),
            uniform(rng, -kPi, kPi), uniform(rng, -kPi, kPi), uniform(rng, -kPi, kPi)};
}

/// Random pair with relative inclination in [min_gamma, pi - min_gamma].
inline std::pair<ClassicalElements, ClassicalElements> random_pair(std::mt19937_64& rng, double min_gamma = 1e-3) {
    for (;;) {
        const ClassicalElements el1 = random_elements(rng);
        const ClassicalElements el2 = random_elements(rng);
        const double cg = std::cos(el1.i) * std::cos(el2.i) +
                          std::sin(el1.i) * std::sin(el2.i) * std::cos(el1.raan - el2.raan);
        const double g = std::acos(std::clamp(cg, -1.0, 1.0));
        if (g > min_gamma && g < kPi - min_gamma) return {el1, el2};
    }
}

/// Random state with moderate magnitudes and a valid geometry.
inline std::pair<NodalRelativeState, ReferenceParams> random_state(std::mt19937_64& rng) {
    const auto [el1, el2] = random_pair(rng, 0.05);
    return relstate::oe_from_classical(el1, el2);
}

/// Orbit through the current position of el1 with a random, non-retrograde velocity there.
inline ClassicalElements orbit_through(const ClassicalElements& el1, std::mt19937_64& rng) {
    const OracleState s = oracle_cartesian(el1, kMuEarth);
    for (;;) {
        const Vec3 dir = Vec3(uniform(rng, -1, 1), uniform(rng, -1, 1), uniform(rng, -1, 1)).normalized();
        const double speed = uniform(rng, 0.7, 1.2) * std::sqrt(kMuEarth / s.r.norm());
        CartesianState s2{s.r, speed * dir};
        if (s2.v.dot(s.r.normalized()) * s2.v.dot(s.r.normalized()) > 0.9 * s2.v.squaredNorm()) continue;
        const OsculatingElements o = cartesian::cartesian_to_elements(s2, kMuEarth);
        if (o.el.e > 0.8) continue;
        const double cg = s.r.cross(s.v).normalized().dot(s2.r.cross(s2.v).normalized());
        if (std::abs(cg) > 0.999 || cg < -0.9) continue;
        return o.el;
    }
}

/// Central finite-difference Jacobian of a vector function of a Vec6 with relative steps.
template <int M, class F>
Eigen::Matrix<double, M, 6> fd_jacobian(F&& f, const Vec6& x, double rel_step = 1e-7) {
    Eigen::Matrix<double, M, 6> j;
    for (int k = 0; k < 6; ++k) {
        const double h = rel_step * std::max(1.0, std::abs(x(k)));
        Vec6 xp = x, xm = x;
        xp(k) += h;
        xm(k) -= h;
        j.col(k) = (f(xp) - f(xm)) / (2.0 * h);
    }
    return j;
}

/// Largest column-wise relative deviation, with columns scaled by the larger of the two norms.
template <class A, class B>
double column_rel_error(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
    const double scale = std::max(a.norm(), 1e-300);
    double worst = 0.0;
    for (Eigen::Index k = 0; k < a.cols(); ++k) {
        worst = std::max(worst, (a.col(k) - b.col(k)).norm() / scale);
    }
    return worst;
}

}  // namespace nodal::test
