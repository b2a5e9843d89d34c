/**
 * @file dynamics.hpp
 * @brief Keplerian and perturbed evolution of the nodal relative state and of
 *        the reference parameters, plus the Gauss-variational building blocks.
 */
#pragma once

#include <functional>
#include <span>
#include <vector>

#include "nodal/integrator.hpp"
#include "nodal/relstate.hpp"

namespace nodal {

/// Perturbing accelerations, each in its own satellite's RTN frame [km/s^2].
struct PerturbationInput {
    Vec3 u1 = Vec3::Zero();
    Vec3 u2 = Vec3::Zero();
};

/// Time-dependent acceleration profile; an empty function means no forcing.
using AccelProfile = std::function<Vec3(double t)>;

struct PerturbationProfile {
    AccelProfile u1;
    AccelProfile u2;

    PerturbationInput at(double t) const {
        return {u1 ? u1(t) : Vec3::Zero(), u2 ? u2(t) : Vec3::Zero()};
    }
    bool empty() const { return !u1 && !u2; }
};

struct InputMatrices {
    Mat63 g1 = Mat63::Zero();
    Mat63 g2 = Mat63::Zero();
    Mat3 g_eta = Mat3::Zero();
};

struct StateDerivative {
    Vec6 d_oe = Vec6::Zero();
    Vec3 d_eta = Vec3::Zero();
};

/// Rotation-only sub-solution of the Keplerian flow (dtheta has no closed form).
struct AnalyticPartial {
    double dp = 0.0;
    Vec2 dxi = Vec2::Zero();
    Vec2 dh = Vec2::Zero();
};

/// Geometry needed by the variational equations of the nodal elements.
struct NodalVariationalInput {
    double theta1 = 0.0, theta2 = 0.0;
    double gamma = 0.0;
    double i1 = 0.0, i2 = 0.0;
    double alpha1 = 0.0, alpha2 = 0.0;
    double p1 = 0.0, p2 = 0.0;  ///< semiparameters [km]
    double e1 = 0.0, e2 = 0.0;
    double nu1 = 0.0, nu2 = 0.0;
    PerturbationInput u;
};

struct NodalRates {
    double alpha1 = 0.0, alpha2 = 0.0;
    double gamma = 0.0;
    double theta1 = 0.0, theta2 = 0.0;
    double lambda1 = 0.0, lambda2 = 0.0;
};

/// Sampled solution of the nodal model.
struct NodalTrajectory {
    std::vector<double> t;
    std::vector<NodalRelativeState> oe;
    std::vector<ReferenceParams> eta;
};

namespace dynamics {

/// True-anomaly rate of satellite 1, sqrt(mu / p1^3) (1 + e1 cos v1)^2.
double v1_rate(const ReferenceParams& eta, double mu);

Vec6 f_unperturbed(const NodalRelativeState& oe, const ReferenceParams& eta, double mu);
Vec3 f_eta(const ReferenceParams& eta, double mu);

/// Analytic d f / d oe of the Keplerian vector field.
Mat6 state_jacobian(const NodalRelativeState& oe, const ReferenceParams& eta, double mu);

/// Rotates (dxi_x, dxi_y) and (dh_x, dh_y) by R(dv1), dv1 = v1(t) - v1(t0).
AnalyticPartial analytic_step(const NodalRelativeState& oe0, double dv1);

/// G1, G2 and G_eta with the r_j / sqrt(mu p_j) prefactors.
InputMatrices input_matrices(const NodalRelativeState& oe, const ReferenceParams& eta, double mu);

/// d(oe)/dt = f + G2 u2 - G1 u1 and d(eta)/dt = f_eta + G_eta u1.
StateDerivative perturbed_derivative(const NodalRelativeState& oe, const ReferenceParams& eta,
                                     const PerturbationInput& u, double mu);

/// Rates of alpha_j, gamma, theta_j, lambda_j from the Gauss variational equations.
/// @throws Error(CoplanarNormalInput) for a coplanar geometry with nonzero normal forcing.
NodalRates nodal_variational(const NodalVariationalInput& in, double mu);

/**
 * Integrates the perturbed nodal model from t0 and samples it at `times`
 * (the first entry must equal t0). dtheta is wrapped at every sample.
 */
NodalTrajectory propagate(const NodalRelativeState& oe0, const ReferenceParams& eta0,
                          const PerturbationProfile& u, std::span<const double> times, double mu,
                          const IntegratorOptions& opt = {});

/// Convenience overload sampling [t0, tf] uniformly with `samples` points.
NodalTrajectory propagate(const NodalRelativeState& oe0, const ReferenceParams& eta0,
                          const PerturbationProfile& u, double t0, double tf, std::size_t samples,
                          double mu, const IntegratorOptions& opt = {});

/// Evenly spaced grid of n >= 2 points from t0 to tf.
std::vector<double> linspace(double t0, double tf, std::size_t n);

}  // namespace dynamics
}  // namespace nodal
