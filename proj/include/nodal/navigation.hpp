/**
 * @file navigation.hpp
 * @brief Angles-only measurement model (azimuth, elevation, apparent size) and
 *        the extended Kalman filter over the nodal relative state.
 */
#pragma once

#include <random>

#include "nodal/dynamics.hpp"

namespace nodal {

struct MeasurementTriple {
    double az = 0.0;    ///< atan2(dr_T, dr_R)
    double el = 0.0;    ///< asin(dr_N / |dr|)
    double beta = 0.0;  ///< d / |dr|

    Vec3 vector() const { return {az, el, beta}; }
    static MeasurementTriple from_vector(const Vec3& v) { return {v(0), v(1), v(2)}; }
};

struct NoiseSpec {
    double sigma_az = 0.0;
    double sigma_el = 0.0;
    double sigma_beta = 0.0;

    Mat3 covariance() const {
        return Vec3(sigma_az * sigma_az, sigma_el * sigma_el, sigma_beta * sigma_beta).asDiagonal();
    }
};

struct FilterState {
    NodalRelativeState oe_hat;
    Mat6 P = Mat6::Zero();
};

struct PredictedMeasurement {
    MeasurementTriple y;
    Mat36 H = Mat36::Zero();
    bool gimbal_degenerate = false;  ///< |el| within 1e-9 of pi/2, azimuth ill-conditioned
};

struct PropagatedFilter {
    FilterState fs;
    ReferenceParams eta;  ///< reference parameters at the end of the step
    Mat6 phi = Mat6::Identity();
};

struct UpdateOptions {
    double chi2_gate = 16.2662;  ///< 99.9% quantile of chi-square with 3 dof
    bool reject_outliers = false;
};

struct UpdateResult {
    FilterState fs;
    Vec3 innovation = Vec3::Zero();
    double nis = 0.0;      ///< innovation^T S^-1 innovation
    bool outlier = false;  ///< nis above the gate
};

namespace navigation {

inline constexpr double kGimbalTol = 1e-9;

/// Noise-free triple for a relative position dr (RTN_1) and target diameter d.
/// @throws Error(ZeroRange) if dr = 0.
MeasurementTriple ideal_measurement(const Vec3& dr, double d);

/// Jacobian of the triple with respect to dr.
Mat3 measurement_partials(const Vec3& dr, double d);

template <class Rng>
MeasurementTriple measure(const Vec3& dr, double d, const NoiseSpec& noise, Rng& rng) {
    MeasurementTriple y = ideal_measurement(dr, d);
    std::normal_distribution<double> n01(0.0, 1.0);
    y.az = wrap_angle(y.az + noise.sigma_az * n01(rng));
    y.el += noise.sigma_el * n01(rng);
    y.beta += noise.sigma_beta * n01(rng);
    return y;
}

PredictedMeasurement predict_measurement(const NodalRelativeState& oe, const ReferenceParams& eta, double d);

/**
 * Mean and covariance over dt: dtheta, the reference anomaly and the transition
 * matrix are integrated together; dp is held, (dxi, dh) rotate by the reference
 * anomaly increment. P <- Phi P Phi^T + Q dt (Q is a spectral density per second).
 */
PropagatedFilter ekf_propagate(const FilterState& fs, const ReferenceParams& eta, double dt, const Mat6& Q, double mu,
                               const IntegratorOptions& opt = {});

UpdateResult ekf_update(const FilterState& fs, const ReferenceParams& eta, const MeasurementTriple& z,
                        const NoiseSpec& noise, double d, const UpdateOptions& opt = {});

/// Symmetric part of P.
Mat6 symmetrized(const Mat6& P);

}  // namespace navigation
}  // namespace nodal
