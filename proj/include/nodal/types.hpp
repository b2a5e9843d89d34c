/**
 * @file types.hpp
 * @brief Linear-algebra aliases, angle helpers and the error type shared by
 *        every module of the nodal relative-motion library.
 *
 * Units are km, s and rad throughout. Degrees only appear at the
 * configuration / CLI boundary.
 */
#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace nodal {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat2 = Eigen::Matrix2d;
using Mat3 = Eigen::Matrix3d;
using Mat6 = Eigen::Matrix<double, 6, 6>;
using Mat63 = Eigen::Matrix<double, 6, 3>;
using Mat36 = Eigen::Matrix<double, 3, 6>;
using Row6 = Eigen::Matrix<double, 1, 6>;
using Row3 = Eigen::Matrix<double, 1, 3>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Earth and Sun gravitational parameters [km^3/s^2].
inline constexpr double kMuEarth = 398600.4418;
inline constexpr double kMuSun = 1.32712440018e11;
inline constexpr double kAstronomicalUnit = 1.495978707e8;  // km

inline constexpr double deg2rad(double deg) { return deg * std::numbers::pi / 180.0; }
inline constexpr double rad2deg(double rad) { return rad * 180.0 / std::numbers::pi; }

/// Wraps an angle to (-pi, pi].
inline double wrap_angle(double a) {
    double w = std::remainder(a, kTwoPi);  // [-pi, pi]
    if (w <= -kPi) w += kTwoPi;
    return w;
}

/// 2-D rotation R(theta) = [[c, -s], [s, c]].
inline Mat2 planar_rotation(double theta) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    Mat2 r;
    r << c, -s, s, c;
    return r;
}

enum class ErrorCode {
    InvalidArgument,
    RetrogradeSingularity,
    GeometryError,
    StepFailure,
    CoplanarNormalInput,
    Theta1Degenerate,
    ZetaUndefined,
    ZeroSensitivity,
    ZeroRange,
    InfeasibleEncounter,
    ConfigError,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace nodal
