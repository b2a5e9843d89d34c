/**
 * @file conjunction.hpp
 * @brief Orbit-intersection test (C1), simultaneous-arrival check (C2), the
 *        safety margin zeta and the minimum-norm avoidance impulse.
 */
#pragma once

#include <optional>

#include "nodal/dynamics.hpp"

namespace nodal {

enum class C1Branch { Coplanar, Ascending, Descending };

/// Signed margins of the intersection condition.
struct C1Verdict {
    bool coplanar = false;  ///< dh <= coplanar_tol selected the coplanar branch
    /// dp^2 - drho^2 (coplanar branch, satisfied iff <= 0).
    std::optional<double> coplanar_margin;
    /// dp (1 +- e1 cos lambda1) -+ dxi cos dphi (satisfied iff |margin| <= node_tol).
    std::optional<double> ascending_margin;
    std::optional<double> descending_margin;
    bool coplanar_satisfied = false;
    bool ascending_satisfied = false;
    bool descending_satisfied = false;

    bool satisfied() const { return coplanar_satisfied || ascending_satisfied || descending_satisfied; }
};

struct C1Options {
    double coplanar_tol = 1e-9;  ///< on dh
    double node_tol = 1e-9;      ///< on the dimensionless node margins
};

/// Amplitude and phase of the coplanar radial-match condition dp + drho cos(v1 + phi_c) = 0.
struct CoplanarAmplitude {
    double drho = 0.0;
    double phi_c = 0.0;
};

struct NodeMargins {
    double ascending = 0.0;
    double descending = 0.0;
};

struct C2Options {
    double miss_tol = 1.0;                   ///< km
    std::size_t min_samples = 200;           ///< over [t0, tf]
    double samples_per_period = 200.0;       ///< of the shorter orbit
    PerturbationProfile u;                   ///< optional forcing
    IntegratorOptions integrator;
};

struct C2Result {
    bool collides = false;
    double t_min = 0.0;
    double d_min = 0.0;  ///< km
};

struct ZetaGradient {
    Row6 d_oe = Row6::Zero();
    Row3 d_eta = Row3::Zero();
};

struct ManeuverPlan {
    double t_m = 0.0;
    Vec3 delta_v = Vec3::Zero();  ///< RTN_1, km/s
    double delta_zeta = 0.0;
    Vec3 g = Vec3::Zero();        ///< d zeta / d(delta v), s/km
};

namespace conjunction {

inline constexpr double kMinSensitivity = 1e-12;  // s/km

CoplanarAmplitude coplanar_amplitude(const NodalRelativeState& oe, const ReferenceParams& eta);

/// @throws Error(Theta1Degenerate) when dh is below coplanar_tol.
NodeMargins node_margins(const NodalRelativeState& oe, const ReferenceParams& eta, double coplanar_tol = 1e-9);

C1Verdict c1_test(const NodalRelativeState& oe, const ReferenceParams& eta, const C1Options& opt = {});

/// Closest approach of the propagated pair over [t0, tf], by sampling plus Brent refinement.
C2Result c2_check(const NodalRelativeState& oe0, const ReferenceParams& eta0, double t0, double tf, double mu,
                  const C2Options& opt = {});

/// Ascending-node safety margin; zero iff the orbits meet at theta1 = 0.
/// @throws Error(ZetaUndefined) if dh = 0.
double zeta(const NodalRelativeState& oe, const ReferenceParams& eta);

/// Descending-node analogue, zero iff the orbits meet at theta1 = pi.
double zeta_descending(const NodalRelativeState& oe, const ReferenceParams& eta);

/// r2 - r1 when both satellites sit on the ascending relative node, p1 zeta / ((1 + e1 cos l1)(1 + e2 cos l2)).
double node_separation(const NodalRelativeState& oe, const ReferenceParams& eta);

ZetaGradient zeta_gradient(const NodalRelativeState& oe, const ReferenceParams& eta);

/// g = (d zeta/d eta G_eta - d zeta/d oe G1)^T.
Vec3 zeta_sensitivity(const NodalRelativeState& oe, const ReferenceParams& eta, double mu);

/// Minimum-norm impulse on satellite 1 changing zeta by delta_zeta to first order.
/// @throws Error(ZeroSensitivity) if |g| < kMinSensitivity.
ManeuverPlan plan_avoidance(const NodalRelativeState& oe, const ReferenceParams& eta, double delta_zeta, double mu,
                            double t_m = 0.0);

}  // namespace conjunction
}  // namespace nodal
