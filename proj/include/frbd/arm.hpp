#pragma once

#include <functional>
#include <span>

#include "frbd/model.hpp"
#include "frbd/ode.hpp"

namespace frbd {

/// 1-DOF manipulator with a GM bristle friction element at the joint:
///   m(q) q'' = -c(q, q') q' - g(q) - F + U,   F = r p f.
struct ArmPlant {
    std::function<double(double q)> inertia;             // m(q) [kg m^2], > 0
    std::function<double(double q, double qd)> coriolis; // c(q, q') [N m s]
    std::function<double(double q)> gravity;             // g(q) [N m]
    double joint_radius = 0.05;                          // r [m]
    FrBDModel friction;                                  // GM rheology; p = friction.normal_force

    /// Pendulum plant: constant inertia J, gravity m_p g0 l sin(q), and an
    /// optional velocity-dependent Coriolis coefficient c0 cos(q).
    static ArmPlant pendulum(double inertia_j, double pend_mass, double pend_length, double g0,
                             double coriolis_c0, double joint_radius, FrBDModel friction);

    void validate() const;
};

struct ControllerGains {
    double lambda;  // sliding-surface pole [1/s]
    double k1;      // feedback gain on s [N m s]
    double k2;      // observer injection gain

    void validate() const;
};

/// Twice continuously differentiable reference q_ref(t) with consistent
/// derivatives.
class ReferenceSignal {
public:
    static ReferenceSignal sinusoid(double amplitude, double freq_hz, double phase = 0.0,
                                    double offset = 0.0);
    static ReferenceSignal constant(double q) { return sinusoid(0.0, 0.0, 0.0, q); }

    double q(double t) const;
    double qd(double t) const;
    double qdd(double t) const;

private:
    ReferenceSignal(double offset, double amplitude, double omega, double phase);
    double offset_, amplitude_, omega_, phase_;
};

struct TrackingVars {
    double q_tilde;  // q - q_ref
    double s;        // q_tilde' + lambda q_tilde
};

TrackingVars tracking_vars(double q, double qd, double t, const ReferenceSignal& ref,
                           const ControllerGains& gains);

/// Tracking control torque
///   U = -k1 s + F_hat + m(q)[q_ref'' - lambda q_tilde']
///       + c(q, q')[q_ref' - lambda q_tilde] + g(q).
double control_law(double q, double qd, double t, const ReferenceSignal& ref,
                   const ControllerGains& gains, const ArmPlant& plant, double f_torque_estimate);

/// Friction observer copy driven by the measured q' with error injection:
///   zhat' = -(|q'|_eps / mu(q')) (k0 zhat + sum fhat_i) + q' - k2 s,
///   fhat_i' = -fhat_i / tau_i + k_i zhat'.
void observer_rhs(const FrBDModel& m, std::span<const double> xhat, double qd, double s,
                  double k2, std::span<double> dxhat);

struct ClosedLoopIc {
    double q0 = 0.0;
    double qd0 = 0.0;
    State friction0;  // plant bristle state (defaults to zeros)
    State observer0;  // observer bristle state (defaults to zeros)
};

/// Simulate the closed loop (plant + friction + observer + control law).
///
/// State layout: [q, q', z, f_1..f_n, zhat, fhat_1..fhat_n]. Recorded
/// channels: q, qd, q_ref, q_tilde, s, F, F_hat, F_tilde, int_s2 (cumulative
/// s^2), V_obs (GM storage on the observer error state), int_Fts (cumulative
/// F_tilde * s).
Trajectory run_tracking(const ArmPlant& plant, const ReferenceSignal& ref,
                        const ControllerGains& gains, const SolverConfig& solver,
                        const ClosedLoopIc& ic = {});

}  // namespace frbd
