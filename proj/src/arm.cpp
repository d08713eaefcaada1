#include "frbd/arm.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <variant>

namespace frbd {

ArmPlant ArmPlant::pendulum(double inertia_j, double pend_mass, double pend_length, double g0,
                            double coriolis_c0, double joint_radius, FrBDModel friction) {
    ArmPlant plant;
    plant.inertia = [inertia_j](double) { return inertia_j; };
    plant.coriolis = [coriolis_c0](double q, double) { return coriolis_c0 * std::cos(q); };
    plant.gravity = [pend_mass, pend_length, g0](double q) {
        return pend_mass * g0 * pend_length * std::sin(q);
    };
    plant.joint_radius = joint_radius;
    plant.friction = std::move(friction);
    plant.validate();
    return plant;
}

void ArmPlant::validate() const {
    if (!inertia || !coriolis || !gravity)
        throw std::invalid_argument("ArmPlant: missing m(q), c(q,q') or g(q)");
    if (!(joint_radius > 0.0)) throw std::invalid_argument("ArmPlant: joint radius must be > 0");
    if (!friction.is_gm())
        throw std::invalid_argument("ArmPlant: friction element must use the GM rheology");
}

void ControllerGains::validate() const {
    if (!(lambda > 0.0 && k1 > 0.0 && k2 > 0.0))
        throw std::invalid_argument("ControllerGains: lambda, k1, k2 must be > 0");
}

ReferenceSignal::ReferenceSignal(double offset, double amplitude, double omega, double phase)
    : offset_(offset), amplitude_(amplitude), omega_(omega), phase_(phase) {}

ReferenceSignal ReferenceSignal::sinusoid(double amplitude, double freq_hz, double phase,
                                          double offset) {
    return ReferenceSignal(offset, amplitude, 2.0 * std::numbers::pi * freq_hz, phase);
}

double ReferenceSignal::q(double t) const {
    return offset_ + amplitude_ * std::sin(omega_ * t + phase_);
}

double ReferenceSignal::qd(double t) const {
    return amplitude_ * omega_ * std::cos(omega_ * t + phase_);
}

double ReferenceSignal::qdd(double t) const {
    return -amplitude_ * omega_ * omega_ * std::sin(omega_ * t + phase_);
}

TrackingVars tracking_vars(double q, double qd, double t, const ReferenceSignal& ref,
                           const ControllerGains& gains) {
    TrackingVars v;
    v.q_tilde = q - ref.q(t);
    v.s = (qd - ref.qd(t)) + gains.lambda * v.q_tilde;
    return v;
}

double control_law(double q, double qd, double t, const ReferenceSignal& ref,
                   const ControllerGains& gains, const ArmPlant& plant,
                   double f_torque_estimate) {
    const TrackingVars v = tracking_vars(q, qd, t, ref, gains);
    const double q_tilde_dot = qd - ref.qd(t);
    return -gains.k1 * v.s + f_torque_estimate +
           plant.inertia(q) * (ref.qdd(t) - gains.lambda * q_tilde_dot) +
           plant.coriolis(q, qd) * (ref.qd(t) - gains.lambda * v.q_tilde) + plant.gravity(q);
}

void observer_rhs(const FrBDModel& m, std::span<const double> xhat, double qd, double s,
                  double k2, std::span<double> dxhat) {
    const auto& p = m.gm();
    if (xhat.size() != m.state_dim() || dxhat.size() != xhat.size())
        throw std::invalid_argument("observer_rhs: state dimension mismatch");
    const double a = m.reg.abs(qd) / m.law.eval(qd);
    double fhat = p.k0 * xhat[0];
    for (std::size_t i = 0; i < p.n(); ++i) fhat += xhat[1 + i];
    const double dz = -a * fhat + qd - k2 * s;
    dxhat[0] = dz;
    for (std::size_t i = 0; i < p.n(); ++i)
        dxhat[1 + i] = -xhat[1 + i] / p.branches[i].tau + p.branches[i].k * dz;
}

Trajectory run_tracking(const ArmPlant& plant, const ReferenceSignal& ref,
                        const ControllerGains& gains, const SolverConfig& solver,
                        const ClosedLoopIc& ic) {
    plant.validate();
    gains.validate();
    const FrBDModel& m = plant.friction;
    const std::size_t fdim = m.state_dim();

    State x0(2 + 2 * fdim, 0.0);
    x0[0] = ic.q0;
    x0[1] = ic.qd0;
    if (!ic.friction0.empty()) {
        if (ic.friction0.size() != fdim)
            throw std::invalid_argument("run_tracking: plant friction IC dimension mismatch");
        std::copy(ic.friction0.begin(), ic.friction0.end(), x0.begin() + 2);
    }
    if (!ic.observer0.empty()) {
        if (ic.observer0.size() != fdim)
            throw std::invalid_argument("run_tracking: observer IC dimension mismatch");
        std::copy(ic.observer0.begin(), ic.observer0.end(), x0.begin() + 2 + fdim);
    }

    const double rp = plant.joint_radius * m.normal_force;

    RhsFn f = [&](double t, double, std::span<const double> x, std::span<double> dxdt) {
        const double q = x[0];
        const double qd = x[1];
        const auto fr = x.subspan(2, fdim);
        const auto ob = x.subspan(2 + fdim, fdim);
        const TrackingVars tv = tracking_vars(q, qd, t, ref, gains);
        const double friction_torque = rp * bristle_force(m, fr);
        const double estimate = rp * bristle_force(m, ob);
        const double u = control_law(q, qd, t, ref, gains, plant, estimate);
        dxdt[0] = qd;
        dxdt[1] = (-plant.coriolis(q, qd) * qd - plant.gravity(q) - friction_torque + u) /
                  plant.inertia(q);
        rhs(m, qd, fr, dxdt.subspan(2, fdim));
        observer_rhs(m, ob, qd, tv.s, gains.k2, dxdt.subspan(2 + fdim, fdim));
    };

    // Observer error state (z - zhat, f_i - fhat_i); scratch reused across
    // observer evaluations (the integrator records sequentially).
    State err(fdim, 0.0);
    auto error_state = [&](std::span<const double> x) -> std::span<const double> {
        for (std::size_t i = 0; i < fdim; ++i) err[i] = x[2 + i] - x[2 + fdim + i];
        return err;
    };

    std::vector<Observer> obs;
    obs.push_back({"q", [](double, double, std::span<const double> x) { return x[0]; }, false});
    obs.push_back({"qd", [](double, double, std::span<const double> x) { return x[1]; }, false});
    obs.push_back(
        {"q_ref", [&ref](double t, double, std::span<const double>) { return ref.q(t); }, false});
    obs.push_back({"q_tilde",
                   [&](double t, double, std::span<const double> x) {
                       return tracking_vars(x[0], x[1], t, ref, gains).q_tilde;
                   },
                   false});
    obs.push_back({"s",
                   [&](double t, double, std::span<const double> x) {
                       return tracking_vars(x[0], x[1], t, ref, gains).s;
                   },
                   false});
    obs.push_back({"F",
                   [&, rp](double, double, std::span<const double> x) {
                       return rp * bristle_force(m, x.subspan(2, fdim));
                   },
                   false});
    obs.push_back({"F_hat",
                   [&, rp](double, double, std::span<const double> x) {
                       return rp * bristle_force(m, x.subspan(2 + fdim, fdim));
                   },
                   false});
    obs.push_back({"F_tilde",
                   [&, rp](double, double, std::span<const double> x) {
                       return rp * bristle_force(m, error_state(x));
                   },
                   false});
    obs.push_back({"int_s2",
                   [&](double t, double, std::span<const double> x) {
                       const double s = tracking_vars(x[0], x[1], t, ref, gains).s;
                       return s * s;
                   },
                   true});
    obs.push_back({"V_obs",
                   [&](double, double, std::span<const double> x) {
                       return storage(m, error_state(x));
                   },
                   false});
    obs.push_back({"int_Fts",
                   [&, rp](double t, double, std::span<const double> x) {
                       const double s = tracking_vars(x[0], x[1], t, ref, gains).s;
                       return rp * bristle_force(m, error_state(x)) * s;
                   },
                   true});

    return integrate(f, x0, InputSignal::constant(0.0), solver, obs);
}

}  // namespace frbd
