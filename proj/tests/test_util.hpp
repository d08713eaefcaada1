#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "frbd/model.hpp"
#include "frbd/ode.hpp"
#include "frbd/rng.hpp"

namespace frbd::testutil {

inline FrictionLaw random_law(Rng& rng) {
    if (rng.uniform() < 0.25) return FrictionLaw::constant(rng.uniform(0.3, 1.5));
    const double mu_d = rng.uniform(0.3, 1.0);
    return FrictionLaw::stribeck(mu_d, mu_d * rng.uniform(1.0, 2.0), rng.uniform(0.005, 0.1),
                                 rng.uniform(1.0, 2.0));
}

inline Regularization random_reg(Rng& rng) {
    const double pick = rng.uniform();
    if (pick < 0.3) return Regularization::smooth_sqrt(0.0);
    if (pick < 0.6) return Regularization::smooth_sqrt(1e-6);
    return Regularization::smooth_sqrt(1e-4);
}

inline FrBDModel random_gm_model(Rng& rng, std::size_t n) {
    std::vector<MaxwellBranch> branches;
    for (std::size_t i = 0; i < n; ++i)
        branches.push_back({rng.uniform(0.1, 10.0), rng.uniform(0.02, 0.5)});
    return FrBDModel(GMParams(rng.uniform(0.5, 20.0), std::move(branches)), random_law(rng),
                     random_reg(rng), rng.uniform(0.5, 5.0));
}

inline FrBDModel random_gkv_model(Rng& rng, std::size_t n) {
    std::vector<KelvinVoigtBranch> branches;
    for (std::size_t i = 0; i < n; ++i)
        branches.push_back({rng.uniform(0.1, 10.0), rng.uniform(0.05, 2.0)});
    return FrBDModel(GKVParams(rng.uniform(0.5, 20.0), std::move(branches)), random_law(rng),
                     random_reg(rng), rng.uniform(0.5, 5.0));
}

inline FrBDModel random_model(Rng& rng, std::size_t n) {
    return rng.uniform() < 0.5 ? random_gm_model(rng, n) : random_gkv_model(rng, n);
}

inline SlsCanonical random_canonical(Rng& rng) {
    const double gamma1 = rng.uniform(0.02, 0.3);
    const double sigma0 = rng.uniform(0.5, 10.0);
    const double sigma1 = gamma1 * sigma0 * (1.0 + rng.uniform(0.2, 5.0));
    return SlsCanonical(sigma0, sigma1, gamma1);
}

/// Multi-sine input with sup|v| <= bound (sum of component amplitudes is
/// kept within the budget).
inline InputSignal random_bounded_input(Rng& rng, double bound) {
    const int parts = rng.uniform_int(2, 4);
    std::vector<double> amps(parts);
    double total = 0.0;
    for (auto& a : amps) {
        a = rng.uniform(0.1, 1.0);
        total += a;
    }
    const double budget = bound * rng.uniform(0.5, 1.0);
    std::vector<InputSignal> sines;
    for (const double a : amps)
        sines.push_back(InputSignal::sinusoid(0.0, a / total * budget, rng.uniform(0.1, 3.0),
                                              rng.uniform(0.0, 6.283185307179586)));
    return InputSignal::sum(std::move(sines));
}

/// Conservative fixed step from numeric Jacobian row sums of the model rhs,
/// probed at the peak-velocity steady states and a few nearby states.
inline double suggest_dt(const FrBDModel& m, double v_max, double safety = 0.2) {
    const std::size_t dim = m.state_dim();
    std::vector<double> x(dim), dx0(dim), dx1(dim);
    double rate = 1e-6;
    for (const double v : {v_max, -v_max, 0.3 * v_max}) {
        State base = steady_state(m, v).x;
        for (const double scale : {1.0, 1.5}) {
            for (std::size_t j = 0; j < dim; ++j) x[j] = scale * base[j] + 0.1 * (scale - 1.0);
            rhs(m, v, x, dx0);
            for (std::size_t j = 0; j < dim; ++j) {
                const double h = 1e-6 * std::max(1.0, std::abs(x[j]));
                const double saved = x[j];
                x[j] = saved + h;
                rhs(m, v, x, dx1);
                x[j] = saved;
                double row = 0.0;
                for (std::size_t i = 0; i < dim; ++i)
                    row += std::abs((dx1[i] - dx0[i]) / h);
                rate = std::max(rate, row);
            }
        }
    }
    return std::clamp(safety / rate, 1e-7, 1e-3);
}

// ---------------------------------------------------------------------------
// Direct constitutive-element simulators. These drive the raw viscoelastic
// elements with a prescribed deflection rate u(t) = z'(t) (no friction
// coupling) and report the force trace; they are the oracle for the
// canonical-coefficient maps.

struct ElementTrace {
    std::vector<double> t;
    std::vector<double> f;
};

inline ElementTrace gm_element_force(const GMParams& p, const InputSignal& u,
                                     const SolverConfig& cfg) {
    RhsFn f = [&p](double, double uu, std::span<const double> x, std::span<double> dxdt) {
        dxdt[0] = uu;
        for (std::size_t i = 0; i < p.n(); ++i)
            dxdt[1 + i] = -x[1 + i] / p.branches[i].tau + p.branches[i].k * uu;
    };
    std::vector<Observer> obs{{"f",
                               [&p](double, double, std::span<const double> x) {
                                   double force = p.k0 * x[0];
                                   for (std::size_t i = 0; i < p.n(); ++i) force += x[1 + i];
                                   return force;
                               },
                               false}};
    const Trajectory traj = integrate(f, State(p.n() + 1, 0.0), u, cfg, obs);
    return {traj.t, traj.channel("f")};
}

inline ElementTrace gkv_element_force(const GKVParams& p, const InputSignal& u,
                                      const SolverConfig& cfg) {
    RhsFn f = [&p](double, double uu, std::span<const double> x, std::span<double> dxdt) {
        double z0 = x[0];
        for (std::size_t i = 0; i < p.n(); ++i) z0 -= x[1 + i];
        dxdt[0] = uu;
        for (std::size_t i = 0; i < p.n(); ++i)
            dxdt[1 + i] = (p.k0 * z0 - p.branches[i].k * x[1 + i]) / p.branches[i].c;
    };
    std::vector<Observer> obs{{"f",
                               [&p](double, double, std::span<const double> x) {
                                   double z0 = x[0];
                                   for (std::size_t i = 0; i < p.n(); ++i) z0 -= x[1 + i];
                                   return p.k0 * z0;
                               },
                               false}};
    const Trajectory traj = integrate(f, State(p.n() + 1, 0.0), u, cfg, obs);
    return {traj.t, traj.channel("f")};
}

inline ElementTrace canonical_element_force(const SlsCanonical& c, const InputSignal& u,
                                            const SolverConfig& cfg) {
    // States (z, f): z' = u, f' = (sigma0 z + sigma1 u - f) / gamma1.
    RhsFn f = [&c](double, double uu, std::span<const double> x, std::span<double> dxdt) {
        dxdt[0] = uu;
        dxdt[1] = (c.sigma0 * x[0] + c.sigma1 * uu - x[1]) / c.gamma1;
    };
    std::vector<Observer> obs{
        {"f", [](double, double, std::span<const double> x) { return x[1]; }, false}};
    const Trajectory traj = integrate(f, State(2, 0.0), u, cfg, obs);
    return {traj.t, traj.channel("f")};
}

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst;
}

inline double max_abs(std::span<const double> a) {
    double worst = 0.0;
    for (double x : a) worst = std::max(worst, std::abs(x));
    return worst;
}

}  // namespace frbd::testutil
