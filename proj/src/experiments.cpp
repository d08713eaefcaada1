#include "frbd/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace frbd {

void PreSlidingConfig::validate() const {
    if (!(mass > 0.0)) throw std::invalid_argument("PreSlidingConfig: mass must be > 0");
    if (!(force_ratio > 0.0 && force_ratio < 1.0))
        throw std::invalid_argument("PreSlidingConfig: force_ratio must be in (0, 1)");
    if (freqs_hz.empty()) throw std::invalid_argument("PreSlidingConfig: no frequencies given");
    for (double f : freqs_hz)
        if (!(f > 0.0)) throw std::invalid_argument("PreSlidingConfig: frequencies must be > 0");
    if (cycles < 1) throw std::invalid_argument("PreSlidingConfig: cycles must be >= 1");
}

void LagConfig::validate() const {
    if (!(v_amp >= 0.0 && v_bias > v_amp))
        throw std::invalid_argument("LagConfig: need v_bias > v_amp >= 0 (unidirectional motion)");
    if (freqs_hz.empty()) throw std::invalid_argument("LagConfig: no frequencies given");
    for (double f : freqs_hz)
        if (!(f > 0.0)) throw std::invalid_argument("LagConfig: frequencies must be > 0");
    if (cycles < 1) throw std::invalid_argument("LagConfig: cycles must be >= 1");
}

double breakaway_force(const FrBDModel& m) {
    return m.normal_force * m.law.mu_rest();
}

std::vector<Trajectory> run_presliding(const PreSlidingConfig& cfg) {
    cfg.validate();
    const FrBDModel& m = cfg.model;
    const double amplitude = cfg.force_ratio * breakaway_force(m);
    const std::size_t fdim = m.state_dim();

    // State layout: [x, xdot, z, branches...]; the friction element sees the
    // mass velocity.
    RhsFn f = [&m, &cfg](double, double u_ext, std::span<const double> x, std::span<double> dxdt) {
        const auto fr = x.subspan(2);
        const double pf = friction_force(m, fr);
        dxdt[0] = x[1];
        dxdt[1] = (u_ext - pf) / cfg.mass;
        rhs(m, x[1], fr, dxdt.subspan(2));
    };

    std::vector<Observer> obs;
    obs.push_back({"x", [](double, double, std::span<const double> x) { return x[0]; }, false});
    obs.push_back({"v", [](double, double, std::span<const double> x) { return x[1]; }, false});
    obs.push_back({"f", [&m](double, double, std::span<const double> x) {
                       return bristle_force(m, x.subspan(2));
                   },
                   false});
    obs.push_back({"pf", [&m](double, double, std::span<const double> x) {
                       return friction_force(m, x.subspan(2));
                   },
                   false});
    obs.push_back({"V", [&m](double, double, std::span<const double> x) {
                       return storage(m, x.subspan(2));
                   },
                   false});
    obs.push_back({"W_in",
                   [&m](double, double, std::span<const double> x) {
                       return friction_force(m, x.subspan(2)) * x[1];
                   },
                   true});

    std::vector<Trajectory> out;
    out.reserve(cfg.freqs_hz.size());
    for (double freq : cfg.freqs_hz) {
        SolverConfig solver = cfg.solver;
        solver.t0 = 0.0;
        solver.t1 = cfg.cycles / freq;
        const InputSignal u = InputSignal::sinusoid(0.0, amplitude, freq);
        const State x0(2 + fdim, 0.0);
        out.push_back(integrate(f, x0, u, solver, obs));
    }
    return out;
}

std::vector<LagResult> run_frictional_lag(const LagConfig& cfg) {
    cfg.validate();
    std::vector<LagResult> out;
    out.reserve(cfg.freqs_hz.size());
    for (double freq : cfg.freqs_hz) {
        SolverConfig solver = cfg.solver;
        solver.t0 = 0.0;
        solver.t1 = cfg.cycles / freq;
        const InputSignal v = InputSignal::sinusoid(cfg.v_bias, cfg.v_amp, freq);
        LagResult r;
        r.freq_hz = freq;
        r.traj = simulate_model(cfg.model, State(cfg.model.state_dim(), 0.0), v, solver);
        r.loop = final_cycle_loop(r.traj, freq, "v", "pf");
        r.metrics = compute_loop_metrics(r.loop);
        out.push_back(std::move(r));
    }
    return out;
}

double loop_area(std::span<const std::pair<double, double>> loop) {
    if (loop.size() < 3) throw std::invalid_argument("loop_area: need at least 3 points");
    double acc = 0.0;
    for (std::size_t i = 0; i < loop.size(); ++i) {
        const auto& [x0, y0] = loop[i];
        const auto& [x1, y1] = loop[(i + 1) % loop.size()];
        acc += x0 * y1 - x1 * y0;
    }
    return 0.5 * acc;
}

std::vector<std::pair<double, double>> final_cycle_loop(const Trajectory& traj, double freq_hz,
                                                        std::string_view abscissa,
                                                        std::string_view ordinate) {
    if (traj.size() < 3) throw std::invalid_argument("final_cycle_loop: trajectory too short");
    const auto& a = traj.channel(abscissa);
    const auto& o = traj.channel(ordinate);
    const double t_end = traj.t.back();
    const double t_start = t_end - 1.0 / freq_hz - 1e-9 * (t_end - traj.t.front());
    std::vector<std::pair<double, double>> loop;
    for (std::size_t k = 0; k < traj.size(); ++k)
        if (traj.t[k] >= t_start) loop.emplace_back(a[k], o[k]);
    return loop;
}

LoopMetrics compute_loop_metrics(std::span<const std::pair<double, double>> loop) {
    LoopMetrics metrics{};
    metrics.area = loop_area(loop);
    double a_min = std::numeric_limits<double>::infinity();
    double a_max = -a_min;
    double peak = -a_min;
    for (const auto& [a, o] : loop) {
        a_min = std::min(a_min, a);
        a_max = std::max(a_max, a);
        peak = std::max(peak, o);
    }
    metrics.peak_force = peak;

    // Loop thickness: spread of the ordinates where segments cross the mid
    // abscissa.
    const double mid = 0.5 * (a_min + a_max);
    double o_lo = std::numeric_limits<double>::infinity();
    double o_hi = -o_lo;
    for (std::size_t i = 0; i < loop.size(); ++i) {
        const auto& [x0, y0] = loop[i];
        const auto& [x1, y1] = loop[(i + 1) % loop.size()];
        if ((x0 - mid) * (x1 - mid) > 0.0 || x0 == x1) continue;
        const double w = (mid - x0) / (x1 - x0);
        const double y = y0 + w * (y1 - y0);
        o_lo = std::min(o_lo, y);
        o_hi = std::max(o_hi, y);
    }
    metrics.width_at_mid = (o_hi >= o_lo) ? o_hi - o_lo : 0.0;
    return metrics;
}

}  // namespace frbd
