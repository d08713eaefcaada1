#include "frbd/ode.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <sstream>
#include <utility>

#include <numbers>

namespace frbd {

void SolverConfig::validate() const {
    if (!(dt > 0.0)) throw std::invalid_argument("SolverConfig: dt must be > 0");
    if (!(t1 > t0)) throw std::invalid_argument("SolverConfig: t1 must exceed t0");
    if (!(rtol > 0.0) || !(atol > 0.0))
        throw std::invalid_argument("SolverConfig: rtol and atol must be > 0");
    if (!(dt_min > 0.0) || !(dt_min <= dt_max))
        throw std::invalid_argument("SolverConfig: need 0 < dt_min <= dt_max");
    if (record_stride < 1) throw std::invalid_argument("SolverConfig: record_stride must be >= 1");
}

InputSignal InputSignal::constant(double v) {
    InputSignal s;
    s.impl_ = Constant{v};
    return s;
}

InputSignal InputSignal::sinusoid(double bias, double amplitude, double freq_hz, double phase) {
    InputSignal s;
    s.impl_ = Sinusoid{bias, amplitude, 2.0 * std::numbers::pi * freq_hz, phase};
    return s;
}

InputSignal InputSignal::sampled(std::vector<double> times, std::vector<double> values) {
    if (times.size() != values.size() || times.empty())
        throw std::invalid_argument("InputSignal: sampled signal needs equal, nonempty grids");
    for (std::size_t i = 1; i < times.size(); ++i)
        if (!(times[i] > times[i - 1]))
            throw std::invalid_argument("InputSignal: sample times must be strictly increasing");
    InputSignal s;
    s.impl_ = Sampled{std::move(times), std::move(values)};
    return s;
}

InputSignal InputSignal::sum(std::vector<InputSignal> parts) {
    InputSignal s;
    s.impl_ = Composite{std::make_shared<const std::vector<InputSignal>>(std::move(parts))};
    return s;
}

double InputSignal::eval(double t) const {
    return std::visit(
        [t](const auto& sig) -> double {
            using T = std::decay_t<decltype(sig)>;
            if constexpr (std::is_same_v<T, Constant>) {
                return sig.v;
            } else if constexpr (std::is_same_v<T, Sinusoid>) {
                return sig.bias + sig.amplitude * std::sin(sig.omega * t + sig.phase);
            } else if constexpr (std::is_same_v<T, Sampled>) {
                return interp_linear(sig.t, sig.v, t);
            } else {
                double acc = 0.0;
                for (const auto& part : *sig.parts) acc += part.eval(t);
                return acc;
            }
        },
        impl_);
}

bool Trajectory::has_channel(std::string_view name) const {
    return std::find(channel_names.begin(), channel_names.end(), name) != channel_names.end();
}

const std::vector<double>& Trajectory::channel(std::string_view name) const {
    for (std::size_t i = 0; i < channel_names.size(); ++i)
        if (channel_names[i] == name) return channel_values[i];
    throw std::invalid_argument("Trajectory: missing channel '" + std::string(name) + "'");
}

std::vector<double>& Trajectory::add_channel(std::string name) {
    channel_names.push_back(std::move(name));
    channel_values.emplace_back();
    return channel_values.back();
}

double interp_linear(std::span<const double> ts, std::span<const double> ys, double t) {
    if (ts.empty() || ts.size() != ys.size())
        throw std::invalid_argument("interp_linear: bad grids");
    if (t <= ts.front()) return ys.front();
    if (t >= ts.back()) return ys.back();
    const auto it = std::upper_bound(ts.begin(), ts.end(), t);
    const std::size_t hi = static_cast<std::size_t>(it - ts.begin());
    const std::size_t lo = hi - 1;
    const double w = (t - ts[lo]) / (ts[hi] - ts[lo]);
    return ys[lo] + w * (ys[hi] - ys[lo]);
}

namespace {

bool all_finite(std::span<const double> x) {
    for (double v : x)
        if (!std::isfinite(v)) return false;
    return true;
}

[[noreturn]] void abort_nonfinite(double t) {
    std::ostringstream os;
    os << "integrate: non-finite state at t = " << t;
    throw SolverError(os.str());
}

// Records samples and maintains cumulative (trapezoid) channels.
class Recorder {
public:
    Recorder(Trajectory& traj, const std::vector<Observer>& observers) : traj_(traj), obs_(observers) {
        for (const auto& o : obs_) {
            traj_.add_channel(o.name);
            integrals_.push_back(0.0);
            prev_g_.push_back(0.0);
        }
    }

    void record(double t, double u, std::span<const double> x) {
        const bool first = traj_.t.empty();
        const double dt = first ? 0.0 : t - traj_.t.back();
        traj_.t.push_back(t);
        traj_.states.emplace_back(x.begin(), x.end());
        for (std::size_t i = 0; i < obs_.size(); ++i) {
            const double g = obs_[i].eval(t, u, x);
            if (obs_[i].cumulative) {
                if (!first) integrals_[i] += 0.5 * (g + prev_g_[i]) * dt;
                prev_g_[i] = g;
                traj_.channel_values[i].push_back(integrals_[i]);
            } else {
                traj_.channel_values[i].push_back(g);
            }
        }
    }

private:
    Trajectory& traj_;
    const std::vector<Observer>& obs_;
    std::vector<double> integrals_;
    std::vector<double> prev_g_;
};

class Stepper {
public:
    Stepper(const RhsFn& rhs, const InputSignal& u, std::size_t dim) : rhs_(rhs), u_(u) {
        for (auto* v : {&k1_, &k2_, &k3_, &k4_, &k5_, &k6_, &k7_, &xs_, &xerr_}) v->assign(dim, 0.0);
    }

    void eval(double t, std::span<const double> x, std::vector<double>& dxdt) {
        rhs_(t, u_.eval(t), x, dxdt);
    }

    // One classical RK4 step of size h; writes the result into x_new.
    void rk4(double t, std::span<const double> x, double h, std::vector<double>& x_new) {
        const std::size_t n = x.size();
        eval(t, x, k1_);
        axpy(x, 0.5 * h, k1_, xs_);
        eval(t + 0.5 * h, xs_, k2_);
        axpy(x, 0.5 * h, k2_, xs_);
        eval(t + 0.5 * h, xs_, k3_);
        axpy(x, h, k3_, xs_);
        eval(t + h, xs_, k4_);
        x_new.resize(n);
        for (std::size_t i = 0; i < n; ++i)
            x_new[i] = x[i] + (h / 6.0) * (k1_[i] + 2.0 * k2_[i] + 2.0 * k3_[i] + k4_[i]);
    }

    // One Dormand-Prince 5(4) step; returns the scaled error norm.
    double dopri45(double t, std::span<const double> x, double h, double rtol, double atol,
                   std::vector<double>& x_new) {
        static constexpr double a21 = 1.0 / 5;
        static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
        static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
        static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                                a54 = -212.0 / 729;
        static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                                a64 = 49.0 / 176, a65 = -5103.0 / 18656;
        static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                                b5 = -2187.0 / 6784, b6 = 11.0 / 84;
        static constexpr double e1 = 35.0 / 384 - 5179.0 / 57600, e3 = 500.0 / 1113 - 7571.0 / 16695,
                                e4 = 125.0 / 192 - 393.0 / 640, e5 = -2187.0 / 6784 + 92097.0 / 339200,
                                e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;
        const std::size_t n = x.size();
        eval(t, x, k1_);
        for (std::size_t i = 0; i < n; ++i) xs_[i] = x[i] + h * a21 * k1_[i];
        eval(t + h / 5.0, xs_, k2_);
        for (std::size_t i = 0; i < n; ++i) xs_[i] = x[i] + h * (a31 * k1_[i] + a32 * k2_[i]);
        eval(t + 3.0 * h / 10.0, xs_, k3_);
        for (std::size_t i = 0; i < n; ++i)
            xs_[i] = x[i] + h * (a41 * k1_[i] + a42 * k2_[i] + a43 * k3_[i]);
        eval(t + 4.0 * h / 5.0, xs_, k4_);
        for (std::size_t i = 0; i < n; ++i)
            xs_[i] = x[i] + h * (a51 * k1_[i] + a52 * k2_[i] + a53 * k3_[i] + a54 * k4_[i]);
        eval(t + 8.0 * h / 9.0, xs_, k5_);
        for (std::size_t i = 0; i < n; ++i)
            xs_[i] = x[i] + h * (a61 * k1_[i] + a62 * k2_[i] + a63 * k3_[i] + a64 * k4_[i] +
                                 a65 * k5_[i]);
        eval(t + h, xs_, k6_);
        x_new.resize(n);
        for (std::size_t i = 0; i < n; ++i)
            x_new[i] = x[i] + h * (b1 * k1_[i] + b3 * k3_[i] + b4 * k4_[i] + b5 * k5_[i] +
                                   b6 * k6_[i]);
        eval(t + h, x_new, k7_);
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double err = h * (e1 * k1_[i] + e3 * k3_[i] + e4 * k4_[i] + e5 * k5_[i] +
                                    e6 * k6_[i] + e7 * k7_[i]);
            const double scale = atol + rtol * std::max(std::abs(x[i]), std::abs(x_new[i]));
            acc += (err / scale) * (err / scale);
        }
        return std::sqrt(acc / static_cast<double>(n));
    }

private:
    static void axpy(std::span<const double> x, double a, const std::vector<double>& k,
                     std::vector<double>& out) {
        for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] + a * k[i];
    }

    const RhsFn& rhs_;
    const InputSignal& u_;
    std::vector<double> k1_, k2_, k3_, k4_, k5_, k6_, k7_, xs_, xerr_;
};

}  // namespace

Trajectory integrate(const RhsFn& rhs, std::span<const double> x0, const InputSignal& u,
                     const SolverConfig& cfg, const std::vector<Observer>& observers) {
    cfg.validate();
    if (x0.empty()) throw std::invalid_argument("integrate: empty initial state");

    Trajectory traj;
    Recorder rec(traj, observers);
    Stepper stepper(rhs, u, x0.size());

    std::vector<double> x(x0.begin(), x0.end());
    std::vector<double> x_new(x0.size());
    if (!all_finite(x)) abort_nonfinite(cfg.t0);
    rec.record(cfg.t0, u.eval(cfg.t0), x);

    const double horizon = cfg.t1 - cfg.t0;
    const double t_eps = 1e-12 * std::max(1.0, std::abs(cfg.t1));

    if (cfg.method == SolverConfig::Method::FixedRk4) {
        const auto n_steps = static_cast<long long>(std::ceil(horizon / cfg.dt - 1e-9));
        double t = cfg.t0;
        for (long long k = 0; k < n_steps; ++k) {
            const double t_next = (k + 1 == n_steps) ? cfg.t1 : cfg.t0 + (k + 1) * cfg.dt;
            stepper.rk4(t, x, t_next - t, x_new);
            x.swap(x_new);
            t = t_next;
            if (!all_finite(x)) abort_nonfinite(t);
            if ((k + 1) % cfg.record_stride == 0 || k + 1 == n_steps)
                rec.record(t, u.eval(t), x);
        }
        return traj;
    }

    // Adaptive Dormand-Prince 5(4).
    double t = cfg.t0;
    double h = std::clamp(cfg.dt, cfg.dt_min, cfg.dt_max);
    long long accepted = 0;
    long long attempts = 0;
    while (t < cfg.t1 - t_eps) {
        if (++attempts > 100'000'000)
            throw SolverError("integrate: step limit exceeded (100M attempts)");
        const bool clipped = t + h >= cfg.t1;
        if (clipped) h = cfg.t1 - t;
        const double err = stepper.dopri45(t, x, h, cfg.rtol, cfg.atol, x_new);
        const double grow =
            err > 0.0 ? std::min(5.0, std::max(0.2, 0.9 * std::pow(err, -0.2))) : 5.0;
        if (err <= 1.0) {
            t = clipped ? cfg.t1 : t + h;
            x.swap(x_new);
            if (!all_finite(x)) abort_nonfinite(t);
            ++accepted;
            if (accepted % cfg.record_stride == 0 || t >= cfg.t1 - t_eps)
                rec.record(t, u.eval(t), x);
            h = std::clamp(h * grow, cfg.dt_min, cfg.dt_max);
        } else {
            if (h <= cfg.dt_min * (1.0 + 1e-12)) {
                std::ostringstream os;
                os << "integrate: step size underflow at t = " << t << " (dt_min = " << cfg.dt_min
                   << ", scaled error = " << err << ")";
                throw SolverError(os.str());
            }
            h = std::clamp(h * grow, cfg.dt_min, cfg.dt_max);
        }
    }
    if (traj.t.back() < cfg.t1 - t_eps) rec.record(t, u.eval(t), x);
    return traj;
}

Trajectory simulate_model(const FrBDModel& m, const State& x0, const InputSignal& v,
                          const SolverConfig& cfg) {
    if (x0.size() != m.state_dim())
        throw std::invalid_argument("simulate_model: initial state dimension mismatch");
    RhsFn f = [&m](double, double u, std::span<const double> x, std::span<double> dxdt) {
        rhs(m, u, x, dxdt);
    };
    std::vector<Observer> obs;
    obs.push_back({"v", [](double, double u, std::span<const double>) { return u; }, false});
    obs.push_back(
        {"f", [&m](double, double, std::span<const double> x) { return bristle_force(m, x); },
         false});
    obs.push_back(
        {"pf", [&m](double, double, std::span<const double> x) { return friction_force(m, x); },
         false});
    obs.push_back(
        {"V", [&m](double, double, std::span<const double> x) { return storage(m, x); }, false});
    obs.push_back({"W_in",
                   [&m](double, double u, std::span<const double> x) {
                       return friction_force(m, x) * u;
                   },
                   true});
    return integrate(f, x0, v, cfg, obs);
}

PassivityAudit passivity_audit(const Trajectory& traj) {
    const auto& V = traj.channel("V");
    const auto& W = traj.channel("W_in");
    const std::size_t n = traj.size();
    if (V.size() != n || W.size() != n)
        throw std::invalid_argument("passivity_audit: channel length mismatch");
    if (n == 0) throw std::invalid_argument("passivity_audit: empty trajectory");

    double margin = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < n; ++k)
        margin = std::min(margin, W[k] - (V[k] - V[0]));

    double dt_max = 0.0;
    for (std::size_t k = 1; k < n; ++k) dt_max = std::max(dt_max, traj.t[k] - traj.t[k - 1]);
    const double horizon = n > 1 ? traj.t.back() - traj.t.front() : 0.0;

    double max_pfv = 0.0;
    if (traj.has_channel("pf") && traj.has_channel("v")) {
        const auto& pf = traj.channel("pf");
        const auto& vc = traj.channel("v");
        for (std::size_t k = 0; k < n; ++k) max_pfv = std::max(max_pfv, std::abs(pf[k] * vc[k]));
    } else {
        for (std::size_t k = 1; k < n; ++k)
            max_pfv = std::max(max_pfv, std::abs((W[k] - W[k - 1]) / (traj.t[k] - traj.t[k - 1])));
    }

    PassivityAudit audit;
    audit.tol_num = std::max(dt_max * dt_max * horizon * max_pfv, 1e-18);
    audit.margin = margin;
    audit.certified = margin >= -audit.tol_num;
    return audit;
}

BoundednessAudit boundedness_audit(const Trajectory& traj, double v_bound) {
    const auto& V = traj.channel("V");
    const std::size_t n = traj.size();
    if (n == 0) throw std::invalid_argument("boundedness_audit: empty trajectory");

    BoundednessAudit audit;
    audit.storage_initial = V[0];
    audit.sup_storage = 0.0;
    audit.finite = true;
    const double t_mid = 0.5 * (traj.t.front() + traj.t.back());
    audit.trailing_max = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        if (!std::isfinite(V[k]) || !all_finite(traj.states[k])) audit.finite = false;
        audit.sup_storage = std::max(audit.sup_storage, V[k]);
        if (traj.t[k] >= t_mid) audit.trailing_max = std::max(audit.trailing_max, V[k]);
    }

    audit.input_sup = std::numeric_limits<double>::quiet_NaN();
    audit.input_within_bound = true;
    if (traj.has_channel("v")) {
        audit.input_sup = 0.0;
        for (double v : traj.channel("v")) audit.input_sup = std::max(audit.input_sup, std::abs(v));
        audit.input_within_bound = audit.input_sup <= v_bound * (1.0 + 1e-12);
    }

    const double bound = 10.0 * std::max(audit.storage_initial, audit.trailing_max) + 1e-15;
    audit.bounded = audit.finite && audit.sup_storage <= bound;
    return audit;
}

}  // namespace frbd
