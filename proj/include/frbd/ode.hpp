#pragma once

#include <functional>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "frbd/model.hpp"

namespace frbd {

/// Thrown when an integration cannot proceed (step-size underflow or a
/// non-finite state).
class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SolverConfig {
    enum class Method { FixedRk4, AdaptiveRk45 };

    Method method = Method::FixedRk4;
    double dt = 1e-5;  // fixed-step size [s]

    // Adaptive controller settings.
    double rtol = 1e-8;
    double atol = 1e-10;
    double dt_min = 1e-12;
    double dt_max = 1e-2;

    double t0 = 0.0;
    double t1 = 1.0;

    /// Record every k-th accepted step (the first and last samples are
    /// always kept). Cumulative channels are accumulated on the recorded
    /// grid, so the passivity tolerance scales with the recording interval.
    int record_stride = 1;

    void validate() const;
};

/// Scalar input u(t), defined for all t (sampled signals clamp at the ends).
class InputSignal {
public:
    static InputSignal constant(double v);
    static InputSignal sinusoid(double bias, double amplitude, double freq_hz, double phase = 0.0);
    /// Piecewise-linear interpolation through (times, values); times must be
    /// strictly increasing. Evaluation outside [times.front(), times.back()]
    /// returns the boundary value.
    static InputSignal sampled(std::vector<double> times, std::vector<double> values);
    /// Pointwise sum of the parts.
    static InputSignal sum(std::vector<InputSignal> parts);

    double operator()(double t) const { return eval(t); }
    double eval(double t) const;

private:
    InputSignal() = default;

    struct Constant {
        double v;
    };
    struct Sinusoid {
        double bias, amplitude, omega, phase;
    };
    struct Sampled {
        std::vector<double> t, v;
    };
    struct Composite {
        std::shared_ptr<const std::vector<InputSignal>> parts;
    };

    std::variant<Constant, Sinusoid, Sampled, Composite> impl_{Constant{0.0}};
};

/// Time-stamped record of an integration: states plus named scalar channels
/// (all vectors share the sample grid).
struct Trajectory {
    std::vector<double> t;
    std::vector<std::vector<double>> states;
    std::vector<std::string> channel_names;
    std::vector<std::vector<double>> channel_values;

    std::size_t size() const { return t.size(); }
    bool has_channel(std::string_view name) const;
    const std::vector<double>& channel(std::string_view name) const;
    std::vector<double>& add_channel(std::string name);
};

/// A scalar recorded alongside the state. With `cumulative` set the channel
/// stores the running trapezoid integral of eval over the recorded samples
/// (starting at 0), e.g. W_in[k] for the integrand p f v.
struct Observer {
    std::string name;
    std::function<double(double t, double u, std::span<const double> x)> eval;
    bool cumulative = false;
};

using RhsFn = std::function<void(double t, double u, std::span<const double> x, std::span<double> dxdt)>;

/// Integrate x' = rhs(t, u(t), x) over cfg's time span.
///
/// FixedRk4 takes classical 4-stage steps of size cfg.dt (the final step is
/// clipped to land on t1). AdaptiveRk45 uses the Dormand-Prince 5(4)
/// embedded pair; a step is accepted when the scaled error
///   err = rms( e_i / (atol + rtol*max(|x_i|, |x_new_i|)) )
/// is <= 1, and the next step is dt * min(5, max(0.2, 0.9 * err^(-1/5))),
/// clamped to [dt_min, dt_max]. A rejected step at dt_min aborts.
Trajectory integrate(const RhsFn& rhs, std::span<const double> x0, const InputSignal& u,
                     const SolverConfig& cfg, const std::vector<Observer>& observers = {});

/// Integrate a friction model driven by velocity input v(t), recording the
/// standard channels: v, f, pf, V, and W_in (cumulative trapezoid of p f v).
Trajectory simulate_model(const FrBDModel& m, const State& x0, const InputSignal& v,
                          const SolverConfig& cfg);

struct PassivityAudit {
    double margin;    // min_k W_in[k] - (V[k] - V[0])  [J]
    double tol_num;   // quadrature bound dt_rec^2 * T * max|pfv|  [J]
    bool certified;   // margin >= -tol_num
};

/// Executable passivity check over a recorded trajectory. Requires the V and
/// W_in channels; max|pfv| is taken from the pf and v channels when present,
/// otherwise from the W_in increments.
PassivityAudit passivity_audit(const Trajectory& traj);

struct BoundednessAudit {
    double storage_initial;   // V[0]
    double sup_storage;       // sup over all samples
    double trailing_max;      // max V over the trailing half (attractor bound)
    double input_sup;         // max |v| over the run (NaN if no v channel)
    bool input_within_bound;  // input_sup <= v_bound (true if no v channel)
    bool finite;              // every recorded state entry and V finite
    bool bounded;             // finite and sup <= 10 * max(V[0], trailing_max)
};

/// Empirical form of the boundedness result: all samples finite and the
/// storage never exceeds (a factor-10 slack on) the larger of its initial
/// value and the observed attractor bound.
BoundednessAudit boundedness_audit(const Trajectory& traj, double v_bound);

/// Linear interpolation of ys over the strictly increasing grid ts, clamped
/// at the ends.
double interp_linear(std::span<const double> ts, std::span<const double> ys, double t);

}  // namespace frbd
