#pragma once

#include <span>
#include <utility>
#include <vector>

#include "frbd/model.hpp"
#include "frbd/ode.hpp"

namespace frbd {

/// Pre-sliding hysteresis setup: a mass driven by a sinusoidal external
/// force whose amplitude is a fraction of the breakaway force, with the
/// friction element reacting to the mass velocity. Zero initial conditions.
struct PreSlidingConfig {
    double mass = 1.0;             // [kg]
    double force_ratio = 0.9;      // amplitude / breakaway force, in (0, 1)
    std::vector<double> freqs_hz;  // excitation frequencies
    int cycles = 5;                // cycles simulated per frequency
    FrBDModel model;
    SolverConfig solver;           // t0/t1 are derived per frequency

    void validate() const;
};

/// Frictional-lag setup: the velocity v(t) = v_bias + v_amp sin(2 pi w t)
/// is imposed directly on the friction element (no mass). Unidirectional:
/// v_bias > v_amp >= 0.
struct LagConfig {
    double v_bias = 0.05;          // [m/s]
    double v_amp = 0.045;          // [m/s]
    std::vector<double> freqs_hz;
    int cycles = 5;
    FrBDModel model;
    SolverConfig solver;

    void validate() const;
};

struct LoopMetrics {
    double area;          // signed shoelace area of the closed loop
    double peak_force;    // max ordinate over the loop
    double width_at_mid;  // loop thickness at the mid abscissa
};

/// Peak static friction force p * mu_s [N] (p * mu for a constant law).
double breakaway_force(const FrBDModel& m);

/// One trajectory per frequency, with channels x, v, f, pf, V, W_in.
std::vector<Trajectory> run_presliding(const PreSlidingConfig& cfg);

struct LagResult {
    double freq_hz;
    Trajectory traj;                                // channels v, f, pf, V, W_in
    std::vector<std::pair<double, double>> loop;    // (v, pf) over the final cycle
    LoopMetrics metrics;
};

std::vector<LagResult> run_frictional_lag(const LagConfig& cfg);

/// Signed shoelace area of the polygon through the points (the final point
/// is joined back to the first). Counter-clockwise loops are positive.
double loop_area(std::span<const std::pair<double, double>> loop);

/// Points of the final full cycle (t in [t_end - 1/freq, t_end]) in the
/// (abscissa, ordinate) plane of the named channels.
std::vector<std::pair<double, double>> final_cycle_loop(const Trajectory& traj, double freq_hz,
                                                        std::string_view abscissa,
                                                        std::string_view ordinate);

/// Loop metrics of a closed (abscissa, ordinate) cycle.
LoopMetrics compute_loop_metrics(std::span<const std::pair<double, double>> loop);

}  // namespace frbd
