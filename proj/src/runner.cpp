#include "frbd/runner.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <sstream>

#include "frbd/arm.hpp"
#include "frbd/calibration.hpp"
#include "frbd/config.hpp"
#include "frbd/csv.hpp"
#include "frbd/experiments.hpp"
#include "frbd/version.hpp"

namespace frbd {

double dissipation_rate_chain_rule(const FrBDModel& m, std::span<const double> x, double v) {
    std::vector<double> dxdt(x.size());
    rhs(m, v, x, dxdt);
    const double p = m.normal_force;
    double acc = 0.0;
    if (m.is_gm()) {
        const auto& gm = m.gm();
        acc += p * gm.k0 * x[0] * dxdt[0];
        for (std::size_t i = 0; i < gm.n(); ++i)
            acc += p * x[1 + i] * dxdt[1 + i] / gm.branches[i].k;
        return acc;
    }
    const auto& gkv = m.gkv();
    double z0 = x[0];
    for (std::size_t i = 0; i < gkv.n(); ++i) z0 -= x[1 + i];
    // dV/dz = p k0 z0, dV/dz_i = -p k0 z0 + p k_i z_i.
    acc += p * gkv.k0 * z0 * dxdt[0];
    for (std::size_t i = 0; i < gkv.n(); ++i)
        acc += (-p * gkv.k0 * z0 + p * gkv.branches[i].k * x[1 + i]) * dxdt[1 + i];
    return acc;
}

double dissipation_identity_max_relerr(const FrBDModel& m, Rng& rng, int samples) {
    double worst = 0.0;
    std::vector<double> x(m.state_dim());
    for (int s = 0; s < samples; ++s) {
        for (auto& xi : x) xi = rng.uniform(-2.0, 2.0);
        const double v = rng.uniform(-5.0, 5.0);
        const double closed = dissipation_rate(m, x, v);
        const double chain = dissipation_rate_chain_rule(m, x, v);
        std::vector<double> dxdt(x.size());
        rhs(m, v, x, dxdt);
        double scale = std::abs(supplied_power(m, x, v)) + 1e-300;
        // Sum of chain-rule term magnitudes keeps the denominator honest
        // when the total nearly cancels.
        const double p = m.normal_force;
        if (m.is_gm()) {
            const auto& gm = m.gm();
            scale += std::abs(p * gm.k0 * x[0] * dxdt[0]);
            for (std::size_t i = 0; i < gm.n(); ++i)
                scale += std::abs(p * x[1 + i] * dxdt[1 + i] / gm.branches[i].k);
        } else {
            const auto& gkv = m.gkv();
            double z0 = x[0];
            for (std::size_t i = 0; i < gkv.n(); ++i) z0 -= x[1 + i];
            scale += std::abs(p * gkv.k0 * z0 * dxdt[0]);
            for (std::size_t i = 0; i < gkv.n(); ++i)
                scale += std::abs((-p * gkv.k0 * z0 + p * gkv.branches[i].k * x[1 + i]) *
                                  dxdt[1 + i]);
        }
        worst = std::max(worst, std::abs(closed - chain) / scale);
    }
    return worst;
}

AuditReport audit_model_run(const FrBDModel& m, std::span<const Trajectory> trajectories,
                            std::uint64_t seed) {
    AuditReport report;
    report.passivity_margin = std::numeric_limits<double>::infinity();
    report.passivity_pass = true;
    report.boundedness_pass = true;
    for (const auto& traj : trajectories) {
        const PassivityAudit pa = passivity_audit(traj);
        if (pa.margin - (-pa.tol_num) <
            report.passivity_margin - (-report.passivity_tol)) {
            report.passivity_margin = pa.margin;
            report.passivity_tol = pa.tol_num;
        }
        report.passivity_pass = report.passivity_pass && pa.certified;

        double v_bound = 0.0;
        if (traj.has_channel("v"))
            for (double v : traj.channel("v")) v_bound = std::max(v_bound, std::abs(v));
        const BoundednessAudit ba = boundedness_audit(traj, v_bound);
        report.boundedness_sup_storage =
            std::max(report.boundedness_sup_storage, ba.sup_storage);
        report.boundedness_pass = report.boundedness_pass && ba.bounded;
    }
    Rng rng(seed);
    report.dissipation_max_relerr = dissipation_identity_max_relerr(m, rng, 256);
    report.dissipation_pass = report.dissipation_max_relerr < 1e-10;
    return report;
}

namespace {

namespace fs = std::filesystem;

std::vector<std::string> split_words(const std::string& raw) {
    std::vector<std::string> out;
    std::stringstream ss(raw);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        const auto b = cell.find_first_not_of(" \t");
        if (b == std::string::npos) continue;
        const auto e = cell.find_last_not_of(" \t");
        out.push_back(cell.substr(b, e - b + 1));
    }
    return out;
}

int fail_validation(const std::vector<std::string>& errors) {
    std::cerr << "configuration errors:\n";
    for (const auto& e : errors) std::cerr << "  " << e << "\n";
    return kExitValidation;
}

void write_meta(const fs::path& out_dir, const std::string& command, const ParsedConfig& cfg,
                const SolverConfig& solver, std::uint64_t seed) {
    std::vector<std::pair<std::string, std::string>> entries;
    entries.emplace_back("meta.command", command);
    entries.emplace_back("meta.version", FRBD_VERSION);
    entries.emplace_back("meta.config_hash", fnv1a_hex(cfg.raw));
    entries.emplace_back("meta.seed", std::to_string(seed));
    entries.emplace_back("meta.solver_method",
                         solver.method == SolverConfig::Method::FixedRk4 ? "rk4" : "rk45");
    entries.emplace_back("meta.solver_dt", format_double(solver.dt));
    entries.emplace_back("meta.solver_rtol", format_double(solver.rtol));
    entries.emplace_back("meta.solver_atol", format_double(solver.atol));
    entries.emplace_back("meta.solver_t0", format_double(solver.t0));
    entries.emplace_back("meta.solver_t1", format_double(solver.t1));
    entries.emplace_back("meta.record_stride", std::to_string(solver.record_stride));
    write_report(out_dir / "run_meta.cfg", entries);
}

void append_audit_entries(std::vector<std::pair<std::string, std::string>>& entries,
                          const AuditReport& report) {
    entries.emplace_back("audit.passivity_margin", format_double(report.passivity_margin));
    entries.emplace_back("audit.passivity_tol", format_double(report.passivity_tol));
    entries.emplace_back("audit.passivity_pass", report.passivity_pass ? "true" : "false");
    entries.emplace_back("audit.boundedness_sup_storage",
                         format_double(report.boundedness_sup_storage));
    entries.emplace_back("audit.boundedness_pass", report.boundedness_pass ? "true" : "false");
    entries.emplace_back("audit.dissipation_max_relerr",
                         format_double(report.dissipation_max_relerr));
    entries.emplace_back("audit.dissipation_pass", report.dissipation_pass ? "true" : "false");
}

std::vector<std::string> state_column_names(const FrBDModel& m) {
    std::vector<std::string> cols{"z"};
    for (std::size_t i = 0; i < m.n_branches(); ++i) cols.push_back("b" + std::to_string(i + 1));
    return cols;
}

// Expose the state entries as channels so they can be emitted as columns.
void add_state_channels(Trajectory& traj, const std::vector<std::string>& names,
                        std::size_t offset = 0) {
    for (std::size_t i = 0; i < names.size(); ++i) {
        auto& col = traj.add_channel(names[i]);
        col.reserve(traj.size());
        for (const auto& x : traj.states) col.push_back(x[offset + i]);
    }
}

InputSignal input_from_config(ConfigReader& reader) {
    const std::string kind = reader.word("input.kind", "constant");
    if (kind == "constant") {
        return InputSignal::constant(reader.number("input.v", 0.1));
    }
    if (kind == "sinusoid") {
        return InputSignal::sinusoid(
            reader.number("input.bias", 0.0), reader.number("input.amplitude", 0.1),
            reader.number("input.freq", 1.0), reader.number("input.phase", 0.0));
    }
    if (kind == "sampled") {
        const std::string file = reader.require_word("input.file");
        if (!reader.ok()) return InputSignal::constant(0.0);
        try {
            const CsvTable table = read_csv(file);
            return InputSignal::sampled(table.column("t"), table.column("v"));
        } catch (const std::exception& e) {
            reader.error(std::string("input.file: ") + e.what());
            return InputSignal::constant(0.0);
        }
    }
    reader.error("input.kind: unknown kind '" + kind + "' (constant | sinusoid | sampled)");
    return InputSignal::constant(0.0);
}

int cmd_simulate(const ParsedConfig& cfg, const RunOptions& opts) {
    ConfigReader reader(cfg);
    const FrBDModel model = model_from_config(reader);
    const SolverConfig solver = solver_from_config(reader, 1.0);
    const InputSignal input = input_from_config(reader);
    const std::string x0_policy = reader.word("simulate.x0", "zero");
    if (x0_policy != "zero" && x0_policy != "steady")
        reader.error("simulate.x0: expected zero or steady");
    reader.finish();
    if (!reader.ok()) return fail_validation(reader.errors());

    State x0(model.state_dim(), 0.0);
    if (x0_policy == "steady") x0 = steady_state(model, input.eval(solver.t0)).x;

    Trajectory traj;
    try {
        traj = simulate_model(model, x0, input, solver);
    } catch (const SolverError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    }
    add_state_channels(traj, state_column_names(model));

    std::vector<std::string> cols{"t", "v", "f", "pf", "V", "W_in"};
    for (const auto& c : state_column_names(model)) cols.push_back(c);
    write_csv(opts.out_dir / "simulate.csv", traj, cols);

    const AuditReport report = audit_model_run(model, {&traj, 1}, opts.seed);
    std::vector<std::pair<std::string, std::string>> entries;
    append_audit_entries(entries, report);
    write_report(opts.out_dir / "audit_report.cfg", entries);
    write_meta(opts.out_dir, "simulate", cfg, solver, opts.seed);
    return report.pass() ? kExitOk : kExitAuditFailure;
}

int cmd_steady_sweep(const ParsedConfig& cfg, const RunOptions& opts) {
    ConfigReader reader(cfg);
    const FrBDModel model = model_from_config(reader);
    SolverConfig solver;  // unused; sweep is closed form
    const double v_min = reader.number("sweep.v_min", -1.0);
    const double v_max = reader.number("sweep.v_max", 1.0);
    const int count = reader.integer("sweep.count", 101);
    if (count < 2) reader.error("sweep.count: need at least 2 points");
    if (!(v_max > v_min)) reader.error("sweep.v_max: must exceed sweep.v_min");
    reader.finish();
    if (!reader.ok()) return fail_validation(reader.errors());

    Trajectory sweep;  // reuse the channel container for the sweep table
    sweep.add_channel("v");
    sweep.add_channel("mu");
    sweep.add_channel("f");
    sweep.add_channel("pf");
    const auto state_cols = state_column_names(model);
    for (const auto& c : state_cols) sweep.add_channel(c);
    for (int i = 0; i < count; ++i) {
        const double v = v_min + (v_max - v_min) * i / (count - 1);
        const SteadyState ss = steady_state(model, v);
        sweep.t.push_back(v);
        sweep.states.emplace_back();
        sweep.channel_values[0].push_back(v);
        sweep.channel_values[1].push_back(model.law.eval(v));
        sweep.channel_values[2].push_back(ss.f);
        sweep.channel_values[3].push_back(model.normal_force * ss.f);
        for (std::size_t j = 0; j < state_cols.size(); ++j)
            sweep.channel_values[4 + j].push_back(ss.x[j]);
    }
    std::vector<std::string> cols{"v", "mu", "f", "pf"};
    for (const auto& c : state_cols) cols.push_back(c);
    write_csv(opts.out_dir / "steady_sweep.csv", sweep, cols);
    write_meta(opts.out_dir, "steady-sweep", cfg, solver, opts.seed);
    return kExitOk;
}

int cmd_presliding(const ParsedConfig& cfg, const RunOptions& opts) {
    ConfigReader reader(cfg);
    PreSlidingConfig pc;
    pc.model = model_from_config(reader);
    pc.solver = solver_from_config(reader, 1.0);
    pc.mass = reader.number("presliding.mass", 1.0);
    pc.force_ratio = reader.number("presliding.force_ratio", 0.9);
    pc.freqs_hz = reader.number_list("presliding.freqs", {1.0, 5.0, 10.0});
    pc.cycles = reader.integer("presliding.cycles", 5);
    reader.finish();
    try {
        pc.validate();
    } catch (const std::invalid_argument& e) {
        reader.error(e.what());
    }
    if (!reader.ok()) return fail_validation(reader.errors());

    std::vector<Trajectory> trajectories;
    try {
        trajectories = run_presliding(pc);
    } catch (const SolverError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    }

    std::vector<std::pair<std::string, std::string>> entries;
    const std::vector<std::string> cols{"t", "x", "v", "f", "pf", "V", "W_in"};
    for (std::size_t i = 0; i < trajectories.size(); ++i) {
        const double freq = pc.freqs_hz[i];
        const Trajectory& traj = trajectories[i];
        write_csv(opts.out_dir / ("presliding_" + format_double(freq) + "Hz.csv"), traj, cols);

        // Loop-closure diagnostics over the final cycle.
        const auto& t = traj.t;
        const auto& x = traj.channel("x");
        const double t_end = t.back();
        const double x_end = x.back();
        const double x_prev = interp_linear(t, x, t_end - 1.0 / freq);
        double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
        for (std::size_t k = 0; k < t.size(); ++k) {
            if (t[k] < t_end - 1.0 / freq) continue;
            x_lo = std::min(x_lo, x[k]);
            x_hi = std::max(x_hi, x[k]);
        }
        double sup_xdot = 0.0;
        for (double v : traj.channel("v")) sup_xdot = std::max(sup_xdot, std::abs(v));

        const std::string prefix = "presliding.f" + std::to_string(i + 1);
        entries.emplace_back(prefix + ".freq_hz", format_double(freq));
        entries.emplace_back(prefix + ".drift_per_cycle", format_double(std::abs(x_end - x_prev)));
        entries.emplace_back(prefix + ".loop_width", format_double(x_hi - x_lo));
        entries.emplace_back(prefix + ".drift_ratio",
                             format_double(std::abs(x_end - x_prev) / (x_hi - x_lo)));
        entries.emplace_back(prefix + ".sup_xdot", format_double(sup_xdot));
    }
    const AuditReport report = audit_model_run(pc.model, trajectories, opts.seed);
    append_audit_entries(entries, report);
    write_report(opts.out_dir / "presliding_report.cfg", entries);
    write_meta(opts.out_dir, "presliding", cfg, pc.solver, opts.seed);
    return report.pass() ? kExitOk : kExitAuditFailure;
}

int cmd_lag(const ParsedConfig& cfg, const RunOptions& opts) {
    ConfigReader reader(cfg);
    LagConfig lc;
    lc.model = model_from_config(reader);
    lc.solver = solver_from_config(reader, 1.0);
    lc.v_bias = reader.number("lag.v_bias", 0.05);
    lc.v_amp = reader.number("lag.v_amp", 0.045);
    lc.freqs_hz = reader.number_list("lag.freqs", {25.0, 50.0, 100.0});
    lc.cycles = reader.integer("lag.cycles", 5);
    reader.finish();
    try {
        lc.validate();
    } catch (const std::invalid_argument& e) {
        reader.error(e.what());
    }
    if (!reader.ok()) return fail_validation(reader.errors());

    std::vector<LagResult> results;
    try {
        results = run_frictional_lag(lc);
    } catch (const SolverError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    }

    const std::vector<std::string> cols{"t", "v", "f", "pf", "V", "W_in"};
    std::string metrics = "freq_hz,area,abs_area,peak_pf,width_at_mid\n";
    std::vector<Trajectory> trajectories;
    for (const auto& r : results) {
        write_csv(opts.out_dir / ("lag_" + format_double(r.freq_hz) + "Hz.csv"), r.traj, cols);
        metrics += format_double(r.freq_hz) + "," + format_double(r.metrics.area) + "," +
                   format_double(std::abs(r.metrics.area)) + "," +
                   format_double(r.metrics.peak_force) + "," +
                   format_double(r.metrics.width_at_mid) + "\n";
        trajectories.push_back(r.traj);
    }
    write_text_atomic(opts.out_dir / "lag_metrics.csv", metrics);

    const AuditReport report = audit_model_run(lc.model, trajectories, opts.seed);
    std::vector<std::pair<std::string, std::string>> entries;
    append_audit_entries(entries, report);
    write_report(opts.out_dir / "audit_report.cfg", entries);
    write_meta(opts.out_dir, "lag", cfg, lc.solver, opts.seed);
    return report.pass() ? kExitOk : kExitAuditFailure;
}

int cmd_arm(const ParsedConfig& cfg, const RunOptions& opts) {
    ConfigReader reader(cfg);
    FrBDModel friction = model_from_config(reader);
    const SolverConfig solver = solver_from_config(reader, 20.0);

    const double inertia_j = reader.number("arm.inertia", 1.0);
    const double pend_mass = reader.number("arm.pend_mass", 1.0);
    const double pend_length = reader.number("arm.pend_length", 0.5);
    const double g0 = reader.number("arm.gravity", 9.81);
    const double c0 = reader.number("arm.coriolis_c0", 0.0);
    const double radius = reader.number("arm.radius", 0.05);
    ControllerGains gains{reader.number("arm.lambda", 5.0), reader.number("arm.k1", 10.0),
                          reader.number("arm.k2", 100.0)};
    const std::string ref_kind = reader.word("arm.ref", "sinusoid");
    const double ref_amp = reader.number("arm.ref_amp", 0.5);
    const double ref_freq = reader.number("arm.ref_freq", 0.5);
    const double ref_phase = reader.number("arm.ref_phase", 0.0);
    const double ref_offset = reader.number("arm.ref_offset", 0.0);
    ClosedLoopIc ic;
    ic.q0 = reader.number("arm.q0", 0.0);
    ic.qd0 = reader.number("arm.qd0", 0.0);
    const double zhat0 = reader.number("arm.zhat0", 0.0);
    reader.finish();

    if (ref_kind != "sinusoid" && ref_kind != "constant")
        reader.error("arm.ref: expected sinusoid or constant");
    std::optional<ArmPlant> plant;
    try {
        plant = ArmPlant::pendulum(inertia_j, pend_mass, pend_length, g0, c0, radius,
                                   std::move(friction));
        gains.validate();
    } catch (const std::invalid_argument& e) {
        reader.error(e.what());
    }
    if (!reader.ok()) return fail_validation(reader.errors());

    ic.observer0.assign(plant->friction.state_dim(), 0.0);
    ic.observer0[0] = zhat0;
    const ReferenceSignal ref = ref_kind == "sinusoid"
                                    ? ReferenceSignal::sinusoid(ref_amp, ref_freq, ref_phase,
                                                                ref_offset)
                                    : ReferenceSignal::constant(ref_offset);

    Trajectory traj;
    try {
        traj = run_tracking(*plant, ref, gains, solver, ic);
    } catch (const SolverError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    }

    write_csv(opts.out_dir / "arm.csv", traj,
              {"t", "q", "qd", "q_ref", "q_tilde", "s", "F", "F_hat", "F_tilde", "int_s2",
               "V_obs", "int_Fts"});

    // Observer-branch passivity: int F_tilde s dtau >= -V_obs(0) throughout.
    const auto& int_fts = traj.channel("int_Fts");
    const auto& v_obs = traj.channel("V_obs");
    double obs_margin = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < traj.size(); ++k)
        obs_margin = std::min(obs_margin, int_fts[k] + v_obs[0]);
    double dt_rec = 0.0;
    for (std::size_t k = 1; k < traj.size(); ++k)
        dt_rec = std::max(dt_rec, traj.t[k] - traj.t[k - 1]);
    double max_fts = 0.0;
    const auto& f_tilde = traj.channel("F_tilde");
    const auto& s_chan = traj.channel("s");
    for (std::size_t k = 0; k < traj.size(); ++k)
        max_fts = std::max(max_fts, std::abs(f_tilde[k] * s_chan[k]));
    const double obs_tol =
        std::max(dt_rec * dt_rec * (traj.t.back() - traj.t.front()) * max_fts, 1e-18);

    const double q_tilde_final = std::abs(traj.channel("q_tilde").back());
    std::vector<std::pair<std::string, std::string>> entries;
    entries.emplace_back("arm.q_tilde_final", format_double(q_tilde_final));
    entries.emplace_back("arm.int_s2_total", format_double(traj.channel("int_s2").back()));
    entries.emplace_back("arm.observer_passivity_margin", format_double(obs_margin));
    entries.emplace_back("arm.observer_passivity_tol", format_double(obs_tol));
    const bool obs_pass = obs_margin >= -obs_tol;
    entries.emplace_back("arm.observer_passivity_pass", obs_pass ? "true" : "false");
    write_report(opts.out_dir / "audit_report.cfg", entries);
    write_meta(opts.out_dir, "arm", cfg, solver, opts.seed);
    return obs_pass ? kExitOk : kExitAuditFailure;
}

int cmd_calibrate(const ParsedConfig& cfg, const RunOptions& opts) {
    ConfigReader reader(cfg);
    FitProblem problem;
    problem.initial = model_from_config(reader);
    const SolverConfig solver = solver_from_config(reader, 1.0);
    problem.dt = solver.dt;
    const std::string data_path = reader.require_word("calibrate.data");
    const std::string free_raw = reader.require_word("calibrate.free");
    problem.free_params = split_words(free_raw);
    const std::string x0_policy = reader.word("calibrate.x0_policy", "steady_first");
    if (x0_policy == "zero") {
        problem.x0_policy = FitProblem::InitPolicy::ZeroState;
    } else if (x0_policy == "steady_first") {
        problem.x0_policy = FitProblem::InitPolicy::SteadyStateAtFirstSample;
    } else {
        reader.error("calibrate.x0_policy: expected zero or steady_first");
    }
    for (const auto& name : problem.free_params) {
        const auto lo = reader.number_opt("calibrate.lo." + name);
        const auto hi = reader.number_opt("calibrate.hi." + name);
        if (lo && hi) problem.bounds[name] = {*lo, *hi};
        else if (lo || hi)
            reader.error("calibrate: bounds for '" + name + "' need both lo and hi");
    }
    reader.finish();
    if (reader.ok()) {
        try {
            const CsvTable table = read_csv(data_path);
            problem.data.t = table.column("t");
            problem.data.v = table.column("v");
            problem.data.pf = table.column("pf");
            problem.validate();
        } catch (const std::exception& e) {
            reader.error(std::string("calibrate.data: ") + e.what());
        }
    }
    if (!reader.ok()) return fail_validation(reader.errors());

    FitResult result;
    try {
        result = fit(problem);
    } catch (const SolverError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    }

    std::vector<std::pair<std::string, std::string>> entries;
    for (const auto& [name, value] : result.params)
        entries.emplace_back("fit." + name, format_double(value));
    entries.emplace_back("fit.rmse", format_double(result.rmse));
    entries.emplace_back("fit.iterations", std::to_string(result.iterations));
    entries.emplace_back("fit.converged", result.converged ? "true" : "false");
    for (const auto& [name, value] : result.covariance_proxy)
        entries.emplace_back("fit.cov." + name, format_double(value));
    write_report(opts.out_dir / "fit_report.cfg", entries);
    write_meta(opts.out_dir, "calibrate", cfg, solver, opts.seed);
    return kExitOk;
}

int cmd_audit(const ParsedConfig& cfg, const RunOptions& opts) {
    ConfigReader reader(cfg);
    const FrBDModel model = model_from_config(reader);
    const SolverConfig solver = solver_from_config(reader, 1.0);
    const std::string traj_path = reader.require_word("audit.trajectory");
    reader.finish();

    Trajectory traj;
    if (reader.ok()) {
        try {
            const CsvTable table = read_csv(traj_path);
            traj.t = table.column("t");
            traj.states.resize(traj.t.size());
            for (std::size_t c = 0; c < table.header.size(); ++c) {
                if (table.header[c] == "t") continue;
                traj.add_channel(table.header[c]) = table.columns[c];
            }
            if (!traj.has_channel("V") || !traj.has_channel("W_in"))
                reader.error("audit.trajectory: file must carry V and W_in columns");
        } catch (const std::exception& e) {
            reader.error(std::string("audit.trajectory: ") + e.what());
        }
    }
    if (!reader.ok()) return fail_validation(reader.errors());

    const AuditReport report = audit_model_run(model, {&traj, 1}, opts.seed);
    std::vector<std::pair<std::string, std::string>> entries;
    append_audit_entries(entries, report);
    write_report(opts.out_dir / "audit_report.cfg", entries);
    write_meta(opts.out_dir, "audit", cfg, solver, opts.seed);
    return report.pass() ? kExitOk : kExitAuditFailure;
}

}  // namespace

int run_command(const std::string& command, const RunOptions& opts) {
    ParsedConfig cfg;
    try {
        cfg = parse_config_file(opts.config_path);
    } catch (const std::invalid_argument& e) {
        std::cerr << e.what() << "\n";
        return kExitValidation;
    }
    std::error_code ec;
    std::filesystem::create_directories(opts.out_dir, ec);

    if (command == "simulate") return cmd_simulate(cfg, opts);
    if (command == "steady-sweep") return cmd_steady_sweep(cfg, opts);
    if (command == "presliding") return cmd_presliding(cfg, opts);
    if (command == "lag") return cmd_lag(cfg, opts);
    if (command == "arm") return cmd_arm(cfg, opts);
    if (command == "calibrate") return cmd_calibrate(cfg, opts);
    if (command == "audit") return cmd_audit(cfg, opts);
    std::cerr << "unknown command '" << command << "'\n";
    return kExitValidation;
}

}  // namespace frbd
