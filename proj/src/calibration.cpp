#include "frbd/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Dense>

namespace frbd {

namespace {

std::string branch_name(const char* stem, std::size_t i) {
    return std::string(stem) + std::to_string(i + 1);
}

}  // namespace

std::vector<std::string> model_param_names(const FrBDModel& m) {
    std::vector<std::string> names{"k0"};
    const std::size_t n = m.n_branches();
    for (std::size_t i = 0; i < n; ++i) names.push_back(branch_name("k", i));
    for (std::size_t i = 0; i < n; ++i)
        names.push_back(branch_name(m.is_gm() ? "tau" : "c", i));
    if (m.law.kind() == FrictionLaw::Kind::Stribeck) {
        names.insert(names.end(), {"mu_d", "mu_s", "v_s", "delta"});
    } else {
        names.push_back("mu");
    }
    return names;
}

double get_param(const FrBDModel& m, const std::string& name) {
    const std::size_t n = m.n_branches();
    for (std::size_t i = 0; i < n; ++i) {
        if (name == branch_name("k", i))
            return m.is_gm() ? m.gm().branches[i].k : m.gkv().branches[i].k;
        if (m.is_gm() && name == branch_name("tau", i)) return m.gm().branches[i].tau;
        if (!m.is_gm() && name == branch_name("c", i)) return m.gkv().branches[i].c;
    }
    if (name == "k0") return m.is_gm() ? m.gm().k0 : m.gkv().k0;
    if (m.law.kind() == FrictionLaw::Kind::Stribeck) {
        if (name == "mu_d") return m.law.mu_d();
        if (name == "mu_s") return m.law.mu_s();
        if (name == "v_s") return m.law.v_stribeck();
        if (name == "delta") return m.law.delta();
    } else if (name == "mu") {
        return m.law.mu_d();
    }
    throw std::invalid_argument("get_param: unknown parameter '" + name + "'");
}

FrBDModel with_params(const FrBDModel& m, const std::map<std::string, double>& values) {
    const std::size_t n = m.n_branches();
    std::map<std::string, double> all;
    for (const auto& name : model_param_names(m)) all[name] = get_param(m, name);
    for (const auto& [name, value] : values) {
        if (!all.count(name))
            throw std::invalid_argument("with_params: unknown parameter '" + name + "'");
        all[name] = value;
    }

    FrictionLaw law = m.law.kind() == FrictionLaw::Kind::Stribeck
                          ? FrictionLaw::stribeck(all["mu_d"], all["mu_s"], all["v_s"],
                                                  all["delta"])
                          : FrictionLaw::constant(all["mu"]);
    if (m.is_gm()) {
        std::vector<MaxwellBranch> branches;
        for (std::size_t i = 0; i < n; ++i)
            branches.push_back({all[branch_name("k", i)], all[branch_name("tau", i)]});
        return FrBDModel(GMParams(all["k0"], std::move(branches)), law, m.reg, m.normal_force);
    }
    std::vector<KelvinVoigtBranch> branches;
    for (std::size_t i = 0; i < n; ++i)
        branches.push_back({all[branch_name("k", i)], all[branch_name("c", i)]});
    return FrBDModel(GKVParams(all["k0"], std::move(branches)), law, m.reg, m.normal_force);
}

void TraceData::validate() const {
    if (t.size() < 2 || t.size() != v.size() || t.size() != pf.size())
        throw std::invalid_argument("TraceData: need >= 2 samples with equal channel lengths");
    for (std::size_t i = 1; i < t.size(); ++i)
        if (!(t[i] > t[i - 1]))
            throw std::invalid_argument("TraceData: sample times must be strictly increasing");
}

void FitProblem::validate() const {
    data.validate();
    if (!(dt > 0.0)) throw std::invalid_argument("FitProblem: dt must be > 0");
    const auto names = model_param_names(initial);
    for (const auto& p : free_params) {
        if (std::find(names.begin(), names.end(), p) == names.end())
            throw std::invalid_argument("FitProblem: unknown free parameter '" + p + "'");
        const auto it = bounds.find(p);
        if (it != bounds.end() && !(it->second.lo < it->second.hi))
            throw std::invalid_argument("FitProblem: empty bound interval for '" + p + "'");
    }
}

namespace {

ParamBounds bounds_for(const FitProblem& problem, const std::string& name) {
    const auto it = problem.bounds.find(name);
    if (it != problem.bounds.end()) return it->second;
    const double x = get_param(problem.initial, name);
    if (x > 0.0) return {x / 1e3, x * 1e3};
    return {0.0, std::max(1.0, std::abs(x) * 1e3)};
}

std::vector<double> simulate_pf(const FitProblem& problem, const FrBDModel& m) {
    const auto& d = problem.data;
    SolverConfig cfg;
    cfg.method = SolverConfig::Method::FixedRk4;
    cfg.dt = problem.dt;
    cfg.t0 = d.t.front();
    cfg.t1 = d.t.back();
    const InputSignal v = InputSignal::sampled(d.t, d.v);

    State x0(m.state_dim(), 0.0);
    if (problem.x0_policy == FitProblem::InitPolicy::SteadyStateAtFirstSample)
        x0 = steady_state(m, d.v.front()).x;

    const Trajectory traj = simulate_model(m, x0, v, cfg);
    const auto& pf = traj.channel("pf");
    std::vector<double> out(d.t.size());
    for (std::size_t k = 0; k < d.t.size(); ++k)
        out[k] = interp_linear(traj.t, pf, d.t[k]);
    return out;
}

double rmse_of(const std::vector<double>& r) {
    double acc = 0.0;
    for (double x : r) acc += x * x;
    return std::sqrt(acc / static_cast<double>(r.size()));
}

// Internal optimizer coordinates: log(p) for parameters bounded away from
// zero, identity otherwise.
struct Transform {
    bool log_space;
    double to_internal(double x) const { return log_space ? std::log(x) : x; }
    double to_external(double th) const { return log_space ? std::exp(th) : th; }
};

}  // namespace

std::vector<double> residual(const FitProblem& problem,
                             const std::map<std::string, double>& params) {
    const FrBDModel m = with_params(problem.initial, params);
    const std::vector<double> pf_sim = simulate_pf(problem, m);
    std::vector<double> r(pf_sim.size());
    for (std::size_t k = 0; k < r.size(); ++k) r[k] = pf_sim[k] - problem.data.pf[k];
    return r;
}

FitResult fit(const FitProblem& problem) {
    problem.validate();
    const std::size_t np = problem.free_params.size();
    const std::size_t ns = problem.data.t.size();

    std::vector<Transform> tf(np);
    Eigen::VectorXd theta(np), lo(np), hi(np);
    for (std::size_t j = 0; j < np; ++j) {
        const auto& name = problem.free_params[j];
        const ParamBounds b = bounds_for(problem, name);
        tf[j].log_space = b.lo > 0.0;
        lo[j] = tf[j].to_internal(b.lo);
        hi[j] = tf[j].to_internal(b.hi);
        theta[j] = std::clamp(tf[j].to_internal(get_param(problem.initial, name)), lo[j], hi[j]);
    }

    auto external = [&](const Eigen::VectorXd& th) {
        std::map<std::string, double> values;
        for (std::size_t j = 0; j < np; ++j)
            values[problem.free_params[j]] = tf[j].to_external(th[j]);
        return values;
    };
    auto eval_residual = [&](const Eigen::VectorXd& th, Eigen::VectorXd& r) -> bool {
        try {
            const std::vector<double> rv = residual(problem, external(th));
            r = Eigen::Map<const Eigen::VectorXd>(rv.data(), static_cast<Eigen::Index>(rv.size()));
            return r.allFinite();
        } catch (const std::invalid_argument&) {
            return false;  // invalid parameter combination: reject the step
        } catch (const SolverError&) {
            return false;  // diverged shooting run: reject the step
        }
    };

    FitResult result;
    result.converged = false;
    result.iterations = 0;

    Eigen::VectorXd r(ns);
    if (!eval_residual(theta, r)) {
        // The initial point itself must be simulable.
        result.params = external(theta);
        result.rmse = std::numeric_limits<double>::quiet_NaN();
        return result;
    }
    double cost = r.squaredNorm();

    Eigen::MatrixXd jac(ns, np);
    Eigen::VectorXd r_lo(ns), r_hi(ns), step(np), theta_new(np), r_new(ns);
    double lm_damping = 1e-3;

    const int max_iterations = 200;
    if (np == 0) {
        result.params = external(theta);
        result.rmse = rmse_of(std::vector<double>(r.data(), r.data() + r.size()));
        result.converged = true;
        return result;
    }

    while (result.iterations < max_iterations) {
        ++result.iterations;

        // Central finite-difference Jacobian, relative step 1e-6.
        bool jac_ok = true;
        for (std::size_t j = 0; j < np && jac_ok; ++j) {
            const double h = 1e-6 * std::max(1.0, std::abs(theta[j]));
            Eigen::VectorXd th = theta;
            th[j] = theta[j] + h;
            jac_ok = eval_residual(th, r_hi);
            th[j] = theta[j] - h;
            jac_ok = jac_ok && eval_residual(th, r_lo);
            if (jac_ok) jac.col(static_cast<Eigen::Index>(j)) = (r_hi - r_lo) / (2.0 * h);
        }
        if (!jac_ok) break;

        const Eigen::VectorXd gradient = jac.transpose() * r;
        if (gradient.lpNorm<Eigen::Infinity>() < 1e-8) {
            result.converged = true;
            break;
        }
        const Eigen::MatrixXd jtj = jac.transpose() * jac;

        bool accepted = false;
        double applied_step = 0.0;
        for (int tries = 0; tries < 25 && !accepted; ++tries) {
            Eigen::MatrixXd damped = jtj;
            for (std::size_t j = 0; j < np; ++j) {
                const auto jj = static_cast<Eigen::Index>(j);
                damped(jj, jj) += lm_damping * std::max(jtj(jj, jj), 1e-30);
            }
            step = damped.ldlt().solve(-gradient);
            theta_new = theta + step;
            for (std::size_t j = 0; j < np; ++j)
                theta_new[j] = std::clamp(theta_new[j], lo[j], hi[j]);

            if (eval_residual(theta_new, r_new) && r_new.squaredNorm() < cost) {
                accepted = true;
                applied_step = (theta_new - theta).norm();
                theta = theta_new;
                r = r_new;
                cost = r.squaredNorm();
                lm_damping = std::max(lm_damping / 3.0, 1e-14);
            } else {
                lm_damping *= 10.0;
            }
        }
        if (!accepted) break;
        if (applied_step < 1e-10) {
            result.converged = true;
            break;
        }
    }

    result.params = external(theta);
    result.rmse = std::sqrt(cost / static_cast<double>(ns));

    // Covariance proxy from an external-space Jacobian at the solution.
    auto eval_residual_at = [&](const std::map<std::string, double>& values,
                                Eigen::VectorXd& out) -> bool {
        try {
            const std::vector<double> rv = residual(problem, values);
            out = Eigen::Map<const Eigen::VectorXd>(rv.data(),
                                                    static_cast<Eigen::Index>(rv.size()));
            return out.allFinite();
        } catch (const std::invalid_argument&) {
            return false;
        } catch (const SolverError&) {
            return false;
        }
    };
    Eigen::MatrixXd jac_ext(ns, np);
    Eigen::VectorXd rp(ns), rm(ns);
    bool ok = true;
    for (std::size_t j = 0; j < np && ok; ++j) {
        const double x = result.params.at(problem.free_params[j]);
        const double h = 1e-6 * std::max(1e-12, std::abs(x));
        auto perturbed = result.params;
        perturbed[problem.free_params[j]] = x + h;
        ok = eval_residual_at(perturbed, rp);
        perturbed[problem.free_params[j]] = x - h;
        ok = ok && eval_residual_at(perturbed, rm);
        if (ok) jac_ext.col(static_cast<Eigen::Index>(j)) = (rp - rm) / (2.0 * h);
    }
    if (ok) {
        Eigen::MatrixXd jtj = jac_ext.transpose() * jac_ext;
        const double floor = 1e-12 * std::max(jtj.diagonal().maxCoeff(), 1e-300);
        for (std::size_t j = 0; j < np; ++j) {
            const auto jj = static_cast<Eigen::Index>(j);
            jtj(jj, jj) += floor;
        }
        const Eigen::MatrixXd cov = jtj.inverse();
        for (std::size_t j = 0; j < np; ++j)
            result.covariance_proxy[problem.free_params[j]] =
                cov(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j));
    }
    return result;
}

}  // namespace frbd
