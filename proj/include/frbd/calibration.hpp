#pragma once

#include <map>
#include <string>
#include <vector>

#include "frbd/model.hpp"
#include "frbd/ode.hpp"

namespace frbd {

/// Names of the tunable scalar parameters of a model: k0, k1..kn plus
/// tau1..taun (GM) or c1..cn (GKV), and the friction-law parameters
/// (mu_d, mu_s, v_s, delta for Stribeck; mu for a constant law).
std::vector<std::string> model_param_names(const FrBDModel& m);

double get_param(const FrBDModel& m, const std::string& name);

/// Copy of m with the named parameters replaced. Throws std::invalid_argument
/// when a name is unknown or the resulting parameter set is invalid.
FrBDModel with_params(const FrBDModel& m, const std::map<std::string, double>& values);

struct TraceData {
    std::vector<double> t;   // strictly increasing [s]
    std::vector<double> v;   // input velocity [m/s]
    std::vector<double> pf;  // measured friction force [N]

    void validate() const;
};

struct ParamBounds {
    double lo;
    double hi;
};

struct FitProblem {
    enum class InitPolicy { ZeroState, SteadyStateAtFirstSample };

    TraceData data;
    FrBDModel initial;  // starting point; parameters not in free_params stay fixed
    std::vector<std::string> free_params;
    std::map<std::string, ParamBounds> bounds;  // default per free parameter:
                                                // [initial/1e3, initial*1e3]
    InitPolicy x0_policy = InitPolicy::SteadyStateAtFirstSample;
    double dt = 1e-5;  // fixed-RK4 shooting step [s]

    void validate() const;
};

struct FitResult {
    std::map<std::string, double> params;
    double rmse;      // [N]
    int iterations;
    bool converged;
    /// diag((J^T J + eps I)^-1) with a relative floor eps = 1e-12 max diag,
    /// J the central-difference Jacobian at the solution. Entries blow up
    /// for parameters the data carries no information about.
    std::map<std::string, double> covariance_proxy;
};

/// Shooting residual r_k = pf_sim(t_k) - pf_data(t_k), where the model is
/// integrated under the piecewise-linear interpolation of the measured v(t).
/// Integration failures propagate as SolverError.
std::vector<double> residual(const FitProblem& problem,
                             const std::map<std::string, double>& params);

/// Bounded damped (Levenberg-Marquardt) least squares over the free
/// parameters, with central finite-difference Jacobians and a log-space
/// internal parametrization for parameters bounded away from zero.
/// Terminates on gradient norm < 1e-8, step norm < 1e-10, or 200 iterations;
/// non-convergence is reported through the flag, never by exception.
FitResult fit(const FitProblem& problem);

}  // namespace frbd
