#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>

#include "frbd/model.hpp"
#include "frbd/ode.hpp"
#include "frbd/rng.hpp"

namespace frbd {

/// Machine-readable summary of the certification checks run after an
/// experiment: the passivity margin, the storage bound, and the spot-checked
/// dissipation identity.
struct AuditReport {
    double passivity_margin = 0.0;
    double passivity_tol = 0.0;
    double boundedness_sup_storage = 0.0;
    double dissipation_max_relerr = 0.0;
    bool passivity_pass = false;
    bool boundedness_pass = false;
    bool dissipation_pass = false;

    bool pass() const { return passivity_pass && boundedness_pass && dissipation_pass; }
};

/// Chain-rule route for the storage derivative: the analytic gradient of V
/// dotted with the state derivative. Cross-checks the closed-form
/// dissipation_rate.
double dissipation_rate_chain_rule(const FrBDModel& m, std::span<const double> x, double v);

/// Max relative mismatch between dissipation_rate and the chain-rule route
/// over seeded random (state, v) samples; the scale is the sum of the
/// contributing term magnitudes.
double dissipation_identity_max_relerr(const FrBDModel& m, Rng& rng, int samples);

/// Aggregate audit over the trajectories of one run (all must carry the
/// V/W_in channels). The dissipation identity is spot-checked on 256 seeded
/// random samples of the model.
AuditReport audit_model_run(const FrBDModel& m, std::span<const Trajectory> trajectories,
                            std::uint64_t seed);

struct RunOptions {
    std::filesystem::path config_path;
    std::filesystem::path out_dir = ".";
    std::uint64_t seed = 42;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitNumerical = 2;
inline constexpr int kExitAuditFailure = 3;

/// Execute one CLI command (simulate, presliding, lag, arm, calibrate,
/// steady-sweep, audit). Prints validation errors to stderr; returns the
/// exit code contract above.
int run_command(const std::string& command, const RunOptions& opts);

}  // namespace frbd
