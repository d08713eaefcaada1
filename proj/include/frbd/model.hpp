#pragma once

#include <span>
#include <variant>
#include <vector>

#include "frbd/friction.hpp"

namespace frbd {

/// A complete bristle friction element: a viscoelastic rheology (GM or GKV),
/// a friction-coefficient law, the absolute-value regularization, and the
/// normal load p.
///
/// State layout (fixed, also used by every serialization path):
///   x[0]    = z, the bristle deflection [m]
///   x[1+i]  = branch force f_i (GM, dimensionless) or branch deflection
///             z_i (GKV, [m]), i = 0..n-1.
struct FrBDModel {
    std::variant<GMParams, GKVParams> rheology;
    FrictionLaw law = FrictionLaw::constant(1.0);
    Regularization reg;
    double normal_force = 1.0;  // p [N], > 0

    FrBDModel() = default;
    FrBDModel(GMParams gm, FrictionLaw law, Regularization reg, double normal_force);
    FrBDModel(GKVParams gkv, FrictionLaw law, Regularization reg, double normal_force);

    bool is_gm() const { return std::holds_alternative<GMParams>(rheology); }
    const GMParams& gm() const;
    const GKVParams& gkv() const;

    std::size_t n_branches() const;
    std::size_t state_dim() const { return n_branches() + 1; }
};

using State = std::vector<double>;

/// Nondimensional bristle force f: k0 z + sum f_i (GM) or k0 (z - sum z_i)
/// (GKV).
double bristle_force(const FrBDModel& m, std::span<const double> x);

/// Dimensional friction force p*f [N].
double friction_force(const FrBDModel& m, std::span<const double> x);

/// State derivative at sliding-surface velocity v.
///
/// GM:  z' = -(|v|_eps / mu(v)) (k0 z + sum f_i) + v,
///      f_i' = -f_i / tau_i + k_i z'   (the just-computed z' is substituted),
/// GKV: z' = -(|v|_eps / mu(v)) k0 (z - sum z_i) + v,
///      z_i' = (k0 (z - sum z_i) - k_i z_i) / c_i.
void rhs(const FrBDModel& m, double v, std::span<const double> x, std::span<double> dxdt);

struct SteadyState {
    double f;  // steady bristle force = sgn_eps(v) mu(v)
    State x;
};

/// Closed-form steady state under constant v: f = sgn_eps(v) mu(v) with
/// GM: z = f/k0, f_i = 0; GKV: z_i = f/k_i, z = f/k0 + sum z_i.
SteadyState steady_state(const FrBDModel& m, double v);

/// Storage (Lyapunov) function [J]:
/// GM:  V = p/2 (k0 z^2 + sum f_i^2 / k_i),
/// GKV: V = p/2 (k0 z0^2 + sum k_i z_i^2) with z0 = z - sum z_i.
double storage(const FrBDModel& m, std::span<const double> x);

/// Closed-form derivative of the storage function along the dynamics [W]:
/// GM:  V' = p f v - p |v|_eps f^2 / mu(v) - sum p f_i^2 / (tau_i k_i),
/// GKV: V' = p f v - p |v|_eps f^2 / mu(v) - sum (p/c_i)(k_i z_i - k0 z0)^2.
/// Always <= supplied_power; equality iff every dissipative term vanishes.
double dissipation_rate(const FrBDModel& m, std::span<const double> x, double v);

/// Passivity supply rate p f v [W].
double supplied_power(const FrBDModel& m, std::span<const double> x, double v);

}  // namespace frbd
