#pragma once

#include <cstddef>
#include <vector>

namespace frbd {

/// Velocity-dependent friction coefficient.
///
/// The Stribeck form is
///   mu(v) = mu_d + (mu_s - mu_d) * exp(-(|v| / v_stribeck)^delta),
/// which equals mu_s at rest and decays towards mu_d with sliding speed.
/// A constant law returns the same coefficient everywhere. Both are bounded
/// below by mu_min() > 0.
///
/// Degenerate parameters are given explicit limits instead of NaN:
/// the value at v = 0 is always mu_s (the exponent term is taken as 1),
/// and with v_stribeck = 0 the Stribeck drop is instantaneous (mu_d for
/// every v != 0).
class FrictionLaw {
public:
    enum class Kind { Stribeck, Constant };

    static FrictionLaw stribeck(double mu_d, double mu_s, double v_stribeck, double delta);
    static FrictionLaw constant(double mu);

    double eval(double v_s) const;
    double operator()(double v_s) const { return eval(v_s); }

    /// Infimum of mu over all velocities: mu_d (Stribeck) or mu (constant).
    double mu_min() const { return mu_d_; }
    /// Value at rest: mu_s (Stribeck) or mu (constant).
    double mu_rest() const { return mu_s_; }

    Kind kind() const { return kind_; }
    double mu_d() const { return mu_d_; }
    double mu_s() const { return mu_s_; }
    double v_stribeck() const { return v_stribeck_; }
    double delta() const { return delta_; }

private:
    FrictionLaw(Kind kind, double mu_d, double mu_s, double v_stribeck, double delta);

    Kind kind_;
    double mu_d_;
    double mu_s_;
    double v_stribeck_;
    double delta_;
};

/// Regularized absolute value |y|_eps and the sign factor
/// sgn_eps(v) = v / |v|_eps. SmoothSqrt uses |y|_eps = sqrt(y^2 + eps),
/// which is C^1 for eps > 0 and coincides with |y| at eps = 0; Exact is
/// plain |y|. Either way |y|_eps >= |y|, and sgn(0) = 0.
struct Regularization {
    enum class Form { SmoothSqrt, Exact };

    Form form = Form::SmoothSqrt;
    double epsilon = 0.0;  // [m^2/s^2]

    Regularization() = default;
    Regularization(Form form, double epsilon);

    static Regularization smooth_sqrt(double epsilon) { return {Form::SmoothSqrt, epsilon}; }
    static Regularization exact() { return {Form::Exact, 0.0}; }

    double abs(double y) const;
    double sgn(double v) const;
};

struct MaxwellBranch {
    double k;    // branch stiffness [1/m]
    double tau;  // relaxation time [s]
};

/// Generalized Maxwell element: a parallel spring k0 plus n spring-dashpot
/// branches (k_i, tau_i). Branch states are forces.
struct GMParams {
    double k0 = 1.0;  // [1/m]
    std::vector<MaxwellBranch> branches;

    GMParams() = default;
    GMParams(double k0, std::vector<MaxwellBranch> branches);

    std::size_t n() const { return branches.size(); }
};

struct KelvinVoigtBranch {
    double k;  // branch stiffness [1/m]
    double c;  // branch damping [s/m]
};

/// Generalized Kelvin-Voigt element: a series spring k0 plus n parallel
/// spring-dashpot cells (k_i, c_i). Branch states are deflections.
struct GKVParams {
    double k0 = 1.0;  // [1/m]
    std::vector<KelvinVoigtBranch> branches;

    GKVParams() = default;
    GKVParams(double k0, std::vector<KelvinVoigtBranch> branches);

    std::size_t n() const { return branches.size(); }
};

/// Coefficients of the n = 1 differential constitutive law
///   f + gamma1 * df/dt = sigma0 * z + sigma1 * dz/dt
/// (Standard Linear Solid). Requires sigma1 > gamma1 * sigma0, which is
/// exactly the condition for both inverse maps below to produce positive
/// branch parameters.
struct SlsCanonical {
    double sigma0;  // [1/m]
    double sigma1;  // [s/m]
    double gamma1;  // [s]

    SlsCanonical(double sigma0, double sigma1, double gamma1);
};

/// GM(n=1) -> canonical SLS coefficients.
///
/// Eliminating f1 between f = k0 z + f1 and f1' = -f1/tau1 + k1 z' gives
///   f + tau1 f' = k0 z + tau1 (k0 + k1) z',
/// i.e. sigma0 = k0, sigma1 = tau1 (k0 + k1), gamma1 = tau1.
SlsCanonical to_canonical(const GMParams& p);

/// GKV(n=1) -> canonical SLS coefficients.
///
/// Eliminating z1 between f = k0 (z - z1) and f = k1 z1 + c1 z1' gives
///   f + c1/(k0+k1) f' = k0 k1/(k0+k1) z + k0 c1/(k0+k1) z'.
SlsCanonical to_canonical(const GKVParams& p);

/// Inverse of to_canonical(GMParams): k0 = sigma0, tau1 = gamma1,
/// k1 = (sigma1 - gamma1 sigma0) / gamma1.
GMParams gm_from_canonical(const SlsCanonical& c);

/// Inverse of to_canonical(GKVParams): k0 = sigma1/gamma1,
/// k1 = sigma0 k0 / (k0 - sigma0), c1 = gamma1 (k0 + k1).
GKVParams gkv_from_canonical(const SlsCanonical& c);

}  // namespace frbd
