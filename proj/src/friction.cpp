#include "frbd/friction.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace frbd {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw std::invalid_argument(what);
}

}  // namespace

FrictionLaw::FrictionLaw(Kind kind, double mu_d, double mu_s, double v_stribeck, double delta)
    : kind_(kind), mu_d_(mu_d), mu_s_(mu_s), v_stribeck_(v_stribeck), delta_(delta) {}

FrictionLaw FrictionLaw::stribeck(double mu_d, double mu_s, double v_stribeck, double delta) {
    require(mu_d > 0.0, "FrictionLaw: mu_d must be > 0");
    require(mu_s >= mu_d, "FrictionLaw: mu_s must be >= mu_d");
    require(v_stribeck >= 0.0, "FrictionLaw: v_stribeck must be >= 0");
    require(delta >= 0.0, "FrictionLaw: delta must be >= 0");
    return FrictionLaw(Kind::Stribeck, mu_d, mu_s, v_stribeck, delta);
}

FrictionLaw FrictionLaw::constant(double mu) {
    require(mu > 0.0, "FrictionLaw: mu must be > 0");
    return FrictionLaw(Kind::Constant, mu, mu, 0.0, 0.0);
}

double FrictionLaw::eval(double v_s) const {
    if (v_s == 0.0) return mu_s_;
    if (kind_ == Kind::Constant) return mu_d_;
    if (v_stribeck_ == 0.0) return mu_d_;
    const double ratio = std::abs(v_s) / v_stribeck_;
    return mu_d_ + (mu_s_ - mu_d_) * std::exp(-std::pow(ratio, delta_));
}

Regularization::Regularization(Form form_, double epsilon_) : form(form_), epsilon(epsilon_) {
    require(epsilon >= 0.0, "Regularization: epsilon must be >= 0");
}

double Regularization::abs(double y) const {
    if (form == Form::Exact || epsilon == 0.0) return std::abs(y);
    return std::sqrt(y * y + epsilon);
}

double Regularization::sgn(double v) const {
    const double a = abs(v);
    return a == 0.0 ? 0.0 : v / a;
}

GMParams::GMParams(double k0_, std::vector<MaxwellBranch> branches_)
    : k0(k0_), branches(std::move(branches_)) {
    require(k0 > 0.0, "GMParams: k0 must be > 0");
    for (const auto& b : branches) {
        require(b.k > 0.0, "GMParams: branch stiffness must be > 0");
        require(b.tau > 0.0, "GMParams: relaxation time must be > 0");
    }
}

GKVParams::GKVParams(double k0_, std::vector<KelvinVoigtBranch> branches_)
    : k0(k0_), branches(std::move(branches_)) {
    require(k0 > 0.0, "GKVParams: k0 must be > 0");
    for (const auto& b : branches) {
        require(b.k > 0.0, "GKVParams: branch stiffness must be > 0");
        require(b.c > 0.0, "GKVParams: branch damping must be > 0");
    }
}

SlsCanonical::SlsCanonical(double sigma0_, double sigma1_, double gamma1_)
    : sigma0(sigma0_), sigma1(sigma1_), gamma1(gamma1_) {
    require(sigma0 > 0.0, "SlsCanonical: sigma0 must be > 0");
    require(sigma1 > 0.0, "SlsCanonical: sigma1 must be > 0");
    require(gamma1 > 0.0, "SlsCanonical: gamma1 must be > 0");
    require(sigma1 > gamma1 * sigma0,
            "SlsCanonical: sigma1 must exceed gamma1*sigma0 (degenerate solid)");
}

SlsCanonical to_canonical(const GMParams& p) {
    if (p.n() != 1)
        throw std::invalid_argument("to_canonical: GM element must have exactly one branch");
    const auto& b = p.branches[0];
    return SlsCanonical(p.k0, b.tau * (p.k0 + b.k), b.tau);
}

SlsCanonical to_canonical(const GKVParams& p) {
    if (p.n() != 1)
        throw std::invalid_argument("to_canonical: GKV element must have exactly one branch");
    const auto& b = p.branches[0];
    const double s = p.k0 + b.k;
    return SlsCanonical(p.k0 * b.k / s, p.k0 * b.c / s, b.c / s);
}

GMParams gm_from_canonical(const SlsCanonical& c) {
    const double k1 = (c.sigma1 - c.gamma1 * c.sigma0) / c.gamma1;
    return GMParams(c.sigma0, {{k1, c.gamma1}});
}

GKVParams gkv_from_canonical(const SlsCanonical& c) {
    const double k0 = c.sigma1 / c.gamma1;
    const double k1 = c.sigma0 * k0 / (k0 - c.sigma0);
    const double c1 = c.gamma1 * (k0 + k1);
    return GKVParams(k0, {{k1, c1}});
}

}  // namespace frbd
