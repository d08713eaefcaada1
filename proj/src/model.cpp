#include "frbd/model.hpp"

#include <stdexcept>

namespace frbd {

namespace {

void check_dim(const FrBDModel& m, std::span<const double> x) {
    if (x.size() != m.state_dim())
        throw std::invalid_argument("FrBDModel: state dimension mismatch");
}

}  // namespace

FrBDModel::FrBDModel(GMParams gm_, FrictionLaw law_, Regularization reg_, double p)
    : rheology(std::move(gm_)), law(law_), reg(reg_), normal_force(p) {
    if (!(normal_force > 0.0)) throw std::invalid_argument("FrBDModel: normal force must be > 0");
}

FrBDModel::FrBDModel(GKVParams gkv_, FrictionLaw law_, Regularization reg_, double p)
    : rheology(std::move(gkv_)), law(law_), reg(reg_), normal_force(p) {
    if (!(normal_force > 0.0)) throw std::invalid_argument("FrBDModel: normal force must be > 0");
}

const GMParams& FrBDModel::gm() const {
    if (!is_gm()) throw std::invalid_argument("FrBDModel: not a GM model");
    return std::get<GMParams>(rheology);
}

const GKVParams& FrBDModel::gkv() const {
    if (is_gm()) throw std::invalid_argument("FrBDModel: not a GKV model");
    return std::get<GKVParams>(rheology);
}

std::size_t FrBDModel::n_branches() const {
    return is_gm() ? std::get<GMParams>(rheology).n() : std::get<GKVParams>(rheology).n();
}

double bristle_force(const FrBDModel& m, std::span<const double> x) {
    check_dim(m, x);
    if (m.is_gm()) {
        const auto& p = std::get<GMParams>(m.rheology);
        double f = p.k0 * x[0];
        for (std::size_t i = 0; i < p.n(); ++i) f += x[1 + i];
        return f;
    }
    const auto& p = std::get<GKVParams>(m.rheology);
    double z0 = x[0];
    for (std::size_t i = 0; i < p.n(); ++i) z0 -= x[1 + i];
    return p.k0 * z0;
}

double friction_force(const FrBDModel& m, std::span<const double> x) {
    return m.normal_force * bristle_force(m, x);
}

void rhs(const FrBDModel& m, double v, std::span<const double> x, std::span<double> dxdt) {
    check_dim(m, x);
    if (dxdt.size() != x.size())
        throw std::invalid_argument("FrBDModel: derivative dimension mismatch");
    const double a = m.reg.abs(v) / m.law.eval(v);
    if (m.is_gm()) {
        const auto& p = std::get<GMParams>(m.rheology);
        double f = p.k0 * x[0];
        for (std::size_t i = 0; i < p.n(); ++i) f += x[1 + i];
        const double dz = -a * f + v;
        dxdt[0] = dz;
        for (std::size_t i = 0; i < p.n(); ++i)
            dxdt[1 + i] = -x[1 + i] / p.branches[i].tau + p.branches[i].k * dz;
        return;
    }
    const auto& p = std::get<GKVParams>(m.rheology);
    double z0 = x[0];
    for (std::size_t i = 0; i < p.n(); ++i) z0 -= x[1 + i];
    dxdt[0] = -a * p.k0 * z0 + v;
    for (std::size_t i = 0; i < p.n(); ++i)
        dxdt[1 + i] = (p.k0 * z0 - p.branches[i].k * x[1 + i]) / p.branches[i].c;
}

SteadyState steady_state(const FrBDModel& m, double v) {
    const double f = m.reg.sgn(v) * m.law.eval(v);
    State x(m.state_dim(), 0.0);
    if (m.is_gm()) {
        const auto& p = std::get<GMParams>(m.rheology);
        x[0] = f / p.k0;
    } else {
        const auto& p = std::get<GKVParams>(m.rheology);
        double z = f / p.k0;
        for (std::size_t i = 0; i < p.n(); ++i) {
            x[1 + i] = f / p.branches[i].k;
            z += x[1 + i];
        }
        x[0] = z;
    }
    return {f, std::move(x)};
}

double storage(const FrBDModel& m, std::span<const double> x) {
    check_dim(m, x);
    const double p_n = m.normal_force;
    if (m.is_gm()) {
        const auto& p = std::get<GMParams>(m.rheology);
        double v = p.k0 * x[0] * x[0];
        for (std::size_t i = 0; i < p.n(); ++i)
            v += x[1 + i] * x[1 + i] / p.branches[i].k;
        return 0.5 * p_n * v;
    }
    const auto& p = std::get<GKVParams>(m.rheology);
    double z0 = x[0];
    for (std::size_t i = 0; i < p.n(); ++i) z0 -= x[1 + i];
    double v = p.k0 * z0 * z0;
    for (std::size_t i = 0; i < p.n(); ++i)
        v += p.branches[i].k * x[1 + i] * x[1 + i];
    return 0.5 * p_n * v;
}

double dissipation_rate(const FrBDModel& m, std::span<const double> x, double v) {
    check_dim(m, x);
    const double p_n = m.normal_force;
    const double f = bristle_force(m, x);
    const double common = p_n * f * v - p_n * m.reg.abs(v) * f * f / m.law.eval(v);
    if (m.is_gm()) {
        const auto& p = std::get<GMParams>(m.rheology);
        double branch = 0.0;
        for (std::size_t i = 0; i < p.n(); ++i)
            branch += x[1 + i] * x[1 + i] / (p.branches[i].tau * p.branches[i].k);
        return common - p_n * branch;
    }
    const auto& p = std::get<GKVParams>(m.rheology);
    double z0 = x[0];
    for (std::size_t i = 0; i < p.n(); ++i) z0 -= x[1 + i];
    double branch = 0.0;
    for (std::size_t i = 0; i < p.n(); ++i) {
        const double r = p.branches[i].k * x[1 + i] - p.k0 * z0;
        branch += r * r / p.branches[i].c;
    }
    return common - p_n * branch;
}

double supplied_power(const FrBDModel& m, std::span<const double> x, double v) {
    return friction_force(m, x) * v;
}

}  // namespace frbd
