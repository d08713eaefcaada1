#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "frbd/model.hpp"
#include "frbd/runner.hpp"
#include "test_util.hpp"

using namespace frbd;

namespace {

FrBDModel table1_gm(double epsilon = 0.0, double p = 1.0) {
    return FrBDModel(gm_from_canonical(SlsCanonical(1e4, 64.5, 0.001)),
                     FrictionLaw::stribeck(1.0, 1.5, 0.01, 2.0),
                     Regularization::smooth_sqrt(epsilon), p);
}

double rhs_norm(const FrBDModel& m, const State& x, double v) {
    State dxdt(x.size());
    rhs(m, v, x, dxdt);
    double acc = 0.0;
    for (double d : dxdt) acc += d * d;
    return std::sqrt(acc);
}

}  // namespace

TEST_CASE("GM right-hand side") {
    const FrBDModel m = table1_gm();

    SUBCASE("origin at rest is an equilibrium") {
        CHECK(rhs_norm(m, State{0.0, 0.0}, 0.0) == 0.0);
    }
    SUBCASE("hand-evaluated derivative from the origin") {
        State dxdt(2);
        rhs(m, 0.1, State{0.0, 0.0}, dxdt);
        CHECK(dxdt[0] == doctest::Approx(0.1).epsilon(1e-14));          // z' = v
        CHECK(dxdt[1] == doctest::Approx(54500.0 * 0.1).epsilon(1e-14));  // f1' = k1 z'
    }
    SUBCASE("steady state is a fixed point") {
        CHECK(rhs_norm(m, steady_state(m, 0.1).x, 0.1) < 1e-12);
    }
    SUBCASE("dimension mismatch is rejected") {
        State dxdt(3);
        CHECK_THROWS_AS(rhs(m, 0.1, State{0.0, 0.0, 0.0}, dxdt), std::invalid_argument);
    }
}

TEST_CASE("GKV right-hand side") {
    Rng rng(41);
    for (int i = 0; i < 50; ++i) {
        const FrBDModel m = testutil::random_gkv_model(rng, static_cast<std::size_t>(rng.uniform_int(0, 3)));
        CHECK(rhs_norm(m, State(m.state_dim(), 0.0), 0.0) == 0.0);
        const double v = rng.uniform(-3.0, 3.0);
        CHECK(rhs_norm(m, steady_state(m, v).x, v) < 1e-12);
    }
}

TEST_CASE("output force") {
    const FrBDModel m = table1_gm();
    CHECK(bristle_force(m, State{0.0, 0.0}) == 0.0);

    const FrBDModel gm2(GMParams(1.0, {{1.0, 1.0}, {1.0, 1.0}}), FrictionLaw::constant(1.0),
                        Regularization::smooth_sqrt(0.0), 1.0);
    CHECK(bristle_force(gm2, State{0.5, 0.1, -0.2}) == doctest::Approx(0.4).epsilon(1e-14));
    CHECK(friction_force(gm2, State{0.5, 0.1, -0.2}) == doctest::Approx(0.4).epsilon(1e-14));

    // At the steady state the output equals sgn_eps(v) mu(v).
    Rng rng(5);
    for (int i = 0; i < 200; ++i) {
        const FrBDModel any = testutil::random_model(rng, static_cast<std::size_t>(rng.uniform_int(0, 3)));
        const double v = rng.uniform(-2.0, 2.0);
        const SteadyState ss = steady_state(any, v);
        CHECK(bristle_force(any, ss.x) ==
              doctest::Approx(any.reg.sgn(v) * any.law.eval(v)).epsilon(1e-12));
    }
}

TEST_CASE("steady state closed forms") {
    SUBCASE("rest with exact sign gives the zero state") {
        const SteadyState ss = steady_state(table1_gm(), 0.0);
        CHECK(ss.f == 0.0);
        for (double x : ss.x) CHECK(x == 0.0);
    }
    SUBCASE("Table-I GM at v = 0.1") {
        const SteadyState ss = steady_state(table1_gm(), 0.1);
        const double mu = 1.0 + 0.5 * std::exp(-100.0);
        CHECK(ss.f == doctest::Approx(mu).epsilon(1e-14));
        CHECK(ss.x[0] == doctest::Approx(mu / 1e4).epsilon(1e-14));
        CHECK(ss.x[1] == 0.0);
    }
    SUBCASE("GKV branch deflections split as f/k_i") {
        const FrBDModel m(GKVParams(3.0, {{3.0, 1.0}, {3.0, 1.0}}), FrictionLaw::constant(1.0),
                          Regularization::smooth_sqrt(0.0), 1.0);
        const SteadyState ss = steady_state(m, 1.0);
        CHECK(ss.f == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(ss.x[0] == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(ss.x[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
        CHECK(ss.x[2] == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    }
}

TEST_CASE("storage function") {
    const FrBDModel gm(GMParams(2.0, {{4.0, 1.0}}), FrictionLaw::constant(1.0),
                       Regularization::smooth_sqrt(0.0), 1.0);
    CHECK(storage(gm, State{0.0, 0.0}) == 0.0);
    CHECK(storage(gm, State{1.0, 2.0}) == doctest::Approx(1.5).epsilon(1e-14));

    const FrBDModel gkv(GKVParams(2.0, {{3.0, 1.0}}), FrictionLaw::constant(1.0),
                        Regularization::smooth_sqrt(0.0), 1.0);
    CHECK(storage(gkv, State{1.0, 0.25}) == doctest::Approx(0.65625).epsilon(1e-14));

    // Nonnegative and radially unbounded (quadratic under state scaling).
    Rng rng(17);
    for (int i = 0; i < 500; ++i) {
        const FrBDModel m = testutil::random_model(rng, static_cast<std::size_t>(rng.uniform_int(0, 4)));
        State x(m.state_dim());
        for (auto& xi : x) xi = rng.uniform(-3.0, 3.0);
        const double v1 = storage(m, x);
        CHECK(v1 >= 0.0);
        State x2 = x;
        for (auto& xi : x2) xi *= 2.0;
        CHECK(storage(m, x2) == doctest::Approx(4.0 * v1).epsilon(1e-12));
    }
}

TEST_CASE("dissipation rate identity and passivity bound") {
    Rng rng(29);
    SUBCASE("zero state dissipates nothing") {
        const FrBDModel m = table1_gm();
        CHECK(dissipation_rate(m, State{0.0, 0.0}, 0.7) == 0.0);
    }
    SUBCASE("closed form equals the chain rule") {
        for (int i = 0; i < 500; ++i) {
            const FrBDModel m = testutil::random_model(rng, static_cast<std::size_t>(rng.uniform_int(1, 4)));
            State x(m.state_dim());
            for (auto& xi : x) xi = rng.uniform(-2.0, 2.0);
            const double v = rng.uniform(-5.0, 5.0);
            const double closed = dissipation_rate(m, x, v);
            const double chain = dissipation_rate_chain_rule(m, x, v);
            const double scale = std::abs(closed) + std::abs(chain) + 1e-12;
            CHECK(std::abs(closed - chain) / scale < 1e-10);
        }
    }
    SUBCASE("steady sliding with exact regularization is lossless in V") {
        const FrBDModel m = table1_gm();
        const SteadyState ss = steady_state(m, 0.25);
        CHECK(std::abs(dissipation_rate(m, ss.x, 0.25)) < 1e-14);
    }
    SUBCASE("supplied power dominates the storage derivative") {
        for (int i = 0; i < 2000; ++i) {
            const FrBDModel m = testutil::random_model(rng, static_cast<std::size_t>(rng.uniform_int(0, 4)));
            State x(m.state_dim());
            for (auto& xi : x) xi = rng.uniform(-2.0, 2.0);
            const double v = rng.uniform(-5.0, 5.0);
            CHECK(supplied_power(m, x, v) - dissipation_rate(m, x, v) >= -1e-12);
        }
    }
    SUBCASE("supplied power basics") {
        const FrBDModel m = table1_gm();
        CHECK(supplied_power(m, State{0.3, 0.1}, 0.0) == 0.0);
        const SteadyState ss = steady_state(m, 0.5);
        CHECK(supplied_power(m, ss.x, 0.5) ==
              doctest::Approx(m.law.eval(0.5) * 0.5).epsilon(1e-12));
    }
}

TEST_CASE("randomized fixed-point property") {
    Rng rng(71);
    for (int i = 0; i < 300; ++i) {
        const FrBDModel m = testutil::random_model(rng, static_cast<std::size_t>(rng.uniform_int(0, 4)));
        const double v = rng.uniform(-10.0, 10.0);
        CHECK(rhs_norm(m, steady_state(m, v).x, v) < 1e-10);
    }
}

TEST_CASE("SLS-matched GM and GKV produce the same force trajectory") {
    Rng rng(83);
    for (int i = 0; i < 4; ++i) {
        const SlsCanonical c = testutil::random_canonical(rng);
        const FrictionLaw law = testutil::random_law(rng);
        const Regularization reg = Regularization::smooth_sqrt(1e-6);
        const FrBDModel gm(gm_from_canonical(c), law, reg, 1.0);
        const FrBDModel gkv(gkv_from_canonical(c), law, reg, 1.0);

        // Shared deflection z0 and force f0 fix both initial states.
        const double z0 = rng.uniform(-0.05, 0.05);
        const double f0 = rng.uniform(-0.3, 0.3);
        const State x_gm{z0, f0 - gm.gm().k0 * z0};
        const State x_gkv{z0, z0 - f0 / gkv.gkv().k0};

        SolverConfig cfg;
        cfg.dt = std::min(testutil::suggest_dt(gm, 1.0), testutil::suggest_dt(gkv, 1.0));
        cfg.t1 = 1.5;
        const InputSignal u = testutil::random_bounded_input(rng, 1.0);
        const Trajectory traj_gm = simulate_model(gm, x_gm, u, cfg);
        const Trajectory traj_gkv = simulate_model(gkv, x_gkv, u, cfg);
        const auto& f_gm = traj_gm.channel("f");
        const auto& f_gkv = traj_gkv.channel("f");
        const double scale = std::max(testutil::max_abs(f_gm), 1e-9);
        CHECK(testutil::max_abs_diff(f_gm, f_gkv) / scale < 1e-6);
    }
}
