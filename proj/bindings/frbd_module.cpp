#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "frbd/arm.hpp"
#include "frbd/calibration.hpp"
#include "frbd/experiments.hpp"
#include "frbd/model.hpp"
#include "frbd/ode.hpp"
#include "frbd/version.hpp"

namespace py = pybind11;
using namespace frbd;

namespace {

FrBDModel make_gm_model(double k0, const std::vector<std::pair<double, double>>& branches,
                        const FrictionLaw& law, double epsilon, double p) {
    std::vector<MaxwellBranch> bs;
    for (const auto& [k, tau] : branches) bs.push_back({k, tau});
    return FrBDModel(GMParams(k0, std::move(bs)), law, Regularization::smooth_sqrt(epsilon), p);
}

FrBDModel make_gkv_model(double k0, const std::vector<std::pair<double, double>>& branches,
                         const FrictionLaw& law, double epsilon, double p) {
    std::vector<KelvinVoigtBranch> bs;
    for (const auto& [k, c] : branches) bs.push_back({k, c});
    return FrBDModel(GKVParams(k0, std::move(bs)), law, Regularization::smooth_sqrt(epsilon), p);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "FrBD viscoelastic friction models (GM/GKV rheologies): steady states, "
              "storage functions, simulation and passivity audits";
    m.attr("__version__") = FRBD_VERSION;

    py::class_<FrictionLaw>(m, "FrictionLaw")
        .def_static("stribeck", &FrictionLaw::stribeck, py::arg("mu_d"), py::arg("mu_s"),
                    py::arg("v_stribeck"), py::arg("delta"))
        .def_static("constant", &FrictionLaw::constant, py::arg("mu"))
        .def("__call__", &FrictionLaw::eval, py::arg("v_s"))
        .def_property_readonly("mu_min", &FrictionLaw::mu_min)
        .def_property_readonly("mu_rest", &FrictionLaw::mu_rest);

    py::class_<Regularization>(m, "Regularization")
        .def_static("smooth_sqrt", &Regularization::smooth_sqrt, py::arg("epsilon"))
        .def_static("exact", &Regularization::exact)
        .def("abs", &Regularization::abs, py::arg("y"))
        .def("sgn", &Regularization::sgn, py::arg("v"));

    py::class_<SlsCanonical>(m, "SlsCanonical")
        .def(py::init<double, double, double>(), py::arg("sigma0"), py::arg("sigma1"),
             py::arg("gamma1"))
        .def_readonly("sigma0", &SlsCanonical::sigma0)
        .def_readonly("sigma1", &SlsCanonical::sigma1)
        .def_readonly("gamma1", &SlsCanonical::gamma1);

    py::class_<GMParams>(m, "GMParams")
        .def(py::init([](double k0, const std::vector<std::pair<double, double>>& branches) {
                 std::vector<MaxwellBranch> bs;
                 for (const auto& [k, tau] : branches) bs.push_back({k, tau});
                 return GMParams(k0, std::move(bs));
             }),
             py::arg("k0"), py::arg("branches"))
        .def_readonly("k0", &GMParams::k0)
        .def_property_readonly("branches", [](const GMParams& p) {
            std::vector<std::pair<double, double>> out;
            for (const auto& b : p.branches) out.emplace_back(b.k, b.tau);
            return out;
        });

    py::class_<GKVParams>(m, "GKVParams")
        .def(py::init([](double k0, const std::vector<std::pair<double, double>>& branches) {
                 std::vector<KelvinVoigtBranch> bs;
                 for (const auto& [k, c] : branches) bs.push_back({k, c});
                 return GKVParams(k0, std::move(bs));
             }),
             py::arg("k0"), py::arg("branches"))
        .def_readonly("k0", &GKVParams::k0)
        .def_property_readonly("branches", [](const GKVParams& p) {
            std::vector<std::pair<double, double>> out;
            for (const auto& b : p.branches) out.emplace_back(b.k, b.c);
            return out;
        });

    m.def("gm_to_canonical", [](const GMParams& p) { return to_canonical(p); }, py::arg("gm"));
    m.def("gkv_to_canonical", [](const GKVParams& p) { return to_canonical(p); }, py::arg("gkv"));
    m.def("gm_from_canonical", &gm_from_canonical, py::arg("canonical"));
    m.def("gkv_from_canonical", &gkv_from_canonical, py::arg("canonical"));

    py::class_<FrBDModel>(m, "FrBDModel")
        .def_static("gm", &make_gm_model, py::arg("k0"), py::arg("branches"), py::arg("law"),
                    py::arg("epsilon") = 0.0, py::arg("p") = 1.0)
        .def_static("gkv", &make_gkv_model, py::arg("k0"), py::arg("branches"), py::arg("law"),
                    py::arg("epsilon") = 0.0, py::arg("p") = 1.0)
        .def_property_readonly("state_dim", &FrBDModel::state_dim)
        .def_property_readonly("normal_force",
                               [](const FrBDModel& m_) { return m_.normal_force; });

    m.def("bristle_force",
          [](const FrBDModel& m_, const std::vector<double>& x) { return bristle_force(m_, x); },
          py::arg("model"), py::arg("state"));
    m.def("friction_force",
          [](const FrBDModel& m_, const std::vector<double>& x) { return friction_force(m_, x); },
          py::arg("model"), py::arg("state"));
    m.def("rhs",
          [](const FrBDModel& m_, double v, const std::vector<double>& x) {
              std::vector<double> dxdt(x.size());
              rhs(m_, v, x, dxdt);
              return dxdt;
          },
          py::arg("model"), py::arg("v"), py::arg("state"));
    m.def("steady_state",
          [](const FrBDModel& m_, double v) {
              const SteadyState ss = steady_state(m_, v);
              return py::make_tuple(ss.f, ss.x);
          },
          py::arg("model"), py::arg("v"), "Returns (f, state) of the closed-form steady state");
    m.def("storage",
          [](const FrBDModel& m_, const std::vector<double>& x) { return storage(m_, x); },
          py::arg("model"), py::arg("state"));
    m.def("dissipation_rate",
          [](const FrBDModel& m_, const std::vector<double>& x, double v) {
              return dissipation_rate(m_, x, v);
          },
          py::arg("model"), py::arg("state"), py::arg("v"));
    m.def("supplied_power",
          [](const FrBDModel& m_, const std::vector<double>& x, double v) {
              return supplied_power(m_, x, v);
          },
          py::arg("model"), py::arg("state"), py::arg("v"));

    py::class_<InputSignal>(m, "InputSignal")
        .def_static("constant", &InputSignal::constant, py::arg("v"))
        .def_static("sinusoid", &InputSignal::sinusoid, py::arg("bias"), py::arg("amplitude"),
                    py::arg("freq_hz"), py::arg("phase") = 0.0)
        .def_static("sampled", &InputSignal::sampled, py::arg("times"), py::arg("values"))
        .def("__call__", &InputSignal::eval, py::arg("t"));

    py::class_<SolverConfig> solver(m, "SolverConfig");
    solver.def(py::init<>())
        .def_readwrite("dt", &SolverConfig::dt)
        .def_readwrite("rtol", &SolverConfig::rtol)
        .def_readwrite("atol", &SolverConfig::atol)
        .def_readwrite("t0", &SolverConfig::t0)
        .def_readwrite("t1", &SolverConfig::t1)
        .def_readwrite("record_stride", &SolverConfig::record_stride)
        .def_readwrite("method", &SolverConfig::method);
    py::enum_<SolverConfig::Method>(solver, "Method")
        .value("FixedRk4", SolverConfig::Method::FixedRk4)
        .value("AdaptiveRk45", SolverConfig::Method::AdaptiveRk45);

    py::class_<Trajectory>(m, "Trajectory")
        .def_readonly("t", &Trajectory::t)
        .def_readonly("states", &Trajectory::states)
        .def_readonly("channel_names", &Trajectory::channel_names)
        .def("channel",
             [](const Trajectory& traj, const std::string& name) { return traj.channel(name); },
             py::arg("name"));

    m.def("simulate",
          [](const FrBDModel& m_, const std::vector<double>& x0, const InputSignal& v,
             const SolverConfig& cfg) { return simulate_model(m_, x0, v, cfg); },
          py::arg("model"), py::arg("x0"), py::arg("input"), py::arg("solver"),
          "Integrate the model; records channels v, f, pf, V and W_in");

    py::class_<PassivityAudit>(m, "PassivityAudit")
        .def_readonly("margin", &PassivityAudit::margin)
        .def_readonly("tol_num", &PassivityAudit::tol_num)
        .def_readonly("certified", &PassivityAudit::certified);
    m.def("passivity_audit", &passivity_audit, py::arg("trajectory"));

    m.def("loop_area",
          [](const std::vector<std::pair<double, double>>& loop) { return loop_area(loop); },
          py::arg("loop"));
}
