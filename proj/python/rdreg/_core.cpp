#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rdreg/equilibrium.hpp"
#include "rdreg/pipeline.hpp"
#include "rdreg/simulator.hpp"
#include "rdreg/synthesis.hpp"

namespace py = pybind11;
using namespace rdreg;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Observer-based PI boundary regulation toolkit";
    m.attr("__version__") = kToolkitVersion;

    py::register_exception<Error>(m, "ToolkitError");

    py::enum_<Scenario>(m, "Scenario")
        .value("DIRICHLET_MEAS_DIRICHLET_REG", Scenario::DirichletMeasDirichletReg)
        .value("NEUMANN_MEAS_NEUMANN_REG", Scenario::NeumannMeasNeumannReg)
        .value("DIRICHLET_MEAS_NEUMANN_REG", Scenario::DirichletMeasNeumannReg);

    py::class_<CoefficientFunction>(m, "CoefficientFunction")
        .def_static("constant", &CoefficientFunction::constant)
        .def_static("polynomial", &CoefficientFunction::polynomial)
        .def_static("tabulated", &CoefficientFunction::tabulated)
        .def("__call__", &CoefficientFunction::operator());

    py::class_<PlantSpec>(m, "PlantSpec")
        .def(py::init([](const CoefficientFunction& p, const CoefficientFunction& q, double q_c,
                         Scenario scenario) {
                 return PlantSpec{p, q, q_c, scenario};
             }),
             py::arg("p"), py::arg("q"), py::arg("q_c"), py::arg("scenario"))
        .def_readwrite("q_c", &PlantSpec::q_c)
        .def_readwrite("scenario", &PlantSpec::scenario);

    py::class_<SpectralBasis>(m, "SpectralBasis")
        .def("n_max", &SpectralBasis::n_max)
        .def("eigenvalue", &SpectralBasis::lambda, py::arg("n"))
        .def("eigenvalues",
             [](const SpectralBasis& b) {
                 Eigen::VectorXd v(b.n_max());
                 for (int n = 1; n <= b.n_max(); ++n) v[n - 1] = b.lambda(n);
                 return v;
             })
        .def("phi", [](const SpectralBasis& b, int n) { return b.pairs.at(n - 1).phi; },
             py::arg("n"))
        .def("grid_x", [](const SpectralBasis& b) {
            Eigen::VectorXd x(b.grid.points);
            for (int i = 0; i < b.grid.points; ++i) x[i] = b.grid.x(i);
            return x;
        });

    m.def("solve_plant_basis", &solve_plant_basis, py::arg("plant"), py::arg("n_max") = 525,
          py::arg("grid_points") = 4201);
    m.def("select_N0", &select_N0, py::arg("plant"), py::arg("basis"), py::arg("delta"));
    m.def("check_cauchy_condition", &check_cauchy_condition, py::arg("plant"));

    py::class_<GainSet>(m, "GainSet")
        .def(py::init([](const Eigen::RowVectorXd& K, const Eigen::VectorXd& L, double delta) {
                 GainSet g;
                 g.K = K;
                 g.L = L;
                 g.delta = delta;
                 return g;
             }),
             py::arg("K"), py::arg("L"), py::arg("delta") = 0.5)
        .def_readwrite("K", &GainSet::K)
        .def_readwrite("L", &GainSet::L)
        .def_readwrite("delta", &GainSet::delta);

    m.def("default_gains",
          [](const PlantSpec& plant, const SpectralBasis& basis, int N0, double delta) {
              return default_gains(plant, basis, N0, delta);
          },
          py::arg("plant"), py::arg("basis"), py::arg("N0"), py::arg("delta"));

    py::class_<ReducedModel>(m, "ReducedModel")
        .def_readonly("N0", &ReducedModel::N0)
        .def_readonly("N", &ReducedModel::N)
        .def_readonly("A0", &ReducedModel::A0)
        .def_readonly("A1", &ReducedModel::A1)
        .def_readonly("F", &ReducedModel::F)
        .def_readonly("B1", &ReducedModel::B1)
        .def_readonly("C0", &ReducedModel::C0)
        .def_property_readonly("alpha0", [](const ReducedModel& md) { return md.tc.alpha0; })
        .def_property_readonly("beta0", [](const ReducedModel& md) { return md.tc.beta0; })
        .def_property_readonly("alpha1", [](const ReducedModel& md) { return md.tc.alpha1; });

    m.def("build_reduced_matrices",
          [](const PlantSpec& plant, const SpectralBasis& basis, int N0, int N,
             const Eigen::RowVectorXd& K, const Eigen::VectorXd& L) {
              return build_reduced_matrices(plant, basis, N0, N, K, L);
          },
          py::arg("plant"), py::arg("basis"), py::arg("N0"), py::arg("N"), py::arg("K"),
          py::arg("L"));

    py::class_<DesignCertificate>(m, "DesignCertificate")
        .def_readonly("N", &DesignCertificate::N)
        .def_readonly("feasible", &DesignCertificate::feasible)
        .def_readonly("alpha", &DesignCertificate::alpha)
        .def_readonly("beta", &DesignCertificate::beta)
        .def_readonly("gamma", &DesignCertificate::gamma)
        .def_readonly("theta_max_eig", &DesignCertificate::theta_max_eig)
        .def_readonly("gamma_n_margin", &DesignCertificate::gamma_n_margin);

    m.def("certify_at", &certify_at, py::arg("model"));
    m.def("find_minimal_N",
          [](const PlantSpec& plant, const SpectralBasis& basis, const GainSet& gains,
             double delta, int N_max) { return find_minimal_N(plant, basis, gains, delta, N_max); },
          py::arg("plant"), py::arg("basis"), py::arg("gains"), py::arg("delta"),
          py::arg("N_max") = 20);

    py::class_<EquilibriumState>(m, "EquilibriumState")
        .def_readonly("r_e", &EquilibriumState::r_e)
        .def_readonly("u_e", &EquilibriumState::u_e)
        .def_readonly("xi_e", &EquilibriumState::xi_e)
        .def_readonly("y_e", &EquilibriumState::y_e)
        .def_readonly("max_residual", &EquilibriumState::max_residual);

    m.def("solve_equilibrium", &solve_equilibrium, py::arg("model"), py::arg("gains"),
          py::arg("r_e"));

    py::class_<ReferenceSignal>(m, "ReferenceSignal")
        .def_static("constant", &ReferenceSignal::constant)
        .def_static("schedule", &ReferenceSignal::schedule)
        .def_static("sampled", &ReferenceSignal::sampled)
        .def("__call__", &ReferenceSignal::operator());

    py::enum_<StepMode>(m, "StepMode")
        .value("FIXED", StepMode::Fixed)
        .value("ADAPTIVE", StepMode::Adaptive);

    py::class_<SimConfig>(m, "SimConfig")
        .def(py::init<>())
        .def_readwrite("M", &SimConfig::M)
        .def_readwrite("horizon", &SimConfig::horizon)
        .def_readwrite("step_mode", &SimConfig::step_mode)
        .def_readwrite("step", &SimConfig::step)
        .def_readwrite("adaptive_tol", &SimConfig::adaptive_tol)
        .def_readwrite("r", &SimConfig::r)
        .def_readwrite("store_max", &SimConfig::store_max)
        .def("set_u0",
             [](SimConfig& c, double u0) {
                 c.u0 = u0;
                 c.u0_given = true;
             })
        .def("set_z0_samples", [](SimConfig& c, const SpectralBasis& basis,
                                  const Eigen::ArrayXd& samples) {
            c.z0.grid = basis.grid;
            c.z0.v = samples;
        });

    py::class_<Trajectory>(m, "Trajectory")
        .def_readonly("M", &Trajectory::M)
        .def_readonly("N", &Trajectory::N)
        .def_readonly("step_used", &Trajectory::step_used)
        .def_readonly("t", &Trajectory::t)
        .def_readonly("w", &Trajectory::w)
        .def_readonly("what", &Trajectory::what)
        .def_readonly("u", &Trajectory::u)
        .def_readonly("xi", &Trajectory::xi)
        .def_readonly("y_m", &Trajectory::y_m)
        .def_readonly("y_r", &Trajectory::y_r)
        .def_readonly("r", &Trajectory::r)
        .def_readonly("err", &Trajectory::err)
        .def_readonly("energy", &Trajectory::energy);

    m.def("simulate", &simulate, py::arg("model"), py::arg("gains"), py::arg("basis"),
          py::arg("config"));
    m.def("observer_error_check", &observer_error_check, py::arg("trajectory"), py::arg("model"));

    py::class_<DecayMetrics>(m, "DecayMetrics")
        .def_readonly("fitted_rate", &DecayMetrics::fitted_rate)
        .def_readonly("tracking_sup", &DecayMetrics::tracking_sup)
        .def_readonly("steady_error", &DecayMetrics::steady_error)
        .def_readonly("fit_skipped", &DecayMetrics::fit_skipped);

    m.def("fit_decay_metrics", &fit_decay_metrics, py::arg("trajectory"), py::arg("delta"),
          py::arg("equilibrium"));

    m.def("run_command", &run_command, py::arg("command"), py::arg("config_path"),
          py::arg("out_dir"));
}
