// Copyright 2026 The spinchain Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <sstream>

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "spinchain/chain_model.hpp"
#include "spinchain/coherent_transfer.hpp"
#include "spinchain/common_environment.hpp"
#include "spinchain/lindblad.hpp"
#include "spinchain/sweep.hpp"

namespace py = pybind11;
using namespace spinchain;

namespace {

std::optional<GaussianEnvironment> theta_env(std::optional<double> theta) {
    if (!theta) return std::nullopt;
    return GaussianEnvironment{*theta};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Spin-chain state transfer under common and local decoherence";
    m.attr("__version__") = kVersion;

    static py::exception<ConfigError> config_error(m, "ConfigError", PyExc_ValueError);
    static py::exception<ValidationError> validation_error(m, "ValidationError", PyExc_ValueError);
    static py::exception<NumericalError> numerical_error(m, "NumericalError", PyExc_ArithmeticError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const ConfigError &e) {
            config_error(e.what());
        } catch (const ValidationError &e) {
            validation_error(e.what());
        } catch (const NumericalError &e) {
            numerical_error(e.what());
        } catch (const SizeLimitError &e) {
            PyErr_SetString(PyExc_OverflowError, e.what());
        }
    });

    py::enum_<ChainFamily>(m, "ChainFamily")
        .value("HeisenbergXXX", ChainFamily::HeisenbergXXX)
        .value("MirrorXY", ChainFamily::MirrorXY);
    py::enum_<Channel>(m, "Channel")
        .value("Dephasing", Channel::Dephasing)
        .value("Damping", Channel::Damping);

    py::class_<ChainSpec>(m, "ChainSpec")
        .def_static("heisenberg", &ChainSpec::heisenberg, py::arg("n"), py::arg("j") = 1.0,
                    py::arg("field") = 0.0)
        .def_static("mirror", &ChainSpec::mirror, py::arg("n"), py::arg("omega") = 1.0)
        .def_readonly("n", &ChainSpec::n)
        .def_readonly("family", &ChainSpec::family)
        .def_readonly("j", &ChainSpec::j)
        .def_readonly("omega", &ChainSpec::omega)
        .def_readonly("field", &ChainSpec::field)
        .def("__repr__", [](const ChainSpec &s) {
            std::ostringstream out;
            out << "ChainSpec(" << to_string(s.family) << ", n=" << s.n << ")";
            return out.str();
        });

    py::class_<TransferAmplitude>(m, "TransferAmplitude")
        .def_readonly("value", &TransferAmplitude::value)
        .def_readonly("magnitude", &TransferAmplitude::magnitude)
        .def_readonly("phase", &TransferAmplitude::phase)
        .def_readonly("t", &TransferAmplitude::t);

    py::class_<GaussianEnvironment>(m, "GaussianEnvironment")
        .def(py::init([](double theta) {
                 GaussianEnvironment env{theta};
                 env.validate();
                 return env;
             }),
             py::arg("theta"))
        .def_readonly("theta", &GaussianEnvironment::theta);

    py::class_<ExplicitEnvironment>(m, "ExplicitEnvironment")
        .def(py::init([](std::vector<double> g, std::vector<double> p) {
                 ExplicitEnvironment env{std::move(g), std::move(p)};
                 env.validate();
                 return env;
             }),
             py::arg("couplings"), py::arg("up_probabilities"))
        .def_readonly("couplings", &ExplicitEnvironment::couplings)
        .def_readonly("up_probabilities", &ExplicitEnvironment::up_probabilities);

    py::class_<EntanglementResult>(m, "EntanglementResult")
        .def_readonly("lambda_", &EntanglementResult::lambda)
        .def_readonly("zeta", &EntanglementResult::zeta)
        .def_readonly("xi0", &EntanglementResult::xi0)
        .def_readonly("xi", &EntanglementResult::xi);

    py::class_<LindbladConfig>(m, "LindbladConfig")
        .def(py::init([](Channel channel, double gamma) {
                 LindbladConfig c{channel, gamma};
                 c.validate();
                 return c;
             }),
             py::arg("channel"), py::arg("gamma"))
        .def_readonly("channel", &LindbladConfig::channel)
        .def_readonly("gamma", &LindbladConfig::gamma);

    py::class_<BlochResponse>(m, "BlochResponse")
        .def_readonly("population", &BlochResponse::population)
        .def_readonly("coherence", &BlochResponse::coherence);

    m.def("mirror_couplings", &mirror_couplings, py::arg("n"), py::arg("omega"));
    m.def("build_subspace_hamiltonian",
          [](const ChainSpec &s) { return build_subspace_hamiltonian(s).matrix; });
    m.def("build_full_hamiltonian",
          [](const ChainSpec &s) { return build_full_hamiltonian(s).matrix; });

    m.def("transfer_amplitude",
          [](const ChainSpec &s, double t) {
              return transfer_amplitude(build_subspace_hamiltonian(s), t);
          },
          py::arg("spec"), py::arg("t"));
    m.def("closed_form_mirror_amplitude", &closed_form_mirror_amplitude, py::arg("n"),
          py::arg("omega"), py::arg("t"));
    m.def("average_fidelity_free", py::overload_cast<double>(&average_fidelity_free),
          py::arg("magnitude"));
    m.def("max_fidelity_search",
          [](const ChainSpec &s, double t_max, std::optional<double> theta,
             std::size_t grid_points) {
              SearchOptions options;
              options.grid_points = grid_points;
              const auto r = max_fidelity_search(s, TimeWindow{t_max}, theta_env(theta), options);
              return py::make_tuple(r.t_star, r.f_max);
          },
          py::arg("spec"), py::arg("t_max"), py::arg("theta") = py::none(),
          py::arg("grid_points") = 100000);
    m.def("critical_chain_length",
          [](ChainFamily family, double coupling, double threshold, double t_max,
             std::optional<double> theta, int n_limit) {
              const auto r = critical_chain_length(family, coupling, threshold,
                                                   TimeWindow{t_max}, theta_env(theta), n_limit);
              py::list table;
              for (const auto &e : r.per_n) table.append(py::make_tuple(e.n, e.t_star, e.f_max));
              return py::make_tuple(r.n_c, table);
          },
          py::arg("family"), py::arg("coupling"), py::arg("threshold") = 2.0 / 3.0,
          py::arg("t_max") = 4000.0, py::arg("theta") = py::none(), py::arg("n_limit") = 200);

    m.def("gaussian_decoherence_factor",
          [](double theta, double t) { return gaussian_decoherence_factor({theta}, t); },
          py::arg("theta"), py::arg("t"));
    m.def("explicit_decoherence_factor", &explicit_decoherence_factor, py::arg("env"),
          py::arg("t"));
    m.def("average_fidelity_common_env",
          [](const TransferAmplitude &f, double theta, double t) {
              return average_fidelity_common_env(f, GaussianEnvironment{theta}, t);
          },
          py::arg("f"), py::arg("theta"), py::arg("t"));
    m.def("distribute_entanglement",
          [](const TransferAmplitude &f, std::optional<double> theta, double t) {
              return distribute_entanglement(f, theta_env(theta), t);
          },
          py::arg("f"), py::arg("theta"), py::arg("t"));
    m.def("wootters_concurrence", [](const Eigen::Matrix4cd &rho) { return wootters_concurrence(rho); },
          py::arg("rho"));

    m.def("integrate_master_equation",
          [](const ChainSpec &s, const LindbladConfig &c, double t_end, std::size_t samples) {
              const auto traj = integrate_master_equation(
                  s, c, SubspaceDensity::basis_operator(s.n, 1, 1), t_end, samples);
              std::vector<CMatrix> states;
              for (const auto &st : traj.states) states.push_back(st.matrix);
              return py::make_tuple(traj.times, states);
          },
          py::arg("spec"), py::arg("config"), py::arg("t_end"), py::arg("samples"),
          "Evolves |1><1| and returns (times, density matrices).");
    m.def("bloch_response",
          [](const ChainSpec &s, const LindbladConfig &c, double t) {
              return bloch_response(s, c, t);
          },
          py::arg("spec"), py::arg("config"), py::arg("t"));
    m.def("average_fidelity_bloch",
          py::overload_cast<const ChainSpec &, const LindbladConfig &, double>(
              &average_fidelity_bloch),
          py::arg("spec"), py::arg("config"), py::arg("t"));
    m.def("max_excitation_probability",
          [](const ChainSpec &s, const LindbladConfig &c, double t_max) {
              const auto r = max_excitation_probability(s, c, TimeWindow{t_max});
              return py::make_tuple(r.t_star, r.p_max);
          },
          py::arg("spec"), py::arg("config"), py::arg("t_max"));

    m.def("run_cli",
          [](const std::vector<std::string> &args) {
              std::ostringstream out, err;
              const int code = run_cli(args, out, err);
              return py::make_tuple(code, out.str(), err.str());
          },
          py::arg("args"), "Runs the command-line front end; returns (exit code, stdout, stderr).");
}
