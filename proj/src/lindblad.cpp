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

#include "spinchain/lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <boost/math/tools/minima.hpp>

#include "spinchain/error.hpp"

namespace spinchain {

const char *to_string(Channel channel) {
    return channel == Channel::Dephasing ? "dephasing" : "damping";
}

void LindbladConfig::validate() const {
    if (!(gamma >= 0.0) || !std::isfinite(gamma)) {
        throw ConfigError("gamma must be >= 0", "gamma");
    }
}

SubspaceDensity SubspaceDensity::basis_operator(int n, int a, int b) {
    if (n < 1 || a < 0 || a > n || b < 0 || b > n) {
        throw ValidationError("basis label out of range");
    }
    SubspaceDensity rho;
    rho.n = n;
    rho.matrix = CMatrix::Zero(n + 1, n + 1);
    rho.matrix(a, b) = 1.0;
    return rho;
}

PhysicalityReport SubspaceDensity::physicality() const {
    PhysicalityReport report;
    report.trace_drift = std::abs(matrix.trace() - 1.0);
    report.hermiticity_defect = (matrix - matrix.adjoint()).cwiseAbs().maxCoeff();
    const CMatrix hermitian = (matrix + matrix.adjoint()) / 2.0;
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(hermitian, Eigen::EigenvaluesOnly);
    report.min_eigenvalue = solver.eigenvalues().minCoeff();
    return report;
}

PhysicalityReport Trajectory::physicality() const {
    PhysicalityReport worst;
    worst.min_eigenvalue = std::numeric_limits<double>::infinity();
    for (const auto &state : states) {
        const auto r = state.physicality();
        worst.trace_drift = std::max(worst.trace_drift, r.trace_drift);
        worst.hermiticity_defect = std::max(worst.hermiticity_defect, r.hermiticity_defect);
        worst.min_eigenvalue = std::min(worst.min_eigenvalue, r.min_eigenvalue);
    }
    return worst;
}

CMatrix apply_generator(const LindbladConfig &config, const SubspaceHamiltonian &h,
                        const CMatrix &rho) {
    const Eigen::Index dim = h.n + 1;
    if (h.matrix.rows() != dim || rho.rows() != dim || rho.cols() != dim) {
        throw ValidationError("density dimension " + std::to_string(rho.rows()) + "x" +
                              std::to_string(rho.cols()) + " does not match chain length " +
                              std::to_string(h.n));
    }
    const Complex minus_i{0.0, -1.0};
    CMatrix out = minus_i * (h.matrix * rho - rho * h.matrix);
    const double g = config.gamma;
    if (g == 0.0) return out;

    if (config.channel == Channel::Dephasing) {
        // -(g/2)(rho - z rho z) summed over sites scales rho_ab by
        // -g (e_a + e_b - 2 [a == b] e_a), e_a = 1 for excitation labels.
        for (Eigen::Index b = 0; b < dim; ++b) {
            for (Eigen::Index a = 0; a < dim; ++a) {
                const int ea = a > 0 ? 1 : 0;
                const int eb = b > 0 ? 1 : 0;
                const int weight = ea + eb - (a == b ? 2 * ea : 0);
                if (weight != 0) out(a, b) -= g * weight * rho(a, b);
            }
        }
    } else {
        // sum_i P_i is the excitation projector; s+_i rho s-_i = rho_ii |0><0|.
        Complex decayed{0.0, 0.0};
        for (Eigen::Index b = 0; b < dim; ++b) {
            for (Eigen::Index a = 0; a < dim; ++a) {
                const int weight = (a > 0 ? 1 : 0) + (b > 0 ? 1 : 0);
                if (weight != 0) out(a, b) -= 0.5 * g * weight * rho(a, b);
            }
            if (b > 0) decayed += rho(b, b);
        }
        out(0, 0) += g * decayed;
    }
    return out;
}

std::vector<CMatrix> propagate_operator(const ChainSpec &spec, const LindbladConfig &config,
                                        const CMatrix &rho0, std::span<const double> times,
                                        const IntegratorOptions &options) {
    config.validate();
    const SubspaceHamiltonian h = build_subspace_hamiltonian(spec);
    if (rho0.rows() != h.n + 1 || rho0.cols() != h.n + 1) {
        throw ValidationError("initial operator does not match chain length");
    }
    auto rhs = [&](const CMatrix &rho) { return apply_generator(config, h, rho); };
    return integrate_dopri5<CMatrix>(rhs, rho0, times, options, [](CMatrix &) {});
}

Trajectory integrate_master_equation(const ChainSpec &spec, const LindbladConfig &config,
                                     const SubspaceDensity &rho0, double t_end,
                                     std::size_t samples, const IntegratorOptions &options) {
    config.validate();
    if (!(t_end > 0.0) || !std::isfinite(t_end)) throw ConfigError("t_end must be > 0", "t-max");
    if (samples < 2) throw ConfigError("samples must be >= 2", "samples");
    if (rho0.n != spec.n) throw ValidationError("initial state does not match chain length");
    if (!rho0.physicality().ok()) throw ValidationError("initial state is not a density matrix");

    const SubspaceHamiltonian h = build_subspace_hamiltonian(spec);
    Trajectory traj;
    traj.spec = spec;
    traj.config = config;
    traj.times.resize(samples);
    for (std::size_t k = 0; k < samples; ++k) {
        traj.times[k] = t_end * static_cast<double>(k) / static_cast<double>(samples - 1);
    }
    auto rhs = [&](const CMatrix &rho) { return apply_generator(config, h, rho); };
    auto hermitize = [](CMatrix &rho) { rho = ((rho + rho.adjoint()) / 2.0).eval(); };
    const auto states = integrate_dopri5<CMatrix>(rhs, rho0.matrix, traj.times, options, hermitize);
    traj.states.reserve(samples);
    for (const auto &m : states) traj.states.push_back({spec.n, m});

    const auto report = traj.physicality();
    if (!report.ok()) {
        throw NumericalError("trajectory left the set of density matrices: trace drift " +
                             std::to_string(report.trace_drift) + ", min eigenvalue " +
                             std::to_string(report.min_eigenvalue));
    }
    return traj;
}

QubitDensity reduce_to_target(const SubspaceDensity &rho) {
    QubitDensity out;
    const double p = rho.rho_nn();
    out.matrix(0, 0) = 1.0 - p;
    out.matrix(1, 1) = p;
    out.matrix(0, 1) = rho.rho_0n();
    out.matrix(1, 0) = std::conj(rho.rho_0n());
    return out;
}

Complex mirror_ideal_phase(int n) {
    static constexpr Complex kPowers[4] = {{1, 0}, {0, -1}, {-1, 0}, {0, 1}};
    return kPowers[static_cast<std::size_t>((n - 1) % 4)];
}

double state_fidelity(const QubitDensity &reduced, Complex alpha, Complex beta,
                      Complex ideal_phase) {
    if (std::abs(std::norm(alpha) + std::norm(beta) - 1.0) > 1e-10) {
        throw ConfigError("input amplitudes are not normalized", "alpha");
    }
    const auto &m = reduced.matrix;
    return m(0, 0).real() * std::norm(alpha) + m(1, 1).real() * std::norm(beta) +
           2.0 * (ideal_phase * m(0, 1) * std::conj(alpha) * beta).real();
}

double state_fidelity(const QubitDensity &reduced, Complex alpha, Complex beta, int n) {
    return state_fidelity(reduced, alpha, beta, mirror_ideal_phase(n));
}

PhaseReference default_phase_reference(ChainFamily family) {
    return family == ChainFamily::MirrorXY ? PhaseReference::MirrorIdeal
                                           : PhaseReference::OptimalField;
}

BlochResponse bloch_response(const ChainSpec &spec, const LindbladConfig &config, double t,
                             const IntegratorOptions &options) {
    if (!(t > 0.0)) throw ConfigError("time must be > 0", "t");
    const int n = spec.n;
    const double times[] = {t};
    constexpr double kLeak = 1e-10;

    const CMatrix pop = propagate_operator(spec, config,
                                           SubspaceDensity::basis_operator(n, 1, 1).matrix,
                                           times, options)
                            .front();
    const double pop_leak = std::max(pop.col(0).tail(n).cwiseAbs().maxCoeff(),
                                     pop.row(0).tail(n).cwiseAbs().maxCoeff());

    const CMatrix coh = propagate_operator(spec, config,
                                           SubspaceDensity::basis_operator(n, 1, 0).matrix,
                                           times, options)
                            .front();
    const double coh_leak = std::max(coh.bottomRightCorner(n, n).cwiseAbs().maxCoeff(),
                                     std::max(std::abs(coh(0, 0)),
                                              coh.row(0).tail(n).cwiseAbs().maxCoeff()));
    if (pop_leak > kLeak || coh_leak > kLeak) {
        throw NumericalError("Bloch reduction invalid: excitation-sector leakage " +
                             std::to_string(std::max(pop_leak, coh_leak)));
    }
    BlochResponse response;
    response.population = pop(n, n).real();
    response.coherence = std::conj(coh(n, 0));
    return response;
}

double average_fidelity_from_response(const BlochResponse &response, int n,
                                      PhaseReference reference) {
    const double aligned = reference == PhaseReference::MirrorIdeal
                               ? (mirror_ideal_phase(n) * response.coherence).real()
                               : std::abs(response.coherence);
    return 0.5 + response.population / 6.0 + aligned / 3.0;
}

double average_fidelity_bloch(const ChainSpec &spec, const LindbladConfig &config, double t,
                              PhaseReference reference) {
    return average_fidelity_from_response(bloch_response(spec, config, t), spec.n, reference);
}

double average_fidelity_bloch(const ChainSpec &spec, const LindbladConfig &config, double t) {
    return average_fidelity_bloch(spec, config, t, default_phase_reference(spec.family));
}

MaxProbability max_excitation_probability(const ChainSpec &spec, const LindbladConfig &config,
                                          TimeWindow window, std::size_t samples) {
    if (!(window.t_max > 0.0) || !std::isfinite(window.t_max)) {
        throw ConfigError("search window (0, t_max] is empty", "window");
    }
    const Trajectory traj = integrate_master_equation(
        spec, config, SubspaceDensity::basis_operator(spec.n, 1, 1), window.t_max,
        std::max<std::size_t>(samples, 3));

    std::size_t best = 1;
    for (std::size_t k = 1; k < traj.states.size(); ++k) {
        if (traj.states[k].rho_nn() > traj.states[best].rho_nn()) best = k;
    }
    MaxProbability result{traj.times[best], traj.states[best].rho_nn()};

    const std::size_t start = best - 1;
    const double t0 = traj.times[start];
    const double hi = best + 1 < traj.times.size() ? traj.times[best + 1] : traj.times[best];
    auto neg_population = [&](double s) {
        if (s <= t0) return -traj.states[start].rho_nn();
        const double dt[] = {s - t0};
        return -propagate_operator(spec, config, traj.states[start].matrix, dt).front()(spec.n, spec.n).real();
    };
    constexpr int kBits = std::numeric_limits<double>::digits / 2;
    const auto [t, neg] = boost::math::tools::brent_find_minima(neg_population, t0, hi, kBits);
    if (-neg > result.p_max && t > 0.0) {
        result.t_star = t;
        result.p_max = -neg;
    }
    return result;
}

}  // namespace spinchain
