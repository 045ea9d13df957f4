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

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "spinchain/chain_model.hpp"
#include "spinchain/common_environment.hpp"
#include "spinchain/dormand_prince.hpp"

namespace spinchain {

enum class Channel { Dephasing, Damping };

const char *to_string(Channel channel);

/// Local environment acting identically on every spin with rate gamma.
///   dephasing: L_i rho = -(gamma/2)(rho - z_i rho z_i)
///   damping:   L_i rho = -(gamma/2)(P_i rho + rho P_i - 2 s+_i rho s-_i)
/// with z_i = 1 - 2|i><i|, s-_i = |i><0|, s+_i = |0><i|, P_i = |i><i| on the
/// zero-plus-single-excitation subspace.
struct LindbladConfig {
    Channel channel = Channel::Dephasing;
    double gamma = 0.0;

    void validate() const;
};

struct PhysicalityReport {
    double trace_drift = 0.0;
    double hermiticity_defect = 0.0;
    double min_eigenvalue = 0.0;

    bool ok() const {
        return trace_drift < 1e-8 && hermiticity_defect < 1e-9 && min_eigenvalue >= -1e-8;
    }
};

/// Density matrix over {|0>, |1>, ..., |n>}.
struct SubspaceDensity {
    int n = 0;
    CMatrix matrix;

    /// |a><b| for basis labels a, b in 0..n.
    static SubspaceDensity basis_operator(int n, int a, int b);

    double rho_nn() const { return matrix(n, n).real(); }
    Complex rho_0n() const { return matrix(0, n); }

    PhysicalityReport physicality() const;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<SubspaceDensity> states;
    ChainSpec spec;
    LindbladConfig config;

    /// Worst-case figures over all samples.
    PhysicalityReport physicality() const;
};

/// d rho / dt = -i[H, rho] + sum_i L_i rho. Throws ValidationError on a
/// dimension mismatch.
CMatrix apply_generator(const LindbladConfig &config, const SubspaceHamiltonian &h,
                        const CMatrix &rho);

/// Evolves an arbitrary (not necessarily physical) operator under the
/// generator and returns it at each of `times` (non-decreasing, from t = 0).
/// No re-symmetrization is applied.
std::vector<CMatrix> propagate_operator(const ChainSpec &spec, const LindbladConfig &config,
                                        const CMatrix &rho0, std::span<const double> times,
                                        const IntegratorOptions &options = {});

/// Physical evolution sampled at `samples` equally spaced times in [0, t_end].
/// The state is re-symmetrized after each accepted step.
Trajectory integrate_master_equation(const ChainSpec &spec, const LindbladConfig &config,
                                     const SubspaceDensity &rho0, double t_end,
                                     std::size_t samples, const IntegratorOptions &options = {});

/// Reduced state of spin n: [[1 - rho_nn, rho_0n], [rho_0n*, rho_nn]].
QubitDensity reduce_to_target(const SubspaceDensity &rho);

/// Fidelity with the ideal output alpha|0> + ideal_phase * beta|1>.
double state_fidelity(const QubitDensity &reduced, Complex alpha, Complex beta,
                      Complex ideal_phase);

/// Same with the mirror-chain ideal phase (-i)^(n-1).
double state_fidelity(const QubitDensity &reduced, Complex alpha, Complex beta, int n);

/// (-i)^(n-1)
Complex mirror_ideal_phase(int n);

enum class PhaseReference {
    /// Compare against alpha|0> + (-i)^(n-1) beta|1>.
    MirrorIdeal,
    /// The field rotates the coherence freely; use its magnitude.
    OptimalField,
};

/// MirrorIdeal for mirror chains, OptimalField for Heisenberg chains.
PhaseReference default_phase_reference(ChainFamily family);

struct BlochResponse {
    double population = 0.0;  // rho_nn(t) from |1><1|
    Complex coherence;        // <0| rho(t) |n> from |0><1|
};

/// Two linear runs giving the responses every input state is built from.
/// Throws NumericalError if either run leaks out of its excitation block.
BlochResponse bloch_response(const ChainSpec &spec, const LindbladConfig &config, double t,
                             const IntegratorOptions &options = {});

/// Bloch-sphere average of the output fidelity at time t:
/// 1/2 + p/6 + Re(phase c)/3.
double average_fidelity_bloch(const ChainSpec &spec, const LindbladConfig &config, double t);
double average_fidelity_bloch(const ChainSpec &spec, const LindbladConfig &config, double t,
                              PhaseReference reference);
double average_fidelity_from_response(const BlochResponse &response, int n,
                                      PhaseReference reference);

struct MaxProbability {
    double t_star = 0.0;
    double p_max = 0.0;
};

/// Maximizes rho_nn(t) from |1><1| over (0, t_max]: trajectory sampling
/// followed by Brent refinement around the best samples.
MaxProbability max_excitation_probability(const ChainSpec &spec, const LindbladConfig &config,
                                          TimeWindow window, std::size_t samples = 2001);

}  // namespace spinchain
