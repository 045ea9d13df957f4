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
#include <optional>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "spinchain/chain_model.hpp"
#include "spinchain/coherent_transfer.hpp"
#include "spinchain/gaussian_environment.hpp"

namespace spinchain {

/// M bath spins in a product state, spin k coupled with strength g_k and
/// found in |0> with probability p_k. The collective field of configuration m
/// is B_m = sum_k (-1)^{m_k} g_k.
struct ExplicitEnvironment {
    std::vector<double> couplings;
    std::vector<double> up_probabilities;

    std::size_t m() const { return couplings.size(); }
    void validate() const;
};

inline constexpr std::size_t kMaxProductEnvironmentSpins = 24;
inline constexpr std::size_t kMaxEnumeratedEnvironmentSpins = 12;

/// gamma(t) = sum_m |c_m|^2 exp(i B_m t), evaluated in factored form
/// prod_k (p_k e^{i g_k t} + (1 - p_k) e^{-i g_k t}).
Complex explicit_decoherence_factor(const ExplicitEnvironment &env, double t);

/// Same sum, enumerating all 2^M configurations.
Complex explicit_decoherence_factor_enumerated(const ExplicitEnvironment &env, double t);

using Environment = std::variant<GaussianEnvironment, ExplicitEnvironment>;

/// Decoherence factor of either environment kind at time t.
Complex decoherence_factor(const Environment &env, double t);

struct QubitDensity {
    Eigen::Matrix2cd matrix = Eigen::Matrix2cd::Zero();

    /// Throws ValidationError when not Hermitian, trace != 1 or not PSD.
    void validate(double tol = 1e-10) const;
};

/// Target-spin state for input alpha|0> + beta|1>. Populations follow the
/// amplitude-damping action of the chain; the coherence rho_10 is multiplied
/// by `factor` and rho_01 by its conjugate.
QubitDensity decohered_target_density(const TransferAmplitude &f, Complex factor, Complex alpha,
                                      Complex beta);

/// Bloch-averaged fidelity in the common environment with the optimal-field
/// phase: 1/2 + |f|^2/6 + |f| Re(factor) / 3.
double average_fidelity_common_env(const TransferAmplitude &f, const Environment &env, double t);

struct EntanglementResult {
    double lambda = 0.0;
    Complex zeta;
    double xi0 = 0.0;
    double xi = 0.0;
};

/// State of (A, target) after sending half of (|01> + |10>)/sqrt(2) through
/// the chain, basis order |00>, |01>, |10>, |11>.
Eigen::Matrix4cd distributed_pair_density(double lambda, Complex zeta);

/// Builds the decohered pair state and measures its concurrence. No
/// environment means a factor of 1. Throws NumericalError if the measured
/// concurrence disagrees with lambda * factor by more than 1e-7.
EntanglementResult distribute_entanglement(const TransferAmplitude &f,
                                           std::optional<GaussianEnvironment> env, double t);

/// Wootters concurrence max(0, s1 - s2 - s3 - s4), s_i the decreasing square
/// roots of the eigenvalues of rho (Y x Y) rho* (Y x Y). Throws
/// ValidationError for non-physical input (tolerance 1e-9).
double wootters_concurrence(const Eigen::Matrix4cd &rho);

}  // namespace spinchain
