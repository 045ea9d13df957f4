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

#include "spinchain/common_environment.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "spinchain/error.hpp"

namespace spinchain {

void GaussianEnvironment::validate() const {
    if (!(theta > 0.0) || !std::isfinite(theta)) {
        throw ConfigError("Gaussian environment needs theta > 0", "theta");
    }
}

double gaussian_decoherence_factor(const GaussianEnvironment &env, double t) {
    env.validate();
    if (!(t >= 0.0)) throw ConfigError("time must be >= 0", "t");
    return std::exp(-env.theta * t * t / 4.0);
}

void ExplicitEnvironment::validate() const {
    if (couplings.empty()) throw ConfigError("environment has no spins", "env-file");
    if (couplings.size() != up_probabilities.size()) {
        throw ConfigError("environment couplings and probabilities differ in length", "env-file");
    }
    for (std::size_t k = 0; k < couplings.size(); ++k) {
        if (!std::isfinite(couplings[k])) {
            throw ConfigError("environment coupling " + std::to_string(k) + " is not finite",
                              "env-file");
        }
        const double p = up_probabilities[k];
        if (!(p >= 0.0 && p <= 1.0)) {
            throw ConfigError("environment probability " + std::to_string(k) +
                                  " is outside [0, 1]",
                              "env-file");
        }
    }
}

Complex explicit_decoherence_factor(const ExplicitEnvironment &env, double t) {
    env.validate();
    if (env.m() > kMaxProductEnvironmentSpins) {
        throw SizeLimitError("product-state environment limited to " +
                             std::to_string(kMaxProductEnvironmentSpins) + " spins");
    }
    if (!(t >= 0.0)) throw ConfigError("time must be >= 0", "t");
    Complex factor{1.0, 0.0};
    for (std::size_t k = 0; k < env.m(); ++k) {
        const double p = env.up_probabilities[k];
        const double phase = env.couplings[k] * t;
        factor *= p * std::polar(1.0, phase) + (1.0 - p) * std::polar(1.0, -phase);
    }
    return factor;
}

Complex explicit_decoherence_factor_enumerated(const ExplicitEnvironment &env, double t) {
    env.validate();
    if (env.m() > kMaxEnumeratedEnvironmentSpins) {
        throw SizeLimitError("enumerated environment limited to " +
                             std::to_string(kMaxEnumeratedEnvironmentSpins) + " spins");
    }
    if (!(t >= 0.0)) throw ConfigError("time must be >= 0", "t");
    const std::size_t configs = std::size_t{1} << env.m();
    Complex sum{0.0, 0.0};
    for (std::size_t m = 0; m < configs; ++m) {
        double weight = 1.0;
        double field = 0.0;
        for (std::size_t k = 0; k < env.m(); ++k) {
            const bool flipped = (m >> k) & 1U;
            weight *= flipped ? 1.0 - env.up_probabilities[k] : env.up_probabilities[k];
            field += flipped ? -env.couplings[k] : env.couplings[k];
        }
        sum += weight * std::polar(1.0, field * t);
    }
    return sum;
}

Complex decoherence_factor(const Environment &env, double t) {
    return std::visit(
        [t](const auto &e) -> Complex {
            using E = std::decay_t<decltype(e)>;
            if constexpr (std::is_same_v<E, GaussianEnvironment>) {
                return gaussian_decoherence_factor(e, t);
            } else {
                return explicit_decoherence_factor(e, t);
            }
        },
        env);
}

void QubitDensity::validate(double tol) const {
    if ((matrix - matrix.adjoint()).cwiseAbs().maxCoeff() > tol) {
        throw ValidationError("qubit density is not Hermitian");
    }
    if (std::abs(matrix.trace() - 1.0) > tol) {
        throw ValidationError("qubit density trace is not 1");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> solver(matrix);
    if (solver.eigenvalues().minCoeff() < -tol) {
        throw ValidationError("qubit density has a negative eigenvalue");
    }
}

QubitDensity decohered_target_density(const TransferAmplitude &f, Complex factor, Complex alpha,
                                      Complex beta) {
    const double norm = std::norm(alpha) + std::norm(beta);
    if (std::abs(norm - 1.0) > 1e-10) {
        throw ConfigError("input amplitudes are not normalized", "alpha");
    }
    const double transferred = std::norm(beta) * std::norm(f.value);
    QubitDensity out;
    out.matrix(0, 0) = 1.0 - transferred;
    out.matrix(1, 1) = transferred;
    out.matrix(0, 1) = alpha * std::conj(beta) * std::conj(f.value) * std::conj(factor);
    out.matrix(1, 0) = std::conj(alpha) * beta * f.value * factor;
    return out;
}

double average_fidelity_common_env(const TransferAmplitude &f, const Environment &env, double t) {
    return average_fidelity_with_factor(f.magnitude, decoherence_factor(env, t).real());
}

Eigen::Matrix4cd distributed_pair_density(double lambda, Complex zeta) {
    Eigen::Matrix4cd rho = Eigen::Matrix4cd::Zero();
    rho(0, 0) = (1.0 - lambda * lambda) / 2.0;
    rho(1, 1) = lambda * lambda / 2.0;
    rho(2, 2) = 0.5;
    rho(1, 2) = zeta / 2.0;
    rho(2, 1) = std::conj(zeta) / 2.0;
    return rho;
}

EntanglementResult distribute_entanglement(const TransferAmplitude &f,
                                           std::optional<GaussianEnvironment> env, double t) {
    if (!(t >= 0.0)) throw ConfigError("time must be >= 0", "t");
    const double factor = env ? gaussian_decoherence_factor(*env, t) : 1.0;
    EntanglementResult result;
    result.lambda = std::min(f.magnitude, 1.0);
    result.zeta = result.lambda * factor;
    result.xi0 = result.lambda;
    result.xi = wootters_concurrence(distributed_pair_density(result.lambda, result.zeta));
    if (std::abs(result.xi - result.xi0 * factor) > 1e-7) {
        throw NumericalError("concurrence " + std::to_string(result.xi) +
                             " disagrees with the decay law value " +
                             std::to_string(result.xi0 * factor));
    }
    return result;
}

double wootters_concurrence(const Eigen::Matrix4cd &rho) {
    constexpr double kTol = 1e-9;
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > kTol) {
        throw ValidationError("two-qubit density is not Hermitian");
    }
    if (std::abs(rho.trace() - 1.0) > kTol) {
        throw ValidationError("two-qubit density trace is not 1");
    }
    const Eigen::Matrix4cd hermitian = (rho + rho.adjoint()) / 2.0;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> solver(hermitian);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("eigendecomposition of the two-qubit density failed");
    }
    if (solver.eigenvalues().minCoeff() < -kTol) {
        throw ValidationError("two-qubit density is not positive semidefinite");
    }

    // rho = W W^dagger with W = V sqrt(D); the singular values of
    // tau = W^T (Y x Y) W are the square roots of the eigenvalues of
    // rho (Y x Y) rho* (Y x Y). Eigenvalues below 1e-15 are round-off.
    Eigen::Matrix4cd w = solver.eigenvectors();
    for (int k = 0; k < 4; ++k) {
        const double mu = solver.eigenvalues()(k);
        w.col(k) *= mu > 1e-15 ? std::sqrt(mu) : 0.0;
    }
    Eigen::Matrix4d spin_flip;
    spin_flip << 0, 0, 0, -1,
                 0, 0, 1, 0,
                 0, 1, 0, 0,
                 -1, 0, 0, 0;
    const Eigen::Matrix4cd tau = w.transpose() * spin_flip.cast<Complex>() * w;
    Eigen::JacobiSVD<Eigen::Matrix4cd> svd(tau);
    const Eigen::Vector4d s = svd.singularValues();  // decreasing
    return std::max(0.0, s(0) - s(1) - s(2) - s(3));
}

}  // namespace spinchain
