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

#include <cmath>
#include <numbers>
#include <random>

#include "gtest/gtest.h"
#include "oracles.hpp"
#include "spinchain/coherent_transfer.hpp"
#include "spinchain/error.hpp"

using namespace spinchain;
using std::numbers::pi;

namespace {

constexpr double kDampedPopulation = 0.7304026910486456;  // exp(-0.1 pi)

CMatrix random_hermitian(int dim, std::mt19937_64 &rng) {
    std::normal_distribution<double> g;
    CMatrix m(dim, dim);
    for (int a = 0; a < dim; ++a)
        for (int b = 0; b < dim; ++b) m(a, b) = Complex(g(rng), g(rng));
    return (m + m.adjoint()) / 2.0;
}

SubspaceDensity random_density(int n, std::mt19937_64 &rng) {
    std::normal_distribution<double> g;
    CMatrix a(n + 1, n + 1);
    for (int i = 0; i <= n; ++i)
        for (int k = 0; k <= n; ++k) a(i, k) = Complex(g(rng), g(rng));
    CMatrix rho = a * a.adjoint();
    rho /= rho.trace();
    return {n, rho};
}

std::vector<ChainSpec> small_specs() {
    return {ChainSpec::heisenberg(2, 1.0, 0.0), ChainSpec::heisenberg(3, 1.0, 0.2),
            ChainSpec::heisenberg(4, 0.8, 0.0), ChainSpec::mirror(2, 1.0),
            ChainSpec::mirror(3, 1.0), ChainSpec::mirror(4, 1.5)};
}

double max_abs(const CMatrix &m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST(lindblad, config_validation) {
    EXPECT_THROW((LindbladConfig{Channel::Damping, -0.1}.validate()), ConfigError);
    try {
        LindbladConfig{Channel::Dephasing, -1.0}.validate();
        FAIL();
    } catch (const ConfigError &e) {
        EXPECT_EQ(e.key(), "gamma");
    }
}

TEST(lindblad, generator_without_noise_is_commutator) {
    std::mt19937_64 rng(1);
    const auto h = build_subspace_hamiltonian(ChainSpec::heisenberg(5, 1.0, 0.3));
    const CMatrix rho = random_hermitian(6, rng);
    const CMatrix expected = Complex(0.0, -1.0) * (h.matrix * rho - rho * h.matrix);
    for (auto channel : {Channel::Dephasing, Channel::Damping}) {
        EXPECT_LT(max_abs(apply_generator({channel, 0.0}, h, rho) - expected), 1e-14);
    }
}

TEST(lindblad, dephasing_leaves_vacuum_fixed) {
    const auto h = build_subspace_hamiltonian(ChainSpec::mirror(4, 1.0));
    const CMatrix vac = SubspaceDensity::basis_operator(4, 0, 0).matrix;
    EXPECT_LT(max_abs(apply_generator({Channel::Dephasing, 0.3}, h, vac)), 1e-15);
}

TEST(lindblad, generator_matches_full_space_derivative) {
    std::mt19937_64 rng(8);
    for (const auto &spec : small_specs()) {
        const auto h = build_subspace_hamiltonian(spec);
        for (auto channel : {Channel::Dephasing, Channel::Damping}) {
            const LindbladConfig config{channel, 0.3};
            const CMatrix rho = random_density(spec.n, rng).matrix;
            const CMatrix full = oracle::lift_to_full(rho, spec.n);
            const double dt = 1e-6;
            const CMatrix plus = oracle::full_lindblad_evolve(spec, config, full, dt);
            const CMatrix minus = oracle::full_lindblad_evolve(spec, config, full, -dt);
            const CMatrix derivative = oracle::lift_to_full(apply_generator(config, h, rho), spec.n);
            EXPECT_LT(max_abs((plus - minus) / (2 * dt) - derivative), 1e-6)
                << to_string(spec.family) << " n=" << spec.n << " " << to_string(channel);
        }
    }
}

TEST(lindblad, generator_preserves_trace) {
    std::mt19937_64 rng(9);
    for (int n : {1, 2, 5, 9}) {
        const auto h = build_subspace_hamiltonian(ChainSpec::heisenberg(n, 1.0, 0.1));
        for (auto channel : {Channel::Dephasing, Channel::Damping}) {
            for (int k = 0; k < 10; ++k) {
                const CMatrix rho = random_hermitian(n + 1, rng);
                EXPECT_LT(std::abs(apply_generator({channel, 0.7}, h, rho).trace()), 1e-12);
            }
        }
    }
}

TEST(lindblad, generator_rejects_dimension_mismatch) {
    const auto h = build_subspace_hamiltonian(ChainSpec::mirror(3, 1.0));
    EXPECT_THROW(apply_generator({Channel::Damping, 0.1}, h, CMatrix::Identity(3, 3)),
                 ValidationError);
}

TEST(lindblad, noiseless_evolution_matches_coherent_amplitude) {
    const auto spec = ChainSpec::mirror(6, 1.0);
    const auto traj = integrate_master_equation(spec, {Channel::Dephasing, 0.0},
                                                SubspaceDensity::basis_operator(6, 1, 1), pi, 41);
    const ExcitationPropagator propagator(build_subspace_hamiltonian(spec));
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        const CVector c = propagator.column(1, traj.times[k]);
        const CMatrix expected = c * c.adjoint();
        EXPECT_LT(max_abs(traj.states[k].matrix.bottomRightCorner(6, 6) - expected), 1e-8);
    }
    EXPECT_NEAR(traj.states.back().rho_nn(), 1.0, 1e-8);
}

TEST(lindblad, mirror_damping_population) {
    for (int n = 2; n <= 10; ++n) {
        const auto traj = integrate_master_equation(ChainSpec::mirror(n, 1.0),
                                                    {Channel::Damping, 0.1},
                                                    SubspaceDensity::basis_operator(n, 1, 1), pi, 11);
        EXPECT_NEAR(traj.states.back().rho_nn(), kDampedPopulation, 1e-8) << "n=" << n;
        EXPECT_TRUE(traj.physicality().ok());
    }
}

TEST(lindblad, mirror_dephasing_population_decreases) {
    double previous = 1.0;
    for (int n : {2, 4, 8, 16, 32}) {
        const auto traj = integrate_master_equation(ChainSpec::mirror(n, 1.0),
                                                    {Channel::Dephasing, 0.1},
                                                    SubspaceDensity::basis_operator(n, 1, 1), pi, 11);
        EXPECT_LT(traj.states.back().rho_nn(), previous) << "n=" << n;
        previous = traj.states.back().rho_nn();
        EXPECT_TRUE(traj.physicality().ok());
    }
}

TEST(lindblad, propagation_is_linear) {
    std::mt19937_64 rng(4);
    const auto spec = ChainSpec::heisenberg(5, 1.0, 0.2);
    const double times[] = {0.5, 2.0, 10.0};
    for (auto channel : {Channel::Dephasing, Channel::Damping}) {
        const LindbladConfig config{channel, 0.2};
        const CMatrix a = random_density(5, rng).matrix;
        const CMatrix b = random_density(5, rng).matrix;
        const Complex s(0.3, -0.8);
        const auto ra = propagate_operator(spec, config, a, times);
        const auto rb = propagate_operator(spec, config, b, times);
        const auto rsa = propagate_operator(spec, config, CMatrix(s * a), times);
        const auto rab = propagate_operator(spec, config, CMatrix(a + b), times);
        for (std::size_t k = 0; k < 3; ++k) {
            EXPECT_LT(max_abs(rsa[k] - s * ra[k]), 1e-10);
            EXPECT_LT(max_abs(rab[k] - (ra[k] + rb[k])), 1e-10);
        }
    }
}

TEST(lindblad, coherences_and_populations_do_not_mix) {
    const auto spec = ChainSpec::heisenberg(4, 1.0, 0.0);
    const double times[] = {1.3};
    for (auto channel : {Channel::Dephasing, Channel::Damping}) {
        const auto coh = propagate_operator(spec, {channel, 0.4},
                                            SubspaceDensity::basis_operator(4, 2, 0).matrix, times)
                             .front();
        EXPECT_LT(max_abs(coh.bottomRightCorner(4, 4)), 1e-14);
        EXPECT_LT(std::abs(coh(0, 0)), 1e-14);
        EXPECT_LT(max_abs(coh.row(0).tail(4)), 1e-14);

        const auto pop = propagate_operator(spec, {channel, 0.4},
                                            SubspaceDensity::basis_operator(4, 2, 2).matrix, times)
                             .front();
        EXPECT_LT(max_abs(pop.col(0).tail(4)), 1e-14);
        EXPECT_LT(max_abs(pop.row(0).tail(4)), 1e-14);
    }
}

TEST(lindblad, matches_full_space_master_equation) {
    std::mt19937_64 rng(12);
    for (const auto &spec : small_specs()) {
        for (auto channel : {Channel::Dephasing, Channel::Damping}) {
            const LindbladConfig config{channel, 0.25};
            const auto rho0 = random_density(spec.n, rng);
            const auto traj = integrate_master_equation(spec, config, rho0, 3.0, 7);
            const CMatrix full0 = oracle::lift_to_full(rho0.matrix, spec.n);
            for (std::size_t k = 1; k < traj.times.size(); ++k) {
                const CMatrix expected =
                    oracle::full_lindblad_evolve(spec, config, full0, traj.times[k]);
                const CMatrix lifted = oracle::lift_to_full(traj.states[k].matrix, spec.n);
                EXPECT_LT(max_abs(lifted - expected), 1e-7)
                    << to_string(spec.family) << " n=" << spec.n << " " << to_string(channel);
                EXPECT_LT((oracle::reduce_to_last_spin(expected, spec.n) -
                           reduce_to_target(traj.states[k]).matrix)
                              .cwiseAbs()
                              .maxCoeff(),
                          1e-7);
            }
        }
    }
}

TEST(lindblad, single_spin_chain) {
    const auto spec = ChainSpec::heisenberg(1, 1.0, 0.0);
    const auto damped = integrate_master_equation(spec, {Channel::Damping, 0.5},
                                                  SubspaceDensity::basis_operator(1, 1, 1), 2.0, 5);
    EXPECT_NEAR(damped.states.back().rho_nn(), std::exp(-1.0), 1e-8);

    CMatrix plus = CMatrix::Constant(2, 2, 0.5);
    const auto dephased =
        integrate_master_equation(spec, {Channel::Dephasing, 0.5}, {1, plus}, 2.0, 5);
    EXPECT_NEAR(dephased.states.back().rho_nn(), 0.5, 1e-10);
    EXPECT_NEAR(std::abs(dephased.states.back().rho_0n()), 0.5 * std::exp(-1.0), 1e-8);
}

TEST(lindblad, integration_argument_checks) {
    const auto spec = ChainSpec::mirror(3, 1.0);
    const auto rho0 = SubspaceDensity::basis_operator(3, 1, 1);
    EXPECT_THROW(integrate_master_equation(spec, {Channel::Damping, 0.1}, rho0, 0.0, 10),
                 ConfigError);
    EXPECT_THROW(integrate_master_equation(spec, {Channel::Damping, 0.1}, rho0, 1.0, 1),
                 ConfigError);
    EXPECT_THROW(integrate_master_equation(spec, {Channel::Damping, 0.1},
                                           SubspaceDensity::basis_operator(4, 1, 1), 1.0, 10),
                 ValidationError);
    EXPECT_THROW(integrate_master_equation(spec, {Channel::Damping, 0.1},
                                           SubspaceDensity::basis_operator(3, 1, 0), 1.0, 10),
                 ValidationError);
}

TEST(lindblad, integrator_step_budget) {
    IntegratorOptions tight;
    tight.max_steps = 2;
    try {
        integrate_master_equation(ChainSpec::mirror(5, 1.0), {Channel::Damping, 0.1},
                                  SubspaceDensity::basis_operator(5, 1, 1), 50.0, 3, tight);
        FAIL();
    } catch (const NumericalError &e) {
        EXPECT_NE(std::string(e.what()).find("t = "), std::string::npos);
    }
}

TEST(lindblad, reduction_and_state_fidelity) {
    CMatrix rho = CMatrix::Zero(4, 4);
    rho(0, 0) = 0.5;
    rho(3, 3) = 0.5;
    rho(0, 3) = Complex(0.0, 0.5);
    rho(3, 0) = Complex(0.0, -0.5);
    const auto q = reduce_to_target({3, rho});
    EXPECT_EQ(q.matrix(0, 1), Complex(0.0, 0.5));
    EXPECT_EQ(q.matrix(1, 1), Complex(0.5, 0.0));
    EXPECT_NO_THROW(q.validate());

    const double s = 1.0 / std::sqrt(2.0);
    // The ideal output for n = 3 is alpha|0> - beta|1>.
    Eigen::Matrix2cd ideal;
    ideal << 0.5, -0.5, -0.5, 0.5;
    QubitDensity target;
    target.matrix = ideal;
    EXPECT_NEAR(state_fidelity(target, s, s, 3), 1.0, 1e-15);
    EXPECT_NEAR(state_fidelity(target, s, s, Complex(1.0, 0.0)), 0.0, 1e-15);
    EXPECT_THROW(state_fidelity(target, 1.0, 1.0, 3), ConfigError);

    EXPECT_EQ(mirror_ideal_phase(1), Complex(1.0, 0.0));
    EXPECT_EQ(mirror_ideal_phase(2), Complex(0.0, -1.0));
    EXPECT_EQ(mirror_ideal_phase(5), Complex(1.0, 0.0));
}

TEST(lindblad, bloch_average_noiseless) {
    for (int n = 2; n <= 8; ++n) {
        const auto spec = ChainSpec::mirror(n, 1.0);
        EXPECT_NEAR(average_fidelity_bloch(spec, {Channel::Damping, 0.0}, pi), 1.0, 1e-8);
        for (double t : {0.4, 1.7, 4.1}) {
            const auto f = closed_form_mirror_amplitude(n, 1.0, t);
            const Complex aligned = mirror_ideal_phase(n) * std::conj(f.value);
            // With the fixed ideal phase only the aligned component counts.
            const double expected = 0.5 + f.magnitude * f.magnitude / 6.0 + aligned.real() / 3.0;
            EXPECT_NEAR(average_fidelity_bloch(spec, {Channel::Damping, 0.0}, t), expected, 1e-8);
        }
    }
    const auto spec = ChainSpec::heisenberg(5, 1.0);
    const auto f = transfer_amplitude(build_subspace_hamiltonian(spec), 3.3);
    EXPECT_NEAR(average_fidelity_bloch(spec, {Channel::Dephasing, 0.0}, 3.3),
                average_fidelity_free(f), 1e-8);
}

TEST(lindblad, bloch_average_matches_quadrature) {
    const auto spec = ChainSpec::mirror(3, 1.0);
    for (auto channel : {Channel::Dephasing, Channel::Damping}) {
        const LindbladConfig config{channel, 0.1};
        const double fast = average_fidelity_bloch(spec, config, 2.5);
        const double slow = oracle::bloch_quadrature(spec, config, 2.5, 2048,
                                                     mirror_ideal_phase(3));
        EXPECT_NEAR(fast, slow, 1e-6);
    }
}

TEST(lindblad, bloch_average_matches_full_space_quadrature) {
    // Optimal-field reference for a Heisenberg chain, checked against the
    // full-space master equation applied to each Bloch-sphere input.
    const auto spec = ChainSpec::heisenberg(3, 1.0);
    const double t = 1.1;
    for (auto channel : {Channel::Dephasing, Channel::Damping}) {
        const LindbladConfig config{channel, 0.2};
        CMatrix images[2][2];
        for (int a = 0; a < 2; ++a) {
            for (int b = 0; b < 2; ++b) {
                const CMatrix seed = SubspaceDensity::basis_operator(3, a, b).matrix;
                images[a][b] = oracle::full_lindblad_evolve(spec, config,
                                                            oracle::lift_to_full(seed, 3), t);
            }
        }
        const Eigen::Matrix2cd coh = oracle::reduce_to_last_spin(images[0][1], 3);
        const Complex rotate = std::abs(coh(0, 1)) > 0 ? std::conj(coh(0, 1)) / std::abs(coh(0, 1))
                                                       : Complex(1.0, 0.0);
        const double slow = oracle::bloch_average(
            [&](Complex alpha, Complex beta) {
                const CMatrix out = std::norm(alpha) * images[0][0] +
                                    alpha * std::conj(beta) * images[0][1] +
                                    std::conj(alpha) * beta * images[1][0] +
                                    std::norm(beta) * images[1][1];
                const Eigen::Matrix2cd r = oracle::reduce_to_last_spin(out, 3);
                const Eigen::Vector2cd phi(alpha, rotate * beta);
                return (phi.adjoint() * r * phi)(0, 0).real();
            },
            2048);
        EXPECT_NEAR(average_fidelity_bloch(spec, config, t), slow, 1e-6);
    }
}

TEST(lindblad, max_probability_noiseless_mirror) {
    const auto best = max_excitation_probability(ChainSpec::mirror(5, 1.0),
                                                 {Channel::Dephasing, 0.0}, TimeWindow{4.0});
    EXPECT_NEAR(best.t_star, pi, 1e-4);
    EXPECT_NEAR(best.p_max, 1.0, 1e-8);
    EXPECT_THROW(max_excitation_probability(ChainSpec::mirror(5, 1.0), {Channel::Dephasing, 0.0},
                                            TimeWindow{0.0}),
                 ConfigError);
}

TEST(lindblad, heisenberg_max_probability_decreases) {
    for (auto channel : {Channel::Dephasing, Channel::Damping}) {
        double previous = 1.0;
        for (int n = 3; n <= 10; ++n) {
            const auto best = max_excitation_probability(ChainSpec::heisenberg(n, 1.0),
                                                         {channel, 0.1}, TimeWindow{50.0});
            EXPECT_LT(best.p_max, previous) << "n=" << n << " " << to_string(channel);
            previous = best.p_max;
        }
    }
}
