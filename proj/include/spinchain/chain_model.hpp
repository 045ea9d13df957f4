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

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace spinchain {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

enum class ChainFamily { HeisenbergXXX, MirrorXY };

const char *to_string(ChainFamily family);

/// Open chain of n spins.
///
/// HeisenbergXXX:  H = -j sum_i s_i . s_{i+1} - field sum_i z_i
/// MirrorXY:       H = sum_i (J_i / 2)(x_i x_{i+1} + y_i y_{i+1}),  J_i = omega sqrt(i(n-i)) / 2
///
/// Pauli convention: z|0> = +|0>.
struct ChainSpec {
    int n = 1;
    ChainFamily family = ChainFamily::HeisenbergXXX;
    double j = 1.0;
    double omega = 1.0;
    double field = 0.0;

    static ChainSpec heisenberg(int n, double j, double field = 0.0);
    static ChainSpec mirror(int n, double omega);

    /// Throws ConfigError when the invariants for the family do not hold.
    void validate() const;

    /// Energy unit of the chain: j for Heisenberg, omega for mirror.
    double energy_scale() const;
};

/// Hamiltonian on span{|0>, |1>, ..., |n>} where |k> has spin k flipped.
/// Row/column 0 is the vacuum.
struct SubspaceHamiltonian {
    int n = 0;
    CMatrix matrix;

    /// The n x n single-excitation block (rows/cols 1..n).
    CMatrix excitation_block() const { return matrix.bottomRightCorner(n, n); }
};

inline constexpr int kMaxFullSpins = 12;

/// Hamiltonian on the full 2^n space. Spin 1 is the most significant bit of
/// the basis index and bit value 0 means z = +1.
struct FullHamiltonian {
    int n = 0;
    CMatrix matrix;
};

/// J_i = omega sqrt(i(n-i)) / 2 for i = 1..n-1.
std::vector<double> mirror_couplings(int n, double omega);

SubspaceHamiltonian build_subspace_hamiltonian(const ChainSpec &spec);

/// Throws SizeLimitError for n > kMaxFullSpins.
FullHamiltonian build_full_hamiltonian(const ChainSpec &spec);

/// Index of the single-excitation state |site> (1-based site) in the full basis.
std::size_t full_index_of_excitation(int n, int site);

/// Projects a full-space operator onto the ordered basis {|0>, |1>, ..., |n>}.
CMatrix project_to_subspace(const CMatrix &full, int n);

}  // namespace spinchain
