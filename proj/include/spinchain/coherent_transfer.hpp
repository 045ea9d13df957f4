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
#include <span>
#include <string>
#include <vector>

#include "spinchain/chain_model.hpp"
#include "spinchain/gaussian_environment.hpp"

namespace spinchain {

/// f(t) = <N| exp(-iHt) |1>.
struct TransferAmplitude {
    Complex value;
    double magnitude = 0.0;
    double phase = 0.0;
    double t = 0.0;

    static TransferAmplitude from_value(Complex value, double t);
};

/// Diagonalized single-excitation block of a subspace Hamiltonian. Evaluating
/// the propagator at any t costs O(n) per matrix element.
class ExcitationPropagator {
public:
    explicit ExcitationPropagator(const SubspaceHamiltonian &h);

    int n() const { return n_; }
    std::span<const double> energies() const { return {energies_.data(), energies_.size()}; }

    /// <to| exp(-iHt) |from>, sites are 1-based.
    Complex element(int to, int from, double t) const;

    /// exp(-iHt)|from> restricted to the excitation sites (entry k-1 is site k).
    CVector column(int from, double t) const;

    TransferAmplitude end_to_end(double t) const;

    /// Coefficients w_k with f(t) = sum_k w_k exp(-i E_k t).
    std::span<const Complex> end_to_end_weights() const {
        return {weights_.data(), weights_.size()};
    }

private:
    int n_;
    std::vector<double> energies_;
    CMatrix vectors_;
    std::vector<Complex> weights_;
};

TransferAmplitude transfer_amplitude(const SubspaceHamiltonian &h, double t);

/// [-i sin(omega t / 2)]^(n-1)
TransferAmplitude closed_form_mirror_amplitude(int n, double omega, double t);

/// 1/2 + |f|^2/6 + |f|/3, with the phase of f rotated away by the optimal field.
double average_fidelity_free(const TransferAmplitude &f);
double average_fidelity_free(double magnitude);

/// Decohered average fidelity with the optimal-field phase:
/// 1/2 + |f|^2/6 + |f| factor / 3.
double average_fidelity_with_factor(double magnitude, double factor);

/// Search interval (0, t_max].
struct TimeWindow {
    double t_max = 0.0;
};

struct FidelityCurve {
    std::vector<double> times;
    std::vector<double> values;
    std::string label;
    ChainSpec spec;
    std::optional<double> theta;

    /// Throws ValidationError when times are not strictly increasing or values
    /// are non-finite (or outside [0, 1 + 1e-9] for fidelity-type labels).
    void validate(bool fidelity_type) const;
};

FidelityCurve sample_fidelity_curve(const ChainSpec &spec, double t_max, std::size_t samples,
                                    std::optional<GaussianEnvironment> env);

struct SearchOptions {
    std::size_t grid_points = 100000;
    /// Number of best grid local maxima refined by Brent's method.
    std::size_t refine_candidates = 16;
};

struct MaxFidelity {
    double t_star = 0.0;
    double f_max = 0.0;
    double magnitude = 0.0;
};

/// Maximizes the average fidelity (Gaussian-decohered when env is given) over
/// the window: coarse grid scan followed by local refinement.
MaxFidelity max_fidelity_search(const ChainSpec &spec, TimeWindow window,
                                std::optional<GaussianEnvironment> env = std::nullopt,
                                const SearchOptions &options = {});

struct CriticalLengthEntry {
    int n = 0;
    double t_star = 0.0;
    double f_max = 0.0;
};

struct CriticalLengthResult {
    /// Largest passing n; nullopt when no failure occurred up to n_limit.
    std::optional<int> n_c;
    int n_limit = 0;
    double threshold = 2.0 / 3.0;
    TimeWindow window;
    std::vector<CriticalLengthEntry> per_n;
};

/// Walks n = 1, 2, ... until the maximal fidelity drops to the threshold.
/// `coupling` is j (Heisenberg) or omega (mirror).
CriticalLengthResult critical_chain_length(ChainFamily family, double coupling, double threshold,
                                           TimeWindow window,
                                           std::optional<GaussianEnvironment> env = std::nullopt,
                                           int n_limit = 200, const SearchOptions &options = {});

}  // namespace spinchain
