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

#include "spinchain/coherent_transfer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include <boost/math/tools/minima.hpp>

#include "spinchain/error.hpp"

namespace spinchain {

namespace {

constexpr Complex kI{0.0, 1.0};

Complex phase_factor(double energy, double t) { return std::polar(1.0, -energy * t); }

}  // namespace

TransferAmplitude TransferAmplitude::from_value(Complex value, double t) {
    TransferAmplitude f;
    f.value = value;
    f.magnitude = std::abs(value);
    f.phase = std::arg(value);
    f.t = t;
    return f;
}

ExcitationPropagator::ExcitationPropagator(const SubspaceHamiltonian &h) : n_(h.n) {
    if (n_ < 1 || h.matrix.rows() != n_ + 1 || h.matrix.cols() != n_ + 1) {
        throw ValidationError("subspace Hamiltonian has inconsistent dimensions");
    }
    const CMatrix block = h.excitation_block();
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(block);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("eigendecomposition of the " + std::to_string(n_) + "x" +
                             std::to_string(n_) +
                             " excitation block failed; max |H_ij| = " +
                             std::to_string(block.cwiseAbs().maxCoeff()));
    }
    const auto &values = solver.eigenvalues();
    energies_.assign(values.data(), values.data() + values.size());
    vectors_ = solver.eigenvectors();
    weights_.resize(static_cast<std::size_t>(n_));
    for (int k = 0; k < n_; ++k) {
        weights_[static_cast<std::size_t>(k)] = vectors_(n_ - 1, k) * std::conj(vectors_(0, k));
    }
}

Complex ExcitationPropagator::element(int to, int from, double t) const {
    if (to < 1 || to > n_ || from < 1 || from > n_) {
        throw ValidationError("site index out of range");
    }
    Complex sum{0.0, 0.0};
    for (int k = 0; k < n_; ++k) {
        sum += vectors_(to - 1, k) * std::conj(vectors_(from - 1, k)) *
               phase_factor(energies_[static_cast<std::size_t>(k)], t);
    }
    return sum;
}

CVector ExcitationPropagator::column(int from, double t) const {
    if (from < 1 || from > n_) throw ValidationError("site index out of range");
    CVector coeffs(n_);
    for (int k = 0; k < n_; ++k) {
        coeffs(k) = std::conj(vectors_(from - 1, k)) *
                    phase_factor(energies_[static_cast<std::size_t>(k)], t);
    }
    return vectors_ * coeffs;
}

TransferAmplitude ExcitationPropagator::end_to_end(double t) const {
    if (!(t >= 0.0)) throw ConfigError("time must be >= 0", "t");
    Complex sum{0.0, 0.0};
    for (int k = 0; k < n_; ++k) {
        sum += weights_[static_cast<std::size_t>(k)] *
               phase_factor(energies_[static_cast<std::size_t>(k)], t);
    }
    return TransferAmplitude::from_value(sum, t);
}

TransferAmplitude transfer_amplitude(const SubspaceHamiltonian &h, double t) {
    return ExcitationPropagator(h).end_to_end(t);
}

TransferAmplitude closed_form_mirror_amplitude(int n, double omega, double t) {
    if (n < 1) throw ConfigError("chain length must be >= 1", "n");
    if (!(omega > 0.0)) throw ConfigError("omega must be > 0", "omega");
    if (!(t >= 0.0)) throw ConfigError("time must be >= 0", "t");
    const Complex base = -kI * std::sin(omega * t / 2.0);
    Complex value{1.0, 0.0};
    for (int k = 1; k < n; ++k) value *= base;
    return TransferAmplitude::from_value(value, t);
}

double average_fidelity_free(double magnitude) {
    return average_fidelity_with_factor(magnitude, 1.0);
}

double average_fidelity_free(const TransferAmplitude &f) {
    return average_fidelity_free(f.magnitude);
}

double average_fidelity_with_factor(double magnitude, double factor) {
    return 0.5 + magnitude * magnitude / 6.0 + magnitude * factor / 3.0;
}

void FidelityCurve::validate(bool fidelity_type) const {
    if (times.size() != values.size()) {
        throw ValidationError("curve '" + label + "' has mismatched times/values");
    }
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (i > 0 && !(times[i] > times[i - 1])) {
            throw ValidationError("curve '" + label + "' times are not strictly increasing");
        }
        if (!std::isfinite(values[i])) {
            throw ValidationError("curve '" + label + "' has a non-finite value");
        }
        if (fidelity_type && (values[i] < 0.0 || values[i] > 1.0 + 1e-9)) {
            throw ValidationError("curve '" + label + "' has a fidelity outside [0, 1]");
        }
    }
}

FidelityCurve sample_fidelity_curve(const ChainSpec &spec, double t_max, std::size_t samples,
                                    std::optional<GaussianEnvironment> env) {
    if (samples < 2) throw ConfigError("samples must be >= 2", "samples");
    if (!(t_max > 0.0)) throw ConfigError("t-max must be > 0", "t-max");
    if (env) env->validate();
    const ExcitationPropagator propagator(build_subspace_hamiltonian(spec));

    FidelityCurve curve;
    curve.label = env ? "F_common" : "F_free";
    curve.spec = spec;
    if (env) curve.theta = env->theta;
    curve.times.reserve(samples);
    curve.values.reserve(samples);
    for (std::size_t k = 0; k < samples; ++k) {
        const double t = t_max * static_cast<double>(k) / static_cast<double>(samples - 1);
        const double magnitude = propagator.end_to_end(t).magnitude;
        const double factor = env ? gaussian_decoherence_factor(*env, t) : 1.0;
        curve.times.push_back(t);
        curve.values.push_back(average_fidelity_with_factor(magnitude, factor));
    }
    curve.validate(true);
    return curve;
}

MaxFidelity max_fidelity_search(const ChainSpec &spec, TimeWindow window,
                                std::optional<GaussianEnvironment> env,
                                const SearchOptions &options) {
    if (!(window.t_max > 0.0) || !std::isfinite(window.t_max)) {
        throw ConfigError("search window (0, t_max] is empty", "window");
    }
    if (options.grid_points < 2) throw ConfigError("grid needs at least 2 points", "window");
    if (env) env->validate();

    const ExcitationPropagator propagator(build_subspace_hamiltonian(spec));
    const auto energies = propagator.energies();
    const auto weights = propagator.end_to_end_weights();
    const std::size_t modes = energies.size();

    auto objective = [&](double t) {
        const double magnitude = propagator.end_to_end(t).magnitude;
        const double factor = env ? gaussian_decoherence_factor(*env, t) : 1.0;
        return average_fidelity_with_factor(magnitude, factor);
    };

    // Coarse scan over t_i = i * dt, i = 1..G. Phases advance by a fixed
    // rotation and are re-seeded exactly every kResync steps.
    constexpr std::size_t kResync = 512;
    const std::size_t grid = options.grid_points;
    const double dt = window.t_max / static_cast<double>(grid);
    std::vector<Complex> step(modes), phase(modes);
    for (std::size_t k = 0; k < modes; ++k) step[k] = phase_factor(energies[k], dt);
    std::vector<double> values(grid + 1);
    values[0] = objective(0.0);
    for (std::size_t i = 1; i <= grid; ++i) {
        const double t = dt * static_cast<double>(i);
        Complex sum{0.0, 0.0};
        if (i == 1 || i % kResync == 0) {
            for (std::size_t k = 0; k < modes; ++k) phase[k] = phase_factor(energies[k], t);
        } else {
            for (std::size_t k = 0; k < modes; ++k) phase[k] *= step[k];
        }
        for (std::size_t k = 0; k < modes; ++k) sum += weights[k] * phase[k];
        const double factor = env ? gaussian_decoherence_factor(*env, t) : 1.0;
        values[i] = average_fidelity_with_factor(std::abs(sum), factor);
    }

    std::vector<std::size_t> peaks;
    for (std::size_t i = 1; i <= grid; ++i) {
        const bool left = values[i] >= values[i - 1];
        const bool right = i == grid || values[i] >= values[i + 1];
        if (left && right) peaks.push_back(i);
    }
    if (peaks.empty()) peaks.push_back(1);
    const std::size_t keep = std::min(peaks.size(), std::max<std::size_t>(options.refine_candidates, 1));
    std::partial_sort(peaks.begin(), peaks.begin() + static_cast<std::ptrdiff_t>(keep), peaks.end(),
                      [&](std::size_t a, std::size_t b) {
                          return values[a] > values[b] || (values[a] == values[b] && a < b);
                      });

    MaxFidelity best;
    best.t_star = dt * static_cast<double>(peaks.front());
    best.f_max = values[peaks.front()];
    constexpr int kBits = std::numeric_limits<double>::digits / 2;
    for (std::size_t c = 0; c < keep; ++c) {
        const std::size_t i = peaks[c];
        const double lo = dt * static_cast<double>(i - 1);
        const double hi = std::min(dt * static_cast<double>(i + 1), window.t_max);
        const auto [t, neg] = boost::math::tools::brent_find_minima(
            [&](double s) { return -objective(s); }, lo, hi, kBits);
        const double exact_grid = objective(dt * static_cast<double>(i));
        if (-neg > best.f_max && t > 0.0) {
            best.f_max = -neg;
            best.t_star = t;
        }
        if (exact_grid > best.f_max) {
            best.f_max = exact_grid;
            best.t_star = dt * static_cast<double>(i);
        }
    }
    best.magnitude = propagator.end_to_end(best.t_star).magnitude;
    return best;
}

CriticalLengthResult critical_chain_length(ChainFamily family, double coupling, double threshold,
                                           TimeWindow window,
                                           std::optional<GaussianEnvironment> env, int n_limit,
                                           const SearchOptions &options) {
    if (!(threshold > 0.5 && threshold < 1.0)) {
        throw ConfigError("threshold must lie in (1/2, 1)", "threshold");
    }
    if (n_limit < 1) throw ConfigError("n limit must be >= 1", "n-range");

    CriticalLengthResult result;
    result.n_limit = n_limit;
    result.threshold = threshold;
    result.window = window;
    for (int n = 1; n <= n_limit; ++n) {
        const ChainSpec spec = family == ChainFamily::HeisenbergXXX
                                   ? ChainSpec::heisenberg(n, coupling)
                                   : ChainSpec::mirror(n, coupling);
        const MaxFidelity best = max_fidelity_search(spec, window, env, options);
        result.per_n.push_back({n, best.t_star, best.f_max});
        if (best.f_max <= threshold) {
            result.n_c = n - 1;
            return result;
        }
    }
    return result;
}

}  // namespace spinchain
