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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <sstream>
#include <vector>

#include "spinchain/error.hpp"

namespace spinchain {

struct IntegratorOptions {
    double rtol = 1e-9;
    double atol = 1e-12;
    std::size_t max_steps = 10'000'000;
};

struct IntegratorStats {
    std::size_t accepted = 0;
    std::size_t rejected = 0;
};

/// Adaptive embedded Runge-Kutta 5(4) (Dormand-Prince) for dy/dt = rhs(y) with
/// an autonomous right-hand side. State is any Eigen dense type.
///
/// Integrates from t = 0 and returns the state at every requested time; steps
/// are shortened to land exactly on each output time. `after_step` is invoked
/// on every accepted state (used for Hermitian re-symmetrization).
template <typename State, typename Rhs, typename AfterStep>
std::vector<State> integrate_dopri5(const Rhs &rhs, State y, std::span<const double> times,
                                    const IntegratorOptions &opt, AfterStep after_step,
                                    IntegratorStats *stats = nullptr) {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
    (void)c2, (void)c3, (void)c4, (void)c5;

    std::vector<State> out;
    out.reserve(times.size());
    double t = 0.0;

    auto error_norm = [&](const State &err, const State &y0, const State &y1) {
        double worst = 0.0;
        for (Eigen::Index i = 0; i < err.size(); ++i) {
            const double scale =
                opt.atol + opt.rtol * std::max(std::abs(y0.data()[i]), std::abs(y1.data()[i]));
            worst = std::max(worst, std::abs(err.data()[i]) / scale);
        }
        return worst;
    };

    State k1 = rhs(y);
    double h = 0.0;
    {
        double d0 = y.cwiseAbs().maxCoeff();
        double d1 = k1.cwiseAbs().maxCoeff();
        h = (d0 > 1e-5 && d1 > 1e-5) ? 0.01 * d0 / d1 : 1e-6;
    }

    std::size_t steps = 0;
    for (double target : times) {
        if (target < t) throw NumericalError("output times must be non-decreasing");
        while (t < target) {
            if (++steps > opt.max_steps) {
                std::ostringstream msg;
                msg << "integrator exceeded " << opt.max_steps << " steps at t = " << t;
                throw NumericalError(msg.str());
            }
            const bool last = t + h >= target;
            const double step = last ? target - t : h;
            if (step <= 1e-14 * std::max(1.0, std::abs(t))) {
                std::ostringstream msg;
                msg.precision(17);
                msg << "step size underflow at t = " << t;
                throw NumericalError(msg.str());
            }
            const State k2 = rhs(State(y + step * (a21 * k1)));
            const State k3 = rhs(State(y + step * (a31 * k1 + a32 * k2)));
            const State k4 = rhs(State(y + step * (a41 * k1 + a42 * k2 + a43 * k3)));
            const State k5 = rhs(State(y + step * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4)));
            const State k6 =
                rhs(State(y + step * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5)));
            State y_new = y + step * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
            const State k7 = rhs(y_new);
            const State err =
                step * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
            const double norm = error_norm(err, y, y_new);

            if (norm <= 1.0) {
                t = last ? target : t + step;
                after_step(y_new);
                y = std::move(y_new);
                k1 = rhs(y);
                if (stats) ++stats->accepted;
                const double grow = norm == 0.0 ? 5.0 : std::min(5.0, 0.9 * std::pow(norm, -0.2));
                // A truncated final step says nothing about the natural step size.
                if (!last || step >= h) h = step * std::max(1.0, grow);
            } else {
                if (stats) ++stats->rejected;
                const double shrink =
                    std::isfinite(norm) ? std::max(0.2, 0.9 * std::pow(norm, -0.2)) : 0.2;
                h = step * shrink;
            }
        }
        out.push_back(y);
    }
    return out;
}

}  // namespace spinchain
