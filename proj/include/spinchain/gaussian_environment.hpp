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

namespace spinchain {

/// Common spin bath whose collective field B has the Gaussian density
/// exp(-B^2 / theta) / sqrt(pi theta).
struct GaussianEnvironment {
    double theta = 0.0;

    /// Throws ConfigError unless theta > 0.
    void validate() const;
};

/// exp(-theta t^2 / 4), the cosine transform of the Gaussian field density.
double gaussian_decoherence_factor(const GaussianEnvironment &env, double t);

}  // namespace spinchain
