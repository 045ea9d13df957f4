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

#include "spinchain/chain_model.hpp"

#include <cmath>
#include <string>

#include "spinchain/error.hpp"

namespace spinchain {

const char *to_string(ChainFamily family) {
    switch (family) {
        case ChainFamily::HeisenbergXXX:
            return "heisenberg";
        case ChainFamily::MirrorXY:
            return "mirror";
    }
    return "unknown";
}

ChainSpec ChainSpec::heisenberg(int n, double j, double field) {
    ChainSpec spec;
    spec.n = n;
    spec.family = ChainFamily::HeisenbergXXX;
    spec.j = j;
    spec.field = field;
    spec.validate();
    return spec;
}

ChainSpec ChainSpec::mirror(int n, double omega) {
    ChainSpec spec;
    spec.n = n;
    spec.family = ChainFamily::MirrorXY;
    spec.omega = omega;
    spec.field = 0.0;
    spec.validate();
    return spec;
}

void ChainSpec::validate() const {
    if (n < 1) {
        throw ConfigError("chain length must be >= 1, got " + std::to_string(n), "n");
    }
    switch (family) {
        case ChainFamily::HeisenbergXXX:
            if (!(j > 0.0) || !std::isfinite(j)) {
                throw ConfigError("Heisenberg coupling j must be > 0", "j");
            }
            if (!std::isfinite(field)) {
                throw ConfigError("field must be finite", "field");
            }
            return;
        case ChainFamily::MirrorXY:
            if (!(omega > 0.0) || !std::isfinite(omega)) {
                throw ConfigError("mirror coupling scale omega must be > 0", "omega");
            }
            if (field != 0.0) {
                throw ConfigError("mirror chains carry no field parameter", "field");
            }
            return;
    }
    throw ConfigError("unknown chain family", "family");
}

double ChainSpec::energy_scale() const {
    return family == ChainFamily::HeisenbergXXX ? j : omega;
}

std::vector<double> mirror_couplings(int n, double omega) {
    if (n < 2) {
        throw ConfigError("mirror couplings need n >= 2, got " + std::to_string(n), "n");
    }
    if (!(omega > 0.0)) {
        throw ConfigError("omega must be > 0", "omega");
    }
    std::vector<double> couplings(static_cast<std::size_t>(n - 1));
    for (int i = 1; i < n; ++i) {
        couplings[static_cast<std::size_t>(i - 1)] =
            omega * std::sqrt(static_cast<double>(i) * static_cast<double>(n - i)) / 2.0;
    }
    return couplings;
}

SubspaceHamiltonian build_subspace_hamiltonian(const ChainSpec &spec) {
    spec.validate();
    const int n = spec.n;
    SubspaceHamiltonian h;
    h.n = n;
    h.matrix = CMatrix::Zero(n + 1, n + 1);

    if (spec.family == ChainFamily::MirrorXY) {
        if (n >= 2) {
            const auto couplings = mirror_couplings(n, spec.omega);
            for (int i = 1; i < n; ++i) {
                h.matrix(i, i + 1) = couplings[static_cast<std::size_t>(i - 1)];
                h.matrix(i + 1, i) = couplings[static_cast<std::size_t>(i - 1)];
            }
        }
        return h;
    }

    // Heisenberg: s_i.s_{i+1} = 2 SWAP - 1, so a bond hops an excitation with
    // amplitude -2j; zz contributes +1 per aligned bond and -1 per broken bond.
    const double j = spec.j;
    const double b = spec.field;
    const int bonds = n - 1;
    h.matrix(0, 0) = -j * bonds - b * n;
    for (int site = 1; site <= n; ++site) {
        const int broken = (site > 1 ? 1 : 0) + (site < n ? 1 : 0);
        h.matrix(site, site) = -j * (bonds - 2 * broken) - b * (n - 2);
    }
    for (int i = 1; i < n; ++i) {
        h.matrix(i, i + 1) = -2.0 * j;
        h.matrix(i + 1, i) = -2.0 * j;
    }
    return h;
}

FullHamiltonian build_full_hamiltonian(const ChainSpec &spec) {
    spec.validate();
    const int n = spec.n;
    if (n > kMaxFullSpins) {
        throw SizeLimitError("full-space Hamiltonian limited to " + std::to_string(kMaxFullSpins) +
                             " spins, got " + std::to_string(n));
    }
    const std::size_t dim = std::size_t{1} << n;
    FullHamiltonian h;
    h.n = n;
    h.matrix = CMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));

    std::vector<double> xy(static_cast<std::size_t>(std::max(n - 1, 0)));
    double zz = 0.0;
    double z = 0.0;
    if (spec.family == ChainFamily::MirrorXY) {
        if (n >= 2) {
            const auto couplings = mirror_couplings(n, spec.omega);
            for (std::size_t i = 0; i < couplings.size(); ++i) xy[i] = couplings[i] / 2.0;
        }
    } else {
        for (auto &c : xy) c = -spec.j;
        zz = -spec.j;
        z = -spec.field;
    }

    // Bit (n - site) of the index holds spin `site`; bit value 1 means z = -1.
    auto bit = [n](std::size_t index, int site) { return (index >> (n - site)) & 1U; };
    for (std::size_t s = 0; s < dim; ++s) {
        double diag = 0.0;
        for (int site = 1; site <= n; ++site) {
            diag += z * (bit(s, site) ? -1.0 : 1.0);
        }
        for (int i = 1; i < n; ++i) {
            const bool aligned = bit(s, i) == bit(s, i + 1);
            diag += zz * (aligned ? 1.0 : -1.0);
            if (!aligned) {
                // xx + yy = 2 (s+ s- + s- s+): flips an anti-aligned pair with amplitude 2.
                const std::size_t flipped =
                    s ^ ((std::size_t{1} << (n - i)) | (std::size_t{1} << (n - i - 1)));
                h.matrix(static_cast<Eigen::Index>(flipped), static_cast<Eigen::Index>(s)) +=
                    2.0 * xy[static_cast<std::size_t>(i - 1)];
            }
        }
        h.matrix(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(s)) = diag;
    }
    return h;
}

std::size_t full_index_of_excitation(int n, int site) {
    if (site == 0) return 0;
    return std::size_t{1} << (n - site);
}

CMatrix project_to_subspace(const CMatrix &full, int n) {
    const Eigen::Index dim = Eigen::Index{1} << n;
    if (full.rows() != dim || full.cols() != dim) {
        throw ValidationError("operator dimension does not match 2^n");
    }
    CMatrix out(n + 1, n + 1);
    for (int a = 0; a <= n; ++a) {
        for (int b = 0; b <= n; ++b) {
            out(a, b) = full(static_cast<Eigen::Index>(full_index_of_excitation(n, a)),
                             static_cast<Eigen::Index>(full_index_of_excitation(n, b)));
        }
    }
    return out;
}

}  // namespace spinchain
