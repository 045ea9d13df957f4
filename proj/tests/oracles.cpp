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

#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

namespace spinchain::oracle {

namespace {

CMatrix pauli(char which) {
    CMatrix p(2, 2);
    const Complex i{0.0, 1.0};
    switch (which) {
        case 'x':
            p << 0, 1, 1, 0;
            break;
        case 'y':
            p << 0, -i, i, 0;
            break;
        case 'z':
            p << 1, 0, 0, -1;
            break;
        case '+':  // |0><1|
            p << 0, 1, 0, 0;
            break;
        default:
            p = CMatrix::Identity(2, 2);
    }
    return p;
}

/// Operator `op` on 1-based `site` of an n-spin chain, spin 1 leftmost.
CMatrix on_site(const CMatrix &op, int site, int n) {
    CMatrix out = CMatrix::Identity(1, 1);
    for (int k = 1; k <= n; ++k) {
        const CMatrix factor = k == site ? op : CMatrix::Identity(2, 2);
        out = Eigen::kroneckerProduct(out, factor).eval();
    }
    return out;
}

}  // namespace

CMatrix kron_hamiltonian(const ChainSpec &spec) {
    const int n = spec.n;
    const Eigen::Index dim = Eigen::Index{1} << n;
    CMatrix h = CMatrix::Zero(dim, dim);
    std::vector<double> mirror;
    if (spec.family == ChainFamily::MirrorXY && n >= 2) {
        for (int i = 1; i < n; ++i) mirror.push_back(spec.omega * std::sqrt(i * (n - i)) / 2.0);
    }
    for (int i = 1; i < n; ++i) {
        const CMatrix xx = on_site(pauli('x'), i, n) * on_site(pauli('x'), i + 1, n);
        const CMatrix yy = on_site(pauli('y'), i, n) * on_site(pauli('y'), i + 1, n);
        const CMatrix zz = on_site(pauli('z'), i, n) * on_site(pauli('z'), i + 1, n);
        if (spec.family == ChainFamily::MirrorXY) {
            h += mirror[static_cast<std::size_t>(i - 1)] / 2.0 * (xx + yy);
        } else {
            h -= spec.j * (xx + yy + zz);
        }
    }
    if (spec.family == ChainFamily::HeisenbergXXX) h -= spec.field * total_z(n);
    return h;
}

CMatrix total_z(int n) {
    const Eigen::Index dim = Eigen::Index{1} << n;
    CMatrix z = CMatrix::Zero(dim, dim);
    for (int i = 1; i <= n; ++i) z += on_site(pauli('z'), i, n);
    return z;
}

CMatrix unitary(const CMatrix &h, double t) {
    const CMatrix generator = Complex{0.0, -t} * h;
    return generator.exp();
}

CMatrix full_lindblad_evolve(const ChainSpec &spec, const LindbladConfig &config,
                             const CMatrix &rho0, double t) {
    const int n = spec.n;
    const CMatrix h = kron_hamiltonian(spec);
    const Eigen::Index dim = h.rows();
    const CMatrix id = CMatrix::Identity(dim, dim);
    // vec(A X B) = (B^T kron A) vec(X), column-major vec.
    CMatrix liouville = Complex{0.0, -1.0} *
                        (Eigen::kroneckerProduct(id, h).eval() -
                         Eigen::kroneckerProduct(h.transpose(), id).eval());
    for (int i = 1; i <= n; ++i) {
        CMatrix jump = config.channel == Channel::Dephasing
                           ? CMatrix(std::sqrt(config.gamma / 2.0) * on_site(pauli('z'), i, n))
                           : CMatrix(std::sqrt(config.gamma) * on_site(pauli('+'), i, n));
        const CMatrix jj = jump.adjoint() * jump;
        liouville += Eigen::kroneckerProduct(jump.conjugate(), jump).eval();
        liouville -= 0.5 * Eigen::kroneckerProduct(id, jj).eval();
        liouville -= 0.5 * Eigen::kroneckerProduct(jj.transpose(), id).eval();
    }
    const CMatrix propagator = (liouville * t).exp();
    const Eigen::Map<const Eigen::VectorXcd> vec(rho0.data(), rho0.size());
    const Eigen::VectorXcd out = propagator * vec;
    return Eigen::Map<const CMatrix>(out.data(), dim, dim);
}

CMatrix lift_to_full(const CMatrix &sub, int n) {
    const Eigen::Index dim = Eigen::Index{1} << n;
    CMatrix full = CMatrix::Zero(dim, dim);
    for (int a = 0; a <= n; ++a) {
        for (int b = 0; b <= n; ++b) {
            const auto ia = static_cast<Eigen::Index>(a == 0 ? 0 : (1 << (n - a)));
            const auto ib = static_cast<Eigen::Index>(b == 0 ? 0 : (1 << (n - b)));
            full(ia, ib) = sub(a, b);
        }
    }
    return full;
}

Eigen::Matrix2cd reduce_to_last_spin(const CMatrix &full, int n) {
    Eigen::Matrix2cd out = Eigen::Matrix2cd::Zero();
    const Eigen::Index rest = Eigen::Index{1} << (n - 1);
    for (Eigen::Index r = 0; r < rest; ++r) {
        for (int a = 0; a < 2; ++a) {
            for (int b = 0; b < 2; ++b) out(a, b) += full(2 * r + a, 2 * r + b);
        }
    }
    return out;
}

std::vector<BlochNode> bloch_nodes(int count) {
    const int nz = std::max(2, static_cast<int>(std::lround(std::sqrt(count / 2.0))));
    const int nphi = std::max(1, count / nz);
    // Golub-Welsch: Gauss-Legendre nodes are the eigenvalues of the Jacobi matrix.
    Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(nz, nz);
    for (int k = 1; k < nz; ++k) {
        const double b = k / std::sqrt(4.0 * k * k - 1.0);
        jacobi(k, k - 1) = b;
        jacobi(k - 1, k) = b;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
    std::vector<BlochNode> nodes;
    for (int i = 0; i < nz; ++i) {
        const double z = solver.eigenvalues()(i);
        const double v0 = solver.eigenvectors()(0, i);
        const double w = v0 * v0 / nphi;  // Legendre weights sum to 2; halved by the 1/2 of dz/2.
        const double theta = std::acos(std::clamp(z, -1.0, 1.0));
        for (int k = 0; k < nphi; ++k) {
            const double phi = 2.0 * std::numbers::pi * (k + 0.5) / nphi;
            nodes.push_back({std::cos(theta / 2.0), std::polar(std::sin(theta / 2.0), phi), w});
        }
    }
    return nodes;
}

double bloch_average(const std::function<double(Complex, Complex)> &fidelity, int points) {
    double sum = 0.0;
    for (const auto &node : bloch_nodes(points)) sum += node.weight * fidelity(node.alpha, node.beta);
    return sum;
}

double bloch_quadrature(const ChainSpec &spec, const LindbladConfig &config, double t,
                        int points, Complex ideal_phase) {
    const int n = spec.n;
    const double times[] = {t};
    return bloch_average(
        [&](Complex alpha, Complex beta) {
            CVector psi = CVector::Zero(n + 1);
            psi(0) = alpha;
            psi(1) = beta;
            const CMatrix rho0 = psi * psi.adjoint();
            SubspaceDensity rho{n, propagate_operator(spec, config, rho0, times).front()};
            return state_fidelity(reduce_to_target(rho), alpha, beta, ideal_phase);
        },
        points);
}

double grid_max_fidelity(const ChainSpec &spec, double t_max, double dt) {
    const SubspaceHamiltonian h = build_subspace_hamiltonian(spec);
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(h.excitation_block());
    const auto &v = solver.eigenvectors();
    const auto &e = solver.eigenvalues();
    const int n = spec.n;
    double best = 0.0;
    const auto steps = static_cast<long>(std::floor(t_max / dt));
    for (long s = 1; s <= steps; ++s) {
        const double t = dt * static_cast<double>(s);
        Complex f{0.0, 0.0};
        for (int k = 0; k < n; ++k) f += v(n - 1, k) * std::conj(v(0, k)) * std::polar(1.0, -e(k) * t);
        const double a = std::abs(f);
        best = std::max(best, 0.5 + a * a / 6.0 + a / 3.0);
    }
    return best;
}

double gaussian_cosine_transform(double theta, double t) {
    const double width = std::sqrt(theta);
    auto integrand = [&](double b) {
        return std::cos(b * t) * std::exp(-b * b / theta) / std::sqrt(std::numbers::pi * theta);
    };
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        integrand, -12.0 * width, 12.0 * width, 15, 1e-14);
}

}  // namespace spinchain::oracle
