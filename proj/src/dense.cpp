// Copyright 2026 The qpump developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qpump/dense.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

namespace qpump {

namespace {

constexpr double kPi = std::numbers::pi;

std::uint64_t mask_from_bits(const BitVec& bits) {
    std::uint64_t m = 0;
    for (std::size_t q : bits.set_bits()) m |= std::uint64_t{1} << q;
    return m;
}

}  // namespace

DenseState::DenseState(std::size_t n, std::size_t cap) : n_(n) {
    if (n == 0) throw std::invalid_argument("state needs at least one qubit");
    if (n > cap || n > 62)
        throw CapExceeded("dense state of " + std::to_string(n) +
                          " qubits exceeds the cap of " + std::to_string(cap));
    amps_.assign(std::size_t{1} << n, {0.0, 0.0});
}

DenseState DenseState::plus_state(std::size_t n, std::size_t cap) {
    DenseState s(n, cap);
    double a = 1.0 / std::sqrt(static_cast<double>(s.dim()));
    std::fill(s.amps_.begin(), s.amps_.end(), std::complex<double>{a, 0.0});
    return s;
}

DenseState DenseState::basis_state(std::size_t n, std::uint64_t bits, std::size_t cap) {
    DenseState s(n, cap);
    if (bits >= s.dim()) throw std::invalid_argument("basis index out of range");
    s.amps_[bits] = 1.0;
    return s;
}

void DenseState::apply_gate(const Gate& g) {
    const std::uint64_t dim = amps_.size();
    const std::uint64_t ma = std::uint64_t{1} << g.a;
    switch (g.kind) {
        case GateKind::S:
            for (std::uint64_t b = 0; b < dim; ++b)
                if (b & ma) amps_[b] *= std::complex<double>{0.0, 1.0};
            break;
        case GateKind::Sdg:
            for (std::uint64_t b = 0; b < dim; ++b)
                if (b & ma) amps_[b] *= std::complex<double>{0.0, -1.0};
            break;
        case GateKind::Z:
            for (std::uint64_t b = 0; b < dim; ++b)
                if (b & ma) amps_[b] = -amps_[b];
            break;
        case GateKind::X:
            for (std::uint64_t b = 0; b < dim; ++b)
                if (!(b & ma)) std::swap(amps_[b], amps_[b | ma]);
            break;
        case GateKind::H: {
            const double r = 1.0 / std::sqrt(2.0);
            for (std::uint64_t b = 0; b < dim; ++b) {
                if (b & ma) continue;
                std::complex<double> a0 = amps_[b], a1 = amps_[b | ma];
                amps_[b] = r * (a0 + a1);
                amps_[b | ma] = r * (a0 - a1);
            }
            break;
        }
        case GateKind::CZ: {
            const std::uint64_t mb = std::uint64_t{1} << g.b;
            for (std::uint64_t b = 0; b < dim; ++b)
                if ((b & ma) && (b & mb)) amps_[b] = -amps_[b];
            break;
        }
    }
}

void DenseState::apply(const CliffordCircuit& c) {
    if (c.n() != n_) throw std::invalid_argument("circuit/state size mismatch");
    for (const Gate& g : c.gates()) apply_gate(g);
    if (c.global_phase() != 0) {
        std::complex<double> ph = std::polar(1.0, kPi / 4.0 * c.global_phase());
        for (auto& a : amps_) a *= ph;
    }
}

void DenseState::apply_pauli(const PauliOperator& p) {
    if (p.n != n_) throw std::invalid_argument("Pauli/state size mismatch");
    const std::uint64_t xm = mask_from_bits(p.x_mask);
    const std::uint64_t zm = mask_from_bits(p.z_mask);
    static const std::complex<double> kI[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    const std::complex<double> ph = kI[p.phase & 3];
    std::vector<std::complex<double>> out(amps_.size());
    for (std::uint64_t b = 0; b < amps_.size(); ++b) {
        // Z acts first on |b>, then X flips the bits.
        double sign = (std::popcount(b & zm) & 1) ? -1.0 : 1.0;
        out[b ^ xm] = ph * sign * amps_[b];
    }
    amps_ = std::move(out);
}

double DenseState::norm() const {
    double s = 0;
    for (const auto& a : amps_) s += std::norm(a);
    return std::sqrt(s);
}

void DenseState::renormalize() {
    double nr = norm();
    if (nr == 0.0) throw std::runtime_error("cannot renormalize the zero vector");
    for (auto& a : amps_) a /= nr;
}

std::complex<double> DenseState::inner(const DenseState& other) const {
    if (n_ != other.n_) throw std::invalid_argument("state size mismatch");
    std::complex<double> s = 0;
    for (std::size_t b = 0; b < amps_.size(); ++b)
        s += std::conj(amps_[b]) * other.amps_[b];
    return s;
}

DiagonalHamiltonian::DiagonalHamiltonian(std::size_t n, std::size_t cap) : n_(n) {
    if (n == 0) throw std::invalid_argument("Hamiltonian needs at least one qubit");
    if (n > cap || n > 62)
        throw CapExceeded("diagonal Hamiltonian on " + std::to_string(n) +
                          " qubits exceeds the cap of " + std::to_string(cap));
    e_.assign(std::size_t{1} << n, 0.0);
}

void DiagonalHamiltonian::add_z_product(const std::vector<std::uint32_t>& sites,
                                        double coeff) {
    std::uint64_t mask = 0;
    for (std::uint32_t q : sites) {
        if (q >= n_) throw std::invalid_argument("site out of range");
        mask ^= std::uint64_t{1} << q;  // Z*Z = 1
    }
    for (std::uint64_t b = 0; b < e_.size(); ++b)
        e_[b] += (std::popcount(b & mask) & 1) ? -coeff : coeff;
}

void DiagonalHamiltonian::add_cz_product(
    const std::vector<std::pair<std::uint32_t, std::uint32_t>>& pairs, double coeff) {
    for (auto [a, b] : pairs)
        if (a >= n_ || b >= n_ || a == b)
            throw std::invalid_argument("bad CZ pair");
    for (std::uint64_t b = 0; b < e_.size(); ++b) {
        int exponent = 0;
        for (auto [p, q] : pairs)
            exponent += static_cast<int>((b >> p) & (b >> q) & 1u);
        e_[b] += (exponent & 1) ? -coeff : coeff;
    }
}

double DiagonalHamiltonian::max_abs_energy() const {
    double m = 0;
    for (double v : e_) m = std::max(m, std::abs(v));
    return m;
}

void evolve_diagonal(DenseState& psi, const DiagonalHamiltonian& h, double t) {
    if (psi.n() != h.n()) throw std::invalid_argument("state/Hamiltonian size mismatch");
    auto& amps = psi.amps();
    const auto& e = h.energies();
    for (std::size_t b = 0; b < amps.size(); ++b)
        amps[b] *= std::polar(1.0, -t * e[b]);
}

namespace {

using Vec = std::vector<std::complex<double>>;

void h_apply(const DiagonalHamiltonian& diag, const std::vector<XTerm>& x_terms,
             const Vec& in, Vec& out) {
    const auto& e = diag.energies();
    for (std::size_t b = 0; b < in.size(); ++b) out[b] = e[b] * in[b];
    for (const XTerm& xt : x_terms) {
        const std::uint64_t m = std::uint64_t{1} << xt.qubit;
        for (std::size_t b = 0; b < in.size(); ++b) out[b] += xt.coeff * in[b ^ m];
    }
}

// One Lanczos step of exp(-i dt H) applied to v (unit norm on entry is not
// required). Error target is per-call.
void krylov_exp(const DiagonalHamiltonian& diag, const std::vector<XTerm>& x_terms,
                Vec& v, double dt, double tol) {
    constexpr std::size_t kMaxKrylov = 48;
    const std::size_t dim = v.size();

    double vnorm = 0;
    for (const auto& a : v) vnorm += std::norm(a);
    vnorm = std::sqrt(vnorm);
    if (vnorm == 0.0) return;

    std::vector<Vec> basis;
    basis.emplace_back(dim);
    for (std::size_t b = 0; b < dim; ++b) basis[0][b] = v[b] / vnorm;

    std::vector<double> alpha, beta;  // beta[j] couples basis j and j+1
    Vec w(dim);
    Eigen::VectorXcd u;

    for (std::size_t m = 1; m <= kMaxKrylov; ++m) {
        const Vec& vj = basis[m - 1];
        h_apply(diag, x_terms, vj, w);
        if (m >= 2) {
            const Vec& vp = basis[m - 2];
            double bj = beta[m - 2];
            for (std::size_t b = 0; b < dim; ++b) w[b] -= bj * vp[b];
        }
        double aj = 0;
        for (std::size_t b = 0; b < dim; ++b)
            aj += (std::conj(vj[b]) * w[b]).real();
        alpha.push_back(aj);
        for (std::size_t b = 0; b < dim; ++b) w[b] -= aj * vj[b];
        // Full reorthogonalization keeps the basis numerically orthonormal.
        for (const Vec& vk : basis) {
            std::complex<double> overlap = 0;
            for (std::size_t b = 0; b < dim; ++b) overlap += std::conj(vk[b]) * w[b];
            for (std::size_t b = 0; b < dim; ++b) w[b] -= overlap * vk[b];
        }
        double bnext = 0;
        for (const auto& a : w) bnext += std::norm(a);
        bnext = std::sqrt(bnext);

        // exp(-i dt T_m) e1 via the tridiagonal eigendecomposition.
        Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
        for (std::size_t r = 0; r < m; ++r) {
            T(r, r) = alpha[r];
            if (r + 1 < m) T(r, r + 1) = T(r + 1, r) = beta[r];
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
        Eigen::VectorXd e1 = Eigen::VectorXd::Zero(m);
        e1(0) = 1.0;
        Eigen::VectorXd proj = es.eigenvectors().transpose() * e1;
        Eigen::VectorXcd expd(m);
        for (std::size_t r = 0; r < m; ++r)
            expd(r) = std::polar(1.0, -dt * es.eigenvalues()(r)) * proj(r);
        u = es.eigenvectors() * expd;

        double err = bnext * std::abs(u(m - 1)) * std::abs(dt);
        bool happy = bnext < 1e-14;
        if (err < tol || happy || m == kMaxKrylov) {
            if (err >= tol && !happy)
                throw std::runtime_error("Krylov evolution failed to converge");
            for (std::size_t b = 0; b < dim; ++b) {
                std::complex<double> acc = 0;
                for (std::size_t r = 0; r < m; ++r) acc += u(r) * basis[r][b];
                v[b] = vnorm * acc;
            }
            return;
        }
        beta.push_back(bnext);
        basis.emplace_back(dim);
        for (std::size_t b = 0; b < dim; ++b) basis.back()[b] = w[b] / bnext;
    }
}

}  // namespace

void evolve_general(DenseState& psi, const DiagonalHamiltonian& diag,
                    const std::vector<XTerm>& x_terms, double t, double tol) {
    if (psi.n() != diag.n()) throw std::invalid_argument("state/Hamiltonian size mismatch");
    for (const XTerm& xt : x_terms)
        if (xt.qubit >= psi.n()) throw std::invalid_argument("X term out of range");
    if (t == 0.0) return;
    if (x_terms.empty()) {
        evolve_diagonal(psi, diag, t);
        return;
    }
    double bound = diag.max_abs_energy();
    for (const XTerm& xt : x_terms) bound += std::abs(xt.coeff);
    std::size_t steps =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(bound * std::abs(t) / 4.0)));
    double dt = t / static_cast<double>(steps);
    for (std::size_t s = 0; s < steps; ++s)
        krylov_exp(diag, x_terms, psi.amps(), dt, tol / static_cast<double>(steps));
}

double x_plus_probability(const DenseState& psi, std::uint32_t qubit) {
    if (qubit >= psi.n()) throw std::invalid_argument("qubit out of range");
    const auto& amps = psi.amps();
    const std::uint64_t m = std::uint64_t{1} << qubit;
    double p_plus = 0;
    for (std::uint64_t b = 0; b < amps.size(); ++b)
        p_plus += std::norm(0.5 * (amps[b] + amps[b ^ m]));
    return p_plus;
}

MeasureResult measure_x(DenseState& psi, std::uint32_t qubit,
                        std::optional<XOutcome> postselect, std::mt19937_64* rng) {
    if (qubit >= psi.n()) throw std::invalid_argument("qubit out of range");
    auto& amps = psi.amps();
    const std::uint64_t m = std::uint64_t{1} << qubit;

    double p_plus = 0;
    for (std::uint64_t b = 0; b < amps.size(); ++b)
        p_plus += std::norm(0.5 * (amps[b] + amps[b ^ m]));

    XOutcome out;
    if (postselect) {
        out = *postselect;
    } else {
        if (!rng) throw std::invalid_argument("sampling requires an RNG");
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        out = unit(*rng) < p_plus ? XOutcome::Plus : XOutcome::Minus;
    }
    double sign = out == XOutcome::Plus ? 1.0 : -1.0;
    for (std::uint64_t b = 0; b < amps.size(); ++b) {
        if (b & m) continue;
        std::complex<double> a0 = amps[b], a1 = amps[b ^ m];
        amps[b] = 0.5 * (a0 + sign * a1);
        amps[b ^ m] = 0.5 * (a1 + sign * a0);
    }
    // Weigh and renormalize by the projected norm itself. Deriving the minus
    // branch from 1 - p_plus would amplify any inherited norm drift by 1/p,
    // and the drift compounds over sequential low-probability projections.
    double p = 0;
    for (const auto& a : amps) p += std::norm(a);
    if (p < 1e-14) throw std::runtime_error("post-selected branch has zero probability");
    double scale = 1.0 / std::sqrt(p);
    for (auto& a : amps) a *= scale;
    return {out, p};
}

double fidelity(const DenseState& psi, const StabilizerTableau& target,
                const std::vector<std::size_t>& region) {
    if (target.n() != region.size())
        throw std::invalid_argument("target generator count must equal region size");
    for (std::size_t q : region)
        if (q >= psi.n()) throw std::invalid_argument("region site out of range");

    DenseState proj = psi;
    for (std::size_t g = 0; g < target.n(); ++g) {
        PauliOperator local = target.generator(g);
        PauliOperator lifted = PauliOperator::identity(psi.n());
        lifted.phase = local.phase;
        for (std::size_t q = 0; q < region.size(); ++q) {
            if (local.x_mask.get(q)) lifted.x_mask.set(region[q], true);
            if (local.z_mask.get(q)) lifted.z_mask.set(region[q], true);
        }
        DenseState moved = proj;
        moved.apply_pauli(lifted);
        auto& a = proj.amps();
        const auto& b = moved.amps();
        for (std::size_t i = 0; i < a.size(); ++i) a[i] = 0.5 * (a[i] + b[i]);
    }
    double f = 0;
    for (const auto& a : proj.amps()) f += std::norm(a);
    return f;
}

double state_fidelity(const DenseState& a, const DenseState& b) {
    return std::norm(a.inner(b));
}

}  // namespace qpump
