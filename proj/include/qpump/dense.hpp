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

#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include "qpump/circuit.hpp"
#include "qpump/pauli.hpp"
#include "qpump/tableau.hpp"

namespace qpump {

// Raised when an instance would exceed the dense-simulation qubit budget.
struct CapExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Exact 2^n-amplitude state. Basis convention: bit q of the amplitude index
// is qubit q's computational value.
class DenseState {
  public:
    static constexpr std::size_t kDefaultCap = 22;

    static DenseState plus_state(std::size_t n, std::size_t cap = kDefaultCap);
    static DenseState basis_state(std::size_t n, std::uint64_t bits,
                                  std::size_t cap = kDefaultCap);

    std::size_t n() const { return n_; }
    std::size_t dim() const { return amps_.size(); }
    std::vector<std::complex<double>>& amps() { return amps_; }
    const std::vector<std::complex<double>>& amps() const { return amps_; }

    void apply_gate(const Gate& g);
    // Applies every gate, then the tracked global phase e^{i pi/4 * k}.
    void apply(const CliffordCircuit& c);
    // psi <- i^phase X^x Z^z psi.
    void apply_pauli(const PauliOperator& p);

    double norm() const;
    void renormalize();
    std::complex<double> inner(const DenseState& other) const;  // <this|other>

  private:
    DenseState(std::size_t n, std::size_t cap);
    std::size_t n_ = 0;
    std::vector<std::complex<double>> amps_;
};

// Real diagonal energy function accumulated term by term over the
// computational basis.
class DiagonalHamiltonian {
  public:
    explicit DiagonalHamiltonian(std::size_t n,
                                 std::size_t cap = DenseState::kDefaultCap);

    std::size_t n() const { return n_; }
    const std::vector<double>& energies() const { return e_; }

    // coeff * prod_{q in sites} Z_q
    void add_z_product(const std::vector<std::uint32_t>& sites, double coeff);
    // coeff * prod_{(a,b) in pairs} CZ_{ab}, each CZ contributing (-1)^{b_a b_b}
    void add_cz_product(const std::vector<std::pair<std::uint32_t, std::uint32_t>>& pairs,
                        double coeff);

    double max_abs_energy() const;

  private:
    std::size_t n_;
    std::vector<double> e_;
};

// amp_b <- e^{-i t E(b)} amp_b
void evolve_diagonal(DenseState& psi, const DiagonalHamiltonian& h, double t);

struct XTerm {
    std::uint32_t qubit;
    double coeff;
};

// psi <- exp(-i t (diag + sum_j coeff_j X_{q_j})) psi via Lanczos with
// adaptive substepping; 2-norm error at most tol. Throws std::runtime_error
// if the Krylov space fails to converge at the iteration cap.
void evolve_general(DenseState& psi, const DiagonalHamiltonian& diag,
                    const std::vector<XTerm>& x_terms, double t,
                    double tol = 1e-10);

enum class XOutcome { Plus, Minus };

struct MeasureResult {
    XOutcome outcome;
    double probability;  // of the realized outcome, before renormalization
};

// Projective X-basis measurement. Pass a desired outcome to post-select
// (throws on a zero-probability branch) or nullopt plus an RNG to sample.
MeasureResult measure_x(DenseState& psi, std::uint32_t qubit,
                        std::optional<XOutcome> postselect,
                        std::mt19937_64* rng = nullptr);

// P(X_qubit = +1) without collapsing the state.
double x_plus_probability(const DenseState& psi, std::uint32_t qubit);

// <psi| prod_g (1+g)/2 |psi> for the target's generators g embedded at
// region[t] (target qubit t -> global qubit region[t]); identity elsewhere.
double fidelity(const DenseState& psi, const StabilizerTableau& target,
                const std::vector<std::size_t>& region);

// |<a|b>|^2
double state_fidelity(const DenseState& a, const DenseState& b);

}  // namespace qpump
