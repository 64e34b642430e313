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

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "qpump/bitvec.hpp"
#include "qpump/circuit.hpp"
#include "qpump/pauli.hpp"

namespace qpump {

// Stabilizer state as n signed commuting Pauli generators. Storage is
// column-major: one X and one Z bit column per qubit, each indexed by
// generator, plus two bit vectors holding the generators' i-exponents as
// 2-bit counters. Gate conjugation is then a handful of word-parallel
// column operations regardless of generator count.
class StabilizerTableau {
  public:
    // The all-|+> state: generators {+X_0, ..., +X_{n-1}}.
    explicit StabilizerTableau(std::size_t n);

    std::size_t n() const { return n_; }

    void apply_s(std::size_t q);
    void apply_sdg(std::size_t q);
    void apply_z(std::size_t q);
    void apply_x(std::size_t q);
    void apply_h(std::size_t q);
    void apply_cz(std::size_t a, std::size_t b);
    // Applies every gate; the circuit's global phase is projectively
    // invisible and ignored here.
    void apply(const CliffordCircuit& c);

    PauliOperator generator(std::size_t g) const;

    // Exact membership: p, including its phase, lies in the stabilizer group.
    bool is_stabilized_by(const PauliOperator& p) const;
    // +1 / -1 when +-p lies in the group (p taken with its own phase as the
    // "+" reference); nullopt when neither does.
    std::optional<int> stabilizer_sign(const PauliOperator& p) const;

    // True iff the state is a tensor product across the region/complement
    // cut, i.e. some generating set splits into inside-only and outside-only
    // generators with exactly |region| of them inside.
    bool factorizes(const std::vector<std::size_t>& region) const;

    // Exact state equality (group and signs), via canonical echelon form.
    bool same_state(const StabilizerTableau& other) const;

  private:
    struct Echelon {
        std::vector<BitVec> rx, rz;        // row-major basis, reduced
        std::vector<std::uint8_t> phase;   // i-exponent per row
        std::vector<std::pair<std::size_t, std::size_t>> pivots;  // (column, row)
    };
    const Echelon& echelon() const;
    // Residual i-exponent after reducing p against the group; nullopt when
    // p's Pauli part is outside the group.
    std::optional<int> reduce(const PauliOperator& p) const;

    std::size_t n_;
    std::vector<BitVec> xcol_, zcol_;
    BitVec lo_, hi_;
    mutable std::shared_ptr<const Echelon> ech_;
};

StabilizerTableau new_plus_state(std::size_t n);
StabilizerTableau apply_circuit(const StabilizerTableau& t, const CliffordCircuit& c);

// Deterministic pseudo-random stabilizer state (scrambling circuit of H, S,
// CZ and X gates driven by the seed).
StabilizerTableau random_stabilizer_state(std::size_t n, std::uint64_t seed);

}  // namespace qpump
