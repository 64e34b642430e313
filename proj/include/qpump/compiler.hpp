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

#include <cstdint>
#include <utility>
#include <vector>

#include "qpump/circuit.hpp"
#include "qpump/lattice.hpp"

namespace qpump {

// Exact circuit for evolving a weight-3 or weight-4 Z product for a quarter
// period. With sign -1 the term contributes +(Z...Z) to the energy and the
// circuit is one S per site, one CZ per site pair and a global e^{-i pi/4};
// with sign +1 everything inverts (Sdg, same CZs, global e^{+i pi/4}).
CliffordCircuit compile_z_term(std::size_t n_qubits, const HamTerm& term);

// Exact circuit for evolving a CZ product T for a half period: the CZ gates
// themselves times a global -i (sign +1, energy +T) or +i (sign -1).
CliffordCircuit compile_cz_term(std::size_t n_qubits, const HamTerm& term);

struct CompiledPump {
    CliffordCircuit raw;      // per-term circuits concatenated in term order
    CliffordCircuit reduced;  // same unitary with S counted mod 4, CZ mod 2
    std::vector<int> s_residue;  // per site: net quarter turns, 0..3
    std::vector<std::pair<std::uint32_t, std::uint32_t>> cz_edges;  // net CZs
    int octant = 0;           // global phase of both circuits, e^{i pi/4 k}
    // True when the net circuit stays on the declared boundary, allowing a
    // bare Z on bulk sites only for lattices that flip the bulk to -X.
    bool bulk_clean = true;
};

// Compile every term and cancel: all emitted gates are diagonal, so merging
// is exact including the global phase.
CompiledPump compile_pump(const LatticeSpec& spec);

// The reduced pump reindexed onto boundary-local qubits in ascending site
// order, dropping the bulk residues. Requires bulk_clean; applied to local
// all-plus this yields the pump's boundary factor.
CliffordCircuit boundary_restriction(const LatticeSpec& spec,
                                     const CompiledPump& pump);

// Stabilizer-level equivalence up to global phase: the circuits must map the
// all-plus state and n_random seeded random stabilizer states to identical
// states.
bool equivalence_check(const CliffordCircuit& a, const CliffordCircuit& b,
                       int n_random = 25, std::uint64_t seed = 11);

}  // namespace qpump
