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
#include <string>

#include "qpump/bitvec.hpp"

namespace qpump {

// n-qubit Pauli operator i^phase * (prod_q X_q^{x}) * (prod_q Z_q^{z}), with
// the X string standing to the left of the Z string.
struct PauliOperator {
    std::size_t n = 0;
    BitVec x_mask;
    BitVec z_mask;
    int phase = 0;  // exponent of i, mod 4

    static PauliOperator identity(std::size_t n);
    static PauliOperator single_x(std::size_t n, std::size_t q);
    static PauliOperator single_z(std::size_t n, std::size_t q);

    bool identity_mask() const { return x_mask.none() && z_mask.none(); }

    friend bool operator==(const PauliOperator& a, const PauliOperator& b) = default;
};

// True iff the symplectic product vanishes: parity(p.x & q.z) == parity(p.z & q.x).
bool commutes(const PauliOperator& p, const PauliOperator& q);

// Operator product p * q with exact phase. Sizes must match.
PauliOperator multiply(const PauliOperator& p, const PauliOperator& q);

// Readable form with Y letters, e.g. "- X0 Y3 Z4" or "+ I".
std::string to_string(const PauliOperator& p);

}  // namespace qpump
