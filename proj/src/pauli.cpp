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

#include "qpump/pauli.hpp"

#include <stdexcept>

namespace qpump {

PauliOperator PauliOperator::identity(std::size_t n) {
    return PauliOperator{n, BitVec(n), BitVec(n), 0};
}

PauliOperator PauliOperator::single_x(std::size_t n, std::size_t q) {
    PauliOperator p = identity(n);
    p.x_mask.set(q, true);
    return p;
}

PauliOperator PauliOperator::single_z(std::size_t n, std::size_t q) {
    PauliOperator p = identity(n);
    p.z_mask.set(q, true);
    return p;
}

bool commutes(const PauliOperator& p, const PauliOperator& q) {
    if (p.n != q.n) throw std::invalid_argument("Pauli size mismatch");
    return BitVec::and_parity(p.x_mask, q.z_mask) == BitVec::and_parity(p.z_mask, q.x_mask);
}

PauliOperator multiply(const PauliOperator& p, const PauliOperator& q) {
    if (p.n != q.n) throw std::invalid_argument("Pauli size mismatch");
    PauliOperator out;
    out.n = p.n;
    // Moving q's X string past p's Z string costs (-1)^{|p.z & q.x|}.
    out.phase = (p.phase + q.phase + 2 * BitVec::and_parity(p.z_mask, q.x_mask)) & 3;
    out.x_mask = p.x_mask ^ q.x_mask;
    out.z_mask = p.z_mask ^ q.z_mask;
    return out;
}

std::string to_string(const PauliOperator& p) {
    // Site letters absorb one factor of -i per Y (XZ = -i Y).
    int y_count = static_cast<int>((p.x_mask & p.z_mask).popcount());
    int d = ((p.phase - y_count) % 4 + 4) % 4;
    static const char* kSign[4] = {"+", "+i", "-", "-i"};
    std::string out = kSign[d];
    if (p.identity_mask()) return out + " I";
    for (std::size_t q = 0; q < p.n; ++q) {
        bool x = p.x_mask.get(q);
        bool z = p.z_mask.get(q);
        if (!x && !z) continue;
        out += ' ';
        out += x ? (z ? 'Y' : 'X') : 'Z';
        out += std::to_string(q);
    }
    return out;
}

}  // namespace qpump
