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
#include <string>
#include <vector>

namespace qpump {

enum class GateKind : std::uint8_t { S, Sdg, Z, X, H, CZ };

struct Gate {
    GateKind kind;
    std::uint32_t a = 0;
    std::uint32_t b = 0;  // second endpoint, CZ only

    friend bool operator==(const Gate&, const Gate&) = default;
};

// Ordered list of diagonal-friendly Clifford gates with a tracked global
// phase, stored as an exponent of e^{i pi/4} (mod 8).
class CliffordCircuit {
  public:
    CliffordCircuit() = default;
    explicit CliffordCircuit(std::size_t n) : n_(n) {}

    std::size_t n() const { return n_; }
    const std::vector<Gate>& gates() const { return gates_; }
    int global_phase() const { return phase_; }
    void add_global_phase(int octants) { phase_ = ((phase_ + octants) % 8 + 8) % 8; }

    void s(std::uint32_t q);
    void sdg(std::uint32_t q);
    void z(std::uint32_t q);
    void x(std::uint32_t q);
    void h(std::uint32_t q);
    void cz(std::uint32_t a, std::uint32_t b);  // stored with a < b

    // Concatenates gates and adds phases; qubit counts must match.
    void append(const CliffordCircuit& other);

    std::size_t count(GateKind k) const;

  private:
    void check_qubit(std::uint32_t q) const;
    std::size_t n_ = 0;
    std::vector<Gate> gates_;
    int phase_ = 0;
};

// One gate per line ("S 5", "CZ 3 17") after "# qubits N" and "# phase K"
// header lines; parsing is the exact inverse.
std::string to_text(const CliffordCircuit& c);
CliffordCircuit circuit_from_text(const std::string& text);

}  // namespace qpump
