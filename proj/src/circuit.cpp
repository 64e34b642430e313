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

#include "qpump/circuit.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace qpump {

void CliffordCircuit::check_qubit(std::uint32_t q) const {
    if (q >= n_) throw std::invalid_argument("qubit index out of range");
}

void CliffordCircuit::s(std::uint32_t q) {
    check_qubit(q);
    gates_.push_back({GateKind::S, q, 0});
}

void CliffordCircuit::sdg(std::uint32_t q) {
    check_qubit(q);
    gates_.push_back({GateKind::Sdg, q, 0});
}

void CliffordCircuit::z(std::uint32_t q) {
    check_qubit(q);
    gates_.push_back({GateKind::Z, q, 0});
}

void CliffordCircuit::x(std::uint32_t q) {
    check_qubit(q);
    gates_.push_back({GateKind::X, q, 0});
}

void CliffordCircuit::h(std::uint32_t q) {
    check_qubit(q);
    gates_.push_back({GateKind::H, q, 0});
}

void CliffordCircuit::cz(std::uint32_t a, std::uint32_t b) {
    check_qubit(a);
    check_qubit(b);
    if (a == b) throw std::invalid_argument("CZ endpoints must be distinct");
    gates_.push_back({GateKind::CZ, std::min(a, b), std::max(a, b)});
}

void CliffordCircuit::append(const CliffordCircuit& other) {
    if (n_ != other.n_) throw std::invalid_argument("circuit size mismatch");
    gates_.insert(gates_.end(), other.gates_.begin(), other.gates_.end());
    add_global_phase(other.phase_);
}

std::size_t CliffordCircuit::count(GateKind k) const {
    return static_cast<std::size_t>(
        std::count_if(gates_.begin(), gates_.end(),
                      [k](const Gate& g) { return g.kind == k; }));
}

namespace {

const char* gate_name(GateKind k) {
    switch (k) {
        case GateKind::S: return "S";
        case GateKind::Sdg: return "SDG";
        case GateKind::Z: return "Z";
        case GateKind::X: return "X";
        case GateKind::H: return "H";
        case GateKind::CZ: return "CZ";
    }
    throw std::logic_error("unreachable gate kind");
}

}  // namespace

std::string to_text(const CliffordCircuit& c) {
    std::ostringstream out;
    out << "# qubits " << c.n() << "\n";
    out << "# phase " << c.global_phase() << "\n";
    for (const Gate& g : c.gates()) {
        out << gate_name(g.kind) << ' ' << g.a;
        if (g.kind == GateKind::CZ) out << ' ' << g.b;
        out << "\n";
    }
    return out.str();
}

CliffordCircuit circuit_from_text(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    bool have_qubits = false;
    CliffordCircuit c;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok)) continue;
        if (tok == "#") {
            std::string key;
            if (!(ls >> key)) continue;
            if (key == "qubits") {
                std::size_t n = 0;
                if (!(ls >> n)) throw std::invalid_argument("bad qubits header");
                c = CliffordCircuit(n);
                have_qubits = true;
            } else if (key == "phase") {
                int p = 0;
                if (!(ls >> p)) throw std::invalid_argument("bad phase header");
                c.add_global_phase(p);
            }
            continue;
        }
        if (!have_qubits) throw std::invalid_argument("gate before '# qubits' header");
        std::uint32_t a = 0, b = 0;
        if (tok == "CZ") {
            if (!(ls >> a >> b)) throw std::invalid_argument("bad CZ line: " + line);
            c.cz(a, b);
        } else {
            if (!(ls >> a)) throw std::invalid_argument("bad gate line: " + line);
            if (tok == "S")
                c.s(a);
            else if (tok == "SDG")
                c.sdg(a);
            else if (tok == "Z")
                c.z(a);
            else if (tok == "X")
                c.x(a);
            else if (tok == "H")
                c.h(a);
            else
                throw std::invalid_argument("unknown gate: " + tok);
        }
        std::string extra;
        if (ls >> extra) throw std::invalid_argument("trailing tokens: " + line);
    }
    if (!have_qubits) throw std::invalid_argument("missing '# qubits' header");
    return c;
}

}  // namespace qpump
