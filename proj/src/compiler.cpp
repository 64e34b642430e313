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

#include "qpump/compiler.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

#include "qpump/tableau.hpp"

namespace qpump {

namespace {

void check_sites(std::size_t n, std::uint32_t q) {
    if (static_cast<std::size_t>(q) >= n)
        throw std::invalid_argument("term site out of range");
}

}  // namespace

CliffordCircuit compile_z_term(std::size_t n_qubits, const HamTerm& term) {
    if (term.kind != TermKind::ZProduct)
        throw std::invalid_argument("compile_z_term needs a Z product term");
    if (term.angle != Angle::PiOver4)
        throw std::invalid_argument("Z products evolve for a quarter period only");
    if (term.sign != 1 && term.sign != -1)
        throw std::invalid_argument("term sign must be +-1");
    const auto w = term.support.size();
    if (w != 3 && w != 4)
        throw std::invalid_argument("Z product weight must be 3 or 4");
    std::set<std::uint32_t> seen;
    for (auto q : term.support) {
        check_sites(n_qubits, q);
        if (!seen.insert(q).second)
            throw std::invalid_argument("repeated site in Z product");
    }

    // Writing each Z as 1-2b over bit values b turns the exponent into a
    // phase polynomial: the linear part is a quarter turn per site, the
    // quadratic part one CZ per pair, and cubic or higher parts are full
    // turns. Only the overall sign of the exponent flips with term.sign.
    CliffordCircuit c(n_qubits);
    for (auto q : term.support) {
        if (term.sign < 0)
            c.s(q);
        else
            c.sdg(q);
    }
    for (std::size_t i = 0; i < w; ++i)
        for (std::size_t j = i + 1; j < w; ++j) c.cz(term.support[i], term.support[j]);
    c.add_global_phase(term.sign < 0 ? 7 : 1);
    return c;
}

CliffordCircuit compile_cz_term(std::size_t n_qubits, const HamTerm& term) {
    if (term.kind != TermKind::CZProduct)
        throw std::invalid_argument("compile_cz_term needs a CZ product term");
    if (term.angle != Angle::PiOver2)
        throw std::invalid_argument("CZ products evolve for a half period only");
    if (term.sign != 1 && term.sign != -1)
        throw std::invalid_argument("term sign must be +-1");
    if (term.pairs.empty())
        throw std::invalid_argument("CZ product needs at least one pair");
    std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
    for (const auto& [a, b] : term.pairs) {
        check_sites(n_qubits, a);
        check_sites(n_qubits, b);
        if (a == b) throw std::invalid_argument("CZ pair on one site");
        if (!seen.insert({std::min(a, b), std::max(a, b)}).second)
            throw std::invalid_argument("repeated pair in CZ product");
    }

    // The product squares to one, so the half-period evolution is the product
    // itself times -i (or +i when the energy sign inverts).
    CliffordCircuit c(n_qubits);
    for (const auto& [a, b] : term.pairs) c.cz(a, b);
    c.add_global_phase(term.sign > 0 ? 6 : 2);
    return c;
}

CompiledPump compile_pump(const LatticeSpec& spec) {
    const std::size_t n = spec.n();
    CompiledPump out;
    out.raw = CliffordCircuit(n);
    out.s_residue.assign(n, 0);
    std::map<std::pair<std::uint32_t, std::uint32_t>, int> cz_parity;
    int octant = 0;

    for (const auto& term : spec.terms) {
        CliffordCircuit part = term.kind == TermKind::ZProduct
                                   ? compile_z_term(n, term)
                                   : compile_cz_term(n, term);
        for (const auto& g : part.gates()) {
            switch (g.kind) {
                case GateKind::S: out.s_residue[g.a] = (out.s_residue[g.a] + 1) & 3; break;
                case GateKind::Sdg: out.s_residue[g.a] = (out.s_residue[g.a] + 3) & 3; break;
                case GateKind::Z: out.s_residue[g.a] = (out.s_residue[g.a] + 2) & 3; break;
                case GateKind::CZ: cz_parity[{g.a, g.b}] ^= 1; break;
                default: throw std::logic_error("non-diagonal gate in compiled term");
            }
        }
        octant = (octant + part.global_phase()) & 7;
        out.raw.append(part);
    }

    out.reduced = CliffordCircuit(n);
    for (std::uint32_t q = 0; q < n; ++q) {
        switch (out.s_residue[q]) {
            case 1: out.reduced.s(q); break;
            case 2: out.reduced.z(q); break;
            case 3: out.reduced.sdg(q); break;
            default: break;
        }
    }
    for (const auto& [pr, odd] : cz_parity)
        if (odd) {
            out.cz_edges.push_back(pr);
            out.reduced.cz(pr.first, pr.second);
        }
    out.reduced.add_global_phase(octant);
    out.octant = octant;

    std::vector<char> on_boundary(n, 0);
    for (auto q : spec.boundary) on_boundary[q] = 1;
    for (const auto& [a, b] : out.cz_edges)
        if (!on_boundary[a] || !on_boundary[b]) out.bulk_clean = false;
    for (std::uint32_t q = 0; q < n; ++q) {
        if (on_boundary[q] || out.s_residue[q] == 0) continue;
        if (!(spec.bulk_flips_to_minus && out.s_residue[q] == 2)) out.bulk_clean = false;
    }
    return out;
}

CliffordCircuit boundary_restriction(const LatticeSpec& spec,
                                     const CompiledPump& pump) {
    if (!pump.bulk_clean)
        throw std::logic_error("pump acts on the bulk beyond the expected flips");
    std::map<std::uint32_t, std::uint32_t> local;
    for (std::uint32_t q : spec.boundary)
        local.emplace(q, static_cast<std::uint32_t>(local.size()));
    CliffordCircuit c(local.size());
    for (const auto& [q, lq] : local) {
        switch (pump.s_residue.at(q)) {
            case 1: c.s(lq); break;
            case 2: c.z(lq); break;
            case 3: c.sdg(lq); break;
            default: break;
        }
    }
    for (const auto& [a, b] : pump.cz_edges) c.cz(local.at(a), local.at(b));
    return c;
}

bool equivalence_check(const CliffordCircuit& a, const CliffordCircuit& b,
                       int n_random, std::uint64_t seed) {
    if (a.n() != b.n())
        throw std::invalid_argument("circuits act on different qubit counts");
    if (n_random < 0) throw std::invalid_argument("n_random must be nonnegative");
    {
        StabilizerTableau ta = new_plus_state(a.n()), tb = new_plus_state(b.n());
        ta.apply(a);
        tb.apply(b);
        if (!ta.same_state(tb)) return false;
    }
    for (int r = 0; r < n_random; ++r) {
        auto base = random_stabilizer_state(a.n(), seed + static_cast<std::uint64_t>(r));
        auto ta = base, tb = base;
        ta.apply(a);
        tb.apply(b);
        if (!ta.same_state(tb)) return false;
    }
    return true;
}

}  // namespace qpump
