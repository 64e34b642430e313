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

#include "qpump/tableau.hpp"

#include <random>
#include <stdexcept>

namespace qpump {

namespace {

// phase += 1 (mod 4) on the generators selected by mask.
void add1(BitVec& lo, BitVec& hi, const BitVec& mask) {
    hi ^= lo & mask;
    lo ^= mask;
}

// phase += 2 (mod 4) on the selected generators.
void add2(BitVec& hi, const BitVec& mask) { hi ^= mask; }

}  // namespace

StabilizerTableau::StabilizerTableau(std::size_t n)
    : n_(n), xcol_(n, BitVec(n)), zcol_(n, BitVec(n)), lo_(n), hi_(n) {
    if (n == 0) throw std::invalid_argument("tableau needs at least one qubit");
    for (std::size_t q = 0; q < n; ++q) xcol_[q].set(q, true);
}

void StabilizerTableau::apply_s(std::size_t q) {
    ech_.reset();
    // X -> iXZ on every generator with an X bit here; Z untouched.
    add1(lo_, hi_, xcol_[q]);
    zcol_[q] ^= xcol_[q];
}

void StabilizerTableau::apply_sdg(std::size_t q) {
    ech_.reset();
    // X -> -iXZ: phase += 3.
    add2(hi_, xcol_[q]);
    add1(lo_, hi_, xcol_[q]);
    zcol_[q] ^= xcol_[q];
}

void StabilizerTableau::apply_z(std::size_t q) {
    ech_.reset();
    add2(hi_, xcol_[q]);
}

void StabilizerTableau::apply_x(std::size_t q) {
    ech_.reset();
    add2(hi_, zcol_[q]);
}

void StabilizerTableau::apply_h(std::size_t q) {
    ech_.reset();
    add2(hi_, xcol_[q] & zcol_[q]);
    std::swap(xcol_[q], zcol_[q]);
}

void StabilizerTableau::apply_cz(std::size_t a, std::size_t b) {
    ech_.reset();
    add2(hi_, xcol_[a] & xcol_[b]);
    zcol_[a] ^= xcol_[b];
    zcol_[b] ^= xcol_[a];
}

void StabilizerTableau::apply(const CliffordCircuit& c) {
    if (c.n() != n_) throw std::invalid_argument("circuit/tableau size mismatch");
    for (const Gate& g : c.gates()) {
        switch (g.kind) {
            case GateKind::S: apply_s(g.a); break;
            case GateKind::Sdg: apply_sdg(g.a); break;
            case GateKind::Z: apply_z(g.a); break;
            case GateKind::X: apply_x(g.a); break;
            case GateKind::H: apply_h(g.a); break;
            case GateKind::CZ: apply_cz(g.a, g.b); break;
        }
    }
}

PauliOperator StabilizerTableau::generator(std::size_t g) const {
    if (g >= n_) throw std::invalid_argument("generator index out of range");
    PauliOperator p = PauliOperator::identity(n_);
    for (std::size_t q = 0; q < n_; ++q) {
        if (xcol_[q].get(g)) p.x_mask.set(q, true);
        if (zcol_[q].get(g)) p.z_mask.set(q, true);
    }
    p.phase = static_cast<int>(lo_.get(g)) + 2 * static_cast<int>(hi_.get(g));
    return p;
}

const StabilizerTableau::Echelon& StabilizerTableau::echelon() const {
    if (ech_) return *ech_;
    auto e = std::make_shared<Echelon>();
    e->rx.assign(n_, BitVec(n_));
    e->rz.assign(n_, BitVec(n_));
    e->phase.assign(n_, 0);
    for (std::size_t q = 0; q < n_; ++q) {
        for (std::size_t g = 0; g < n_; ++g) {
            if (xcol_[q].get(g)) e->rx[g].set(q, true);
            if (zcol_[q].get(g)) e->rz[g].set(q, true);
        }
    }
    for (std::size_t g = 0; g < n_; ++g)
        e->phase[g] = static_cast<std::uint8_t>(lo_.get(g) + 2 * hi_.get(g));

    // In-place product rows[dst] <- rows[dst] * rows[src], tracking the
    // i-exponent: commuting src's X string past dst's Z string costs
    // (-1)^{|dst.z & src.x|}.
    auto mul_into = [&e](std::size_t dst, std::size_t src) {
        e->phase[dst] = static_cast<std::uint8_t>(
            (e->phase[dst] + e->phase[src] +
             2 * BitVec::and_parity(e->rz[dst], e->rx[src])) & 3);
        e->rx[dst] ^= e->rx[src];
        e->rz[dst] ^= e->rz[src];
    };

    std::size_t rank = 0;
    for (std::size_t col = 0; col < 2 * n_ && rank < n_; ++col) {
        auto bit = [&e, col, n = n_](std::size_t row) {
            return col < n ? e->rx[row].get(col) : e->rz[row].get(col - n);
        };
        std::size_t pivot = rank;
        while (pivot < n_ && !bit(pivot)) ++pivot;
        if (pivot == n_) continue;
        std::swap(e->rx[rank], e->rx[pivot]);
        std::swap(e->rz[rank], e->rz[pivot]);
        std::swap(e->phase[rank], e->phase[pivot]);
        for (std::size_t row = 0; row < n_; ++row)
            if (row != rank && bit(row)) mul_into(row, rank);
        e->pivots.emplace_back(col, rank);
        ++rank;
    }
    if (rank != n_) throw std::logic_error("tableau lost full rank");
    ech_ = std::move(e);
    return *ech_;
}

std::optional<int> StabilizerTableau::reduce(const PauliOperator& p) const {
    if (p.n != n_) throw std::invalid_argument("Pauli/tableau size mismatch");
    const Echelon& e = echelon();
    BitVec px = p.x_mask, pz = p.z_mask;
    int phase = p.phase;
    for (auto [col, row] : e.pivots) {
        bool bit = col < n_ ? px.get(col) : pz.get(col - n_);
        if (!bit) continue;
        phase = (phase + e.phase[row] + 2 * BitVec::and_parity(pz, e.rx[row])) & 3;
        px ^= e.rx[row];
        pz ^= e.rz[row];
    }
    if (px.any() || pz.any()) return std::nullopt;
    return phase;
}

bool StabilizerTableau::is_stabilized_by(const PauliOperator& p) const {
    auto t = reduce(p);
    return t.has_value() && *t == 0;
}

std::optional<int> StabilizerTableau::stabilizer_sign(const PauliOperator& p) const {
    auto t = reduce(p);
    if (!t) return std::nullopt;
    if (*t == 0) return 1;
    if (*t == 2) return -1;
    return std::nullopt;  // only +-i p lies in the group
}

bool StabilizerTableau::factorizes(const std::vector<std::size_t>& region) const {
    BitVec inside(n_);
    for (std::size_t q : region) {
        if (q >= n_) throw std::invalid_argument("region site out of range");
        inside.set(q, true);
    }
    std::size_t r = inside.popcount();
    if (r != region.size()) throw std::invalid_argument("duplicate region site");
    BitVec outside(n_);
    for (std::size_t q = 0; q < n_; ++q) outside.set(q, !inside.get(q));

    // Rank of the generator matrix restricted to a qubit subset; n minus it
    // counts the independent group elements supported on the complement.
    auto restricted_rank = [this](const BitVec& keep) {
        const Echelon& e = echelon();
        std::vector<BitVec> mx(n_, BitVec(n_)), mz(n_, BitVec(n_));
        for (std::size_t g = 0; g < n_; ++g) {
            mx[g] = e.rx[g] & keep;
            mz[g] = e.rz[g] & keep;
        }
        std::size_t rank = 0;
        for (std::size_t col = 0; col < 2 * n_ && rank < n_; ++col) {
            auto bit = [&](std::size_t row) {
                return col < n_ ? mx[row].get(col) : mz[row].get(col - n_);
            };
            std::size_t pivot = rank;
            while (pivot < n_ && !bit(pivot)) ++pivot;
            if (pivot == n_) continue;
            std::swap(mx[rank], mx[pivot]);
            std::swap(mz[rank], mz[pivot]);
            for (std::size_t row = rank + 1; row < n_; ++row)
                if (bit(row)) {
                    mx[row] ^= mx[rank];
                    mz[row] ^= mz[rank];
                }
            ++rank;
        }
        return rank;
    };

    std::size_t inside_only = n_ - restricted_rank(outside);
    std::size_t outside_only = n_ - restricted_rank(inside);
    return inside_only == r && outside_only == n_ - r;
}

bool StabilizerTableau::same_state(const StabilizerTableau& other) const {
    if (n_ != other.n_) return false;
    const Echelon& a = echelon();
    const Echelon& b = other.echelon();
    return a.rx == b.rx && a.rz == b.rz && a.phase == b.phase;
}

StabilizerTableau new_plus_state(std::size_t n) { return StabilizerTableau(n); }

StabilizerTableau apply_circuit(const StabilizerTableau& t, const CliffordCircuit& c) {
    StabilizerTableau out = t;
    out.apply(c);
    return out;
}

StabilizerTableau random_stabilizer_state(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    StabilizerTableau t(n);
    std::uniform_int_distribution<int> kind(0, 3);
    std::uniform_int_distribution<std::size_t> site(0, n - 1);
    std::size_t depth = 3 * n + 8;
    for (std::size_t step = 0; step < depth; ++step) {
        switch (kind(rng)) {
            case 0: t.apply_h(site(rng)); break;
            case 1: t.apply_s(site(rng)); break;
            case 2: t.apply_x(site(rng)); break;
            default: {
                if (n < 2) {
                    t.apply_s(site(rng));
                    break;
                }
                std::size_t a = site(rng), b = site(rng);
                if (a == b) b = (a + 1) % n;
                t.apply_cz(a, b);
            }
        }
    }
    return t;
}

}  // namespace qpump
