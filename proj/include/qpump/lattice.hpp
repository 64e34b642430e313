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
#include <string>
#include <utility>
#include <vector>

#include "qpump/f2poly.hpp"
#include "qpump/pauli.hpp"

namespace qpump {

struct SiteId {
    std::uint32_t index = 0;
    std::vector<int> coord;  // 2 to 4 integer components, unique per lattice
    std::string color;
};

enum class TermKind { ZProduct, CZProduct };
enum class Angle { PiOver4, PiOver2 };

double angle_value(Angle a);
std::string angle_name(Angle a);
Angle angle_from_name(const std::string& s);

struct HamTerm {
    TermKind kind = TermKind::ZProduct;
    std::vector<std::uint32_t> support;  // Z products: the site set
    std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;  // CZ products
    Angle angle = Angle::PiOver4;
    int sign = 1;
};

struct SymmetryGen {
    std::string label;
    std::vector<std::uint32_t> support;  // acts by X on these sites
};

// How literally the boundary state matches the plain graph state of
// target_graph: Exact means +1 X-form stabilizers everywhere; Signed allows
// per-site -1 signs; Decorated additionally allows Y-form (local-Clifford
// decorated) stabilizers.
enum class BoundaryMode { Exact, Signed, Decorated };

std::string boundary_mode_name(BoundaryMode m);
BoundaryMode boundary_mode_from_name(const std::string& s);

struct LatticeSpec {
    std::string family;
    std::vector<int> dims;
    std::vector<SiteId> sites;
    std::vector<HamTerm> terms;
    std::vector<SymmetryGen> symmetries;
    std::vector<std::uint32_t> boundary;
    std::vector<std::uint32_t> bulk;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> target_graph;

    bool bulk_flips_to_minus = false;
    BoundaryMode boundary_mode = BoundaryMode::Exact;
    bool x_periodic = true;    // cellular-automaton stacks
    bool periodic_yz = true;   // tetrahedral slabs
    std::string ca;            // CA update rule, stacks only

    std::size_t n() const { return sites.size(); }
    // Shared evolution angle of the driving terms.
    Angle drive_angle() const;
};

// Square grid with one four-CZ plaquette term per cell and the two
// checkerboard spin-flip symmetries. Boundary: the perimeter ring.
LatticeSpec build_square(int nx, int ny);

// Square grid of (n-1)^2 cells with all centers and diagonals; one
// three-site Z term per triangle; the three two-color flip symmetries.
LatticeSpec build_union_jack(int n);

// Triangle-shaped patch of the triangular lattice with n sites per side;
// one three-site Z term per elementary face (both orientations).
LatticeSpec build_triangular(int n);

// Corner + face-center lattice of nx*ny*nz cubes with one four-site Z term
// per (corner, three adjacent face centers) tetrahedron and one spin-flip
// symmetry per lattice plane. Default wraps y and z so that the slab is open
// only along x and the two extreme x planes carry clean square-grid cluster
// states; open mode keeps every boundary free.
LatticeSpec build_fcc(int nx, int ny, int nz, bool periodic_yz = true);

// Stack of L+1 two-sublattice layers driven by two mirrored CZ-product gate
// families derived from the CA rule f (a polynomial in x). Periodic in x by
// default (period nx; requires nx > x_span(f)), open in y and z. Symmetries:
// CA cones seeded at each column, on blue from the bottom row and on red
// from the top row, repeated on every layer.
LatticeSpec build_fractal_stack(const F2LaurentPoly& f, int nx, int ny, int L,
                                bool periodic_x = true);

// Fractal stack specialization for the rule f = 1 + x.
LatticeSpec build_honeycomb_stack(int nx, int ny, int L);

// Dispatch on family name. dims arity per family: square nx,ny;
// union_jack n; triangular n; fcc nx,ny,nz; fractal_stack and
// honeycomb_stack nx,ny,L. ca is the CA rule for fractal_stack (ignored
// elsewhere); periodic maps to periodic_yz for fcc and x_periodic for the
// stacks and is ignored by the plain 2D families.
LatticeSpec build_family(const std::string& family, const std::vector<int>& dims,
                         const std::string& ca = "", bool periodic = true);

// Realize X(p) or Z(p) as a concrete Pauli operator by mapping each monomial
// onto the lattice site with matching coordinates (x reduced mod nx when the
// lattice is x-periodic). Throws when a monomial hits no site.
enum class PauliKind { X, Z };
PauliOperator pauli_from_poly(const LatticeSpec& spec, PauliKind kind,
                              const F2LaurentPoly& p);

// Even-overlap test used by builders to fail loudly on a broken symmetry:
// Z products need even overlap with the X support; CZ products need every
// accumulated Z flip to cancel.
bool term_commutes_with_flip(const HamTerm& term,
                             const std::vector<std::uint32_t>& x_support,
                             std::size_t n_sites);

std::string to_json_string(const LatticeSpec& spec);
LatticeSpec lattice_from_json(const std::string& text);

}  // namespace qpump
