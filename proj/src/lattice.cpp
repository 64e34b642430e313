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

#include "qpump/lattice.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

#include <json.hpp>

namespace qpump {

namespace {

using Pair = std::pair<std::uint32_t, std::uint32_t>;

Pair norm_pair(std::uint32_t a, std::uint32_t b) {
    if (a == b) throw std::logic_error("degenerate CZ pair");
    return a < b ? Pair{a, b} : Pair{b, a};
}

void sort_unique(std::vector<std::uint32_t>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

// Site registry keyed by coordinate tuple; insertion order fixes indices.
class SiteMap {
  public:
    std::uint32_t add(std::vector<int> coord, std::string color) {
        auto idx = static_cast<std::uint32_t>(sites_.size());
        auto [it, fresh] = index_.emplace(coord, idx);
        if (!fresh) throw std::logic_error("duplicate site coordinate");
        sites_.push_back(SiteId{idx, std::move(coord), std::move(color)});
        return it->second;
    }
    std::uint32_t at(const std::vector<int>& coord) const {
        auto it = index_.find(coord);
        if (it == index_.end()) throw std::logic_error("missing site coordinate");
        return it->second;
    }
    bool contains(const std::vector<int>& coord) const {
        return index_.count(coord) != 0;
    }
    std::vector<SiteId> take() { return std::move(sites_); }

  private:
    std::vector<SiteId> sites_;
    std::map<std::vector<int>, std::uint32_t> index_;
};

HamTerm z_term(std::vector<std::uint32_t> support, int sign) {
    HamTerm t;
    t.kind = TermKind::ZProduct;
    sort_unique(t.support = std::move(support));
    t.angle = Angle::PiOver4;
    t.sign = sign;
    return t;
}

HamTerm cz_term(std::vector<Pair> pairs, int sign) {
    HamTerm t;
    t.kind = TermKind::CZProduct;
    t.pairs = std::move(pairs);
    std::sort(t.pairs.begin(), t.pairs.end());
    t.angle = Angle::PiOver2;
    t.sign = sign;
    return t;
}

void finish_regions(LatticeSpec& spec, std::vector<std::uint32_t> boundary) {
    sort_unique(boundary);
    std::vector<char> on_boundary(spec.n(), 0);
    for (auto b : boundary) on_boundary.at(b) = 1;
    spec.boundary = std::move(boundary);
    spec.bulk.clear();
    for (std::uint32_t i = 0; i < spec.n(); ++i)
        if (!on_boundary[i]) spec.bulk.push_back(i);
}

void finish_graph(LatticeSpec& spec, std::vector<Pair> edges) {
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    spec.target_graph = std::move(edges);
}

// Structural sanity applied to every built or parsed lattice. Violations are
// programming errors in a builder or corrupt input, never expected states.
void validate_spec(const LatticeSpec& spec) {
    const std::size_t n = spec.n();
    if (n == 0) throw std::invalid_argument("lattice has no sites");
    std::set<std::vector<int>> coords;
    for (std::size_t i = 0; i < n; ++i) {
        if (spec.sites[i].index != i)
            throw std::invalid_argument("site ids must be 0..n-1 in order");
        if (!coords.insert(spec.sites[i].coord).second)
            throw std::invalid_argument("duplicate site coordinate");
    }
    auto in_range = [n](std::uint32_t q) { return static_cast<std::size_t>(q) < n; };
    for (const auto& t : spec.terms) {
        if (t.kind == TermKind::ZProduct) {
            if (t.support.size() < 2 || !t.pairs.empty())
                throw std::invalid_argument("malformed Z product term");
            for (auto q : t.support)
                if (!in_range(q)) throw std::invalid_argument("term site out of range");
            auto s = t.support;
            sort_unique(s);
            if (s.size() != t.support.size())
                throw std::invalid_argument("repeated site in Z product");
        } else {
            if (t.pairs.empty() || !t.support.empty())
                throw std::invalid_argument("malformed CZ product term");
            std::set<Pair> seen;
            for (const auto& [a, b] : t.pairs) {
                if (!in_range(a) || !in_range(b))
                    throw std::invalid_argument("term site out of range");
                if (a == b) throw std::invalid_argument("CZ pair on one site");
                if (!seen.insert(norm_pair(a, b)).second)
                    throw std::invalid_argument("repeated pair in CZ product");
            }
        }
    }
    std::vector<char> region(n, 0);
    for (auto q : spec.boundary) {
        if (!in_range(q)) throw std::invalid_argument("boundary site out of range");
        if (region[q]) throw std::invalid_argument("repeated boundary site");
        region[q] = 1;
    }
    for (auto q : spec.bulk) {
        if (!in_range(q)) throw std::invalid_argument("bulk site out of range");
        if (region[q]) throw std::invalid_argument("site in both boundary and bulk");
        region[q] = 2;
    }
    for (std::size_t i = 0; i < n; ++i)
        if (!region[i]) throw std::invalid_argument("site in neither boundary nor bulk");
    for (const auto& [a, b] : spec.target_graph) {
        if (!in_range(a) || !in_range(b) || a >= b)
            throw std::invalid_argument("malformed target graph edge");
        if (region[a] != 1 || region[b] != 1)
            throw std::invalid_argument("target graph edge leaves the boundary");
    }
    for (const auto& sym : spec.symmetries) {
        for (auto q : sym.support)
            if (!in_range(q)) throw std::invalid_argument("symmetry site out of range");
        for (const auto& t : spec.terms)
            if (!term_commutes_with_flip(t, sym.support, n))
                throw std::invalid_argument("symmetry '" + sym.label +
                                            "' fails to commute with a term");
    }
}

}  // namespace

double angle_value(Angle a) {
    constexpr double kPi = 3.14159265358979323846;
    return a == Angle::PiOver4 ? kPi / 4 : kPi / 2;
}

std::string angle_name(Angle a) { return a == Angle::PiOver4 ? "pi/4" : "pi/2"; }

Angle angle_from_name(const std::string& s) {
    if (s == "pi/4") return Angle::PiOver4;
    if (s == "pi/2") return Angle::PiOver2;
    throw std::invalid_argument("unknown angle: " + s);
}

std::string boundary_mode_name(BoundaryMode m) {
    switch (m) {
        case BoundaryMode::Exact: return "exact";
        case BoundaryMode::Signed: return "signed";
        case BoundaryMode::Decorated: return "decorated";
    }
    throw std::logic_error("bad boundary mode");
}

BoundaryMode boundary_mode_from_name(const std::string& s) {
    if (s == "exact") return BoundaryMode::Exact;
    if (s == "signed") return BoundaryMode::Signed;
    if (s == "decorated") return BoundaryMode::Decorated;
    throw std::invalid_argument("unknown boundary mode: " + s);
}

Angle LatticeSpec::drive_angle() const {
    if (terms.empty()) throw std::logic_error("lattice has no terms");
    for (const auto& t : terms)
        if (t.angle != terms.front().angle)
            throw std::logic_error("mixed drive angles");
    return terms.front().angle;
}

bool term_commutes_with_flip(const HamTerm& term,
                             const std::vector<std::uint32_t>& x_support,
                             std::size_t n_sites) {
    std::vector<char> flip(n_sites, 0);
    for (auto q : x_support) flip.at(q) = 1;
    if (term.kind == TermKind::ZProduct) {
        int overlap = 0;
        for (auto q : term.support) overlap ^= flip.at(q);
        return overlap == 0;
    }
    // Conjugating the CZ product by the X string inserts one Z at the partner
    // of every flipped endpoint; the term commutes iff those Z's cancel.
    std::map<std::uint32_t, int> zflip;
    for (const auto& [a, b] : term.pairs) {
        if (flip.at(a)) zflip[b] ^= 1;
        if (flip.at(b)) zflip[a] ^= 1;
    }
    for (const auto& [q, parity] : zflip)
        if (parity) return false;
    return true;
}

LatticeSpec build_square(int nx, int ny) {
    if (nx < 2 || ny < 2) throw std::invalid_argument("square lattice needs nx, ny >= 2");
    LatticeSpec spec;
    spec.family = "square";
    spec.dims = {nx, ny};
    SiteMap sm;
    for (int y = 0; y < ny; ++y)
        for (int x = 0; x < nx; ++x)
            sm.add({x, y}, (x + y) % 2 == 0 ? "red" : "blue");
    auto site = [&](int x, int y) { return sm.at({x, y}); };

    for (int y = 0; y + 1 < ny; ++y)
        for (int x = 0; x + 1 < nx; ++x) {
            auto s00 = site(x, y), s10 = site(x + 1, y);
            auto s11 = site(x + 1, y + 1), s01 = site(x, y + 1);
            spec.terms.push_back(cz_term({norm_pair(s00, s10), norm_pair(s10, s11),
                                          norm_pair(s11, s01), norm_pair(s01, s00)},
                                         +1));
        }

    SymmetryGen red{"checkerboard red", {}}, blue{"checkerboard blue", {}};
    for (int y = 0; y < ny; ++y)
        for (int x = 0; x < nx; ++x)
            ((x + y) % 2 == 0 ? red : blue).support.push_back(site(x, y));
    spec.symmetries = {red, blue};

    // Perimeter in cyclic order; the surviving couplings form this ring.
    std::vector<std::uint32_t> ring;
    for (int x = 0; x < nx; ++x) ring.push_back(site(x, 0));
    for (int y = 1; y < ny; ++y) ring.push_back(site(nx - 1, y));
    for (int x = nx - 2; x >= 0; --x) ring.push_back(site(x, ny - 1));
    for (int y = ny - 2; y >= 1; --y) ring.push_back(site(0, y));
    std::vector<Pair> edges;
    for (std::size_t i = 0; i < ring.size(); ++i)
        edges.push_back(norm_pair(ring[i], ring[(i + 1) % ring.size()]));

    spec.sites = sm.take();
    finish_regions(spec, ring);
    finish_graph(spec, std::move(edges));
    spec.boundary_mode = BoundaryMode::Exact;
    validate_spec(spec);
    return spec;
}

LatticeSpec build_union_jack(int n) {
    if (n < 2) throw std::invalid_argument("union jack lattice needs n >= 2 corners per side");
    LatticeSpec spec;
    spec.family = "union_jack";
    spec.dims = {n, n};
    SiteMap sm;
    // Doubled coordinates: corners on even/even, cell centers on odd/odd.
    for (int b = 0; b < n; ++b)
        for (int a = 0; a < n; ++a)
            sm.add({2 * a, 2 * b}, (a + b) % 2 == 0 ? "red" : "blue");
    for (int b = 0; b + 1 < n; ++b)
        for (int a = 0; a + 1 < n; ++a)
            sm.add({2 * a + 1, 2 * b + 1}, "green");
    auto corner = [&](int a, int b) { return sm.at({2 * a, 2 * b}); };
    auto center = [&](int a, int b) { return sm.at({2 * a + 1, 2 * b + 1}); };

    for (int b = 0; b + 1 < n; ++b)
        for (int a = 0; a + 1 < n; ++a) {
            auto c = center(a, b);
            auto ll = corner(a, b), lr = corner(a + 1, b);
            auto ul = corner(a, b + 1), ur = corner(a + 1, b + 1);
            spec.terms.push_back(z_term({ll, lr, c}, -1));
            spec.terms.push_back(z_term({ul, ur, c}, -1));
            spec.terms.push_back(z_term({ll, ul, c}, -1));
            spec.terms.push_back(z_term({lr, ur, c}, -1));
        }

    SymmetryGen rb{"flip red+blue", {}}, bg{"flip blue+green", {}}, rg{"flip red+green", {}};
    for (int b = 0; b < n; ++b)
        for (int a = 0; a < n; ++a) {
            rb.support.push_back(corner(a, b));
            ((a + b) % 2 == 0 ? rg : bg).support.push_back(corner(a, b));
        }
    for (int b = 0; b + 1 < n; ++b)
        for (int a = 0; a + 1 < n; ++a) {
            bg.support.push_back(center(a, b));
            rg.support.push_back(center(a, b));
        }
    for (auto* s : {&rb, &bg, &rg}) sort_unique(s->support);
    spec.symmetries = {rb, bg, rg};

    std::vector<std::uint32_t> ring;
    for (int a = 0; a < n; ++a) ring.push_back(corner(a, 0));
    for (int b = 1; b < n; ++b) ring.push_back(corner(n - 1, b));
    for (int a = n - 2; a >= 0; --a) ring.push_back(corner(a, n - 1));
    for (int b = n - 2; b >= 1; --b) ring.push_back(corner(0, b));
    std::vector<Pair> edges;
    for (std::size_t i = 0; i < ring.size(); ++i)
        edges.push_back(norm_pair(ring[i], ring[(i + 1) % ring.size()]));

    spec.sites = sm.take();
    finish_regions(spec, ring);
    finish_graph(spec, std::move(edges));
    // The four patch corners sit in two triangles each, leaving a Z there.
    spec.boundary_mode = BoundaryMode::Signed;
    validate_spec(spec);
    return spec;
}

LatticeSpec build_triangular(int n) {
    if (n < 2) throw std::invalid_argument("triangular patch needs n >= 2 sites per side");
    LatticeSpec spec;
    spec.family = "triangular";
    spec.dims = {n, n};
    SiteMap sm;
    static const char* kColors[3] = {"red", "blue", "green"};
    for (int y = 0; y < n; ++y)
        for (int x = 0; x + y < n; ++x)
            sm.add({x, y}, kColors[(x + 2 * y) % 3]);
    auto site = [&](int x, int y) { return sm.at({x, y}); };

    for (int y = 0; y < n; ++y)
        for (int x = 0; x + y < n; ++x) {
            if (x + y <= n - 2)
                spec.terms.push_back(z_term({site(x, y), site(x + 1, y), site(x, y + 1)}, -1));
            if (x + y <= n - 3)
                spec.terms.push_back(
                    z_term({site(x + 1, y), site(x, y + 1), site(x + 1, y + 1)}, -1));
        }

    SymmetryGen gens[3] = {{"flip blue+green", {}}, {"flip red+green", {}}, {"flip red+blue", {}}};
    for (int y = 0; y < n; ++y)
        for (int x = 0; x + y < n; ++x) {
            int c = (x + 2 * y) % 3;
            // Generator i flips the two colors other than color i.
            for (int g = 0; g < 3; ++g)
                if (g != c) gens[g].support.push_back(site(x, y));
        }
    for (auto& g : gens) sort_unique(g.support);
    spec.symmetries = {gens[0], gens[1], gens[2]};

    std::vector<std::uint32_t> ring;
    for (int x = 0; x < n; ++x) ring.push_back(site(x, 0));
    for (int t = 1; t < n; ++t) ring.push_back(site(n - 1 - t, t));
    for (int y = n - 2; y >= 1; --y) ring.push_back(site(0, y));
    std::vector<Pair> edges;
    for (std::size_t i = 0; i < ring.size(); ++i)
        edges.push_back(norm_pair(ring[i], ring[(i + 1) % ring.size()]));

    spec.sites = sm.take();
    finish_regions(spec, ring);
    finish_graph(spec, std::move(edges));
    // Interior sites sit in six faces (leaving Z), straight edges in three
    // (leaving S^3) and the three patch corners in one (leaving S).
    spec.bulk_flips_to_minus = true;
    spec.boundary_mode = BoundaryMode::Decorated;
    validate_spec(spec);
    return spec;
}

LatticeSpec build_fcc(int nx, int ny, int nz, bool periodic_yz) {
    if (nx < 1 || ny < 1 || nz < 1)
        throw std::invalid_argument("tetrahedral slab needs at least one cube per axis");
    if (periodic_yz && (ny < 2 || nz < 2))
        throw std::invalid_argument("periodic y/z wrap needs ny, nz >= 2");
    LatticeSpec spec;
    spec.family = "fcc";
    spec.dims = {nx, ny, nz};
    spec.periodic_yz = periodic_yz;

    const int ymax = 2 * ny, zmax = 2 * nz, xmax = 2 * nx;
    auto wy = [&](int v) { return periodic_yz ? ((v % ymax) + ymax) % ymax : v; };
    auto wz = [&](int v) { return periodic_yz ? ((v % zmax) + zmax) % zmax : v; };

    SiteMap sm;
    const int ylim = periodic_yz ? ymax - 1 : ymax;  // largest stored coordinate
    const int zlim = periodic_yz ? zmax - 1 : zmax;
    for (int x = 0; x <= xmax; x += 2)
        for (int y = 0; y <= ylim; y += 2)
            for (int z = 0; z <= zlim; z += 2)
                sm.add({x, y, z}, "corner");
    for (int x = 0; x <= xmax; x += 2)
        for (int y = 1; y <= ylim; y += 2)
            for (int z = 1; z <= zlim; z += 2)
                sm.add({x, y, z}, "face-x");
    for (int x = 1; x < xmax; x += 2)
        for (int y = 0; y <= ylim; y += 2)
            for (int z = 1; z <= zlim; z += 2)
                sm.add({x, y, z}, "face-y");
    for (int x = 1; x < xmax; x += 2)
        for (int y = 1; y <= ylim; y += 2)
            for (int z = 0; z <= zlim; z += 2)
                sm.add({x, y, z}, "face-z");

    // One tetrahedron per (cube, cube corner): the corner plus the centers of
    // the three cube faces meeting it.
    for (int a = 0; a < nx; ++a)
        for (int b = 0; b < ny; ++b)
            for (int c = 0; c < nz; ++c)
                for (int dx = 0; dx <= 1; ++dx)
                    for (int dy = 0; dy <= 1; ++dy)
                        for (int dz = 0; dz <= 1; ++dz) {
                            auto corner = sm.at({2 * a + 2 * dx, wy(2 * b + 2 * dy),
                                                 wz(2 * c + 2 * dz)});
                            auto fx = sm.at({2 * a + 2 * dx, wy(2 * b + 1), wz(2 * c + 1)});
                            auto fy = sm.at({2 * a + 1, wy(2 * b + 2 * dy), wz(2 * c + 1)});
                            auto fz = sm.at({2 * a + 1, wy(2 * b + 1), wz(2 * c + 2 * dz)});
                            spec.terms.push_back(z_term({corner, fx, fy, fz}, -1));
                        }

    spec.sites = sm.take();

    // One spin-flip generator per lattice plane, along each of the three axes.
    std::map<int, std::vector<std::uint32_t>> by_x, by_y, by_z;
    for (const auto& s : spec.sites) {
        by_x[s.coord[0]].push_back(s.index);
        by_y[s.coord[1]].push_back(s.index);
        by_z[s.coord[2]].push_back(s.index);
    }
    auto add_planes = [&spec](const char* name, const char* axis,
                              std::map<int, std::vector<std::uint32_t>>& planes) {
        for (auto& [v, sites] : planes) {
            sort_unique(sites);
            spec.symmetries.push_back(SymmetryGen{
                std::string("plane (") + name + ") " + axis + "=" + std::to_string(v),
                std::move(sites)});
        }
    };
    add_planes("100", "x", by_x);
    add_planes("010", "y", by_y);
    add_planes("001", "z", by_z);

    std::vector<std::uint32_t> boundary;
    std::vector<Pair> edges;
    std::map<std::vector<int>, std::uint32_t> find;
    for (const auto& s : spec.sites) find[s.coord] = s.index;
    if (periodic_yz) {
        // Open only along x: couplings survive exactly on the two extreme x
        // planes, pairing each face center with its four in-plane corners.
        for (const auto& s : spec.sites) {
            if (s.coord[0] != 0 && s.coord[0] != xmax) continue;
            boundary.push_back(s.index);
            if (s.color != "face-x") continue;
            for (int dy : {-1, +1})
                for (int dz : {-1, +1})
                    edges.push_back(norm_pair(
                        s.index, find.at({s.coord[0], wy(s.coord[1] + dy), wz(s.coord[2] + dz)})));
        }
        spec.boundary_mode = BoundaryMode::Exact;
    } else {
        // Fully open slab: couplings survive wherever a face center lies on
        // the outer surface, pairing it with its four in-plane corners. Slab
        // edge corners keep a Z and the eight slab corners keep an S.
        for (const auto& s : spec.sites) {
            const auto& c = s.coord;
            bool surface = c[0] == 0 || c[0] == xmax || c[1] == 0 || c[1] == ymax ||
                           c[2] == 0 || c[2] == zmax;
            if (surface) boundary.push_back(s.index);
            int axis = -1;
            if (s.color == "face-x" && (c[0] == 0 || c[0] == xmax)) axis = 0;
            if (s.color == "face-y" && (c[1] == 0 || c[1] == ymax)) axis = 1;
            if (s.color == "face-z" && (c[2] == 0 || c[2] == zmax)) axis = 2;
            if (axis < 0) continue;
            int u = (axis + 1) % 3, v = (axis + 2) % 3;
            for (int du : {-1, +1})
                for (int dv : {-1, +1}) {
                    std::vector<int> t = c;
                    t[u] += du;
                    t[v] += dv;
                    edges.push_back(norm_pair(s.index, find.at(t)));
                }
        }
        spec.boundary_mode = BoundaryMode::Decorated;
    }
    finish_regions(spec, std::move(boundary));
    finish_graph(spec, std::move(edges));
    validate_spec(spec);
    return spec;
}

LatticeSpec build_honeycomb_stack(int nx, int ny, int L) {
    auto spec = build_fractal_stack(F2LaurentPoly{{0, 0, 0, 0}, {1, 0, 0, 0}}, nx, ny, L);
    spec.family = "honeycomb_stack";
    return spec;
}

LatticeSpec build_family(const std::string& family, const std::vector<int>& dims,
                         const std::string& ca, bool periodic) {
    auto want = [&](std::size_t k) {
        if (dims.size() != k)
            throw std::invalid_argument("family '" + family + "' expects " +
                                        std::to_string(k) + " dims, got " +
                                        std::to_string(dims.size()));
    };
    if (family == "square") {
        want(2);
        return build_square(dims[0], dims[1]);
    }
    if (family == "union_jack") {
        want(1);
        return build_union_jack(dims[0]);
    }
    if (family == "triangular") {
        want(1);
        return build_triangular(dims[0]);
    }
    if (family == "fcc") {
        want(3);
        return build_fcc(dims[0], dims[1], dims[2], periodic);
    }
    if (family == "fractal_stack") {
        want(3);
        if (ca.empty()) throw std::invalid_argument("fractal_stack needs a CA rule");
        return build_fractal_stack(parse_poly(ca), dims[0], dims[1], dims[2], periodic);
    }
    if (family == "honeycomb_stack") {
        want(3);
        auto spec = build_fractal_stack(F2LaurentPoly{{0, 0, 0, 0}, {1, 0, 0, 0}},
                                        dims[0], dims[1], dims[2], periodic);
        spec.family = "honeycomb_stack";
        return spec;
    }
    throw std::invalid_argument("unknown lattice family '" + family + "'");
}

LatticeSpec build_fractal_stack(const F2LaurentPoly& f, int nx, int ny, int L,
                                bool periodic_x) {
    if (f.is_zero() || !f.pure_x())
        throw std::invalid_argument("CA rule must be a nonzero polynomial in x");
    if (ny < 2 || L < 1) throw std::invalid_argument("stack needs ny >= 2 and L >= 1");
    if (nx <= x_span(f))
        throw std::invalid_argument("x extent must exceed the span of the CA rule");

    LatticeSpec spec;
    spec.family = "fractal_stack";
    spec.dims = {nx, ny, L};
    spec.x_periodic = periodic_x;
    spec.ca = to_string(f);

    std::vector<int> fexp;
    for (const auto& m : f.terms()) fexp.push_back(m.i);

    SiteMap sm;
    for (int k = 0; k <= L; ++k)
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i < nx; ++i)
                for (int s = 0; s <= 1; ++s)
                    sm.add({i, j, k, s}, s == 0 ? "blue" : "red");
    auto wrap = [&](int i) { return ((i % nx) + nx) % nx; };
    auto blue = [&](int i, int j, int k) { return sm.at({i, j, k, 0}); };
    auto red = [&](int i, int j, int k) { return sm.at({i, j, k, 1}); };
    auto xok = [&](int i) { return periodic_x || (0 <= i && i < nx); };

    // Forward gates: anchors (i, j, k) with j in [0, ny-2], k in [0, L-1].
    // Blue slot spans layers k and k+1 in one cell; red slot spans the same
    // cell plus the CA image on row j+1.
    for (int k = 0; k + 1 <= L; ++k)
        for (int j = 0; j + 1 < ny; ++j)
            for (int i = 0; i < nx; ++i) {
                bool fits = true;
                for (int a : fexp) fits = fits && xok(i + a);
                if (!fits) continue;
                std::vector<std::uint32_t> blues = {blue(i, j, k), blue(i, j, k + 1)};
                std::vector<std::uint32_t> reds = {red(i, j, k)};
                for (int a : fexp) reds.push_back(red(wrap(i + a), j + 1, k));
                std::vector<Pair> pairs;
                for (auto b : blues)
                    for (auto r : reds) pairs.push_back(norm_pair(b, r));
                spec.terms.push_back(cz_term(std::move(pairs), +1));
            }
    // Mirrored gates: anchors (i, j, k) with j in [1, ny-1], k in [1, L].
    // Blue slot spans the cell plus the reflected CA preimage on row j-1; red
    // slot spans layers k and k-1 in the cell.
    for (int k = 1; k <= L; ++k)
        for (int j = 1; j < ny; ++j)
            for (int i = 0; i < nx; ++i) {
                bool fits = true;
                for (int a : fexp) fits = fits && xok(i - a);
                if (!fits) continue;
                std::vector<std::uint32_t> blues = {blue(i, j, k)};
                for (int a : fexp) blues.push_back(blue(wrap(i - a), j - 1, k));
                std::vector<std::uint32_t> reds = {red(i, j, k), red(i, j, k - 1)};
                std::vector<Pair> pairs;
                for (auto b : blues)
                    for (auto r : reds) pairs.push_back(norm_pair(b, r));
                spec.terms.push_back(cz_term(std::move(pairs), +1));
            }

    // CA cone symmetries, one per seed column: X on the blue cone grown from
    // row 0 and, mirrored, X on the red cone grown from row ny-1, both
    // repeated on every layer.
    const F2LaurentPoly cone = ca_expand(f, ny - 1);
    for (int c = 0; c < nx; ++c) {
        std::string q = to_string(Monomial{c, 0, 0, 0});
        SymmetryGen sb{"fractal q=" + q + " blue", {}};
        SymmetryGen sr{"fractal q=" + q + " red", {}};
        bool fits_blue = true, fits_red = true;
        std::set<std::uint32_t> bsup, rsup;
        for (const auto& m : cone.terms()) {
            fits_blue = fits_blue && xok(c + m.i);
            fits_red = fits_red && xok(c - m.i);
            if (!fits_blue && !fits_red) break;
            for (int l = 0; l <= L; ++l) {
                if (fits_blue) {
                    auto q_ = blue(wrap(c + m.i), m.j, l);
                    if (bsup.count(q_)) bsup.erase(q_); else bsup.insert(q_);
                }
                if (fits_red) {
                    auto q_ = red(wrap(c - m.i), ny - 1 - m.j, l);
                    if (rsup.count(q_)) rsup.erase(q_); else rsup.insert(q_);
                }
            }
        }
        if (fits_blue) {
            sb.support.assign(bsup.begin(), bsup.end());
            spec.symmetries.push_back(std::move(sb));
        }
        if (fits_red) {
            sr.support.assign(rsup.begin(), rsup.end());
            spec.symmetries.push_back(std::move(sr));
        }
    }

    std::vector<std::uint32_t> boundary;
    for (int k = 0; k <= L; ++k)
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i < nx; ++i)
                for (int s = 0; s <= 1; ++s)
                    if (k == 0 || k == L || j == 0 || j == ny - 1) {
                        boundary.push_back(sm.at({i, j, k, s}));
                    }

    std::vector<Pair> edges;
    if (periodic_x) {
        // Closed form for the net couplings: forward and mirrored gates
        // cancel pairwise except where an anchor range is clipped.
        for (int p = 0; p < nx; ++p) {
            for (int q = 0; q < ny; ++q)
                for (int r = 0; r <= L; ++r) {
                    bool v_ok = q <= ny - 2 && r <= L - 1;
                    bool w_ok = q >= 1 && r >= 1;
                    if (v_ok != w_ok) edges.push_back(norm_pair(blue(p, q, r), red(p, q, r)));
                }
            for (int q : {0, ny - 1})
                for (int r = 1; r <= L; ++r)
                    edges.push_back(norm_pair(blue(p, q, r), red(p, q, r - 1)));
            for (int q = 0; q + 1 < ny; ++q)
                for (int r : {0, L})
                    for (int a : fexp)
                        edges.push_back(norm_pair(blue(p, q, r), red(wrap(p + a), q + 1, r)));
        }
    } else {
        // Open x: net couplings by direct parity count over the gate list.
        std::map<Pair, int> parity;
        for (const auto& t : spec.terms)
            for (const auto& pr : t.pairs) parity[pr] ^= 1;
        for (const auto& [pr, odd] : parity)
            if (odd) {
                edges.push_back(pr);
                boundary.push_back(pr.first);
                boundary.push_back(pr.second);
            }
    }

    spec.sites = sm.take();
    finish_regions(spec, std::move(boundary));
    finish_graph(spec, std::move(edges));
    spec.boundary_mode = BoundaryMode::Exact;
    validate_spec(spec);
    return spec;
}

PauliOperator pauli_from_poly(const LatticeSpec& spec, PauliKind kind,
                              const F2LaurentPoly& p) {
    std::map<std::vector<int>, std::uint32_t> find;
    for (const auto& s : spec.sites) find[s.coord] = s.index;
    const std::size_t arity = spec.sites.front().coord.size();
    const bool stack = arity == 4;
    const int nx = spec.dims.empty() ? 0 : spec.dims[0];

    PauliOperator op = PauliOperator::identity(spec.n());
    for (const auto& m : p.terms()) {
        std::vector<int> coord;
        int i = m.i;
        if (stack && spec.x_periodic && nx > 0) i = ((i % nx) + nx) % nx;
        if (arity == 2) {
            if (m.k != 0 || m.m != 0)
                throw std::invalid_argument("monomial uses axes the lattice lacks");
            coord = {i, m.j};
        } else if (arity == 3) {
            if (m.m != 0)
                throw std::invalid_argument("monomial uses axes the lattice lacks");
            coord = {i, m.j, m.k};
        } else {
            coord = {i, m.j, m.k, m.m};
        }
        auto it = find.find(coord);
        if (it == find.end())
            throw std::invalid_argument("monomial " + to_string(m) + " hits no site");
        if (kind == PauliKind::X)
            op.x_mask.flip(it->second);
        else
            op.z_mask.flip(it->second);
    }
    return op;
}

namespace {

nlohmann::json term_to_json(const HamTerm& t) {
    nlohmann::json j;
    j["angle"] = angle_name(t.angle);
    j["sign"] = t.sign;
    if (t.kind == TermKind::ZProduct) {
        j["kind"] = "Z_PRODUCT";
        j["support"] = t.support;
    } else {
        j["kind"] = "CZ_PRODUCT";
        auto arr = nlohmann::json::array();
        for (const auto& [a, b] : t.pairs) arr.push_back({a, b});
        j["pairs"] = arr;
    }
    return j;
}

HamTerm term_from_json(const nlohmann::json& j) {
    HamTerm t;
    t.angle = angle_from_name(j.at("angle").get<std::string>());
    t.sign = j.at("sign").get<int>();
    if (t.sign != 1 && t.sign != -1) throw std::invalid_argument("term sign must be +-1");
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "Z_PRODUCT") {
        t.kind = TermKind::ZProduct;
        t.support = j.at("support").get<std::vector<std::uint32_t>>();
    } else if (kind == "CZ_PRODUCT") {
        t.kind = TermKind::CZProduct;
        for (const auto& pr : j.at("pairs")) {
            if (!pr.is_array() || pr.size() != 2)
                throw std::invalid_argument("CZ pair must be a 2-element array");
            t.pairs.emplace_back(pr[0].get<std::uint32_t>(), pr[1].get<std::uint32_t>());
        }
    } else {
        throw std::invalid_argument("unknown term kind: " + kind);
    }
    return t;
}

}  // namespace

std::string to_json_string(const LatticeSpec& spec) {
    nlohmann::json j;
    j["family"] = spec.family;
    j["dims"] = spec.dims;
    auto sites = nlohmann::json::array();
    for (const auto& s : spec.sites)
        sites.push_back({{"id", s.index}, {"coord", s.coord}, {"color", s.color}});
    j["sites"] = sites;
    auto terms = nlohmann::json::array();
    for (const auto& t : spec.terms) terms.push_back(term_to_json(t));
    j["terms"] = terms;
    auto syms = nlohmann::json::array();
    for (const auto& s : spec.symmetries)
        syms.push_back({{"label", s.label}, {"support", s.support}});
    j["symmetries"] = syms;
    j["boundary"] = spec.boundary;
    j["bulk"] = spec.bulk;
    auto graph = nlohmann::json::array();
    for (const auto& [a, b] : spec.target_graph) graph.push_back({a, b});
    j["target_graph"] = graph;
    j["bulk_flips_to_minus"] = spec.bulk_flips_to_minus;
    j["boundary_mode"] = boundary_mode_name(spec.boundary_mode);
    j["x_periodic"] = spec.x_periodic;
    j["periodic_yz"] = spec.periodic_yz;
    j["ca"] = spec.ca;
    return j.dump(2) + "\n";
}

LatticeSpec lattice_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("bad lattice JSON: ") + e.what());
    }
    LatticeSpec spec;
    try {
        spec.family = j.value("family", std::string{});
        spec.dims = j.value("dims", std::vector<int>{});
        for (const auto& s : j.at("sites")) {
            SiteId site;
            site.index = s.at("id").get<std::uint32_t>();
            site.coord = s.at("coord").get<std::vector<int>>();
            site.color = s.at("color").get<std::string>();
            spec.sites.push_back(std::move(site));
        }
        for (const auto& t : j.at("terms")) spec.terms.push_back(term_from_json(t));
        for (const auto& s : j.at("symmetries"))
            spec.symmetries.push_back(SymmetryGen{s.at("label").get<std::string>(),
                                                  s.at("support").get<std::vector<std::uint32_t>>()});
        spec.boundary = j.at("boundary").get<std::vector<std::uint32_t>>();
        spec.bulk = j.at("bulk").get<std::vector<std::uint32_t>>();
        for (const auto& e : j.at("target_graph")) {
            if (!e.is_array() || e.size() != 2)
                throw std::invalid_argument("graph edge must be a 2-element array");
            spec.target_graph.emplace_back(e[0].get<std::uint32_t>(), e[1].get<std::uint32_t>());
        }
        spec.bulk_flips_to_minus = j.value("bulk_flips_to_minus", false);
        spec.boundary_mode = boundary_mode_from_name(j.value("boundary_mode", std::string("exact")));
        spec.x_periodic = j.value("x_periodic", true);
        spec.periodic_yz = j.value("periodic_yz", true);
        spec.ca = j.value("ca", std::string{});
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("bad lattice JSON: ") + e.what());
    }
    validate_spec(spec);
    return spec;
}

}  // namespace qpump
