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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include <json.hpp>

#include "qpump/lattice.hpp"

using namespace qpump;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

using Pair = std::pair<std::uint32_t, std::uint32_t>;

// Net CZ couplings of a pure CZ-product drive: every pair an odd number of
// times across all terms.
std::vector<Pair> survivor_edges(const LatticeSpec& spec) {
    std::map<Pair, int> parity;
    for (const auto& t : spec.terms) {
        REQUIRE(t.kind == TermKind::CZProduct);
        for (const auto& pr : t.pairs) parity[pr] ^= 1;
    }
    std::vector<Pair> out;
    for (const auto& [pr, odd] : parity)
        if (odd) out.push_back(pr);
    return out;
}

std::map<std::uint32_t, int> term_membership(const LatticeSpec& spec) {
    std::map<std::uint32_t, int> count;
    for (const auto& t : spec.terms)
        for (auto q : t.support) count[q] += 1;
    return count;
}

const SiteId& site_at(const LatticeSpec& spec, const std::vector<int>& coord) {
    for (const auto& s : spec.sites)
        if (s.coord == coord) return s;
    REQUIRE(false);
    return spec.sites.front();
}

}  // namespace

TEST_CASE("square 2x2 matches the frozen golden file") {
    auto spec = build_square(2, 2);
    auto got = nlohmann::json::parse(to_json_string(spec));
    auto want = nlohmann::json::parse(read_file(std::string(QPUMP_TEST_DATA) + "/square_2x2.json"));
    CHECK(got == want);
}

TEST_CASE("square lattice structure") {
    auto spec = build_square(3, 3);
    CHECK(spec.n() == 9);
    CHECK(spec.terms.size() == 4);
    for (const auto& t : spec.terms) {
        CHECK(t.kind == TermKind::CZProduct);
        CHECK(t.pairs.size() == 4);
        CHECK(t.angle == Angle::PiOver2);
        CHECK(t.sign == 1);
    }
    CHECK(spec.boundary.size() == 8);
    CHECK(spec.bulk == std::vector<std::uint32_t>{4});
    CHECK(spec.target_graph.size() == 8);
    CHECK(spec.symmetries.size() == 2);
    CHECK(spec.symmetries[0].support.size() == 5);
    CHECK(spec.symmetries[1].support.size() == 4);
    CHECK(spec.drive_angle() == Angle::PiOver2);
    CHECK(spec.boundary_mode == BoundaryMode::Exact);
    CHECK_FALSE(spec.bulk_flips_to_minus);

    // Shared plaquette edges cancel in pairs; the perimeter ring remains.
    for (int nx : {2, 3, 4, 5})
        for (int ny : {2, 3, 4}) {
            auto s = build_square(nx, ny);
            auto surv = survivor_edges(s);
            std::sort(surv.begin(), surv.end());
            CHECK(surv == s.target_graph);
            CHECK(s.target_graph.size() == s.boundary.size());
        }
}

TEST_CASE("union jack lattice structure") {
    auto spec = build_union_jack(3);
    CHECK(spec.n() == 13);
    CHECK(spec.terms.size() == 16);
    for (const auto& t : spec.terms) {
        CHECK(t.kind == TermKind::ZProduct);
        CHECK(t.support.size() == 3);
        CHECK(t.angle == Angle::PiOver4);
        CHECK(t.sign == -1);
        std::set<std::string> colors;
        for (auto q : t.support) colors.insert(spec.sites[q].color);
        CHECK(colors == std::set<std::string>{"red", "blue", "green"});
    }
    CHECK(spec.boundary.size() == 8);
    CHECK(spec.bulk.size() == 5);
    CHECK(spec.target_graph.size() == 8);
    CHECK(spec.boundary_mode == BoundaryMode::Signed);

    // Triangle membership per site class: patch corners 2, edge midpoints 4,
    // interior corners 8, cell centers 4.
    auto count = term_membership(spec);
    CHECK(count[site_at(spec, {0, 0}).index] == 2);
    CHECK(count[site_at(spec, {4, 0}).index] == 2);
    CHECK(count[site_at(spec, {2, 0}).index] == 4);
    CHECK(count[site_at(spec, {2, 2}).index] == 8);
    CHECK(count[site_at(spec, {1, 1}).index] == 4);
    CHECK(count[site_at(spec, {3, 3}).index] == 4);

    CHECK(spec.symmetries.size() == 3);
    CHECK(spec.symmetries[0].support.size() == 9);   // all corners
    CHECK(spec.symmetries[1].support.size() == 8);   // blue corners + centers
    CHECK(spec.symmetries[2].support.size() == 9);   // red corners + centers

    auto tiny = build_union_jack(2);
    CHECK(tiny.n() == 5);
    CHECK(tiny.terms.size() == 4);
    CHECK(tiny.boundary.size() == 4);
    CHECK(tiny.bulk.size() == 1);
}

TEST_CASE("triangular patch structure") {
    auto spec = build_triangular(4);
    CHECK(spec.n() == 10);
    CHECK(spec.terms.size() == 9);
    for (const auto& t : spec.terms) {
        CHECK(t.support.size() == 3);
        CHECK(t.sign == -1);
        std::set<std::string> colors;
        for (auto q : t.support) colors.insert(spec.sites[q].color);
        CHECK(colors == std::set<std::string>{"red", "blue", "green"});
    }
    CHECK(spec.boundary.size() == 9);
    CHECK(spec.bulk.size() == 1);
    CHECK(spec.target_graph.size() == 9);
    CHECK(spec.bulk_flips_to_minus);
    CHECK(spec.boundary_mode == BoundaryMode::Decorated);

    // Face membership: corners 1, straight edges 3, interior 6.
    auto count = term_membership(spec);
    CHECK(count[site_at(spec, {0, 0}).index] == 1);
    CHECK(count[site_at(spec, {3, 0}).index] == 1);
    CHECK(count[site_at(spec, {0, 3}).index] == 1);
    CHECK(count[site_at(spec, {1, 0}).index] == 3);
    CHECK(count[site_at(spec, {0, 1}).index] == 3);
    CHECK(count[site_at(spec, {2, 1}).index] == 3);
    CHECK(count[site_at(spec, {1, 1}).index] == 6);

    auto tiny = build_triangular(2);
    CHECK(tiny.n() == 3);
    CHECK(tiny.terms.size() == 1);
    CHECK(tiny.bulk.empty());
    CHECK(tiny.target_graph.size() == 3);
}

TEST_CASE("tetrahedral slab, fully open") {
    auto spec = build_fcc(1, 1, 1, false);
    CHECK(spec.n() == 14);
    CHECK(spec.terms.size() == 8);
    for (const auto& t : spec.terms) {
        CHECK(t.kind == TermKind::ZProduct);
        CHECK(t.support.size() == 4);
        CHECK(t.angle == Angle::PiOver4);
        CHECK(t.sign == -1);
        std::set<std::string> colors;
        for (auto q : t.support) colors.insert(spec.sites[q].color);
        CHECK(colors == std::set<std::string>{"corner", "face-x", "face-y", "face-z"});
    }
    CHECK(spec.symmetries.size() == 9);  // 2(nx+ny+nz)+3 planes
    CHECK(spec.bulk.empty());
    CHECK(spec.target_graph.size() == 24);
    CHECK(spec.boundary_mode == BoundaryMode::Decorated);

    // Every tetrahedron meets every lattice plane in 0 or 2 sites.
    for (const auto& t : spec.terms)
        for (const auto& sym : spec.symmetries) {
            std::set<std::uint32_t> plane(sym.support.begin(), sym.support.end());
            int overlap = 0;
            for (auto q : t.support) overlap += plane.count(q);
            CHECK((overlap == 0 || overlap == 2));
        }

    auto open2 = build_fcc(2, 1, 1, false);
    CHECK(open2.symmetries.size() == 11);
}

TEST_CASE("tetrahedral slab, periodic in y and z") {
    auto spec = build_fcc(2, 2, 2);
    CHECK(spec.n() == 40);
    CHECK(spec.terms.size() == 64);
    CHECK(spec.symmetries.size() == 13);  // (2nx+1) + 2ny + 2nz
    CHECK(spec.boundary.size() == 16);
    CHECK(spec.bulk.size() == 24);
    CHECK(spec.target_graph.size() == 32);
    CHECK(spec.boundary_mode == BoundaryMode::Exact);

    // Both extreme x planes: every face center couples to four corners and
    // every corner to four face centers, all inside the plane.
    std::map<std::uint32_t, int> degree;
    for (const auto& [a, b] : spec.target_graph) {
        degree[a] += 1;
        degree[b] += 1;
        CHECK(spec.sites[a].coord[0] == spec.sites[b].coord[0]);
    }
    int on_plane = 0;
    for (const auto& s : spec.sites) {
        if (s.coord[0] == 0 || s.coord[0] == 4) {
            ++on_plane;
            CHECK(degree[s.index] == 4);
        } else {
            CHECK(degree.count(s.index) == 0);
        }
    }
    CHECK(on_plane == 16);

    for (const auto& t : spec.terms)
        for (const auto& sym : spec.symmetries) {
            std::set<std::uint32_t> plane(sym.support.begin(), sym.support.end());
            int overlap = 0;
            for (auto q : t.support) overlap += plane.count(q);
            CHECK((overlap == 0 || overlap == 2));
        }
}

TEST_CASE("honeycomb stack structure and net couplings") {
    auto spec = build_honeycomb_stack(4, 3, 2);
    CHECK(spec.family == "honeycomb_stack");
    CHECK(spec.ca == "1 + x");
    CHECK(spec.n() == 72);
    CHECK(spec.terms.size() == 32);
    for (const auto& t : spec.terms) {
        CHECK(t.kind == TermKind::CZProduct);
        CHECK(t.pairs.size() == 6);
        CHECK(t.sign == 1);
    }
    CHECK(spec.symmetries.size() == 8);
    CHECK(spec.boundary.size() == 64);
    CHECK(spec.bulk.size() == 8);
    for (auto q : spec.bulk) {
        CHECK(spec.sites[q].coord[1] == 1);
        CHECK(spec.sites[q].coord[2] == 1);
    }

    // The closed-form target graph must equal the parity count of all gate
    // couplings.
    auto surv = survivor_edges(spec);
    std::sort(surv.begin(), surv.end());
    CHECK(surv == spec.target_graph);

    // One forward gate, checked by hand: anchor (0,0,0) couples blues
    // (0,0,0),(0,0,1) to reds (0,0,0),(0,1,0),(1,1,0).
    const auto& t0 = spec.terms.front();
    std::set<Pair> want;
    auto b0 = site_at(spec, {0, 0, 0, 0}).index;
    auto b1 = site_at(spec, {0, 0, 1, 0}).index;
    for (auto r : {site_at(spec, {0, 0, 0, 1}).index, site_at(spec, {0, 1, 0, 1}).index,
                   site_at(spec, {1, 1, 0, 1}).index}) {
        want.insert({std::min(b0, r), std::max(b0, r)});
        want.insert({std::min(b1, r), std::max(b1, r)});
    }
    CHECK(std::set<Pair>(t0.pairs.begin(), t0.pairs.end()) == want);

    // Sites left untouched by every surviving coupling: red on the top row
    // of the last layer and blue on the bottom row of layer zero... the two
    // off-duty sheets are red (i,0,L) and blue (i,ny-1,0).
    std::map<std::uint32_t, int> degree;
    for (const auto& [a, b] : spec.target_graph) {
        degree[a] += 1;
        degree[b] += 1;
    }
    for (int i = 0; i < 4; ++i) {
        CHECK(degree.count(site_at(spec, {i, 0, 2, 1}).index) == 0);
        CHECK(degree.count(site_at(spec, {i, 2, 0, 0}).index) == 0);
    }
}

TEST_CASE("fractal stack with a three-term rule") {
    F2LaurentPoly f{{0, 0, 0, 0}, {1, 0, 0, 0}, {2, 0, 0, 0}};  // 1 + x + x^2
    auto spec = build_fractal_stack(f, 4, 3, 1);
    CHECK(spec.family == "fractal_stack");
    CHECK(spec.ca == "1 + x + x^2");
    CHECK(spec.terms.size() == 2 * 4 * 2 * 1);
    for (const auto& t : spec.terms) CHECK(t.pairs.size() == 2 * 4);

    auto surv = survivor_edges(spec);
    std::sort(surv.begin(), surv.end());
    CHECK(surv == spec.target_graph);

    // Cone support wraps modulo nx and cancels in pairs: over rows 0..2 the
    // seed column 0 cone is 1, (1+x+x^2)y, then (1+x^2+x^4)y^2 = x^2 y^2 at
    // period 4.
    const SymmetryGen* blue0 = nullptr;
    for (const auto& s : spec.symmetries)
        if (s.label == "fractal q=1 blue") blue0 = &s;
    REQUIRE(blue0 != nullptr);
    std::set<std::vector<int>> got;
    for (auto q : blue0->support) got.insert(spec.sites[q].coord);
    std::set<std::vector<int>> want;
    for (int l = 0; l <= 1; ++l) {
        want.insert({0, 0, l, 0});
        want.insert({0, 1, l, 0});
        want.insert({1, 1, l, 0});
        want.insert({2, 1, l, 0});
        want.insert({2, 2, l, 0});
    }
    CHECK(got == want);
}

TEST_CASE("open-x stack keeps only fully contained gates") {
    auto spec = build_fractal_stack(F2LaurentPoly{{0, 0, 0, 0}, {1, 0, 0, 0}}, 5, 3, 1, false);
    CHECK_FALSE(spec.x_periodic);
    // Forward gates lose the last column, mirrored gates the first.
    CHECK(spec.terms.size() == 2 * 4 * 2 * 1);
    auto surv = survivor_edges(spec);
    std::sort(surv.begin(), surv.end());
    CHECK(surv == spec.target_graph);
    for (const auto& [a, b] : spec.target_graph) {
        CHECK(std::count(spec.boundary.begin(), spec.boundary.end(), a) == 1);
        CHECK(std::count(spec.boundary.begin(), spec.boundary.end(), b) == 1);
    }
}

TEST_CASE("poly to pauli mapping") {
    auto spec = build_honeycomb_stack(4, 3, 2);
    // x^5 reduces to x^1 at period 4, so both monomials hit the same site
    // and the flips cancel.
    auto p = parse_poly("x*y + x^5*y");
    auto op = pauli_from_poly(spec, PauliKind::X, p);
    CHECK(op.x_mask.none());

    auto q = pauli_from_poly(spec, PauliKind::Z, parse_poly("x^2*y*z^2*s"));
    CHECK(q.x_mask.none());
    CHECK(q.z_mask.popcount() == 1);
    CHECK(q.z_mask.get(site_at(spec, {2, 1, 2, 1}).index));

    CHECK_THROWS_AS(pauli_from_poly(spec, PauliKind::X, parse_poly("y^7")),
                    std::invalid_argument);

    auto sq = build_square(3, 3);
    auto r = pauli_from_poly(sq, PauliKind::X, parse_poly("1 + x*y^2"));
    CHECK(r.x_mask.popcount() == 2);
    CHECK(r.x_mask.get(site_at(sq, {0, 0}).index));
    CHECK(r.x_mask.get(site_at(sq, {1, 2}).index));
    CHECK_THROWS_AS(pauli_from_poly(sq, PauliKind::X, parse_poly("z")),
                    std::invalid_argument);
}

TEST_CASE("json io round trips") {
    std::vector<LatticeSpec> specs;
    specs.push_back(build_square(3, 2));
    specs.push_back(build_union_jack(3));
    specs.push_back(build_triangular(3));
    specs.push_back(build_fcc(1, 2, 2));
    specs.push_back(build_fcc(1, 1, 1, false));
    specs.push_back(build_honeycomb_stack(3, 2, 1));
    for (const auto& spec : specs) {
        auto text = to_json_string(spec);
        auto back = lattice_from_json(text);
        CHECK(to_json_string(back) == text);
        CHECK(back.n() == spec.n());
        CHECK(back.terms.size() == spec.terms.size());
        CHECK(back.target_graph == spec.target_graph);
        CHECK(back.boundary == spec.boundary);
        CHECK(back.boundary_mode == spec.boundary_mode);
        CHECK(back.bulk_flips_to_minus == spec.bulk_flips_to_minus);
    }
}

TEST_CASE("bad inputs are rejected") {
    CHECK_THROWS_AS(build_square(1, 5), std::invalid_argument);
    CHECK_THROWS_AS(build_union_jack(1), std::invalid_argument);
    CHECK_THROWS_AS(build_triangular(1), std::invalid_argument);
    CHECK_THROWS_AS(build_fcc(0, 2, 2), std::invalid_argument);
    CHECK_THROWS_AS(build_fcc(2, 1, 2, true), std::invalid_argument);
    CHECK_THROWS_AS(build_honeycomb_stack(1, 3, 2), std::invalid_argument);
    CHECK_THROWS_AS(build_fractal_stack(parse_poly("y"), 4, 3, 1), std::invalid_argument);
    CHECK_THROWS_AS(build_fractal_stack(parse_poly("0"), 4, 3, 1), std::invalid_argument);

    CHECK_THROWS_AS(lattice_from_json("{"), std::invalid_argument);
    CHECK_THROWS_AS(lattice_from_json("{}"), std::invalid_argument);

    // Structural validation catches corrupt region data.
    auto spec = build_square(2, 2);
    auto j = nlohmann::json::parse(to_json_string(spec));
    j["bulk"] = {0};
    CHECK_THROWS_AS(lattice_from_json(j.dump()), std::invalid_argument);
    j = nlohmann::json::parse(to_json_string(spec));
    j["terms"][0]["pairs"].push_back({0, 1});
    CHECK_THROWS_AS(lattice_from_json(j.dump()), std::invalid_argument);
}

TEST_CASE("symmetry commutation helper") {
    auto spec = build_square(2, 2);
    const auto& term = spec.terms.front();
    CHECK(term_commutes_with_flip(term, {0, 3}, 4));
    CHECK(term_commutes_with_flip(term, {1, 2}, 4));
    CHECK(term_commutes_with_flip(term, {0, 1, 2, 3}, 4));
    CHECK_FALSE(term_commutes_with_flip(term, {0}, 4));

    auto uj = build_union_jack(2);
    CHECK_FALSE(term_commutes_with_flip(uj.terms.front(), {uj.terms.front().support[0]},
                                        uj.n()));
}
