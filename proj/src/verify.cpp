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

#include "qpump/verify.hpp"

#include <stdexcept>

#include <json.hpp>

#include "qpump/tableau.hpp"

namespace qpump {

namespace {

int mode_level(BoundaryMode m) {
    switch (m) {
        case BoundaryMode::Exact: return 0;
        case BoundaryMode::Signed: return 1;
        case BoundaryMode::Decorated: return 2;
    }
    throw std::logic_error("bad boundary mode");
}

F2LaurentPoly poly_pow(const F2LaurentPoly& base, int e) {
    F2LaurentPoly acc = F2LaurentPoly::one();
    for (int i = 0; i < e; ++i) acc = acc * base;
    return acc;
}

F2LaurentPoly z_ladder(int L) {  // 1 + z + ... + z^L
    std::vector<Monomial> ms;
    for (int l = 0; l <= L; ++l) ms.push_back({0, 0, l, 0});
    return F2LaurentPoly(ms);
}

bool box_free(const F2LaurentPoly& p, int j_lo, int j_hi, int k_lo, int k_hi) {
    for (const auto& m : p.terms())
        if (j_lo <= m.j && m.j <= j_hi && k_lo <= m.k && m.k <= k_hi) return false;
    return true;
}

}  // namespace

VerificationReport verify_pump(const LatticeSpec& spec, const CliffordCircuit& circuit) {
    const std::size_t n = spec.n();
    if (circuit.n() != n)
        throw std::invalid_argument("circuit and lattice disagree on qubit count");

    StabilizerTableau state(n);
    state.apply(circuit);

    VerificationReport rep;
    rep.declared = spec.boundary_mode;

    std::vector<std::vector<std::uint32_t>> adj(n);
    for (const auto& [a, b] : spec.target_graph) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    }

    rep.bulk_invariant = true;
    const int bulk_want = spec.bulk_flips_to_minus ? -1 : 1;
    for (auto q : spec.bulk) {
        auto sign = state.stabilizer_sign(PauliOperator::single_x(n, q));
        if (!sign || *sign != bulk_want) {
            rep.bulk_invariant = false;
            rep.failures.push_back("bulk site " + std::to_string(q) + " is not in a " +
                                   (bulk_want > 0 ? "+X" : "-X") + " product state");
        }
    }

    bool all_found = true, all_x = true, all_plus = true;
    for (auto q : spec.boundary) {
        PauliOperator p = PauliOperator::identity(n);
        p.x_mask.set(q, true);
        for (auto j : adj[q]) p.z_mask.set(j, true);
        if (auto sign = state.stabilizer_sign(p)) {
            rep.boundary_stabilizers.push_back({q, 'X', *sign});
            if (*sign != 1) all_plus = false;
            continue;
        }
        p.z_mask.flip(q);
        p.phase = 1;  // i X Z = Y on the site itself
        if (auto sign = state.stabilizer_sign(p)) {
            rep.boundary_stabilizers.push_back({q, 'Y', *sign});
            all_x = false;
            all_plus = false;
            continue;
        }
        all_found = false;
        rep.failures.push_back("boundary site " + std::to_string(q) +
                               " carries no X- or Y-form cluster stabilizer");
    }
    rep.achieved = !all_x ? BoundaryMode::Decorated
                          : (all_plus ? BoundaryMode::Exact : BoundaryMode::Signed);
    rep.boundary_is_cluster =
        all_found && mode_level(rep.achieved) <= mode_level(rep.declared);
    if (all_found && !rep.boundary_is_cluster)
        rep.failures.push_back("boundary realizes mode '" + boundary_mode_name(rep.achieved) +
                               "' but the lattice declares '" +
                               boundary_mode_name(rep.declared) + "'");

    rep.factorized = state.factorizes(
        std::vector<std::size_t>(spec.boundary.begin(), spec.boundary.end()));
    if (!rep.factorized)
        rep.failures.push_back("state does not factorize across the boundary/bulk cut");

    rep.symmetries_stabilized = true;
    for (const auto& sym : spec.symmetries) {
        PauliOperator p = PauliOperator::identity(n);
        for (auto q : sym.support) p.x_mask.set(q, true);
        auto sign = state.stabilizer_sign(p);
        if (!sign || *sign != 1) {
            rep.symmetries_stabilized = false;
            rep.failures.push_back("symmetry '" + sym.label +
                                   "' does not stabilize the pumped state");
        }
    }

    rep.pass = rep.bulk_invariant && rep.boundary_is_cluster && rep.factorized &&
               rep.symmetries_stabilized;
    return rep;
}

std::string to_json_string(const VerificationReport& report) {
    nlohmann::json j;
    j["pass"] = report.pass;
    j["bulk_invariant"] = report.bulk_invariant;
    j["boundary_is_cluster"] = report.boundary_is_cluster;
    j["factorized"] = report.factorized;
    j["symmetries_stabilized"] = report.symmetries_stabilized;
    j["declared_mode"] = boundary_mode_name(report.declared);
    j["achieved_mode"] = boundary_mode_name(report.achieved);
    auto stabs = nlohmann::json::array();
    for (const auto& s : report.boundary_stabilizers)
        stabs.push_back({{"site", s.site},
                         {"basis", std::string(1, s.basis)},
                         {"sign", s.sign}});
    j["boundary_stabilizers"] = stabs;
    j["failures"] = report.failures;
    return j.dump(2) + "\n";
}

CertificateReport symmetry_check(const LatticeSpec& spec) {
    CertificateReport rep;
    rep.concrete_pass = true;
    for (const auto& sym : spec.symmetries)
        for (std::size_t ti = 0; ti < spec.terms.size(); ++ti) {
            ++rep.checked_pairs;
            if (!term_commutes_with_flip(spec.terms[ti], sym.support, spec.n())) {
                rep.concrete_pass = false;
                rep.violations.push_back("symmetry '" + sym.label + "' vs term #" +
                                         std::to_string(ti));
            }
        }

    const bool stack = spec.family == "fractal_stack" || spec.family == "honeycomb_stack";
    if (stack && spec.dims.size() == 3 && !spec.ca.empty()) {
        const int nx = spec.dims[0], ny = spec.dims[1], L = spec.dims[2];
        const F2LaurentPoly f = parse_poly(spec.ca);
        const F2LaurentPoly cone = ca_expand(f, ny - 1);
        const F2LaurentPoly lad = z_ladder(L);
        const F2LaurentPoly z_edges{{0, 0, -1, 0}, {0, 0, L, 0}};
        const F2LaurentPoly fny = poly_pow(f, ny);

        // Obstruction of the seed-column blue cone against each gate family:
        // the anchor-indexed overlap parity, written as one Laurent
        // polynomial. The seed shift x^c multiplies it by a unit, so checking
        // the q=1 polynomial covers every seed.
        std::vector<std::pair<std::string, F2LaurentPoly>> certs;
        certs.emplace_back("blue cone vs forward gates", cone * z_edges);
        certs.emplace_back("blue cone vs mirrored gates",
                           (F2LaurentPoly::one() +
                            fny * F2LaurentPoly::monomial(0, ny)) *
                               lad);
        certs.emplace_back("red cone vs forward gates",
                           (F2LaurentPoly::monomial(0, ny - 1) +
                            poly_pow(conj(f), ny) * F2LaurentPoly::monomial(0, -1)) *
                               lad);
        certs.emplace_back("red cone vs mirrored gates",
                           F2LaurentPoly::monomial(0, ny - 1) * conj(cone) *
                               (F2LaurentPoly::one() + F2LaurentPoly::monomial(0, 0, L + 1)));

        rep.poly_pass = true;
        for (std::size_t c = 0; c < certs.size(); ++c) {
            auto poly = spec.x_periodic ? reduce_x_mod(certs[c].second, nx) : certs[c].second;
            // Forward anchors: j in [0, ny-2], k in [0, L-1]; mirrored
            // anchors: j in [1, ny-1], k in [1, L].
            const bool forward = c == 0 || c == 2;
            bool ok = forward ? box_free(poly, 0, ny - 2, 0, L - 1)
                              : box_free(poly, 1, ny - 1, 1, L);
            rep.certificates.push_back({certs[c].first, to_string(poly), ok});
            rep.poly_pass = rep.poly_pass && ok;
        }
        rep.agrees = rep.poly_pass == rep.concrete_pass;
    } else {
        rep.poly_pass = true;
        rep.agrees = true;
    }

    rep.pass = rep.concrete_pass && rep.poly_pass && rep.agrees;
    return rep;
}

std::string to_json_string(const CertificateReport& report) {
    nlohmann::json j;
    j["pass"] = report.pass;
    j["concrete_pass"] = report.concrete_pass;
    j["checked_pairs"] = report.checked_pairs;
    j["violations"] = report.violations;
    auto certs = nlohmann::json::array();
    for (const auto& c : report.certificates)
        certs.push_back({{"label", c.label}, {"poly", c.poly}, {"vanishes", c.vanishes}});
    j["certificates"] = certs;
    j["poly_pass"] = report.poly_pass;
    j["agrees"] = report.agrees;
    return j.dump(2) + "\n";
}

}  // namespace qpump
