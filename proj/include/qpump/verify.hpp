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
#include <vector>

#include "qpump/circuit.hpp"
#include "qpump/lattice.hpp"

namespace qpump {

// Realized stabilizer of one boundary site: X (or its quarter-turned Y form)
// on the site, Z on its target-graph neighbors, with the measured sign.
struct BoundaryStabilizer {
    std::uint32_t site = 0;
    char basis = 'X';  // 'X' or 'Y'
    int sign = 1;
};

struct VerificationReport {
    bool bulk_invariant = false;
    bool boundary_is_cluster = false;  // within the declared boundary mode
    bool factorized = false;
    bool symmetries_stabilized = false;
    BoundaryMode declared = BoundaryMode::Exact;
    BoundaryMode achieved = BoundaryMode::Exact;
    std::vector<BoundaryStabilizer> boundary_stabilizers;
    std::vector<std::string> failures;
    bool pass = false;
};

// Prove at stabilizer level that the circuit leaves every bulk site in a
// product +X state (-X where the lattice declares the flip), produces the
// declared cluster stabilizers on the boundary, factorizes across the
// boundary/bulk cut and keeps the state +1 under every lattice symmetry.
VerificationReport verify_pump(const LatticeSpec& spec, const CliffordCircuit& circuit);

std::string to_json_string(const VerificationReport& report);

// One algebraic commutation certificate: the named obstruction polynomial
// must have no monomial inside the gate anchor box.
struct PolyCertificate {
    std::string label;
    std::string poly;
    bool vanishes = false;
};

struct CertificateReport {
    std::size_t checked_pairs = 0;  // concrete (term, symmetry) checks
    std::vector<std::string> violations;
    bool concrete_pass = false;
    std::vector<PolyCertificate> certificates;  // CA stacks only
    bool poly_pass = false;  // vacuously true without certificates
    bool agrees = false;     // certificates and concrete checks concur
    bool pass = false;
};

// Certify that every declared symmetry commutes with every term, site by
// site; for CA stacks additionally derive the four obstruction polynomials
// of the cone symmetries against both gate families and check that each
// vanishes on its anchor range.
CertificateReport symmetry_check(const LatticeSpec& spec);

std::string to_json_string(const CertificateReport& report);

}  // namespace qpump
