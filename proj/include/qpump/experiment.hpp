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

#include "qpump/compiler.hpp"
#include "qpump/dense.hpp"
#include "qpump/lattice.hpp"

namespace qpump {

enum class PerturbationKind { ZType, XType };

std::string kind_name(PerturbationKind k);
PerturbationKind kind_from_name(const std::string& s);

// Symmetric additions to the driving Hamiltonian. ZType places
// epsilon * (Z Z) on both diagonals of every plaquette (square family
// only; each diagonal pair sits inside one checkerboard class). XType
// places epsilon * X on every site of any family. A nonzero disorder d
// scales each term by an independent factor drawn uniformly from
// [1 - d, 1 + d] with disorder_seed.
struct PerturbationSpec {
    PerturbationKind kind = PerturbationKind::ZType;
    double epsilon = 0.0;
    double disorder = 0.0;
    std::uint64_t disorder_seed = 0;
};

// Post-selection rule applied to the bulk X-basis outcomes. A defect is
// an outcome opposite to the unperturbed pump's bulk value (|-> normally,
// |+> when the pump flips the bulk). PerGenerator accepts a branch when
// every symmetry generator sees an even number of defects on its bulk
// support; GlobalParity only requires an even total count.
enum class AcceptRule { PerGenerator, GlobalParity };

std::string rule_name(AcceptRule r);
AcceptRule rule_from_name(const std::string& s);

struct RunOptions {
    AcceptRule rule = AcceptRule::PerGenerator;
    std::size_t n_samples = 2000;
    std::uint64_t seed = 1;
    std::size_t dense_cap = DenseState::kDefaultCap;
};

struct RunResult {
    double p_fail_exact = 0.0;    // total probability of rejected branches
    double p_fail_sampled = 0.0;
    double fidelity_post = 1.0;   // accepted-branch mean boundary fidelity
    std::size_t n_boundary = 0;
    double epsilon = 0.0;
    PerturbationKind kind = PerturbationKind::ZType;
    AcceptRule rule = AcceptRule::PerGenerator;
    std::size_t n_samples = 0;
    std::size_t n_rejected_samples = 0;
};

std::string to_json_string(const RunResult& r);

// Drive energy function of the lattice's own terms plus the perturbation's
// diagonal part. XType contributions come back through x_terms instead.
DiagonalHamiltonian perturbed_hamiltonian(const LatticeSpec& spec,
                                          const PerturbationSpec& pert,
                                          std::vector<XTerm>& x_terms,
                                          std::size_t cap = DenseState::kDefaultCap);

// All-plus state evolved under the perturbed drive for the family's time.
DenseState evolve_perturbed(const LatticeSpec& spec, const PerturbationSpec& pert,
                            std::size_t cap = DenseState::kDefaultCap);

// One X-basis measurement branch over the bulk sites, in spec.bulk order.
struct Branch {
    std::vector<int> outcomes;  // +1 / -1 per bulk site
    double probability = 0.0;
    bool accepted = false;
    DenseState state;  // normalized post-measurement state
};

// Every branch with probability above a fixed floor (1e-13), depth-first
// in bulk order. Throws CapExceeded when 2^bulk * 2^n amplitudes would
// exceed the enumeration budget.
std::vector<Branch> enumerate_branches(const LatticeSpec& spec,
                                       const DenseState& evolved, AcceptRule rule);

// Evolve, measure the bulk, post-select. p_fail_exact sums rejected branch
// probabilities; p_fail_sampled re-measures opts.n_samples times with a
// generator seeded by opts.seed; fidelity_post compares each accepted
// branch's boundary factor against the unperturbed pump's boundary state.
RunResult run_postselected(const LatticeSpec& spec, const PerturbationSpec& pert,
                           const RunOptions& opts = {});

// Least-squares fit of log y against log x.
struct SlopeFit {
    double slope = 0.0;
    double stderr_slope = 0.0;  // 0 when the fit has no residual dof
    std::size_t n_points = 0;
};

// Throws std::invalid_argument on fewer than two points or nonpositive
// values.
SlopeFit log_log_fit(const std::vector<double>& xs, const std::vector<double>& ys);

struct SweepConfig {
    std::string family = "square";
    std::string ca;                       // fractal_stack rule, else ignored
    std::vector<std::vector<int>> sizes;  // dims per point, family arity
    std::vector<double> epsilons;
    PerturbationKind kind = PerturbationKind::ZType;
    AcceptRule rule = AcceptRule::PerGenerator;
    double disorder = 0.0;
    std::size_t n_samples = 2000;
    std::uint64_t seed = 1;
    std::size_t n_threads = 0;  // 0: one per hardware thread
};

struct SweepRow {
    std::string lattice;
    int nx = 0;
    int ny = 0;
    std::size_t n_boundary = 0;
    PerturbationKind kind = PerturbationKind::ZType;
    double epsilon = 0.0;
    std::uint64_t seed = 0;
    double p_fail_exact = 0.0;
    double p_fail_sampled = 0.0;
    double fidelity_post = 1.0;
    AcceptRule rule = AcceptRule::PerGenerator;
};

struct SweepResult {
    std::vector<SweepRow> rows;  // sizes-major, epsilons-minor order
    // log p_fail_exact vs log epsilon, one fit per size.
    std::vector<SlopeFit> epsilon_slopes;
    // log (1 - fidelity_post) vs log epsilon, one fit per size.
    std::vector<SlopeFit> deficit_slopes;
    // log p_fail_exact vs log n_boundary, one fit per epsilon. Empty when
    // the sweep has a single size.
    std::vector<SlopeFit> n_slopes;
};

// Runs every (size, epsilon) point on a small work pool; row order and
// results are independent of the thread count. Needs at least three
// epsilons and one size.
SweepResult sweep(const SweepConfig& cfg);

// Pinned column set; doubles printed with %.17g.
// lattice,nx,ny,n_boundary,kind,epsilon,seed,p_fail_exact,p_fail_sampled,
// fidelity_post,accept_rule
std::string to_csv(const std::vector<SweepRow>& rows);

std::string to_json_string(const SweepResult& r);

SweepConfig sweep_config_from_json(const std::string& text);

}  // namespace qpump
