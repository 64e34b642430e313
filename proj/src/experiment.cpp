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

#include "qpump/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <map>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <utility>

#include <json.hpp>

namespace qpump {

namespace {

// Uniform in [0, 1), platform-independent unlike the distribution adaptors.
double unit_double(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double term_scale(const PerturbationSpec& pert, std::mt19937_64& rng) {
    if (pert.disorder == 0.0) return 1.0;
    return 1.0 + pert.disorder * (2.0 * unit_double(rng) - 1.0);
}

std::map<std::vector<int>, std::uint32_t> coord_index(const LatticeSpec& spec) {
    std::map<std::vector<int>, std::uint32_t> at;
    for (const auto& s : spec.sites) at[s.coord] = s.index;
    return at;
}

// Diagonal pairs of every square plaquette, in plaquette order.
std::vector<std::pair<std::uint32_t, std::uint32_t>> square_diagonal_pairs(
    const LatticeSpec& spec) {
    if (spec.family != "square")
        throw std::invalid_argument(
            "diagonal-pair perturbation is defined for the square family only");
    const int nx = spec.dims.at(0), ny = spec.dims.at(1);
    auto at = coord_index(spec);
    std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
    for (int y = 0; y + 1 < ny; ++y) {
        for (int x = 0; x + 1 < nx; ++x) {
            pairs.emplace_back(at.at({x, y}), at.at({x + 1, y + 1}));
            pairs.emplace_back(at.at({x + 1, y}), at.at({x, y + 1}));
        }
    }
    return pairs;
}

struct BulkIndexing {
    std::vector<std::uint32_t> sites;          // spec.bulk order
    std::vector<std::vector<std::size_t>> gen_positions;  // per symmetry
    int expected_sign = +1;
};

BulkIndexing index_bulk(const LatticeSpec& spec) {
    BulkIndexing ix;
    ix.sites = spec.bulk;
    ix.expected_sign = spec.bulk_flips_to_minus ? -1 : +1;
    std::map<std::uint32_t, std::size_t> pos;
    for (std::size_t i = 0; i < ix.sites.size(); ++i) pos[ix.sites[i]] = i;
    for (const auto& g : spec.symmetries) {
        std::vector<std::size_t> on;
        for (std::uint32_t q : g.support) {
            auto it = pos.find(q);
            if (it != pos.end()) on.push_back(it->second);
        }
        ix.gen_positions.push_back(std::move(on));
    }
    return ix;
}

bool branch_accepted(const BulkIndexing& ix, const std::vector<int>& outcomes,
                     AcceptRule rule) {
    auto defects_even = [&](const std::vector<std::size_t>& positions) {
        std::size_t defects = 0;
        for (std::size_t p : positions)
            if (outcomes[p] != ix.expected_sign) ++defects;
        return defects % 2 == 0;
    };
    if (rule == AcceptRule::GlobalParity) {
        std::vector<std::size_t> all(outcomes.size());
        for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
        return defects_even(all);
    }
    for (const auto& on : ix.gen_positions)
        if (!defects_even(on)) return false;
    return true;
}

constexpr double kBranchFloor = 1e-13;

void walk_branches(DenseState psi, double prob, std::size_t depth,
                   const BulkIndexing& ix, AcceptRule rule,
                   std::vector<int>& outcomes, std::vector<Branch>& out) {
    if (depth == ix.sites.size()) {
        out.push_back(Branch{outcomes, prob,
                             branch_accepted(ix, outcomes, rule), std::move(psi)});
        return;
    }
    const std::uint32_t q = ix.sites[depth];
    const double p_plus = x_plus_probability(psi, q);
    if (p_plus >= kBranchFloor) {
        DenseState plus = psi;
        measure_x(plus, q, XOutcome::Plus);
        outcomes.push_back(+1);
        walk_branches(std::move(plus), prob * p_plus, depth + 1, ix, rule, outcomes, out);
        outcomes.pop_back();
    }
    const double p_minus = 1.0 - p_plus;
    if (p_minus >= kBranchFloor) {
        measure_x(psi, q, XOutcome::Minus);
        outcomes.push_back(-1);
        walk_branches(std::move(psi), prob * p_minus, depth + 1, ix, rule, outcomes, out);
        outcomes.pop_back();
    }
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

const char* kCsvHeader =
    "lattice,nx,ny,n_boundary,kind,epsilon,seed,p_fail_exact,p_fail_sampled,"
    "fidelity_post,accept_rule";

nlohmann::json fit_to_json(const SlopeFit& f) {
    return {{"slope", f.slope},
            {"stderr", f.stderr_slope},
            {"n_points", f.n_points}};
}

}  // namespace

std::string kind_name(PerturbationKind k) {
    return k == PerturbationKind::ZType ? "Z_TYPE" : "X_TYPE";
}

PerturbationKind kind_from_name(const std::string& s) {
    if (s == "Z_TYPE") return PerturbationKind::ZType;
    if (s == "X_TYPE") return PerturbationKind::XType;
    throw std::invalid_argument("unknown perturbation kind '" + s + "'");
}

std::string rule_name(AcceptRule r) {
    return r == AcceptRule::PerGenerator ? "per_generator" : "global_parity";
}

AcceptRule rule_from_name(const std::string& s) {
    if (s == "per_generator") return AcceptRule::PerGenerator;
    if (s == "global_parity") return AcceptRule::GlobalParity;
    throw std::invalid_argument("unknown acceptance rule '" + s + "'");
}

DiagonalHamiltonian perturbed_hamiltonian(const LatticeSpec& spec,
                                          const PerturbationSpec& pert,
                                          std::vector<XTerm>& x_terms,
                                          std::size_t cap) {
    DiagonalHamiltonian h(spec.n(), cap);
    for (const auto& t : spec.terms) {
        if (t.kind == TermKind::ZProduct)
            h.add_z_product(t.support, -static_cast<double>(t.sign));
        else
            h.add_cz_product(t.pairs, static_cast<double>(t.sign));
    }
    x_terms.clear();
    std::mt19937_64 rng(pert.disorder_seed);
    if (pert.kind == PerturbationKind::ZType) {
        for (const auto& [a, b] : square_diagonal_pairs(spec)) {
            for (const auto& g : spec.symmetries) {
                HamTerm probe{TermKind::ZProduct, {a, b}, {}, spec.drive_angle(), +1};
                if (!term_commutes_with_flip(probe, g.support, spec.n()))
                    throw std::logic_error("perturbation pair breaks symmetry '" +
                                           g.label + "'");
            }
            h.add_z_product({a, b}, pert.epsilon * term_scale(pert, rng));
        }
    } else {
        for (std::uint32_t q = 0; q < spec.n(); ++q)
            x_terms.push_back({q, pert.epsilon * term_scale(pert, rng)});
    }
    return h;
}

DenseState evolve_perturbed(const LatticeSpec& spec, const PerturbationSpec& pert,
                            std::size_t cap) {
    std::vector<XTerm> x_terms;
    DiagonalHamiltonian h = perturbed_hamiltonian(spec, pert, x_terms, cap);
    DenseState psi = DenseState::plus_state(spec.n(), cap);
    const double t = angle_value(spec.drive_angle());
    if (x_terms.empty())
        evolve_diagonal(psi, h, t);
    else
        evolve_general(psi, h, x_terms, t);
    return psi;
}

std::vector<Branch> enumerate_branches(const LatticeSpec& spec,
                                       const DenseState& evolved, AcceptRule rule) {
    if (evolved.n() != spec.n())
        throw std::invalid_argument("state size does not match the lattice");
    const std::size_t bulk_bits = spec.bulk.size();
    if (bulk_bits + evolved.n() > 24)
        throw CapExceeded("branch enumeration needs 2^bulk * 2^n <= 2^24 amplitudes");
    BulkIndexing ix = index_bulk(spec);
    std::vector<Branch> out;
    std::vector<int> outcomes;
    walk_branches(evolved, 1.0, 0, ix, rule, outcomes, out);
    return out;
}

RunResult run_postselected(const LatticeSpec& spec, const PerturbationSpec& pert,
                           const RunOptions& opts) {
    RunResult r;
    r.n_boundary = spec.boundary.size();
    r.epsilon = pert.epsilon;
    r.kind = pert.kind;
    r.rule = opts.rule;
    r.n_samples = opts.n_samples;

    const DenseState evolved = evolve_perturbed(spec, pert, opts.dense_cap);

    CompiledPump pump = compile_pump(spec);
    StabilizerTableau target = new_plus_state(spec.boundary.size());
    target.apply(boundary_restriction(spec, pump));
    std::vector<std::size_t> region(spec.boundary.begin(), spec.boundary.end());

    double p_accept = 0.0, p_reject = 0.0, fid_weighted = 0.0;
    for (const Branch& b : enumerate_branches(spec, evolved, opts.rule)) {
        if (!b.accepted) {
            p_reject += b.probability;
            continue;
        }
        p_accept += b.probability;
        fid_weighted += b.probability * fidelity(b.state, target, region);
    }
    r.p_fail_exact = p_reject;
    r.fidelity_post = p_accept > 0.0 ? fid_weighted / p_accept : 0.0;

    BulkIndexing ix = index_bulk(spec);
    std::mt19937_64 rng(opts.seed);
    std::size_t rejected = 0;
    for (std::size_t s = 0; s < opts.n_samples; ++s) {
        DenseState psi = evolved;
        std::vector<int> outcomes;
        outcomes.reserve(ix.sites.size());
        for (std::uint32_t q : ix.sites) {
            auto m = measure_x(psi, q, std::nullopt, &rng);
            outcomes.push_back(m.outcome == XOutcome::Plus ? +1 : -1);
        }
        if (!branch_accepted(ix, outcomes, opts.rule)) ++rejected;
    }
    r.n_rejected_samples = rejected;
    r.p_fail_sampled =
        opts.n_samples ? static_cast<double>(rejected) / static_cast<double>(opts.n_samples)
                       : 0.0;
    return r;
}

std::string to_json_string(const RunResult& r) {
    nlohmann::json j;
    j["accept_rule"] = rule_name(r.rule);
    j["epsilon"] = r.epsilon;
    j["fidelity_post"] = r.fidelity_post;
    j["kind"] = kind_name(r.kind);
    j["n_boundary"] = r.n_boundary;
    j["n_rejected_samples"] = r.n_rejected_samples;
    j["n_samples"] = r.n_samples;
    j["p_fail_exact"] = r.p_fail_exact;
    j["p_fail_sampled"] = r.p_fail_sampled;
    return j.dump(2) + "\n";
}

SlopeFit log_log_fit(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size()) throw std::invalid_argument("fit needs matching lengths");
    const std::size_t n = xs.size();
    if (n < 2) throw std::invalid_argument("fit needs at least two points");
    std::vector<double> lx(n), ly(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (xs[i] <= 0.0 || ys[i] <= 0.0)
            throw std::invalid_argument("log-log fit needs positive values");
        lx[i] = std::log(xs[i]);
        ly[i] = std::log(ys[i]);
    }
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("log-log fit needs distinct x values");
    SlopeFit f;
    f.slope = sxy / sxx;
    f.n_points = n;
    if (n > 2) {
        const double b0 = my - f.slope * mx;
        double ss_res = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double r = ly[i] - (b0 + f.slope * lx[i]);
            ss_res += r * r;
        }
        f.stderr_slope = std::sqrt(ss_res / static_cast<double>(n - 2) / sxx);
    }
    return f;
}

SweepResult sweep(const SweepConfig& cfg) {
    if (cfg.sizes.empty()) throw std::invalid_argument("sweep needs at least one size");
    if (cfg.epsilons.size() < 3)
        throw std::invalid_argument("sweep needs at least three epsilons");

    const std::size_t n_jobs = cfg.sizes.size() * cfg.epsilons.size();
    std::vector<SweepRow> rows(n_jobs);

    std::atomic<std::size_t> next{0};
    std::mutex err_mutex;
    std::exception_ptr first_error;
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n_jobs) return;
            {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (first_error) return;
            }
            try {
                const std::size_t si = i / cfg.epsilons.size();
                const std::size_t ei = i % cfg.epsilons.size();
                LatticeSpec spec = build_family(cfg.family, cfg.sizes[si], cfg.ca);
                PerturbationSpec pert;
                pert.kind = cfg.kind;
                pert.epsilon = cfg.epsilons[ei];
                pert.disorder = cfg.disorder;
                pert.disorder_seed = cfg.seed + i;
                RunOptions opts;
                opts.rule = cfg.rule;
                opts.n_samples = cfg.n_samples;
                opts.seed = cfg.seed + i;
                RunResult res = run_postselected(spec, pert, opts);
                SweepRow& row = rows[i];
                row.lattice = spec.family;
                row.nx = spec.dims.at(0);
                row.ny = spec.dims.size() > 1 ? spec.dims.at(1) : spec.dims.at(0);
                row.n_boundary = res.n_boundary;
                row.kind = res.kind;
                row.epsilon = res.epsilon;
                row.seed = opts.seed;
                row.p_fail_exact = res.p_fail_exact;
                row.p_fail_sampled = res.p_fail_sampled;
                row.fidelity_post = res.fidelity_post;
                row.rule = res.rule;
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };

    std::size_t n_threads = cfg.n_threads;
    if (n_threads == 0)
        n_threads = std::max(1u, std::thread::hardware_concurrency());
    n_threads = std::min(n_threads, n_jobs);
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);

    SweepResult out;
    out.rows = std::move(rows);
    const std::size_t ne = cfg.epsilons.size();
    for (std::size_t si = 0; si < cfg.sizes.size(); ++si) {
        std::vector<double> eps, pf, deficit;
        for (std::size_t ei = 0; ei < ne; ++ei) {
            const SweepRow& row = out.rows[si * ne + ei];
            eps.push_back(row.epsilon);
            pf.push_back(row.p_fail_exact);
            deficit.push_back(1.0 - row.fidelity_post);
        }
        out.epsilon_slopes.push_back(log_log_fit(eps, pf));
        out.deficit_slopes.push_back(log_log_fit(eps, deficit));
    }
    if (cfg.sizes.size() > 1) {
        for (std::size_t ei = 0; ei < ne; ++ei) {
            std::vector<double> nb, pf;
            for (std::size_t si = 0; si < cfg.sizes.size(); ++si) {
                const SweepRow& row = out.rows[si * ne + ei];
                nb.push_back(static_cast<double>(row.n_boundary));
                pf.push_back(row.p_fail_exact);
            }
            out.n_slopes.push_back(log_log_fit(nb, pf));
        }
    }
    return out;
}

std::string to_csv(const std::vector<SweepRow>& rows) {
    std::string out = kCsvHeader;
    out += '\n';
    for (const auto& r : rows) {
        out += r.lattice;
        out += ',' + std::to_string(r.nx);
        out += ',' + std::to_string(r.ny);
        out += ',' + std::to_string(r.n_boundary);
        out += ',' + kind_name(r.kind);
        out += ',' + format_double(r.epsilon);
        out += ',' + std::to_string(r.seed);
        out += ',' + format_double(r.p_fail_exact);
        out += ',' + format_double(r.p_fail_sampled);
        out += ',' + format_double(r.fidelity_post);
        out += ',' + rule_name(r.rule);
        out += '\n';
    }
    return out;
}

std::string to_json_string(const SweepResult& r) {
    nlohmann::json j;
    auto rows = nlohmann::json::array();
    for (const auto& row : r.rows) {
        nlohmann::json o;
        o["lattice"] = row.lattice;
        o["nx"] = row.nx;
        o["ny"] = row.ny;
        o["n_boundary"] = row.n_boundary;
        o["kind"] = kind_name(row.kind);
        o["epsilon"] = row.epsilon;
        o["seed"] = row.seed;
        o["p_fail_exact"] = row.p_fail_exact;
        o["p_fail_sampled"] = row.p_fail_sampled;
        o["fidelity_post"] = row.fidelity_post;
        o["accept_rule"] = rule_name(row.rule);
        rows.push_back(std::move(o));
    }
    j["rows"] = std::move(rows);
    auto fits = [](const std::vector<SlopeFit>& fs) {
        auto arr = nlohmann::json::array();
        for (const auto& f : fs) arr.push_back(fit_to_json(f));
        return arr;
    };
    j["epsilon_slopes"] = fits(r.epsilon_slopes);
    j["deficit_slopes"] = fits(r.deficit_slopes);
    j["n_slopes"] = fits(r.n_slopes);
    return j.dump(2) + "\n";
}

SweepConfig sweep_config_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("bad sweep config: ") + e.what());
    }
    if (!j.is_object()) throw std::invalid_argument("sweep config must be an object");
    static const char* known[] = {"family", "ca",        "sizes", "epsilons",
                                  "kind",   "rule",      "disorder", "n_samples",
                                  "seed",   "n_threads"};
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (std::find_if(std::begin(known), std::end(known), [&](const char* k) {
                return key == k;
            }) == std::end(known))
            throw std::invalid_argument("unknown sweep config key '" + key + "'");
    }
    SweepConfig cfg;
    try {
        if (j.contains("family")) cfg.family = j.at("family").get<std::string>();
        if (j.contains("ca")) cfg.ca = j.at("ca").get<std::string>();
        cfg.sizes = j.at("sizes").get<std::vector<std::vector<int>>>();
        cfg.epsilons = j.at("epsilons").get<std::vector<double>>();
        if (j.contains("kind")) cfg.kind = kind_from_name(j.at("kind").get<std::string>());
        if (j.contains("rule")) cfg.rule = rule_from_name(j.at("rule").get<std::string>());
        if (j.contains("disorder")) cfg.disorder = j.at("disorder").get<double>();
        if (j.contains("n_samples")) cfg.n_samples = j.at("n_samples").get<std::size_t>();
        if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("n_threads")) cfg.n_threads = j.at("n_threads").get<std::size_t>();
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("bad sweep config: ") + e.what());
    }
    return cfg;
}

}  // namespace qpump
