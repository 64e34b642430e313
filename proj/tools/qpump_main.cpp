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

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qpump/compiler.hpp"
#include "qpump/dense.hpp"
#include "qpump/experiment.hpp"
#include "qpump/lattice.hpp"
#include "qpump/verify.hpp"

namespace {

// Exit codes: 0 pass, 1 failed check, 2 usage error, 3 cap exceeded.
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitCap = 3;

int fail_json(int code, const std::string& message,
              const nlohmann::json& detail = nullptr) {
    nlohmann::json j;
    j["error"] = message;
    j["exit_code"] = code;
    if (!detail.is_null()) j["detail"] = detail;
    std::cerr << j.dump() << "\n";
    return code;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot read file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot write file '" + path + "'");
    out << content;
    if (!out) throw std::invalid_argument("failed writing file '" + path + "'");
}

std::string internal_family(const std::string& cli_name) {
    if (cli_name == "square" || cli_name == "triangular" || cli_name == "fcc")
        return cli_name;
    if (cli_name == "union-jack") return "union_jack";
    if (cli_name == "honeycomb") return "honeycomb_stack";
    if (cli_name == "fractal") return "fractal_stack";
    throw std::invalid_argument("unknown lattice '" + cli_name + "'");
}

struct BuildArgs {
    std::string lattice;
    std::vector<int> dims;
    std::string ca;
    bool open = false;
    std::string out;
};

int run_build(const BuildArgs& a) {
    qpump::LatticeSpec spec =
        qpump::build_family(internal_family(a.lattice), a.dims, a.ca, !a.open);
    write_file(a.out, qpump::to_json_string(spec));
    return 0;
}

struct CompileArgs {
    std::string spec_path;
    std::string out;
    std::string summary;
};

int run_compile(const CompileArgs& a) {
    qpump::LatticeSpec spec = qpump::lattice_from_json(read_file(a.spec_path));
    qpump::CertificateReport symmetry = qpump::symmetry_check(spec);
    if (!symmetry.pass)
        return fail_json(kExitCheckFailed, "symmetry check failed",
                         nlohmann::json::parse(qpump::to_json_string(symmetry)));
    qpump::CompiledPump pump = qpump::compile_pump(spec);
    write_file(a.out, qpump::to_text(pump.reduced));
    if (!a.summary.empty()) {
        nlohmann::json j;
        j["bulk_clean"] = pump.bulk_clean;
        j["cz_count"] = pump.cz_edges.size();
        j["n_qubits"] = spec.n();
        j["octant"] = pump.octant;
        j["raw_gate_count"] = pump.raw.gates().size();
        j["reduced_gate_count"] = pump.reduced.gates().size();
        j["s_count"] = pump.reduced.count(qpump::GateKind::S);
        j["sdg_count"] = pump.reduced.count(qpump::GateKind::Sdg);
        j["z_count"] = pump.reduced.count(qpump::GateKind::Z);
        write_file(a.summary, j.dump(2) + "\n");
    }
    return 0;
}

struct VerifyArgs {
    std::string spec_path;
    std::string circuit_path;
};

int run_verify(const VerifyArgs& a) {
    qpump::LatticeSpec spec = qpump::lattice_from_json(read_file(a.spec_path));
    qpump::CliffordCircuit circuit =
        qpump::circuit_from_text(read_file(a.circuit_path));
    qpump::VerificationReport report = qpump::verify_pump(spec, circuit);
    std::cout << qpump::to_json_string(report);
    return report.pass ? 0 : kExitCheckFailed;
}

int run_symcheck(const std::string& spec_path) {
    qpump::LatticeSpec spec = qpump::lattice_from_json(read_file(spec_path));
    qpump::CertificateReport report = qpump::symmetry_check(spec);
    std::cout << qpump::to_json_string(report);
    return report.pass ? 0 : kExitCheckFailed;
}

struct PerturbArgs {
    std::string spec_path;
    std::string kind;
    double eps = 0.0;
    std::uint64_t seed = 0;
    std::size_t samples = 2000;
    std::string rule = "per_generator";
    double disorder = 0.0;
};

int run_perturb(const PerturbArgs& a) {
    qpump::LatticeSpec spec = qpump::lattice_from_json(read_file(a.spec_path));
    qpump::PerturbationSpec pert;
    pert.kind = qpump::kind_from_name(a.kind);
    pert.epsilon = a.eps;
    pert.disorder = a.disorder;
    pert.disorder_seed = a.seed;
    qpump::RunOptions opts;
    opts.rule = qpump::rule_from_name(a.rule);
    opts.n_samples = a.samples;
    opts.seed = a.seed;
    qpump::RunResult result = qpump::run_postselected(spec, pert, opts);
    std::cout << qpump::to_json_string(result);
    return 0;
}

struct SweepArgs {
    std::string config_path;
    std::string out;
};

int run_sweep(const SweepArgs& a) {
    qpump::SweepConfig cfg = qpump::sweep_config_from_json(read_file(a.config_path));
    qpump::SweepResult result = qpump::sweep(cfg);
    write_file(a.out, qpump::to_csv(result.rows));
    std::cout << qpump::to_json_string(result);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"qpump: cluster-state pump compiler and verifier"};
    app.require_subcommand(1);

    BuildArgs build_args;
    CLI::App* build = app.add_subcommand("build", "write a lattice spec JSON");
    build->add_option("--lattice", build_args.lattice,
                      "square|triangular|union-jack|fcc|honeycomb|fractal")
        ->required();
    build->add_option("--dims", build_args.dims, "family-specific dimensions")
        ->required()
        ->expected(1, 3);
    build->add_option("--ca", build_args.ca, "CA rule polynomial, e.g. \"1+x\"");
    build->add_flag("--open", build_args.open,
                    "open instead of periodic transverse directions");
    build->add_option("--out", build_args.out, "output spec path")->required();

    CompileArgs compile_args;
    CLI::App* compile = app.add_subcommand("compile", "compile a spec to a circuit");
    compile->add_option("--spec", compile_args.spec_path, "input spec JSON")->required();
    compile->add_option("--out", compile_args.out, "output circuit text")->required();
    compile->add_option("--summary", compile_args.summary, "optional summary JSON path");

    VerifyArgs verify_args;
    CLI::App* verify = app.add_subcommand("verify", "check a circuit against its spec");
    verify->add_option("--spec", verify_args.spec_path, "input spec JSON")->required();
    verify->add_option("--circuit", verify_args.circuit_path, "input circuit text")
        ->required();

    std::string symcheck_spec;
    CLI::App* symcheck =
        app.add_subcommand("symcheck", "check symmetry commutation certificates");
    symcheck->add_option("--spec", symcheck_spec, "input spec JSON")->required();

    PerturbArgs perturb_args;
    CLI::App* perturb =
        app.add_subcommand("perturb", "run one post-selected perturbation point");
    perturb->add_option("--spec", perturb_args.spec_path, "input spec JSON")->required();
    perturb->add_option("--kind", perturb_args.kind, "Z_TYPE|X_TYPE")->required();
    perturb->add_option("--eps", perturb_args.eps, "perturbation strength")->required();
    perturb->add_option("--seed", perturb_args.seed, "sampling seed")->required();
    perturb->add_option("--samples", perturb_args.samples, "sample count (default 2000)");
    perturb->add_option("--rule", perturb_args.rule, "per_generator|global_parity");
    perturb->add_option("--disorder", perturb_args.disorder,
                        "relative term-strength jitter");

    SweepArgs sweep_args;
    CLI::App* sweep = app.add_subcommand("sweep", "run a sweep config to CSV");
    sweep->add_option("--config", sweep_args.config_path, "sweep config JSON")
        ->required();
    sweep->add_option("--out", sweep_args.out, "output CSV path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            std::cout << app.help();
            return 0;
        }
        return fail_json(kExitUsage, std::string("usage: ") + e.what());
    }

    try {
        if (build->parsed()) return run_build(build_args);
        if (compile->parsed()) return run_compile(compile_args);
        if (verify->parsed()) return run_verify(verify_args);
        if (symcheck->parsed()) return run_symcheck(symcheck_spec);
        if (perturb->parsed()) return run_perturb(perturb_args);
        if (sweep->parsed()) return run_sweep(sweep_args);
    } catch (const qpump::CapExceeded& e) {
        return fail_json(kExitCap, e.what());
    } catch (const std::exception& e) {
        return fail_json(kExitUsage, e.what());
    }
    return fail_json(kExitUsage, "no subcommand selected");
}
