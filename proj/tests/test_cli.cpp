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

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

#include "qpump/compiler.hpp"
#include "qpump/lattice.hpp"

using namespace qpump;
namespace fs = std::filesystem;

namespace {

struct CmdResult {
    int code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const fs::path& p, const std::string& content) {
    std::ofstream out(p, std::ios::binary);
    out << content;
}

fs::path fresh_dir(const std::string& name) {
    fs::path dir = fs::temp_directory_path() / ("qpump_cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

CmdResult run_cli(const std::string& args, const fs::path& dir) {
    const fs::path errfile = dir / "stderr.txt";
    const std::string cmd =
        std::string(QPUMP_CLI_PATH) + " " + args + " 2>" + errfile.string();
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    CmdResult r;
    char buf[4096];
    for (;;) {
        const std::size_t n = fread(buf, 1, sizeof buf, pipe);
        if (n == 0) break;
        r.out.append(buf, n);
    }
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.err = slurp(errfile);
    return r;
}

nlohmann::json parse(const std::string& text) {
    return nlohmann::json::parse(text);
}

}  // namespace

TEST_CASE("build writes the library's spec byte for byte") {
    fs::path dir = fresh_dir("build");
    CmdResult r = run_cli("build --lattice square --dims 4 4 --out " +
                              (dir / "s.json").string(),
                          dir);
    REQUIRE(r.code == 0);
    CHECK(slurp(dir / "s.json") == to_json_string(build_square(4, 4)));
    LatticeSpec spec = lattice_from_json(slurp(dir / "s.json"));
    CHECK(spec.n() == 16);

    CmdResult fcc = run_cli("build --lattice fcc --dims 2 2 2 --out " +
                                (dir / "fcc.json").string(),
                            dir);
    REQUIRE(fcc.code == 0);
    LatticeSpec fspec = lattice_from_json(slurp(dir / "fcc.json"));
    std::size_t four_site = 0;
    for (const auto& t : fspec.terms)
        four_site += t.kind == TermKind::ZProduct && t.support.size() == 4;
    CHECK(four_site == 64);
}

TEST_CASE("fractal rule 1+x builds the honeycomb stack under another name") {
    fs::path dir = fresh_dir("fractal");
    REQUIRE(run_cli("build --lattice fractal --ca 1+x --dims 6 6 3 --out " +
                        (dir / "f.json").string(),
                    dir)
                .code == 0);
    REQUIRE(run_cli("build --lattice honeycomb --dims 6 6 3 --out " +
                        (dir / "h.json").string(),
                    dir)
                .code == 0);
    std::string f = slurp(dir / "f.json");
    const std::string from = "fractal_stack", to = "honeycomb_stack";
    f.replace(f.find(from), from.size(), to);
    CHECK(f == slurp(dir / "h.json"));
}

TEST_CASE("build rejects bad rules and dims with JSON errors") {
    fs::path dir = fresh_dir("badbuild");
    CmdResult bad_ca = run_cli("build --lattice fractal --ca 'garbage(' --dims 6 6 3 --out " +
                                   (dir / "x.json").string(),
                               dir);
    CHECK(bad_ca.code == 2);
    CHECK(parse(bad_ca.err).at("exit_code") == 2);
    CHECK(parse(bad_ca.err).contains("error"));

    CmdResult bad_dims = run_cli("build --lattice square --dims 4 --out " +
                                     (dir / "y.json").string(),
                                 dir);
    CHECK(bad_dims.code == 2);
    CHECK(parse(bad_dims.err).contains("error"));
}

TEST_CASE("compile emits the reduced circuit and a faithful summary") {
    fs::path dir = fresh_dir("compile");
    REQUIRE(run_cli("build --lattice square --dims 4 4 --out " +
                        (dir / "s.json").string(),
                    dir)
                .code == 0);
    CmdResult r = run_cli("compile --spec " + (dir / "s.json").string() + " --out " +
                              (dir / "c.txt").string() + " --summary " +
                              (dir / "sum.json").string(),
                          dir);
    REQUIRE(r.code == 0);
    CHECK(slurp(dir / "c.txt") == to_text(compile_pump(build_square(4, 4)).reduced));
    nlohmann::json sum = parse(slurp(dir / "sum.json"));
    CHECK(sum.at("cz_count") == 12);  // one CZ per perimeter edge
    CHECK(sum.at("s_count") == 0);
    CHECK(sum.at("octant") == 6);
    CHECK(sum.at("bulk_clean") == true);

    REQUIRE(run_cli("build --lattice union-jack --dims 3 --out " +
                        (dir / "uj.json").string(),
                    dir)
                .code == 0);
    REQUIRE(run_cli("compile --spec " + (dir / "uj.json").string() + " --out " +
                        (dir / "ujc.txt").string() + " --summary " +
                        (dir / "ujsum.json").string(),
                    dir)
                .code == 0);
    nlohmann::json ujsum = parse(slurp(dir / "ujsum.json"));
    CHECK(ujsum.at("s_count") == 0);
    CHECK(ujsum.at("sdg_count") == 0);
    CHECK(ujsum.at("z_count") == 4);

    REQUIRE(run_cli("build --lattice triangular --dims 4 --out " +
                        (dir / "tri.json").string(),
                    dir)
                .code == 0);
    REQUIRE(run_cli("compile --spec " + (dir / "tri.json").string() + " --out " +
                        (dir / "tric.txt").string() + " --summary " +
                        (dir / "trisum.json").string(),
                    dir)
                .code == 0);
    nlohmann::json trisum = parse(slurp(dir / "trisum.json"));
    CHECK(trisum.at("s_count") == 3);
    CHECK(trisum.at("sdg_count") == 6);
    CHECK(trisum.at("z_count") == 1);
}

TEST_CASE("verify passes clean circuits and names broken stabilizers") {
    fs::path dir = fresh_dir("verify");
    REQUIRE(run_cli("build --lattice square --dims 3 4 --out " +
                        (dir / "s.json").string(),
                    dir)
                .code == 0);
    REQUIRE(run_cli("compile --spec " + (dir / "s.json").string() + " --out " +
                        (dir / "c.txt").string(),
                    dir)
                .code == 0);
    CmdResult ok = run_cli("verify --spec " + (dir / "s.json").string() +
                               " --circuit " + (dir / "c.txt").string(),
                           dir);
    CHECK(ok.code == 0);
    CHECK(parse(ok.out).at("pass") == true);

    // Drop the first CZ line.
    std::string circ = slurp(dir / "c.txt");
    const std::size_t pos = circ.find("CZ ");
    REQUIRE(pos != std::string::npos);
    circ.erase(pos, circ.find('\n', pos) - pos + 1);
    spit(dir / "mut.txt", circ);
    CmdResult bad = run_cli("verify --spec " + (dir / "s.json").string() +
                                " --circuit " + (dir / "mut.txt").string(),
                            dir);
    CHECK(bad.code == 1);
    nlohmann::json rep = parse(bad.out);
    CHECK(rep.at("pass") == false);
    bool named = false;
    for (const auto& f : rep.at("failures"))
        if (f.get<std::string>().find("boundary site") != std::string::npos)
            named = true;
    CHECK(named);
}

TEST_CASE("symcheck reports concrete and polynomial certificates") {
    fs::path dir = fresh_dir("symcheck");
    REQUIRE(run_cli("build --lattice square --dims 3 3 --out " +
                        (dir / "s.json").string(),
                    dir)
                .code == 0);
    CmdResult sq = run_cli("symcheck --spec " + (dir / "s.json").string(), dir);
    CHECK(sq.code == 0);
    CHECK(parse(sq.out).at("pass") == true);
    CHECK(parse(sq.out).at("certificates").empty());

    REQUIRE(run_cli("build --lattice honeycomb --dims 4 3 2 --out " +
                        (dir / "h.json").string(),
                    dir)
                .code == 0);
    CmdResult hc = run_cli("symcheck --spec " + (dir / "h.json").string(), dir);
    CHECK(hc.code == 0);
    nlohmann::json rep = parse(hc.out);
    CHECK(rep.at("certificates").size() == 4);
    for (const auto& c : rep.at("certificates")) CHECK(c.at("vanishes") == true);
}

TEST_CASE("perturb reproduces the closed form and enforces seeds") {
    fs::path dir = fresh_dir("perturb");
    REQUIRE(run_cli("build --lattice square --dims 3 3 --out " +
                        (dir / "s.json").string(),
                    dir)
                .code == 0);
    CmdResult zero = run_cli("perturb --spec " + (dir / "s.json").string() +
                                 " --kind Z_TYPE --eps 0 --seed 1 --samples 50",
                             dir);
    REQUIRE(zero.code == 0);
    CHECK(parse(zero.out).at("p_fail_exact") == 0.0);

    CmdResult r = run_cli("perturb --spec " + (dir / "s.json").string() +
                              " --kind Z_TYPE --eps 0.1 --seed 1 --samples 50",
                          dir);
    REQUIRE(r.code == 0);
    const double c = std::cos(std::numbers::pi_v<double> * 0.1);
    const double expected = 0.5 * (1.0 - std::pow(c, 4));
    CHECK(parse(r.out).at("p_fail_exact").get<double>() ==
          doctest::Approx(expected).epsilon(1e-10));

    CmdResult no_seed = run_cli("perturb --spec " + (dir / "s.json").string() +
                                    " --kind Z_TYPE --eps 0.1",
                                dir);
    CHECK(no_seed.code == 2);
    CHECK(parse(no_seed.err).contains("error"));

    CmdResult bad_kind = run_cli("perturb --spec " + (dir / "s.json").string() +
                                     " --kind Y_TYPE --eps 0.1 --seed 1",
                                 dir);
    CHECK(bad_kind.code == 2);
}

TEST_CASE("perturb reports the qubit cap as exit 3") {
    fs::path dir = fresh_dir("cap");
    REQUIRE(run_cli("build --lattice fcc --dims 2 2 2 --out " +
                        (dir / "f.json").string(),
                    dir)
                .code == 0);
    CmdResult r = run_cli("perturb --spec " + (dir / "f.json").string() +
                              " --kind X_TYPE --eps 0.05 --seed 1",
                          dir);
    CHECK(r.code == 3);
    CHECK(parse(r.err).at("exit_code") == 3);
}

TEST_CASE("sweep writes a deterministic CSV with fitted exponents") {
    fs::path dir = fresh_dir("sweep");
    spit(dir / "cfg.json", R"({
      "family": "square",
      "sizes": [[3, 3]],
      "epsilons": [0.02, 0.04, 0.08],
      "kind": "Z_TYPE",
      "n_samples": 50,
      "seed": 2
    })");
    const std::string args = "sweep --config " + (dir / "cfg.json").string() +
                             " --out " + (dir / "r.csv").string();
    CmdResult a = run_cli(args, dir);
    REQUIRE(a.code == 0);
    std::string csv = slurp(dir / "r.csv");
    CHECK(csv.rfind("lattice,nx,ny,n_boundary,kind,epsilon,seed,p_fail_exact,"
                    "p_fail_sampled,fidelity_post,accept_rule\n",
                    0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
    nlohmann::json j = parse(a.out);
    REQUIRE(j.at("epsilon_slopes").size() == 1);
    const double slope = j.at("epsilon_slopes")[0].at("slope").get<double>();
    CHECK(slope > 1.9);
    CHECK(slope < 2.1);

    CmdResult b = run_cli(args, dir);
    CHECK(b.out == a.out);
    CHECK(slurp(dir / "r.csv") == csv);
}

TEST_CASE("usage errors are machine readable") {
    fs::path dir = fresh_dir("usage");
    CmdResult none = run_cli("", dir);
    CHECK(none.code == 2);
    CHECK(parse(none.err).at("exit_code") == 2);

    CmdResult unknown = run_cli("frobnicate", dir);
    CHECK(unknown.code == 2);

    CmdResult help = run_cli("--help", dir);
    CHECK(help.code == 0);
    CHECK(help.out.find("Subcommands") != std::string::npos);
}
