#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "ahltl/cli.hpp"
#include "ahltl/corpus.hpp"
#include "ahltl/formula.hpp"
#include "ahltl/model.hpp"
#include "ahltl/synccheck.hpp"
#include "json.hpp"

using namespace ahltl;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run_cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string corpus_path(const std::string& name) { return std::string(AHLTL_SOURCE_DIR) + "/corpus/" + name; }

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch_dir(const std::string& name) {
    fs::path dir = fs::temp_directory_path() / ("ahltl_cli_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("check through the stuttering route") {
    Run r = run_cli({"check", "--model", corpus_path("prog2.kr"), "--formula", corpus_path("od.ahltl")});
    CHECK(r.code == cli::kExitHolds);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["schema"] == cli::kReportSchema);
    CHECK(j["command"] == "check");
    CHECK(j["method"] == "stutter");
    CHECK(j["verdict"] == "HOLDS");
    CHECK(j["classification"] == "SimpleAdmissible");
    CHECK(j["model_sizes"]["states"] == 4);
    CHECK(j["model_sizes"]["stuttered"]["states"] == 8);
}

TEST_CASE("lockstep reading of observational determinism fails with a witness") {
    Run r = run_cli({"check", "--model", corpus_path("prog2.kr"), "--formula", corpus_path("od.ahltl"), "--semantics",
                     "sync"});
    CHECK(r.code == cli::kExitFails);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["verdict"] == "FAILS");
    REQUIRE(j["witness"].size() == 2);
    CHECK(nlohmann::ordered_json::parse(r.out)["witness"][0].begin().key() == "var");
}

TEST_CASE("a formula outside every fragment is refused unless the oracle is requested") {
    Run r = run_cli({"check", "--model", corpus_path("selfloop.kr"), "--formula", corpus_path("selfloop.ahltl")});
    CHECK(r.code == cli::kExitFragment);
    CHECK(r.err.find("--semantics oracle") != std::string::npos);

    Run o = run_cli({"check", "--model", corpus_path("selfloop.kr"), "--formula", corpus_path("selfloop.ahltl"),
                     "--semantics", "oracle", "--trace-bound", "4", "--traj-bound", "4"});
    CHECK(o.code == cli::kExitFails);
    auto j = nlohmann::json::parse(o.out);
    CHECK(j["bounds"]["trace"] == 4);
    CHECK(j["witness"].size() == 2);
}

TEST_CASE("an inconclusive oracle run uses the resource exit code") {
    fs::path dir = scratch_dir("inconclusive");
    std::ofstream(dir / "f.ahltl") << "forall p. E X (a[p] | b[p])\n";
    Run r = run_cli({"check", "--model", corpus_path("selfloop.kr"), "--formula", (dir / "f.ahltl").string(),
                     "--semantics", "oracle", "--trace-bound", "3", "--traj-bound", "2"});
    CHECK(r.code == cli::kExitResource);
    CHECK(nlohmann::json::parse(r.out)["verdict"] == "INCONCLUSIVE");
}

TEST_CASE("usage and input errors") {
    CHECK(run_cli({}).code == cli::kExitUsage);
    CHECK(run_cli({"check", "--model"}).code == cli::kExitUsage);
    CHECK(run_cli({"check", "--model", "/nonexistent.kr", "--formula", corpus_path("od.ahltl")}).code ==
          cli::kExitUsage);
    CHECK(run_cli({"check", "--model", corpus_path("prog2.kr"), "--formula", corpus_path("od.ahltl"), "--semantics",
                   "fast"})
              .code == cli::kExitUsage);
    fs::path dir = scratch_dir("bad");
    std::ofstream(dir / "bad.ahltl") << "forall p. E a[p] &&\n";
    Run r = run_cli({"classify", "--formula", (dir / "bad.ahltl").string()});
    CHECK(r.code == cli::kExitUsage);
    CHECK(r.err.find("parse error: 1:") != std::string::npos);
    CHECK(run_cli({"--help"}).code == 0);
}

TEST_CASE("classify reports the fragment and suggested method") {
    Run r = run_cli({"classify", "--formula", corpus_path("lnz.ahltl")});
    CHECK(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["classification"] == "SimpleAdmissible");
    CHECK(j["method"] == "accel");
    CHECK(j["phase"][0]["props"] == nlohmann::json::array({"history"}));

    Run f = run_cli({"classify", "--formula", corpus_path("selfloop.ahltl")});
    CHECK(nlohmann::json::parse(f.out)["method"] == "oracle");
}

TEST_CASE("transform writes a synchronous instance") {
    fs::path dir = scratch_dir("transform");
    const std::string prefix = (dir / "od").string();
    Run r = run_cli({"transform", "--model", corpus_path("prog1.kr"), "--formula", corpus_path("od.ahltl"), "--out",
                     prefix});
    REQUIRE(r.code == 0);
    KripkeStructure k = parse_kripke(slurp(prefix + ".kr"));
    Formula f = parse_formula(slurp(prefix + ".hltl"));
    CHECK(f.is_hyperltl());
    CHECK(k.prop_index("st") >= 0);
    CHECK(check_hyperltl(k, f).verdict == Verdict::Holds);
}

TEST_CASE("gadget commands") {
    Run pcp = run_cli({"gadget", "pcp", "--dominos", "b/ca,a/ab,ca/a,abc/c"});
    CHECK(pcp.code == 0);
    auto j = nlohmann::json::parse(pcp.out);
    CHECK(j["model_sizes"]["states"] == 2 + 2 * 13);
    CHECK(parse_formula(j["formula"].get<std::string>()).prefix.size() == 2);

    fs::path dir = scratch_dir("pspace");
    std::ofstream(dir / "k.kr") << "aps: a\ninit: s\nstate s {a}\nstate t {}\ntrans s -> t\ntrans t -> t\n";
    std::ofstream(dir / "f.hltl") << "forall p. forall q. G (a[p] <-> a[q])\n";
    Run ps = run_cli({"gadget", "pspace", "--model", (dir / "k.kr").string(), "--formula", (dir / "f.hltl").string(),
                      "--out", (dir / "g").string()});
    CHECK(ps.code == 0);
    CHECK(parse_kripke(slurp(dir / "g.kr")).num_states() == 4);
    CHECK(parse_formula(slurp(dir / "g.ahltl")).modality == Modality::E);
}

TEST_CASE("bundled corpus files match the embedded texts") {
    for (const auto& f : corpus_files()) {
        CAPTURE(f.name);
        CHECK(slurp(corpus_path(f.name)) == f.text);
    }
    CHECK_THROWS_AS(corpus_text("missing.kr"), Error);

    fs::path dir = scratch_dir("corpus");
    Run r = run_cli({"corpus", "--out", dir.string()});
    CHECK(r.code == 0);
    for (const auto& f : corpus_files()) CHECK(slurp(dir / f.name) == f.text);
}
