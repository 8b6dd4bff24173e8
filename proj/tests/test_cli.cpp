#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <catch_amalgamated.hpp>
#include <json.hpp>

#include "jlt/finite_gap_set.hpp"
#include "jlt/io.hpp"

namespace fs = std::filesystem;
using namespace jlt;
using io::json;
using Catch::Matchers::WithinAbs;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("jacobi_lt_cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

fs::path write_config(const fs::path& dir, const json& config) {
    const fs::path path = dir / "config.json";
    std::ofstream(path) << config.dump(2);
    return path;
}

int run(const std::string& args) {
    const std::string cmd = std::string(JACOBI_LT_BIN) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

const json kFree = {{"period", 1}, {"a", {1}}, {"b", {0}}};
const json kRank1 = {{"n0", 0}, {"db", {{1.5, 0}}}};

}  // namespace

TEST_CASE("spectrum of the period-two background") {
    const auto dir = scratch("spectrum");
    const auto cfg = write_config(dir, {{"background", {{"period", 2}, {"a", {1, 2}}, {"b", {0, 0}}}},
                                        {"outputs", {{"dir", "out"}, {"formats", {"json"}}}}});
    REQUIRE(run("spectrum -c " + cfg.string()) == 0);
    const auto e = io::gap_set_from_json(json::parse(slurp(dir / "out" / "bands.json")));
    REQUIRE(e.band_count() == 2);
    CHECK_THAT(e.bands()[0].lo, WithinAbs(-3.0, 1e-10));
    CHECK_THAT(e.bands()[0].hi, WithinAbs(-1.0, 1e-10));
    CHECK_THAT(e.bands()[1].lo, WithinAbs(1.0, 1e-10));
    CHECK_THAT(e.bands()[1].hi, WithinAbs(3.0, 1e-10));
}

TEST_CASE("eig writes the rank-one eigenvalue and is byte-deterministic") {
    const auto dir = scratch("eig");
    const auto cfg = write_config(dir, {{"background", kFree}, {"perturbation", kRank1},
                                        {"outputs", {{"dir", "out"}, {"formats", {"csv", "json", "svg"}}}}});
    REQUIRE(run("eig -c " + cfg.string()) == 0);
    const std::string first = slurp(dir / "out" / "eigenvalues.csv");
    std::istringstream in(first);
    const auto evs = io::read_eigenvalue_csv(in);
    REQUIRE(evs.size() == 1);
    CHECK_THAT(evs[0].z.real(), WithinAbs(2.5, 1e-10));
    CHECK_THAT(evs[0].z.imag(), WithinAbs(0.0, 1e-10));
    CHECK(evs[0].multiplicity == 1);
    CHECK(fs::exists(dir / "out" / "eigenvalues.svg"));

    REQUIRE(run("eig -c " + cfg.string()) == 0);
    CHECK(slurp(dir / "out" / "eigenvalues.csv") == first);
}

TEST_CASE("lt-report ratio and csv round trip") {
    const auto dir = scratch("report");
    const auto cfg = write_config(dir, {{"background", kFree}, {"perturbation", kRank1},
                                        {"outputs", {{"dir", "out"}, {"formats", {"csv", "json"}}}}});
    REQUIRE(run("lt-report -c " + cfg.string() + " --spec lt-nsa -p 1 --eps 0.1") == 0);
    const json report = json::parse(slurp(dir / "out" / "report.json"));
    CHECK_THAT(report["ratio"].get<double>(), WithinAbs(0.682, 1e-3));
    CHECK(report["spec"] == "lt-nsa");

    // lhs recomputed from the emitted CSV matches exactly
    std::istringstream in(slurp(dir / "out" / "eigenvalues.csv"));
    const auto evs = io::read_eigenvalue_csv(in);
    const FiniteGapSet e({{-2.0, 2.0}});
    const auto spec = InequalitySpec::make(InequalityKind::LT_NSA, 1.0, 0.1);
    double lhs = 0.0;
    for (const auto& r : evs) lhs += r.multiplicity * eigenvalue_weight(r.z, e, spec);
    CHECK(lhs == report["lhs"].get<double>());
}

TEST_CASE("sweep output is deterministic across runs") {
    const auto dir = scratch("sweep");
    const json dj = {{"n0", -1}, {"da", {{0.4, 0.3}, {0, 0}}}, {"db", {{0, 1.2}, {0.8, -0.4}}}, {"dc", {{0.1, 0}, {0.6, 0.6}}}};
    const auto cfg = write_config(dir, {{"background", {{"a", {1, 1}}, {"b", {1, -1}}}}, {"perturbation", dj},
                                        {"spec", {{"kind", "kato-nsa"}, {"p", 2}}},
                                        {"sweep", {{"t", {0.01, 0.3, 3.0}}}},
                                        {"outputs", {{"dir", "out"}, {"formats", {"csv", "json"}}}}});
    REQUIRE(run("sweep -c " + cfg.string()) == 0);
    const std::string csv = slurp(dir / "out" / "sweep.csv");
    const std::string js = slurp(dir / "out" / "sweep.json");
    REQUIRE(run("sweep -c " + cfg.string()) == 0);
    CHECK(slurp(dir / "out" / "sweep.csv") == csv);
    CHECK(slurp(dir / "out" / "sweep.json") == js);
    const json parsed = json::parse(js);
    CHECK(parsed["reports"].size() == 3);
    CHECK(io::spec_from_json(parsed["spec"]).kind == InequalityKind::KATO_NSA);
}

TEST_CASE("eps = 0 runs as an exploratory report") {
    const auto dir = scratch("explore");
    const auto cfg = write_config(dir, {{"background", kFree}, {"perturbation", kRank1}, {"outputs", {{"dir", "out"}}}});
    REQUIRE(run("lt-report -c " + cfg.string() + " --spec lt-nsa -p 1 --eps 0") == 0);
    CHECK(json::parse(slurp(dir / "out" / "report.json"))["exploratory"] == true);
}

TEST_CASE("errors map to exit codes and an error json") {
    const auto dir = scratch("errors");
    CHECK(run("") == 2);
    CHECK(run("eig -c " + (dir / "missing.json").string()) == 2);

    const auto no_dj = write_config(dir, {{"background", kFree}, {"outputs", {{"dir", "out"}}}});
    CHECK(run("eig -c " + no_dj.string()) == 2);
    const json err = json::parse(slurp(dir / "out" / "error.json"));
    CHECK(err["error"]["kind"] == "usage");

    const auto mismatch = write_config(dir, {{"background", kFree}, {"perturbation", {{"n0", 0}, {"db", {{0, 1}}}}},
                                             {"outputs", {{"dir", "out"}}}});
    CHECK(run("lt-report -c " + mismatch.string() + " --spec lt-sa -p 1") == 2);

    const auto on_e = write_config(dir, {{"measure", {{"bands", {{-2, 2}}}}}, {"spec", {{"p", 2}}},
                                         {"points", {{0.5, 0}}}, {"outputs", {{"dir", "out"}}}});
    CHECK(run("thm22 -c " + on_e.string()) == 3);
    CHECK(json::parse(slurp(dir / "out" / "error.json"))["error"]["kind"] == "domain");
}
