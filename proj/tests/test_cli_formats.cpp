#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "torusflux/csv.hpp"
#include "torusflux/manifest.hpp"
#include "torusflux/sparse_field.hpp"

using namespace torusflux;

namespace {

std::filesystem::path temp_dir() {
    auto d = std::filesystem::temp_directory_path() / "torusflux_test";
    std::filesystem::create_directories(d);
    return d;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream is(p);
    REQUIRE(is.good());
    return std::string((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
}

int run_cli(const std::string& args, const std::filesystem::path& log) {
    std::string cmd = std::string(CLI_PATH) + " " + args + " > " + log.string() + " 2>&1";
    int rc = std::system(cmd.c_str());
    return rc == -1 ? -1 : WEXITSTATUS(rc);
}

}  // namespace

TEST_CASE("csv writer emits exact cells and enforces the shape") {
    CsvWriter csv({"a", "b", "c"});
    csv.cell(1).cell(0.5).cell(std::string("x")).end_row();
    csv.cell(2).cell(1.0 / 3.0).cell(std::string("y")).end_row();
    REQUIRE(csv.str() == "a,b,c\n1,0.5,x\n2,0.33333333333333331,y\n");
    csv.cell(3);
    REQUIRE_THROWS_AS(csv.end_row(), Error);
}

TEST_CASE("fnv1a known vectors") {
    REQUIRE(fnv1a("") == 0xcbf29ce484222325ull);
    REQUIRE(fnv1a("a") == 0xaf63dc4c8601ec8cull);
    REQUIRE(fnv1a("foobar") == 0x85944171f73967e8ull);
}

TEST_CASE("manifest records parameters, stats, and artifact hashes") {
    auto dir = temp_dir();
    auto art = dir / "art.txt";
    {
        std::ofstream os(art);
        os << "foobar";
    }
    Manifest man("unit-test");
    man.param("q", 3);
    man.param("eps", 0.125);
    man.stat("flux", 1.5);
    man.artifact(art.string());
    auto out = dir / "manifest.json";
    man.save(out.string());

    nlohmann::json j = nlohmann::json::parse(slurp(out));
    REQUIRE(j["tool_version"] == kToolVersion);
    REQUIRE(j["command"] == "unit-test");
    REQUIRE(j["parameters"]["q"] == 3);
    REQUIRE(j["parameters"]["eps"] == 0.125);
    REQUIRE(j["stats"]["flux"] == 1.5);
    REQUIRE(j["artifacts"][art.string()] == "85944171f73967e8");
    REQUIRE(j["wall_time_ms"].is_number());
}

TEST_CASE("cli: build then flux round trip") {
    auto dir = temp_dir();
    auto field = dir / "skel.field";
    auto log = dir / "log1.txt";
    REQUIRE(run_cli("build skeleton --q 3,6 --out " + field.string(), log) == 0);
    REQUIRE(std::filesystem::exists(field));
    REQUIRE(std::filesystem::exists(field.string() + ".manifest.json"));

    VelocityField u = load_field_file<2>(field.string());
    REQUIRE(u.mode_count() == 12);

    auto csv = dir / "flux.csv";
    REQUIRE(run_cli("flux --field " + field.string() + " --q-lo 2 --q-hi 7 --out " + csv.string(), log) == 0);
    std::string text = slurp(csv);
    REQUIRE(text.rfind("q,lambda_q,flux_value,method,resolution,wall_time_ms", 0) == 0);
    // 6 scales -> header + 6 rows
    REQUIRE(std::count(text.begin(), text.end(), '\n') == 7);
}

TEST_CASE("cli: invalid input exits with the validation code") {
    auto dir = temp_dir();
    auto log = dir / "log2.txt";
    int rc = run_cli("build skeleton --q 3,4 --out " + (dir / "bad.field").string(), log);
    REQUIRE(rc == 2);
    std::string text = slurp(log);
    REQUIRE(text.find("gap-rule-violation") != std::string::npos);
}

TEST_CASE("cli: trilinear and dirichlet-norms run clean") {
    auto dir = temp_dir();
    auto log = dir / "log3.txt";
    auto field = dir / "pl.field";
    REQUIRE(run_cli("build power-law --gamma 2.0 --max-freq 8 --seed 4 --out " + field.string(), log) == 0);
    REQUIRE(run_cli("trilinear --field " + field.string() + " --q 2", log) == 0);
    auto csv = dir / "dir.csv";
    REQUIRE(run_cli("dirichlet-norms --n-list 16,32,64 --p-list 1.5,3 --out " + csv.string(), log) == 0);
    REQUIRE(slurp(csv).rfind("n,", 0) == 0);
}
