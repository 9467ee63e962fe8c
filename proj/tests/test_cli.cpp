// Drives the built eseries binary end to end. The binary path comes from the
// ESERIES_CLI environment variable (set by ctest).

#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include <json.hpp>

using Json = nlohmann::json;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
};

std::string cli_path() {
    const char* p = std::getenv("ESERIES_CLI");
    REQUIRE_MESSAGE(p != nullptr, "ESERIES_CLI must point at the eseries binary");
    return p;
}

RunResult run(const std::string& args, const std::string& env_prefix = "") {
    std::string cmd = env_prefix + "'" + cli_path() + "' " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult r;
    std::array<char, 4096> buf{};
    std::size_t got;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) {
        r.out.append(buf.data(), got);
    }
    int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

}  // namespace

TEST_CASE("coeffs: json table with exact rationals") {
    auto r = run("coeffs --route d-conversion --max 5");
    REQUIRE(r.exit_code == 0);
    Json doc = Json::parse(r.out);
    CHECK(doc["command"] == "coeffs");
    CHECK(doc["status"] == "ok");
    CHECK(doc["config"]["precision_bits"] == 256);
    auto& rows = doc["rows"];
    REQUIRE(rows.size() == 5);
    CHECK(rows[4]["index"] == 5);
    CHECK(rows[4]["rational"] == "119/23040");
    CHECK(std::stod(rows[4]["decimal"].get<std::string>()) == doctest::Approx(0.0051649).epsilon(1e-4));
}

TEST_CASE("coeffs: single-row csv table at max 0") {
    auto r = run("coeffs --route b --max 0 --format csv");
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.find("index,rational,decimal\n0,1,1.0000") != std::string::npos);
    CHECK(r.out.find("# status=ok") != std::string::npos);
}

TEST_CASE("coeffs: the two d routes emit identical value columns") {
    auto conv = run("coeffs --route d-conversion --max 40");
    auto rec = run("coeffs --route d-recurrence --max 40");
    REQUIRE(conv.exit_code == 0);
    REQUIRE(rec.exit_code == 0);
    Json a = Json::parse(conv.out);
    Json b = Json::parse(rec.out);
    REQUIRE(a["rows"].size() == b["rows"].size());
    for (std::size_t i = 0; i < a["rows"].size(); ++i) {
        CHECK(a["rows"][i]["rational"] == b["rows"][i]["rational"]);
        CHECK(a["rows"][i]["decimal"] == b["rows"][i]["decimal"]);
    }
}

TEST_CASE("repeated runs are byte-identical") {
    const std::string cmd = "coeffs --route d-conversion --max 20 --format csv";
    auto a = run(cmd);
    auto b = run(cmd);
    CHECK(a.out == b.out);

    const std::string margin = "carleman --family d-series:3 --margin --max 3000";
    auto w1 = run(margin, "ESERIES_WORKERS=1 ");
    auto w4 = run(margin, "ESERIES_WORKERS=4 ");
    REQUIRE(w1.exit_code == 0);
    CHECK(w1.out == w4.out);
}

TEST_CASE("verify: clean pass and corrupted failure") {
    auto good = run("verify --max 200");
    CHECK(good.exit_code == 0);
    Json doc = Json::parse(good.out);
    CHECK(doc["status"] == "ok");

    CHECK(run("verify --max 1").exit_code == 0);
    CHECK(run("verify --max 0").exit_code == 2);

    auto bad = run("verify --max 20 --corrupt-index 5");
    CHECK(bad.exit_code == 1);
    Json bdoc = Json::parse(bad.out);
    CHECK(bdoc["status"] == "fail");
    bool found = false;
    for (const auto& row : bdoc["rows"]) {
        if (row["check"] == "route-agreement") {
            CHECK(row["status"] == "fail");
            CHECK(row["failure_index"] == 5);
            found = true;
        }
    }
    CHECK(found);
}

TEST_CASE("quad: targets pass their references") {
    auto gm = run("quad --target g-mass");
    REQUIRE(gm.exit_code == 0);
    Json doc = Json::parse(gm.out);
    CHECK(std::stod(doc["result"]["abs_diff"].get<std::string>()) < 1e-12);

    auto d3 = run("quad --target d --n 3");
    REQUIRE(d3.exit_code == 0);
    Json ddoc = Json::parse(d3.out);
    CHECK(ddoc["result"]["reference_rational"] == "5/288");

    auto h = run("quad --target h --x 1");
    CHECK(h.exit_code == 0);
}

TEST_CASE("quad: failure and usage exits") {
    CHECK(run("quad --target g-mass --max-levels 1 --quad-tolerance 1e-40").exit_code == 1);
    // The quadrature refines fine but the acceptance threshold is absurd.
    CHECK(run("quad --target g-mass --tolerance 1e-60").exit_code == 1);
    CHECK(run("quad --target d --n 1").exit_code == 2);
    CHECK(run("quad --target nope").exit_code == 2);
}

TEST_CASE("--precision-bits is honored and declared in the output") {
    auto r = run("coeffs --route b --max 2 --precision-bits 128");
    REQUIRE(r.exit_code == 0);
    Json doc = Json::parse(r.out);
    CHECK(doc["config"]["precision_bits"] == 128);
    CHECK(run("coeffs --route b --max 2 --precision-bits 16").exit_code == 2);
}

TEST_CASE("order: shift comparison at depth 1") {
    auto r = run("order --experiment shift-compare --k 1");
    REQUIRE(r.exit_code == 0);
    Json doc = Json::parse(r.out);
    REQUIRE(doc["rows"].size() == 2);
    CHECK(doc["rows"][0]["expected_exponent"] == 2);
    CHECK(doc["rows"][1]["expected_exponent"] == 3);
    CHECK(doc["rows"][0]["status"] == "pass");
    CHECK(doc["rows"][1]["status"] == "pass");
}

TEST_CASE("order: fit experiments locate their roots") {
    auto c = run("order --experiment c-fit");
    REQUIRE(c.exit_code == 0);
    Json cdoc = Json::parse(c.out);
    CHECK(std::abs(std::stod(cdoc["result"]["root"].get<std::string>())) < 1e-6);

    auto d = run("order --experiment d-fit");
    REQUIRE(d.exit_code == 0);
    Json ddoc = Json::parse(d.out);
    CHECK(std::stod(ddoc["result"]["root"].get<std::string>()) ==
          doctest::Approx(5.0 / 288.0).epsilon(1e-4));
}

TEST_CASE("carleman: margin, report, rank") {
    auto margin = run("carleman --family bicheng-debnath --margin --max 2000");
    REQUIRE(margin.exit_code == 0);
    Json mdoc = Json::parse(margin.out);
    CHECK(std::stod(mdoc["result"]["min_margin"].get<std::string>()) > 0);

    auto rep = run("carleman --family d-series --K 3 --seq geometric:1/2 --N 2000");
    REQUIRE(rep.exit_code == 0);
    Json rdoc = Json::parse(rep.out);
    CHECK(rdoc["result"]["holds"] == true);
    CHECK(rdoc["config"]["family"] == "d-series:3");

    auto rank = run("carleman --rank classical,bicheng-debnath,d-series:3 --N 500");
    REQUIRE(rank.exit_code == 0);
    Json kdoc = Json::parse(rank.out);
    REQUIRE(kdoc["rows"].size() == 3);
    CHECK(kdoc["rows"][0]["family"] == "d-series:3");

    CHECK(run("carleman --family nope --margin --max 10").exit_code == 2);
    CHECK(run("carleman --family yang:1/100 --margin --max 10").exit_code == 2);
}

TEST_CASE("--out writes the same bytes the command prints") {
    auto direct = run("coeffs --route a --max 6 --format csv");
    REQUIRE(direct.exit_code == 0);
    std::string path = "cli_out_test.csv";
    auto filed = run("coeffs --route a --max 6 --format csv --out " + path);
    REQUIRE(filed.exit_code == 0);
    CHECK(filed.out.empty());
    std::ifstream f(path, std::ios::binary);
    REQUIRE(f.good());
    std::string contents((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    CHECK(contents == direct.out);
    std::remove(path.c_str());
}

TEST_CASE("usage errors exit with 2, help with 0") {
    CHECK(run("coeffs --route nope --max 3").exit_code == 2);
    CHECK(run("nonsense").exit_code == 2);
    CHECK(run("quad --target g-mass --tolerance nonsense").exit_code == 2);
    CHECK(run("--help").exit_code == 0);
}
