#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "ehz/run.hpp"
#include "test_support.hpp"

using namespace ehz;
using namespace ehz::testing;

namespace {

struct RunOutcome {
    int exit_code = -1;
    std::string out;
    std::string err;
    Json report;
};

RunOutcome run(RunConfig cfg, bool parse_report = true) {
    static int counter = 0;
    if (parse_report && cfg.output.empty())
        cfg.output = "/tmp/ehz_cli_" + std::to_string(counter++) + ".json";
    std::ostringstream out, err;
    RunOutcome r;
    r.exit_code = run_command(cfg, out, err);
    r.out = out.str();
    r.err = err.str();
    if (parse_report && r.exit_code == 0) {
        std::ifstream in(cfg.output);
        REQUIRE(in.good());
        in >> r.report;
        std::remove(cfg.output.c_str());
    }
    return r;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run_binary(const std::string& args) {
    const std::string cmd = std::string(EHZ_BINARY_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("capacity command writes a full report") {
    RunConfig cfg;
    cfg.command = "capacity";
    cfg.input = fixture("square.json");
    const auto r = run(cfg);
    REQUIRE(r.exit_code == 0);
    CHECK(r.report.at("capacity").get<double>() == doctest::Approx(4.0));
    CHECK(r.report.at("mode") == "exact");
    CHECK(r.report.at("beta").size() == 4);
    // facet indices are 1-based in reports
    int smallest = 99;
    for (const auto& s : r.report.at("sigma")) smallest = std::min(smallest, s.get<int>());
    CHECK(smallest == 1);
    CHECK_FALSE(r.report.at("orbit").is_null());
    CHECK(r.report.at("diagnostics").contains("nodes"));
    CHECK(r.out.find("capacity = 4") != std::string::npos);
}

TEST_CASE("reports are byte deterministic") {
    RunConfig cfg;
    cfg.command = "capacity";
    cfg.input = fixture("cube4.json");
    cfg.output = "/tmp/ehz_det_a.json";
    std::ostringstream sink;
    REQUIRE(run_command(cfg, sink, sink) == 0);
    cfg.output = "/tmp/ehz_det_b.json";
    REQUIRE(run_command(cfg, sink, sink) == 0);
    CHECK(read_file("/tmp/ehz_det_a.json") == read_file("/tmp/ehz_det_b.json"));
    std::remove("/tmp/ehz_det_a.json");
    std::remove("/tmp/ehz_det_b.json");
}

TEST_CASE("mode dispatch") {
    RunConfig cfg;
    cfg.command = "capacity";
    cfg.input = fixture("cube4.json");

    cfg.mode = "symmetric";
    auto r = run(cfg);
    REQUIRE(r.exit_code == 0);
    CHECK(r.report.at("capacity").get<double>() == doctest::Approx(4.0));

    cfg.mode = "pruned";
    r = run(cfg);
    REQUIRE(r.exit_code == 0);
    CHECK(r.report.at("capacity").get<double>() == doctest::Approx(4.0));

    cfg.mode = "heuristic";
    cfg.input = fixture("square.json");
    r = run(cfg);
    REQUIRE(r.exit_code == 0);
    CHECK(r.report.at("mode") == "heuristic");
    CHECK(r.report.at("orbit").is_null());
    CHECK(r.report.at("capacity").get<double>() >= 4.0 - 1e-9);

    cfg.mode = "bogus";
    CHECK(run(cfg, false).exit_code == 2);
}

TEST_CASE("orbit command verifies its own certificate") {
    RunConfig cfg;
    cfg.command = "orbit";
    cfg.input = fixture("triangle.json");
    const auto r = run(cfg);
    REQUIRE(r.exit_code == 0);
    CHECK(r.report.at("verification").at("all_passed").get<bool>());
    CHECK_FALSE(r.report.at("orbit").is_null());

    RunConfig bad = cfg;
    bad.mode = "heuristic";
    CHECK(run(bad, false).exit_code == 2);
}

TEST_CASE("cut check accepts explicit planes and random cuts") {
    RunConfig cfg;
    cfg.command = "cut-check";
    cfg.input = fixture("square.json");
    Vec n(2);
    n << 1.0, 0.0;
    cfg.cut_normals = {n, n, n};
    cfg.cut_offsets = {0.0, 0.25, -0.4};
    auto r = run(cfg);
    REQUIRE(r.exit_code == 0);
    CHECK(r.report.at("all_hold").get<bool>());
    CHECK(r.report.at("cuts").size() == 3);
    const double total = r.report.at("capacity").get<double>();
    for (const auto& c : r.report.at("cuts")) {
        CHECK(c.at("holds").get<bool>());
        // planar pieces partition the area
        CHECK(total == doctest::Approx(c.at("sum").get<double>()).epsilon(1e-9));
    }

    RunConfig rnd;
    rnd.command = "cut-check";
    rnd.input = fixture("triangle.json");
    rnd.samples = 4;
    rnd.seed = 5;
    r = run(rnd);
    REQUIRE(r.exit_code == 0);
    CHECK(r.report.at("all_hold").get<bool>());
}

TEST_CASE("gen writes deterministic fixtures") {
    RunConfig cfg;
    cfg.command = "gen";
    cfg.shape = "random";
    cfg.n = 1;
    cfg.facets = 6;
    cfg.seed = 77;
    cfg.output = "/tmp/ehz_gen_a.json";
    std::ostringstream sink;
    REQUIRE(run_command(cfg, sink, sink) == 0);
    cfg.output = "/tmp/ehz_gen_b.json";
    REQUIRE(run_command(cfg, sink, sink) == 0);
    CHECK(read_file("/tmp/ehz_gen_a.json") == read_file("/tmp/ehz_gen_b.json"));
    const HPolytope K = load_polytope("/tmp/ehz_gen_a.json");
    CHECK(K.facet_count() == 6);
    std::remove("/tmp/ehz_gen_a.json");
    std::remove("/tmp/ehz_gen_b.json");

    RunConfig bad = cfg;
    bad.shape = "torus";
    bad.output = "/tmp/ehz_gen_c.json";
    CHECK(run_command(bad, sink, sink) == 2);
}

TEST_CASE("input failures exit with the documented codes") {
    RunConfig cfg;
    cfg.command = "capacity";

    cfg.input = fixture("nosuch.json");
    CHECK(run(cfg, false).exit_code == 2);

    cfg.input = fixture("malformed.json");
    CHECK(run(cfg, false).exit_code == 2);

    cfg.input = fixture("unbounded.json");
    CHECK(run(cfg, false).exit_code == 2);

    // facet count past the exact limit is a solver-side failure
    cfg.input = fixture("cross4.json");
    cfg.mode = "exact";
    CHECK(run(cfg, false).exit_code == 3);
}

TEST_CASE("binary round trip") {
    CHECK(run_binary("capacity --in " + fixture("square.json")) == 0);
    CHECK(run_binary("capacity --in " + fixture("nosuch.json")) == 2);
    CHECK(run_binary("capacity --in " + fixture("cross4.json")) == 3);
    CHECK(run_binary("orbit --in " + fixture("unit_square.json")) == 0);

    const std::string out = "/tmp/ehz_bin_gen.json";
    REQUIRE(run_binary("gen random --n 1 --facets 5 --seed 9 --out " + out) == 0);
    const std::string first = read_file(out);
    REQUIRE(run_binary("gen random --n 1 --facets 5 --seed 9 --out " + out) == 0);
    CHECK(first == read_file(out));
    CHECK(load_polytope(out).facet_count() == 5);
    std::remove(out.c_str());
}

TEST_CASE("self test canary notices a flipped form") {
    CHECK(run_binary("selftest --quick --inject omega-sign") == 4);
}
