#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "rgg/cli.hpp"

using namespace rgg;
namespace fs = std::filesystem;

namespace {

struct CliRun {
    int code;
    std::string out;
    std::string err;
};

CliRun run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("rgg_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("cli: sample writes a readable point file") {
    TempDir tmp;
    const std::string pts = tmp.file("pts.txt");
    const CliRun r = run({"sample", "--n", "200", "--d", "2", "--seed", "7", "--out", pts});
    REQUIRE(r.code == 0);
    const PointSet ps = read_point_set(pts);
    REQUIRE(ps.box.intensity_n == 200.0);
    REQUIRE(ps.seed == 7);
    REQUIRE(ps.coords == sample_poisson(BoxSpec(200.0, 2), 7).coords);
}

TEST_CASE("cli: build, construct, verify round trip") {
    TempDir tmp;
    const std::string pts = tmp.file("pts.txt");
    const std::string graph = tmp.file("g.txt");
    const std::string cycle = tmp.file("c.txt");
    const std::string report = tmp.file("report.json");

    REQUIRE(run({"sample", "--n", "500", "--d", "2", "--seed", "1", "--out", pts}).code == 0);

    // Radius from the constructive run so the two files agree.
    const CliRun built = run({"construct", "--points", pts, "--margin", "6", "--c", "3", "--m",
                              "4", "--report", report, "--cycle-out", cycle});
    REQUIRE(built.code == 0);
    std::ifstream rep(report);
    nlohmann::json j;
    rep >> j;
    REQUIRE(j["outcome"] == "cycle");
    const double r = j["radius"].get<double>();

    REQUIRE(run({"build", "--points", pts, "--model", "gilbert", "--r", format_double(r),
                 "--out", graph}).code == 0);
    const CliRun ok = run({"verify", "--graph", graph, "--cycle", cycle});
    REQUIRE(ok.code == 0);
    REQUIRE(ok.out == "VALID\n");

    // Tamper with the cycle: swap two entries.
    HamiltonCycle c;
    {
        std::ifstream is(cycle);
        c = read_cycle(is);
    }
    std::swap(c.order[0], c.order[c.order.size() / 2]);
    {
        std::ofstream os(cycle);
        write_cycle(os, c);
    }
    const CliRun bad = run({"verify", "--graph", graph, "--cycle", cycle});
    REQUIRE(bad.code == 1);
    REQUIRE(bad.out == "INVALID\n");
}

TEST_CASE("cli: hitting matches the library") {
    TempDir tmp;
    const std::string pts = tmp.file("pts.txt");
    REQUIRE(run({"sample", "--n", "60", "--d", "2", "--seed", "4", "--out", pts}).code == 0);
    const CliRun r = run({"hitting", "--points", pts, "--property", "hamiltonian", "--format",
                          "json"});
    REQUIRE(r.code == 0);
    const nlohmann::json j = nlohmann::json::parse(r.out);
    const PointSet ps = read_point_set(pts);
    const HittingResult expect =
        hitting_radius(ps, MonotoneProperty::hamiltonian(), Norm::euclidean());
    REQUIRE(j["radius"].get<double>() == expect.radius);
    REQUIRE(j["exact"].get<bool>() == expect.exact);

    const CliRun text = run({"hitting", "--points", pts, "--property", "connected"});
    REQUIRE(text.code == 0);
    REQUIRE(text.out.find("# config:") == 0);
    REQUIRE(text.out.find("radius=") != std::string::npos);
}

TEST_CASE("cli: knn hitting degree mode") {
    TempDir tmp;
    const std::string pts = tmp.file("pts.txt");
    REQUIRE(run({"sample", "--n", "120", "--d", "2", "--seed", "8", "--out", pts}).code == 0);
    const CliRun r =
        run({"hitting", "--points", pts, "--property", "connected", "--mode", "k"});
    REQUIRE(r.code == 0);
    const PointSet ps = read_point_set(pts);
    const int expect = hitting_k(ps, MonotoneProperty::connected(), Norm::euclidean());
    REQUIRE(r.out.find("k=" + std::to_string(expect)) != std::string::npos);
}

TEST_CASE("cli: experiment summary and csv") {
    TempDir tmp;
    const std::string csv = tmp.file("trials.csv");
    const std::string json = tmp.file("summary.json");
    const CliRun r = run({"experiment", "--kind", "coincidence", "--n", "25", "--trials", "6",
                          "--seed", "3", "--csv-out", csv, "--json-out", json});
    REQUIRE(r.code == 0);
    std::ifstream is(csv);
    std::string line;
    REQUIRE(std::getline(is, line));
    REQUIRE(line.rfind("# config:", 0) == 0);
    REQUIRE(std::getline(is, line));
    REQUIRE(line == "seed,count,h_mindeg2,h_2conn,h_ham,eq_deg,eq_ham,resolved,ms");
    std::ifstream js(json);
    nlohmann::json j;
    js >> j;
    REQUIRE(j["config"]["kind"] == "coincidence");
    REQUIRE(j["trials"] == 6);
}

TEST_CASE("cli: alpha parameterization resolves the radius") {
    TempDir tmp;
    const std::string pts = tmp.file("pts.txt");
    const std::string graph = tmp.file("g.txt");
    REQUIRE(run({"sample", "--n", "100", "--d", "2", "--seed", "2", "--out", pts}).code == 0);
    const CliRun r =
        run({"build", "--points", pts, "--model", "gilbert", "--alpha", "0", "--out", graph});
    REQUIRE(r.code == 0);
    REQUIRE(r.err.find("resolved r=") != std::string::npos);
    const GeometricGraph g = read_graph(graph);
    const double pi = 4.0 * std::atan(1.0);
    REQUIRE(g.param_r == Catch::Approx(std::sqrt(std::log(100.0) / pi)));
}

TEST_CASE("cli: exit codes") {
    REQUIRE(run({"frobnicate"}).code == 2);
    REQUIRE(run({"sample", "--bogus-flag", "1"}).code == 2);
    REQUIRE(run({"sample"}).code == 2);  // missing required options
    REQUIRE(run({"--help"}).code == 0);
    TempDir tmp;
    REQUIRE(run({"hitting", "--points", tmp.file("missing.txt"), "--property", "connected"})
                .code == 1);
}

TEST_CASE("cli: config file merges with flags winning") {
    TempDir tmp;
    const std::string cfg = tmp.file("cfg.ini");
    const std::string pts = tmp.file("pts.txt");
    {
        std::ofstream os(cfg);
        os << "[sample]\n";
        os << "n=80\n";
        os << "seed=5\n";
        os << "out=" << pts << "\n";
    }
    const CliRun r = run({"sample", "--config", cfg, "--seed", "9"});
    REQUIRE(r.code == 0);
    const PointSet ps = read_point_set(pts);
    REQUIRE(ps.box.intensity_n == 80.0);  // from config
    REQUIRE(ps.seed == 9);                // flag wins
}

TEST_CASE("cli: construct failure still writes the report and exits 1") {
    TempDir tmp;
    const std::string pts = tmp.file("pts.txt");
    const std::string report = tmp.file("report.json");
    REQUIRE(run({"sample", "--n", "300", "--d", "2", "--seed", "11", "--out", pts}).code == 0);
    // Margin below 1 sits under the 2-connectivity radius: guaranteed failure.
    const CliRun r = run({"construct", "--points", pts, "--margin", "0.5", "--c", "3", "--m",
                          "2", "--report", report});
    REQUIRE(r.code == 1);
    std::ifstream is(report);
    nlohmann::json j;
    is >> j;
    REQUIRE(j["outcome"] == "failed");
    REQUIRE(j.contains("failed_stage"));
}
