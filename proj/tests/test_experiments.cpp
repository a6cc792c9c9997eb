#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

#include "rgg/experiments.hpp"

using namespace rgg;

TEST_CASE("wilson interval") {
    const WilsonInterval ci = wilson95(30, 100);
    REQUIRE(ci.lo <= 0.3);
    REQUIRE(ci.hi >= 0.3);
    const WilsonInterval wide = wilson95(30, 100);
    const WilsonInterval narrow = wilson95(3000, 10000);
    REQUIRE(narrow.hi - narrow.lo < wide.hi - wide.lo);
    // Degenerate endpoints stay inside [0, 1].
    REQUIRE(wilson95(0, 50).lo == Catch::Approx(0.0).margin(1e-12));
    REQUIRE(wilson95(50, 50).hi == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("coincidence run: chain, determinism, scheduling independence") {
    const CoincidenceResult a = run_coincidence(30.0, 24, 99, SearchBudget{}, 1);
    REQUIRE(a.summary.extra["chain_violations"] == 0);
    REQUIRE(a.records.size() == 24);
    for (const auto& rec : a.records) {
        if (!rec.valid || !rec.resolved) continue;
        REQUIRE(rec.h_mindeg2 <= rec.h_2conn);
        REQUIRE(rec.h_2conn <= rec.h_ham);
        REQUIRE(rec.eq_deg == (rec.h_mindeg2 == rec.h_2conn));
    }

    const CoincidenceResult b = run_coincidence(30.0, 24, 99, SearchBudget{}, 3);
    REQUIRE(to_json(a.summary).dump() == to_json(b.summary).dump());
    for (std::size_t i = 0; i < a.records.size(); ++i) {
        REQUIRE(a.records[i].seed == b.records[i].seed);
        REQUIRE(a.records[i].h_ham == b.records[i].h_ham);
        REQUIRE(a.records[i].resolved == b.records[i].resolved);
    }

    const CoincidenceResult c = run_coincidence(30.0, 24, 100, SearchBudget{}, 1);
    REQUIRE(to_json(a.summary).dump() != to_json(c.summary).dump());
}

TEST_CASE("coincidence records CSV format") {
    const CoincidenceResult res = run_coincidence(25.0, 5, 7);
    std::stringstream ss;
    write_trial_csv(ss, res.summary.config.dump(), res.records);
    std::string line;
    REQUIRE(std::getline(ss, line));
    REQUIRE(line.rfind("# config:", 0) == 0);
    REQUIRE(std::getline(ss, line));
    REQUIRE(line == "seed,count,h_mindeg2,h_2conn,h_ham,eq_deg,eq_ham,resolved,ms");
    int rows = 0;
    while (std::getline(ss, line))
        if (!line.empty()) ++rows;
    REQUIRE(rows == 5);
}

TEST_CASE("connectivity limit law references") {
    REQUIRE(std::exp(-std::exp(-0.0)) == Catch::Approx(0.36788).margin(1e-4));
    REQUIRE(std::exp(-std::exp(-4.0)) == Catch::Approx(0.98185).margin(1e-4));
    const ExperimentSummary s = run_limit_law_connectivity(256.0, 0.0, 60, 11);
    REQUIRE(s.has_reference);
    REQUIRE(s.reference == Catch::Approx(std::exp(-1.0)));
    const Estimate& e = s.primary();
    REQUIRE(e.trials == 60);
    REQUIRE(e.p_hat >= e.ci.lo);
    REQUIRE(e.p_hat <= e.ci.hi);
    REQUIRE_THROWS_AS(run_limit_law_connectivity(2.0, -10.0, 5, 1), std::invalid_argument);
}

TEST_CASE("hamilton limit law smoke") {
    const ExperimentSummary s = run_limit_law_hamilton(64.0, 4.0, 25, 5);
    REQUIRE(s.reference == Catch::Approx(std::exp(-std::exp(-4.0))));
    REQUIRE(s.unresolved <= s.trials);
    REQUIRE(s.primary().trials == s.trials - s.unresolved);
    // Determinism across worker counts.
    const ExperimentSummary t = run_limit_law_hamilton(64.0, 4.0, 25, 5, SearchBudget{}, 2);
    REQUIRE(to_json(s).dump() == to_json(t).dump());
}

TEST_CASE("knn window smoke") {
    const ExperimentSummary s = run_knn_window(100.0, 8, 3);
    REQUIRE(s.extra["mean_ratio"].get<double>() > 0.0);  // hitting k >= 1 always
    REQUIRE(s.primary().trials <= 8);
    REQUIRE(s.config["window_lo"].get<double>() < s.config["window_hi"].get<double>());
}

TEST_CASE("constructive validation harness") {
    ConstructiveConfig cfg;
    cfg.margin = 6.0;
    cfg.params.c = 3;
    cfg.params.fullness_m = 4;
    const ExperimentSummary s = run_constructive_validation(120.0, 16, cfg, 21);
    REQUIRE(s.primary().trials == s.trials - s.unresolved);
    for (const auto& [key, value] : s.extra["failure_histogram"].items()) {
        bool known = false;
        for (const char* name : stage_names())
            if (key == name) known = true;
        REQUIRE(known);
        REQUIRE(value.get<long long>() > 0);
    }
    // Lemma tallies never exceed their applicable counts.
    for (const auto& [key, value] : s.extra["lemma_checks"].items())
        REQUIRE(value["held"].get<long long>() <= value["applicable"].get<long long>());
}

TEST_CASE("constructive knn harness reports isoperimetric data") {
    KnnConstructiveConfig cfg;
    cfg.target_kappa = 2;
    cfg.params.big_d = 3;
    cfg.params.fullness_m = 6;
    cfg.params.kappa = 4;
    cfg.params.rminus_coeff = 2.4;
    const ExperimentSummary s = run_constructive_validation_knn(300.0, 6, cfg, 13);
    REQUIRE(s.extra["isoperimetric_violations"].get<long long>() == 0);
    REQUIRE(s.extra.contains("failure_histogram"));
}

TEST_CASE("summary json carries the full config echo") {
    const ExperimentSummary s = run_limit_law_connectivity(128.0, 2.0, 10, 77);
    const nlohmann::json j = to_json(s);
    REQUIRE(j["config"]["n"] == 128.0);
    REQUIRE(j["config"]["alpha"] == 2.0);
    REQUIRE(j["config"]["master_seed"] == 77);
    REQUIRE(j["estimates"][0]["name"] == "connected");
}
