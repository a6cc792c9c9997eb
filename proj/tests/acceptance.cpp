// Acceptance suite: one test case per criterion, each printing a PASS/FAIL
// line with the measured quantities.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <iostream>

#include "oracles.hpp"
#include "rgg/construct.hpp"
#include "rgg/experiments.hpp"
#include "rgg/hitting.hpp"

using namespace rgg;

namespace {

void report(int number, const std::string& name, bool pass, const std::string& detail) {
    std::printf("ACCEPTANCE %d [%s]: %s  (%s)\n", number, name.c_str(),
                pass ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
}

}  // namespace

TEST_CASE("acceptance 1: ordering chain over resolved trials") {
    bool pass = true;
    std::string detail;
    for (double n : {50.0, 200.0}) {
        const CoincidenceResult res =
            run_coincidence(n, 1000, 20250810, SearchBudget{1'000'000});
        const long long violations = res.summary.extra["chain_violations"].get<long long>();
        pass = pass && violations == 0;
        detail += "n=" + std::to_string(static_cast<int>(n)) + ": violations=" +
                  std::to_string(violations) + " unresolved=" +
                  std::to_string(res.summary.unresolved) + "/1000  ";
    }
    report(1, "ordering-chain", pass, detail);
    REQUIRE(pass);
}

TEST_CASE("acceptance 2: hitting(connected) equals the MST bottleneck bit-exactly") {
    const Norm e2 = Norm::euclidean();
    int mismatches = 0, used = 0;
    for (int i = 0; used < 500; ++i) {
        const double n = 10.0 + (i * 37) % 191;  // intensities spread over [10, 200]
        const PointSet ps = sample_poisson(BoxSpec(n, 2), derive_stream(777, i));
        if (ps.count() < 2 || ps.count() > 200) continue;
        ++used;
        const double hit = hitting_radius(ps, MonotoneProperty::connected(), e2).radius;
        const double mst = mst_bottleneck(ps, e2);
        if (hit != mst) ++mismatches;
    }
    const bool pass = mismatches == 0;
    report(2, "mst-oracle", pass,
           "instances=500 mismatches=" + std::to_string(mismatches));
    REQUIRE(pass);
}

TEST_CASE("acceptance 3: connectivity limit law at n=2^16") {
    bool pass = true;
    std::string detail;
    for (double alpha : {0.0, 2.0}) {
        const ExperimentSummary s =
            run_limit_law_connectivity(65536.0, alpha, 2000, 20250810);
        const double err = std::abs(s.primary().p_hat - s.reference);
        pass = pass && err <= 0.08;
        char buf[128];
        std::snprintf(buf, sizeof(buf), "alpha=%.0f: p=%.4f ref=%.4f |err|=%.4f  ", alpha,
                      s.primary().p_hat, s.reference, err);
        detail += buf;
    }
    report(3, "connectivity-limit-law", pass, detail);
    REQUIRE(pass);
}

TEST_CASE("acceptance 4: hamiltonicity bracket around the limit curve") {
    const ExperimentSummary hi = run_limit_law_hamilton(4096.0, 6.0, 200, 20250810);
    const ExperimentSummary lo = run_limit_law_hamilton(4096.0, -2.0, 200, 20250810);
    const double unresolved_hi = static_cast<double>(hi.unresolved) / hi.trials;
    const double unresolved_lo = static_cast<double>(lo.unresolved) / lo.trials;
    const bool pass = hi.primary().p_hat >= 0.90 && lo.primary().p_hat <= 0.35 &&
                      unresolved_hi < 0.05 && unresolved_lo < 0.05;
    char buf[192];
    std::snprintf(buf, sizeof(buf),
                  "alpha=6: p=%.4f (need >= 0.90) unres=%.3f; alpha=-2: p=%.4f (need <= 0.35) "
                  "unres=%.3f",
                  hi.primary().p_hat, unresolved_hi, lo.primary().p_hat, unresolved_lo);
    report(4, "hamilton-limit-bracket", pass, buf);
    REQUIRE(pass);
}

TEST_CASE("acceptance 5: coincidence fraction trend in n") {
    const CoincidenceResult small =
        run_coincidence(50.0, 300, 20250811, SearchBudget{1'000'000});
    const CoincidenceResult large =
        run_coincidence(400.0, 300, 20250811, SearchBudget{1'000'000});
    const Estimate& es = small.summary.primary();
    const Estimate& el = large.summary.primary();
    const double hw_small = (es.ci.hi - es.ci.lo) / 2.0;
    const double hw_large = (el.ci.hi - el.ci.lo) / 2.0;
    const bool pass = el.p_hat >= es.p_hat - (hw_small + hw_large);
    char buf[160];
    std::snprintf(buf, sizeof(buf), "eq(50)=%.4f eq(400)=%.4f slack=%.4f", es.p_hat, el.p_hat,
                  hw_small + hw_large);
    report(5, "coincidence-trend", pass, buf);
    REQUIRE(pass);
}

TEST_CASE("acceptance 6: constructive soundness at the desk configuration") {
    const Norm e2 = Norm::euclidean();
    ConstructionParams params;
    params.c = 4;
    params.fullness_m = 4;
    int cycles = 0, verified = 0, labeled = 0, failures = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const PointSet ps = sample_poisson(BoxSpec(500.0, 2), derive_stream(606, trial));
        if (ps.count() < 3) continue;
        const double h2 = hitting_radius(ps, MonotoneProperty::k_connected(2), e2).radius;
        const double r = 3.0 * h2;
        const ConstructionReport rep = construct_hamilton(ps, r, params, e2);
        if (rep.success) {
            ++cycles;
            if (verify_hamilton_cycle(build_gilbert(ps, r, e2), rep.cycle)) ++verified;
        } else {
            ++failures;
            for (const char* name : stage_names())
                if (rep.failed_stage == name && !rep.failure_reason.empty()) {
                    ++labeled;
                    break;
                }
        }
    }
    const bool pass = verified == cycles && labeled == failures;
    char buf[160];
    std::snprintf(buf, sizeof(buf), "runs=200 cycles=%d verified=%d failures=%d labeled=%d",
                  cycles, verified, failures, labeled);
    report(6, "constructive-soundness", pass, buf);
    REQUIRE(pass);
}

TEST_CASE("acceptance 7: oracle equivalences on small graphs") {
    Rng rng(20250812);
    int vc_mismatch = 0;
    for (int it = 0; it < 200; ++it) {
        const int n = 2 + static_cast<int>(rng.uniform_index(7));
        const GeometricGraph g = oracle::random_graph(n, 0.15 + rng.next_double() * 0.7, rng);
        if (vertex_connectivity(g) != oracle::brute_vertex_connectivity(g)) ++vc_mismatch;
    }
    int ham_mismatch = 0;
    for (int it = 0; it < 200; ++it) {
        const int n = 3 + static_cast<int>(rng.uniform_index(7));
        const GeometricGraph g = oracle::random_graph(n, 0.2 + rng.next_double() * 0.6, rng);
        const HamiltonResult res = find_hamilton_exact(g);
        if (res.status == HamiltonStatus::exhausted ||
            (res.status == HamiltonStatus::found) != oracle::brute_hamiltonian(g))
            ++ham_mismatch;
    }
    const bool pass = vc_mismatch == 0 && ham_mismatch == 0;
    report(7, "oracle-equivalences", pass,
           "vertex-connectivity mismatches=" + std::to_string(vc_mismatch) +
               " hamiltonicity mismatches=" + std::to_string(ham_mismatch));
    REQUIRE(pass);
}

TEST_CASE("acceptance 8: knn degree bounds") {
    const Norm e2 = Norm::euclidean();
    int bad_min = 0, bad_max = 0, trials = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const PointSet ps = sample_poisson(BoxSpec(2000.0, 2), derive_stream(808, trial));
        if (ps.count() < 10) continue;
        for (int k : {3, 5, 8}) {
            ++trials;
            const GeometricGraph u = undirect(build_knn_directed(ps, k, e2));
            int dmin = u.n, dmax = 0;
            for (int v = 0; v < u.n; ++v) {
                dmin = std::min(dmin, u.degree(v));
                dmax = std::max(dmax, u.degree(v));
            }
            if (dmin < k) ++bad_min;
            if (dmax > 6 * k) ++bad_max;
        }
    }
    const bool pass = bad_min == 0 && bad_max == 0;
    report(8, "knn-degree-bounds", pass,
           "checks=" + std::to_string(trials) + " min-degree violations=" +
               std::to_string(bad_min) + " max-degree violations=" + std::to_string(bad_max));
    REQUIRE(pass);
}

TEST_CASE("acceptance 9: critical radius consistency") {
    const Norm e2 = Norm::euclidean();
    const double tol = 0.02;
    const BoxSpec box6(1e6, 2);
    const double r0 = r0_general(box6, e2, tol);
    const double e_back = expected_isolated(r0, box6, e2);
    const bool window = e_back >= 0.95 && e_back <= 1.05;
    const bool above_planar = r0 >= r0_planar(1e6);
    const double r4 = r0_general(BoxSpec(1e4, 2), e2, tol);
    const double r5 = r0_general(BoxSpec(1e5, 2), e2, tol);
    const bool monotone = r4 < r5 && r5 < r0;
    const bool pass = window && above_planar && monotone;
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "E(r0)=%.4f r0=%.4f planar=%.4f monotone: %.4f < %.4f < %.4f", e_back, r0,
                  r0_planar(1e6), r4, r5, r0);
    report(9, "r0-consistency", pass, buf);
    REQUIRE(pass);
}

TEST_CASE("acceptance 10: knn isoperimetric bound") {
    KnnConstructiveConfig cfg;
    cfg.target_kappa = 2;
    cfg.params.big_d = 3;
    cfg.params.fullness_m = 6;
    cfg.params.kappa = 4;
    cfg.params.rminus_coeff = 2.46;
    const ExperimentSummary s = run_constructive_validation_knn(2000.0, 100, cfg, 20250813);
    const long long comps = s.extra["isoperimetric_components"].get<long long>();
    const long long violations = s.extra["isoperimetric_violations"].get<long long>();
    bool keys_ok = true;
    for (const auto& [key, value] : s.extra["failure_histogram"].items()) {
        (void)value;
        bool known = false;
        for (const char* name : stage_names())
            if (key == name) known = true;
        keys_ok = keys_ok && known;
    }
    const bool pass = violations == 0 && comps > 0 && keys_ok;
    report(10, "knn-isoperimetric", pass,
           "components=" + std::to_string(comps) + " violations=" + std::to_string(violations) +
               std::string(keys_ok ? "" : " (unknown stage key!)"));
    REQUIRE(pass);
}
