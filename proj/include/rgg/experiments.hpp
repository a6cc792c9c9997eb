// Monte Carlo harness: limit laws, hitting-radius coincidences, k-NN
// windows and constructive validation, with deterministic per-trial seeding
// and Wilson intervals. Summaries are pure functions of (config, master
// seed); worker count only changes wall time.

#pragma once

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "rgg/construct.hpp"
#include "rgg/hitting.hpp"
#include "rgg/rng.hpp"

namespace rgg {

struct WilsonInterval {
    double lo = 0.0, hi = 1.0;
};

/// Wilson 95% score interval for a binomial proportion.
inline WilsonInterval wilson95(long long successes, long long n) {
    if (n <= 0) return {0.0, 1.0};
    const double z = 1.959963984540054;
    const double p = static_cast<double>(successes) / n;
    const double z2n = z * z / n;
    const double center = (p + z2n / 2.0) / (1.0 + z2n);
    const double half = z * std::sqrt(p * (1.0 - p) / n + z2n / (4.0 * n)) / (1.0 + z2n);
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

struct Estimate {
    std::string name;
    long long successes = 0;
    long long trials = 0;
    double p_hat = 0.0;
    WilsonInterval ci;
};

inline Estimate make_estimate(const std::string& name, long long successes, long long trials) {
    Estimate e;
    e.name = name;
    e.successes = successes;
    e.trials = trials;
    e.p_hat = trials > 0 ? static_cast<double>(successes) / trials : 0.0;
    e.ci = wilson95(successes, trials);
    return e;
}

struct ExperimentSummary {
    nlohmann::json config;            // fully-resolved config echo
    std::vector<Estimate> estimates;  // primary first
    long long trials = 0;
    long long unresolved = 0;
    double reference = 0.0;
    bool has_reference = false;
    nlohmann::json extra;  // experiment-specific detail

    const Estimate& primary() const { return estimates.front(); }
};

inline nlohmann::json to_json(const ExperimentSummary& s) {
    nlohmann::json j;
    j["config"] = s.config;
    nlohmann::json est = nlohmann::json::array();
    for (const auto& e : s.estimates)
        est.push_back({{"name", e.name},
                       {"successes", e.successes},
                       {"trials", e.trials},
                       {"p_hat", e.p_hat},
                       {"wilson_lo", e.ci.lo},
                       {"wilson_hi", e.ci.hi}});
    j["estimates"] = est;
    j["trials"] = s.trials;
    j["unresolved"] = s.unresolved;
    if (s.has_reference) j["reference"] = s.reference;
    if (!s.extra.is_null()) j["extra"] = s.extra;
    return j;
}

/// Per-trial record of the coincidence experiment.
struct TrialRecord {
    std::uint64_t seed = 0;
    int count = 0;
    double h_mindeg2 = 0.0;
    double h_2conn = 0.0;
    double h_ham = 0.0;
    bool eq_deg = false;
    bool eq_ham = false;
    bool resolved = false;
    bool valid = true;  // enough points to evaluate the three radii
    double ms = 0.0;
};

inline void write_trial_csv(std::ostream& os, const std::string& config_line,
                            const std::vector<TrialRecord>& records) {
    os << "# config: " << config_line << "\n";
    os << "seed,count,h_mindeg2,h_2conn,h_ham,eq_deg,eq_ham,resolved,ms\n";
    char ms_buf[32];
    for (const auto& r : records) {
        std::snprintf(ms_buf, sizeof(ms_buf), "%.3f", r.ms);
        os << r.seed << "," << r.count << "," << format_double(r.h_mindeg2) << ","
           << format_double(r.h_2conn) << "," << format_double(r.h_ham) << "," << (r.eq_deg ? 1 : 0)
           << "," << (r.eq_ham ? 1 : 0) << "," << (r.resolved ? 1 : 0) << "," << ms_buf << "\n";
    }
}

namespace detail {

template <typename Fn>
inline void run_trials(long long trials, int workers, Fn&& fn) {
    workers = std::max(1, workers);
    if (workers == 1) {
        for (long long t = 0; t < trials; ++t) fn(t);
        return;
    }
    std::atomic<long long> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (;;) {
                const long long t = next.fetch_add(1);
                if (t >= trials) break;
                fn(t);
            }
        });
    for (auto& th : pool) th.join();
}

inline double now_ms() {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

}  // namespace detail

struct CoincidenceResult {
    ExperimentSummary summary;
    std::vector<TrialRecord> records;
};

/// Per trial: the three hitting radii and the equality flags of the
/// min-degree/2-connectivity and 2-connectivity/Hamiltonicity coincidences.
/// Trials whose Hamiltonicity search exhausted its budget are excluded from
/// the fractions and counted as unresolved.
inline CoincidenceResult run_coincidence(double n, long long trials, std::uint64_t master_seed,
                                         const SearchBudget& budget = {}, int workers = 1) {
    if (!(n >= 10.0)) throw std::invalid_argument("run_coincidence: need n >= 10");
    const BoxSpec box(n, 2);
    const Norm norm = Norm::euclidean();
    std::vector<TrialRecord> records(trials);
    detail::run_trials(trials, workers, [&](long long t) {
        TrialRecord rec;
        rec.seed = derive_stream(master_seed, static_cast<std::uint64_t>(t));
        const double t0 = detail::now_ms();
        const PointSet ps = sample_poisson(box, rec.seed);
        rec.count = ps.count();
        if (rec.count < 3) {
            rec.valid = false;
            rec.resolved = false;
        } else {
            const HittingResult hd = hitting_radius(ps, MonotoneProperty::min_degree(2), norm);
            const HittingResult h2 = hitting_radius(ps, MonotoneProperty::k_connected(2), norm);
            const HittingResult hh =
                hitting_radius(ps, MonotoneProperty::hamiltonian(), norm, budget);
            rec.h_mindeg2 = hd.radius;
            rec.h_2conn = h2.radius;
            rec.h_ham = hh.radius;
            rec.resolved = hh.exact;
            rec.eq_deg = hd.radius == h2.radius;
            rec.eq_ham = h2.radius == hh.radius;
        }
        rec.ms = detail::now_ms() - t0;
        records[t] = rec;
    });

    long long resolved = 0, eq_deg = 0, eq_ham = 0, chain_violations = 0, invalid = 0;
    for (const auto& r : records) {
        if (!r.valid) {
            ++invalid;
            continue;
        }
        if (!r.resolved) continue;
        ++resolved;
        if (r.eq_deg) ++eq_deg;
        if (r.eq_ham) ++eq_ham;
        if (!(r.h_mindeg2 <= r.h_2conn && r.h_2conn <= r.h_ham)) ++chain_violations;
    }
    CoincidenceResult out;
    out.records = std::move(records);
    out.summary.config = {{"kind", "coincidence"},
                          {"n", n},
                          {"trials", trials},
                          {"master_seed", master_seed},
                          {"budget", budget.max_backtrack_nodes},
                          {"workers_note", "summary independent of worker count"}};
    out.summary.trials = trials;
    out.summary.unresolved = trials - invalid - resolved;
    out.summary.estimates.push_back(make_estimate("eq_2conn_hamilton", eq_ham, resolved));
    out.summary.estimates.push_back(make_estimate("eq_mindeg_2conn", eq_deg, resolved));
    out.summary.extra = {{"chain_violations", chain_violations}, {"invalid_trials", invalid}};
    return out;
}

/// Connectivity limit law: radius from pi r^2 = log n + alpha, estimate the
/// probability of connectivity, reference e^{-e^{-alpha}}.
inline ExperimentSummary run_limit_law_connectivity(double n, double alpha, long long trials,
                                                    std::uint64_t master_seed, int workers = 1) {
    const double pi = 4.0 * std::atan(1.0);
    const double rr = (std::log(n) + alpha) / pi;
    if (!(rr > 0.0))
        throw std::invalid_argument("run_limit_law_connectivity: pi r^2 = log n + alpha <= 0");
    const double r = std::sqrt(rr);
    const BoxSpec box(n, 2);
    const Norm norm = Norm::euclidean();
    std::vector<char> connected(trials, 0);
    detail::run_trials(trials, workers, [&](long long t) {
        const PointSet ps = sample_poisson(box, derive_stream(master_seed, t));
        connected[t] = ps.count() == 0 ? 0 : (is_connected(build_gilbert(ps, r, norm)) ? 1 : 0);
    });
    long long ok = 0;
    for (char c : connected) ok += c;
    ExperimentSummary s;
    s.config = {{"kind", "limit_law_connectivity"}, {"n", n},      {"alpha", alpha},
                {"radius", r},                      {"trials", trials}, {"master_seed", master_seed}};
    s.trials = trials;
    s.estimates.push_back(make_estimate("connected", ok, trials));
    s.reference = std::exp(-std::exp(-alpha));
    s.has_reference = true;
    return s;
}

/// Hamiltonicity limit law: radius from pi r^2 = log n + log log n + alpha;
/// exact decisions, budget-exhausted trials reported separately.
inline ExperimentSummary run_limit_law_hamilton(double n, double alpha, long long trials,
                                                std::uint64_t master_seed,
                                                const SearchBudget& budget = {}, int workers = 1) {
    if (!(n > std::exp(1.0)))
        throw std::invalid_argument("run_limit_law_hamilton: need n > e for log log n");
    const double pi = 4.0 * std::atan(1.0);
    const double rr = (std::log(n) + std::log(std::log(n)) + alpha) / pi;
    if (!(rr > 0.0)) throw std::invalid_argument("run_limit_law_hamilton: radius^2 <= 0");
    const double r = std::sqrt(rr);
    const BoxSpec box(n, 2);
    const Norm norm = Norm::euclidean();
    std::vector<char> outcome(trials, 0);  // 0 absent, 1 found, 2 exhausted
    detail::run_trials(trials, workers, [&](long long t) {
        const PointSet ps = sample_poisson(box, derive_stream(master_seed, t));
        if (ps.count() < 3) {
            outcome[t] = 0;
            return;
        }
        const HamiltonResult res = find_hamilton_exact(build_gilbert(ps, r, norm), budget);
        outcome[t] = res.status == HamiltonStatus::found
                         ? 1
                         : (res.status == HamiltonStatus::exhausted ? 2 : 0);
    });
    long long found = 0, exhausted = 0;
    for (char c : outcome) {
        if (c == 1) ++found;
        if (c == 2) ++exhausted;
    }
    ExperimentSummary s;
    s.config = {{"kind", "limit_law_hamilton"},
                {"n", n},
                {"alpha", alpha},
                {"radius", r},
                {"trials", trials},
                {"master_seed", master_seed},
                {"budget", budget.max_backtrack_nodes}};
    s.trials = trials;
    s.unresolved = exhausted;
    s.estimates.push_back(make_estimate("hamiltonian", found, trials - exhausted));
    s.reference = std::exp(-std::exp(-alpha));
    s.has_reference = true;
    return s;
}

/// Hitting degree for connectivity in the k-NN model: the distribution of
/// k / log n against the 0.3043..0.5139 window (a configurable slack absorbs
/// the finite-n correction).
inline ExperimentSummary run_knn_window(double n, long long trials, std::uint64_t master_seed,
                                        double slack = 0.15, int workers = 1) {
    if (!(n >= 100.0)) throw std::invalid_argument("run_knn_window: need n >= 100");
    const double log_n = std::log(n);
    const double lo = 0.3043 * (1.0 - slack);
    const double hi = 0.5139 * (1.0 + slack);
    const BoxSpec box(n, 2);
    const Norm norm = Norm::euclidean();
    std::vector<double> ratio(trials, 0.0);
    std::vector<char> valid(trials, 0);
    detail::run_trials(trials, workers, [&](long long t) {
        const PointSet ps = sample_poisson(box, derive_stream(master_seed, t));
        if (ps.count() < 2) return;
        const int k = hitting_k(ps, MonotoneProperty::connected(), norm);
        ratio[t] = k / log_n;
        valid[t] = 1;
    });
    long long in_window = 0, n_valid = 0;
    double sum = 0.0, rmin = 0.0, rmax = 0.0;
    for (long long t = 0; t < trials; ++t) {
        if (!valid[t]) continue;
        ++n_valid;
        sum += ratio[t];
        if (n_valid == 1) rmin = rmax = ratio[t];
        rmin = std::min(rmin, ratio[t]);
        rmax = std::max(rmax, ratio[t]);
        if (ratio[t] >= lo && ratio[t] <= hi) ++in_window;
    }
    ExperimentSummary s;
    s.config = {{"kind", "knn_window"},   {"n", n},
                {"trials", trials},       {"master_seed", master_seed},
                {"slack", slack},         {"window_lo", lo},
                {"window_hi", hi}};
    s.trials = trials;
    s.unresolved = trials - n_valid;
    s.estimates.push_back(make_estimate("ratio_in_window", in_window, n_valid));
    s.extra = {{"mean_ratio", n_valid ? sum / n_valid : 0.0},
               {"min_ratio", rmin},
               {"max_ratio", rmax}};
    return s;
}

struct ConstructiveConfig {
    ConstructionParams params;  // c, M
    double margin = 3.0;        // r = margin * H(2-connected)
};

/// Harness around construct_hamilton: r = margin * H(2-connected) per trial;
/// reports the success fraction, the per-stage failure histogram and lemma
/// pass rates. Every produced cycle is verified by construction.
inline ExperimentSummary run_constructive_validation(double n, long long trials,
                                                     const ConstructiveConfig& cfg,
                                                     std::uint64_t master_seed, int workers = 1) {
    const BoxSpec box(n, 2);
    const Norm norm = Norm::euclidean();
    std::vector<std::string> stage_of(trials);  // empty = success, "invalid" = too few points
    std::vector<std::vector<LemmaCheck>> checks_of(trials);
    detail::run_trials(trials, workers, [&](long long t) {
        const PointSet ps = sample_poisson(box, derive_stream(master_seed, t));
        if (ps.count() < 3) {
            stage_of[t] = "invalid";
            return;
        }
        const HittingResult h2 = hitting_radius(ps, MonotoneProperty::k_connected(2), norm);
        const ConstructionReport rep =
            construct_hamilton(ps, cfg.margin * h2.radius, cfg.params, norm);
        stage_of[t] = rep.success ? "" : rep.failed_stage;
        checks_of[t] = rep.checks;
    });
    long long successes = 0, invalid = 0;
    std::map<std::string, long long> histogram;
    std::map<std::string, std::pair<long long, long long>> lemma;  // held / applicable
    for (long long t = 0; t < trials; ++t) {
        if (stage_of[t].empty())
            ++successes;
        else if (stage_of[t] == "invalid")
            ++invalid;
        else
            ++histogram[stage_of[t]];
        for (const auto& c : checks_of[t]) {
            if (!c.applicable) continue;
            auto& [held, total] = lemma[c.name];
            ++total;
            if (c.held) ++held;
        }
    }
    ExperimentSummary s;
    s.config = {{"kind", "constructive"},
                {"n", n},
                {"trials", trials},
                {"master_seed", master_seed},
                {"margin", cfg.margin},
                {"c", cfg.params.c},
                {"M", cfg.params.fullness_m}};
    s.trials = trials;
    s.unresolved = invalid;
    s.estimates.push_back(make_estimate("construction_success", successes, trials - invalid));
    nlohmann::json hist = nlohmann::json::object();
    for (const auto& [k, v] : histogram) hist[k] = v;
    nlohmann::json lj = nlohmann::json::object();
    for (const auto& [k, v] : lemma)
        lj[k] = {{"held", v.first}, {"applicable", v.second}};
    s.extra = {{"failure_histogram", hist}, {"lemma_checks", lj}};
    return s;
}

struct KnnConstructiveConfig {
    KnnConstructionParams params;
    int target_kappa = 2;  // k = hitting k for kappa-connectivity
};

/// k-NN analogue of the constructive harness: k is the hitting degree for
/// target_kappa-connectivity; collects the isoperimetric data |A^c \ N|
/// against u^2/2 + u alongside the histogram.
inline ExperimentSummary run_constructive_validation_knn(double n, long long trials,
                                                         const KnnConstructiveConfig& cfg,
                                                         std::uint64_t master_seed,
                                                         int workers = 1) {
    const BoxSpec box(n, 2);
    const Norm norm = Norm::euclidean();
    std::vector<std::string> stage_of(trials);
    std::vector<std::vector<LemmaCheck>> checks_of(trials);
    struct IsoStat {
        long long u = 0, outside = 0;
    };
    std::vector<std::vector<IsoStat>> iso_of(trials);
    std::vector<int> k_of(trials, 0);
    detail::run_trials(trials, workers, [&](long long t) {
        const PointSet ps = sample_poisson(box, derive_stream(master_seed, t));
        if (ps.count() < std::max(3, cfg.target_kappa + 1)) {
            stage_of[t] = "invalid";
            return;
        }
        const int k = hitting_k(ps, MonotoneProperty::k_connected(cfg.target_kappa), norm);
        k_of[t] = k;
        const ConstructionReport rep = construct_hamilton_knn(ps, k, cfg.params, norm);
        stage_of[t] = rep.success ? "" : rep.failed_stage;
        checks_of[t] = rep.checks;
        for (const auto& comp : rep.log.components)
            iso_of[t].push_back({comp.n_size, comp.cutoff_size - comp.n_size});
    });
    long long successes = 0, invalid = 0, iso_checked = 0, iso_violations = 0;
    std::map<std::string, long long> histogram;
    std::map<std::string, std::pair<long long, long long>> lemma;
    for (long long t = 0; t < trials; ++t) {
        if (stage_of[t].empty())
            ++successes;
        else if (stage_of[t] == "invalid")
            ++invalid;
        else
            ++histogram[stage_of[t]];
        for (const auto& c : checks_of[t]) {
            if (!c.applicable) continue;
            auto& [held, total] = lemma[c.name];
            ++total;
            if (c.held) ++held;
        }
        for (const auto& is : iso_of[t]) {
            ++iso_checked;
            if (is.outside > is.u * is.u / 2 + is.u) ++iso_violations;
        }
    }
    ExperimentSummary s;
    s.config = {{"kind", "constructive_knn"},
                {"n", n},
                {"trials", trials},
                {"master_seed", master_seed},
                {"target_kappa", cfg.target_kappa},
                {"D", cfg.params.big_d},
                {"M", cfg.params.fullness_m},
                {"kappa", cfg.params.kappa},
                {"rminus_coeff", cfg.params.rminus_coeff},
                {"rplus_coeff", cfg.params.rplus_coeff}};
    s.trials = trials;
    s.unresolved = invalid;
    s.estimates.push_back(make_estimate("construction_success", successes, trials - invalid));
    nlohmann::json hist = nlohmann::json::object();
    for (const auto& [k, v] : histogram) hist[k] = v;
    nlohmann::json lj = nlohmann::json::object();
    for (const auto& [k, v] : lemma)
        lj[k] = {{"held", v.first}, {"applicable", v.second}};
    s.extra = {{"failure_histogram", hist},
               {"lemma_checks", lj},
               {"isoperimetric_components", iso_checked},
               {"isoperimetric_violations", iso_violations}};
    return s;
}

}  // namespace rgg
