// Command-line front end. Machine-parseable output goes to the data stream,
// prose and warnings to the diagnostic stream. Exit codes: 0 success,
// 1 domain failure, 2 usage error.

#pragma once

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rgg/construct.hpp"
#include "rgg/experiments.hpp"
#include "rgg/hitting.hpp"

namespace rgg {

namespace cli_detail {

inline MonotoneProperty parse_property(const std::string& name, int kappa) {
    if (name == "connected") return MonotoneProperty::connected();
    if (name == "min-degree") return MonotoneProperty::min_degree(kappa);
    if (name == "k-connected") return MonotoneProperty::k_connected(kappa);
    if (name == "hamiltonian") return MonotoneProperty::hamiltonian();
    throw CLI::ValidationError("--property", "unknown property " + name);
}

inline Norm parse_norm(double p) { return Norm(p); }

inline void write_text_or_file(const std::string& path, const std::string& content,
                               std::ostream& fallback) {
    if (path.empty()) {
        fallback << content;
        return;
    }
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    os << content;
}

}  // namespace cli_detail

/// Run the CLI against an argument list (excluding the program name).
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"random geometric graph laboratory"};
    app.require_subcommand(1);
    // key=value config file with one [subcommand] section; explicit flags win.
    app.set_config("--config");
    app.fallthrough();

    // --- sample ---
    auto* sample = app.add_subcommand("sample", "sample a Poisson point set into a file");
    double s_n = 0.0, s_p = 2.0;
    int s_d = 2;
    std::uint64_t s_seed = 0;
    std::string s_out;
    sample->add_option("--n", s_n, "intensity (expected point count)")->required();
    sample->add_option("--d", s_d, "dimension");
    sample->add_option("--seed", s_seed, "seed");
    sample->add_option("--p", s_p, "p-norm (inf allowed)");
    sample->add_option("--out", s_out, "output point file")->required();

    // --- build ---
    auto* build = app.add_subcommand("build", "build a graph from a point file");
    std::string b_points, b_model = "gilbert", b_out;
    double b_r = 0.0, b_alpha = 0.0, b_p = 2.0;
    bool b_has_alpha = false;
    int b_k = 0;
    build->add_option("--points", b_points, "point file")->required();
    build->add_option("--model", b_model, "gilbert|knn")
        ->check(CLI::IsMember({"gilbert", "knn"}));
    build->add_option("--r", b_r, "gilbert radius");
    build->add_option("--alpha", b_alpha, "radius via pi r^2 = log n + alpha")
        ->each([&](const std::string&) { b_has_alpha = true; });
    build->add_option("--k", b_k, "knn parameter");
    build->add_option("--p", b_p, "p-norm");
    build->add_option("--out", b_out, "output graph file")->required();

    // --- hitting ---
    auto* hitting = app.add_subcommand("hitting", "hitting radius or degree of a property");
    std::string h_points, h_property = "connected", h_mode = "radius", h_format = "text";
    int h_kappa = 2;
    double h_p = 2.0;
    std::uint64_t h_budget = SearchBudget{}.max_backtrack_nodes;
    hitting->add_option("--points", h_points, "point file")->required();
    hitting->add_option("--property", h_property, "connected|min-degree|k-connected|hamiltonian");
    hitting->add_option("--kappa", h_kappa, "kappa for parameterized properties");
    hitting->add_option("--mode", h_mode, "radius|k")->check(CLI::IsMember({"radius", "k"}));
    hitting->add_option("--budget", h_budget, "hamiltonicity node budget");
    hitting->add_option("--p", h_p, "p-norm");
    hitting->add_option("--format", h_format, "text|json|csv")
        ->check(CLI::IsMember({"text", "json", "csv"}));

    // --- construct ---
    auto* construct = app.add_subcommand("construct", "run the constructive cycle builder");
    std::string c_points, c_model = "gilbert", c_report, c_cycle_out;
    double c_r = 0.0, c_margin = 0.0, c_p = 2.0;
    int c_c = 4, c_k = 0, c_big_d = 3;
    long long c_m = 4, c_knn_m = 6, c_kappa = 4, c_component_bound = 7000;
    double c_rminus = 0.035, c_rplus = 2.3;
    bool c_paper = false;
    construct->add_option("--points", c_points, "point file")->required();
    construct->add_option("--model", c_model, "gilbert|knn")
        ->check(CLI::IsMember({"gilbert", "knn"}));
    construct->add_option("--r", c_r, "gilbert radius");
    construct->add_option("--margin", c_margin, "r = margin * H(2-connected)");
    construct->add_option("--c", c_c, "tessellation fineness");
    construct->add_option("--m", c_m, "fullness threshold M");
    construct->add_option("--k", c_k, "knn parameter");
    construct->add_option("--D", c_big_d, "knn square-distance bound D");
    construct->add_option("--knn-m", c_knn_m, "knn fullness threshold");
    construct->add_option("--kappa", c_kappa, "knn connectivity assumption");
    construct->add_option("--component-bound", c_component_bound, "knn component size bound");
    construct->add_option("--rminus-coeff", c_rminus, "knn r- coefficient");
    construct->add_option("--rplus-coeff", c_rplus, "knn r+ coefficient");
    construct->add_flag("--paper-constants", c_paper,
                        "use the proof constants (c=1000, M=1e7; D=1e4, M=1e9, kappa=5e7)");
    construct->add_option("--p", c_p, "p-norm");
    construct->add_option("--report", c_report, "report JSON path (stdout when omitted)");
    construct->add_option("--cycle-out", c_cycle_out, "cycle file path on success");

    // --- experiment ---
    auto* exp = app.add_subcommand("experiment", "run a Monte Carlo experiment");
    std::string e_kind, e_csv, e_json;
    double e_n = 1000.0, e_alpha = 0.0, e_margin = 3.0, e_slack = 0.15;
    double e_rminus = 0.035, e_rplus = 2.3;
    long long e_trials = 100, e_m = 4, e_knn_m = 6, e_knn_kappa = 4, e_component_bound = 7000;
    int e_c = 4, e_workers = 1, e_kappa = 2, e_big_d = 3;
    std::uint64_t e_seed = 0, e_budget = SearchBudget{}.max_backtrack_nodes;
    exp->add_option("--kind", e_kind,
                    "coincidence|limit-connectivity|limit-hamilton|knn-window|constructive|"
                    "constructive-knn")
        ->required()
        ->check(CLI::IsMember({"coincidence", "limit-connectivity", "limit-hamilton", "knn-window",
                               "constructive", "constructive-knn"}));
    exp->add_option("--n", e_n, "intensity");
    exp->add_option("--alpha", e_alpha, "limit-law alpha");
    exp->add_option("--trials", e_trials, "trial count");
    exp->add_option("--seed", e_seed, "master seed");
    exp->add_option("--budget", e_budget, "hamiltonicity node budget");
    exp->add_option("--margin", e_margin, "constructive radius margin");
    exp->add_option("--c", e_c, "constructive c");
    exp->add_option("--m", e_m, "constructive M");
    exp->add_option("--slack", e_slack, "knn-window slack");
    exp->add_option("--workers", e_workers, "worker threads");
    exp->add_option("--kappa", e_kappa, "target connectivity for constructive-knn");
    exp->add_option("--D", e_big_d, "knn D");
    exp->add_option("--knn-m", e_knn_m, "knn fullness threshold");
    exp->add_option("--knn-kappa", e_knn_kappa, "knn kappa assumption");
    exp->add_option("--component-bound", e_component_bound, "knn component bound");
    exp->add_option("--rminus-coeff", e_rminus, "knn r- coefficient");
    exp->add_option("--rplus-coeff", e_rplus, "knn r+ coefficient");
    exp->add_option("--csv-out", e_csv, "trial records CSV (coincidence)");
    exp->add_option("--json-out", e_json, "summary JSON path (stdout when omitted)");

    // --- verify ---
    auto* verify = app.add_subcommand("verify", "verify a cycle file against a graph file");
    std::string v_graph, v_cycle;
    verify->add_option("--graph", v_graph, "graph file")->required();
    verify->add_option("--cycle", v_cycle, "cycle file")->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        err << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n" << app.help();
        return 2;
    }

    try {
        if (*sample) {
            const PointSet ps = sample_poisson(BoxSpec(s_n, s_d), s_seed);
            write_point_set(s_out, ps);
            err << "sampled " << ps.count() << " points into " << s_out << "\n";
            return 0;
        }

        if (*build) {
            const PointSet ps = read_point_set(b_points);
            const Norm norm = cli_detail::parse_norm(b_p);
            GeometricGraph g;
            if (b_model == "gilbert") {
                double r = b_r;
                if (b_has_alpha) {
                    const double pi = 4.0 * std::atan(1.0);
                    r = std::sqrt((std::log(ps.box.intensity_n) + b_alpha) / pi);
                    err << "resolved r=" << format_double(r) << " from alpha=" << b_alpha << "\n";
                }
                if (!(r > 0.0)) {
                    err << "build: gilbert model needs --r > 0 or --alpha\n";
                    return 2;
                }
                g = build_gilbert(ps, r, norm);
            } else {
                if (b_k < 1) {
                    err << "build: knn model needs --k >= 1\n";
                    return 2;
                }
                g = undirect(build_knn_directed(ps, b_k, norm));
            }
            write_graph(b_out, g);
            err << "wrote " << g.edge_count() << " edges to " << b_out << "\n";
            return 0;
        }

        if (*hitting) {
            const PointSet ps = read_point_set(h_points);
            const Norm norm = cli_detail::parse_norm(h_p);
            const MonotoneProperty prop = cli_detail::parse_property(h_property, h_kappa);
            const SearchBudget budget{h_budget};
            std::ostringstream config;
            config << "points=" << h_points << " property=" << h_property << " kappa=" << h_kappa
                   << " mode=" << h_mode << " budget=" << h_budget << " p=" << h_p;
            if (h_mode == "radius") {
                const HittingResult res = hitting_radius(ps, prop, norm, budget);
                if (h_format == "json") {
                    nlohmann::json j{{"config", config.str()},
                                     {"radius", res.radius},
                                     {"exact", res.exact},
                                     {"unresolved_at", res.unresolved_at}};
                    out << j.dump(2) << "\n";
                } else if (h_format == "csv") {
                    out << "# config: " << config.str() << "\n";
                    out << "radius,exact\n"
                        << format_double(res.radius) << "," << (res.exact ? 1 : 0) << "\n";
                } else {
                    out << "# config: " << config.str() << "\n";
                    out << "radius=" << format_double(res.radius)
                        << " exact=" << (res.exact ? "yes" : "no");
                    if (!res.unresolved_at.empty()) {
                        out << " unresolved_at=";
                        for (std::size_t i = 0; i < res.unresolved_at.size(); ++i)
                            out << (i ? ";" : "") << format_double(res.unresolved_at[i]);
                    }
                    out << "\n";
                }
            } else {
                const int k = hitting_k(ps, prop, norm, budget);
                if (h_format == "json") {
                    nlohmann::json j{{"config", config.str()}, {"k", k}};
                    out << j.dump(2) << "\n";
                } else if (h_format == "csv") {
                    out << "# config: " << config.str() << "\nk\n" << k << "\n";
                } else {
                    out << "# config: " << config.str() << "\nk=" << k << "\n";
                }
            }
            return 0;
        }

        if (*construct) {
            const PointSet ps = read_point_set(c_points);
            const Norm norm = cli_detail::parse_norm(c_p);
            ConstructionReport rep;
            if (c_model == "gilbert") {
                ConstructionParams params;
                params.c = c_paper ? 1000 : c_c;
                params.fullness_m = c_paper ? 10'000'000 : c_m;
                double r = c_r;
                if (!(r > 0.0)) {
                    if (!(c_margin > 0.0)) {
                        err << "construct: need --r or --margin\n";
                        return 2;
                    }
                    const HittingResult h2 =
                        hitting_radius(ps, MonotoneProperty::k_connected(2), norm);
                    r = c_margin * h2.radius;
                    err << "resolved r=" << format_double(r) << " from margin=" << c_margin
                        << " * H(2-connected)=" << format_double(h2.radius) << "\n";
                }
                rep = construct_hamilton(ps, r, params, norm);
            } else {
                if (c_k < 1) {
                    err << "construct: knn model needs --k >= 1\n";
                    return 2;
                }
                KnnConstructionParams kp;
                kp.rminus_coeff = c_rminus;
                kp.rplus_coeff = c_rplus;
                kp.big_d = c_paper ? 10'000 : c_big_d;
                kp.fullness_m = c_paper ? 1'000'000'000 : c_knn_m;
                kp.kappa = c_paper ? 50'000'000 : c_kappa;
                kp.component_bound = c_component_bound;
                rep = construct_hamilton_knn(ps, c_k, kp, norm);
            }
            for (const auto& w : rep.warnings) err << "warning: " << w << "\n";
            cli_detail::write_text_or_file(c_report, to_json(rep).dump(2) + "\n", out);
            if (rep.success && !c_cycle_out.empty()) {
                std::ofstream os(c_cycle_out);
                if (!os) throw std::runtime_error("cannot open for writing: " + c_cycle_out);
                write_cycle(os, rep.cycle);
            }
            if (!rep.success)
                err << "construction failed at " << rep.failed_stage << ": "
                    << rep.failure_reason << "\n";
            return rep.success ? 0 : 1;
        }

        if (*exp) {
            ExperimentSummary summary;
            if (e_kind == "coincidence") {
                CoincidenceResult res =
                    run_coincidence(e_n, e_trials, e_seed, SearchBudget{e_budget}, e_workers);
                if (!e_csv.empty()) {
                    std::ofstream os(e_csv);
                    if (!os) throw std::runtime_error("cannot open for writing: " + e_csv);
                    write_trial_csv(os, res.summary.config.dump(), res.records);
                }
                summary = std::move(res.summary);
            } else if (e_kind == "limit-connectivity") {
                summary = run_limit_law_connectivity(e_n, e_alpha, e_trials, e_seed, e_workers);
            } else if (e_kind == "limit-hamilton") {
                summary = run_limit_law_hamilton(e_n, e_alpha, e_trials, e_seed,
                                                 SearchBudget{e_budget}, e_workers);
            } else if (e_kind == "knn-window") {
                summary = run_knn_window(e_n, e_trials, e_seed, e_slack, e_workers);
            } else if (e_kind == "constructive") {
                ConstructiveConfig cfg;
                cfg.margin = e_margin;
                cfg.params.c = e_c;
                cfg.params.fullness_m = e_m;
                summary = run_constructive_validation(e_n, e_trials, cfg, e_seed, e_workers);
            } else {
                KnnConstructiveConfig cfg;
                cfg.target_kappa = e_kappa;
                cfg.params.big_d = e_big_d;
                cfg.params.fullness_m = e_knn_m;
                cfg.params.kappa = e_knn_kappa;
                cfg.params.component_bound = e_component_bound;
                cfg.params.rminus_coeff = e_rminus;
                cfg.params.rplus_coeff = e_rplus;
                summary = run_constructive_validation_knn(e_n, e_trials, cfg, e_seed, e_workers);
            }
            cli_detail::write_text_or_file(e_json, to_json(summary).dump(2) + "\n", out);
            const Estimate& p = summary.primary();
            err << e_kind << ": " << p.name << "=" << p.p_hat << " [" << p.ci.lo << ", "
                << p.ci.hi << "]  unresolved=" << summary.unresolved << "\n";
            return 0;
        }

        if (*verify) {
            const GeometricGraph g = read_graph(v_graph);
            std::ifstream is(v_cycle);
            if (!is) throw std::runtime_error("cannot open: " + v_cycle);
            const HamiltonCycle c = read_cycle(is);
            const bool ok = verify_hamilton_cycle(g, c);
            out << (ok ? "VALID" : "INVALID") << "\n";
            return ok ? 0 : 1;
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

}  // namespace rgg
