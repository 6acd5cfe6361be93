// hybridcd — command-line surface for the curvature constants, the
// per-vertex curvature-dimension checks, Ricci-flatness certification, the
// inequality verifiers and the finite-difference simulator.
//
// Exit codes: 0 pass / nothing violated, 1 violation or negative result,
// 2 usage or I/O error.

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hybridcd/io.hpp"

using namespace hybridcd;

namespace {

// Central defaults; the same table appears in the README.
struct Defaults {
    static constexpr double c_tol = 1e-8;             // constants: argmin tolerance
    static constexpr std::uint64_t seed = 1;          // every seeded command
    static constexpr int cd_samples = 512;            // cd check: random samples
    static constexpr int cd_restarts = 64;            // cd: optimizer restarts
    static constexpr long ricci_budget = 10'000'000;  // ricci: search node budget
    static constexpr int ricci_trials = 1000;         // ricci: verification functions
    static constexpr int plan_nt = 25;                // verify: time samples
    static constexpr int plan_nx = 20;                // verify: x samples per dim
    static constexpr int plan_pairs = 10000;          // verify harnack: pairs
    static constexpr double tolerance = 1e-9;         // verify: slack tolerance
};

void emit(const std::string& out_path, const json& report) {
    const std::string text = report.dump(2) + "\n";
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    write_text_file(out_path, text);
    // wall-clock sidecar keeps the report itself byte-stable across reruns
    const auto now = std::chrono::system_clock::now().time_since_epoch();
    json meta;
    meta["written_unix_ms"] = std::chrono::duration_cast<std::chrono::milliseconds>(now).count();
    write_text_file(out_path + ".meta.json", meta.dump(2) + "\n");
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    json j;
    in >> j;
    return j;
}

int run_constants(std::vector<double> rs, double tol, std::string format, std::string out_path,
                  const std::string& config) {
    if (!config.empty()) {
        const json cfg = load_json_file(config);
        io_detail::ensure_keys(cfg, {"r", "tol", "format", "out"}, "constants config");
        if (cfg.contains("r")) rs = cfg.at("r").get<std::vector<double>>();
        if (cfg.contains("tol")) tol = cfg.at("tol").get<double>();
        if (cfg.contains("format")) format = cfg.at("format").get<std::string>();
        if (cfg.contains("out")) out_path = cfg.at("out").get<std::string>();
    }
    if (rs.empty()) throw std::runtime_error("constants: need at least one r value (--r)");
    json rows = json::array();
    std::ostringstream table;
    table << "r,C(r),argmin\n";
    for (double r : rs) {
        const auto res = c_of_r(r, tol);
        json row;
        row["r"] = r;
        row["value"] = res.value;
        row["argmin"] = res.argmin;
        row["bracket"] = {res.bracket.first, res.bracket.second};
        row["tolerance"] = res.tolerance;
        rows.push_back(row);
        table << r << ',' << res.value << ',' << res.argmin << '\n';
    }
    if (format == "csv") {
        if (out_path.empty())
            std::cout << table.str();
        else
            write_text_file(out_path, table.str());
        return 0;
    }
    json report;
    report["command"] = "constants";
    report["config"] = {{"r", rs}, {"tol", tol}};
    report["results"] = rows;
    emit(out_path, report);
    return 0;
}

struct CdArgs {
    std::string graph, mode = "check", vertex, out, config;
    double kappa = 0.0;
    double d = std::numeric_limits<double>::infinity();
    std::uint64_t seed = Defaults::seed;
    int samples = Defaults::cd_samples;
    int restarts = Defaults::cd_restarts;
};

int run_cd(CdArgs a) {
    if (!a.config.empty()) {
        const json cfg = load_json_file(a.config);
        io_detail::ensure_keys(
            cfg, {"graph", "mode", "kappa", "d", "vertex", "seed", "samples", "restarts", "out"},
            "cd config");
        if (cfg.contains("graph")) a.graph = cfg.at("graph").get<std::string>();
        if (cfg.contains("mode")) a.mode = cfg.at("mode").get<std::string>();
        if (cfg.contains("kappa")) a.kappa = cfg.at("kappa").get<double>();
        if (cfg.contains("d")) a.d = real_from_json(cfg.at("d"), "cd config d");
        if (cfg.contains("vertex")) a.vertex = cfg.at("vertex").get<std::string>();
        if (cfg.contains("seed")) a.seed = cfg.at("seed").get<std::uint64_t>();
        if (cfg.contains("samples")) a.samples = cfg.at("samples").get<int>();
        if (cfg.contains("restarts")) a.restarts = cfg.at("restarts").get<int>();
        if (cfg.contains("out")) a.out = cfg.at("out").get<std::string>();
    }
    if (a.graph.empty()) throw std::runtime_error("cd: --graph is required");
    const WeightedGraph g = load_graph(a.graph);

    std::vector<int> targets;
    if (a.vertex.empty())
        for (int y = 0; y < g.size(); ++y) targets.push_back(y);
    else
        targets.push_back(g.index_of(a.vertex));

    json results = json::array();
    bool violated = false;
    for (int y : targets) {
        CdReport report;
        if (a.mode == "check") {
            CdSamplerConfig cfg;
            cfg.seed = a.seed;
            cfg.random_samples = a.samples;
            cfg.optimizer.restarts = a.restarts;
            cfg.optimizer.seed = a.seed;
            report = cd_upsilon_check_at(g, y, CdParams(a.kappa, a.d), cfg);
            if (!report.satisfied_on_samples) violated = true;
        } else {
            OptimizerConfig cfg;
            cfg.seed = a.seed;
            cfg.restarts = a.restarts;
            report = cd_upsilon_estimate_min_d(g, y, cfg);
            if (report.status == "refuted_for_all_finite_d") violated = true;
        }
        results.push_back(to_json(report, g));
    }

    json out;
    out["command"] = "cd";
    out["config"] = {{"graph", a.graph},     {"mode", a.mode},     {"kappa", a.kappa},
                     {"d", real_to_json(a.d)}, {"vertex", a.vertex}, {"seed", a.seed},
                     {"samples", a.samples}, {"restarts", a.restarts}};
    out["graph_hash"] = graph_hash(g);
    out["results"] = results;
    emit(a.out, out);
    return violated ? 1 : 0;
}

int run_ricci(std::string graph_path, std::string vertex, long budget, std::string rule,
              int trials, std::string out_path, const std::string& config) {
    if (!config.empty()) {
        const json cfg = load_json_file(config);
        io_detail::ensure_keys(cfg, {"graph", "vertex", "budget", "rule", "trials", "out"},
                               "ricci config");
        if (cfg.contains("graph")) graph_path = cfg.at("graph").get<std::string>();
        if (cfg.contains("vertex")) vertex = cfg.at("vertex").get<std::string>();
        if (cfg.contains("budget")) budget = cfg.at("budget").get<long>();
        if (cfg.contains("rule")) rule = cfg.at("rule").get<std::string>();
        if (cfg.contains("trials")) trials = cfg.at("trials").get<int>();
        if (cfg.contains("out")) out_path = cfg.at("out").get<std::string>();
    }
    if (graph_path.empty()) throw std::runtime_error("ricci: --graph is required");
    const WeightedGraph g = load_graph(graph_path);
    CertifyConfig cfg;
    cfg.node_budget = budget;
    cfg.multiset_rule = (rule == "multiset");

    json results = json::array();
    bool all_certified = true;
    auto handle = [&](int x) {
        const CertifyResult r = certify_at(g, x, cfg);
        json jr = to_json(r);
        jr["vertex"] = g.id_of(x);
        if (r.status == CertifyStatus::certified) {
            const auto check =
                verify_certificate(g, *r.certificate, trials, Defaults::seed, cfg.multiset_rule);
            jr["verified"] = check.ok;
            if (!check.ok) {
                jr["failed_clause"] = check.failed_clause;
                all_certified = false;
            }
        } else {
            all_certified = false;
        }
        results.push_back(jr);
    };

    if (vertex.empty()) {
        const auto v = validate(g);
        if (!v.regular_degree) throw std::domain_error("ricci: graph is not regular");
        for (int x = 0; x < g.size(); ++x) handle(x);
    } else {
        handle(g.index_of(vertex));
    }

    json out;
    out["command"] = "ricci";
    out["config"] = {{"graph", graph_path},
                     {"vertex", vertex},
                     {"budget", budget},
                     {"rule", rule},
                     {"trials", trials}};
    out["graph_hash"] = graph_hash(g);
    out["results"] = results;
    emit(out_path, out);
    return all_certified ? 0 : 1;
}

struct VerifyArgs {
    std::string kind, graph, solution, format = "json", out, config;
    double d = std::numeric_limits<double>::quiet_NaN();
    double kappa = 0.0, theta = 0.5, rho = 1.0, C = 1.0;
    std::vector<double> center;
    int nt = Defaults::plan_nt, nx = Defaults::plan_nx, pairs = Defaults::plan_pairs;
    double tolerance = Defaults::tolerance;
    std::uint64_t seed = Defaults::seed;
};

int run_verify(VerifyArgs a) {
    if (!a.config.empty()) {
        const json cfg = load_json_file(a.config);
        io_detail::ensure_keys(cfg,
                               {"kind", "graph", "solution", "d", "kappa", "theta", "rho", "C",
                                "center", "nt", "nx", "pairs", "tolerance", "seed", "format",
                                "out"},
                               "verify config");
        if (cfg.contains("kind")) a.kind = cfg.at("kind").get<std::string>();
        if (cfg.contains("graph")) a.graph = cfg.at("graph").get<std::string>();
        if (cfg.contains("solution")) a.solution = cfg.at("solution").get<std::string>();
        if (cfg.contains("d")) a.d = real_from_json(cfg.at("d"), "verify config d");
        if (cfg.contains("kappa")) a.kappa = cfg.at("kappa").get<double>();
        if (cfg.contains("theta")) a.theta = cfg.at("theta").get<double>();
        if (cfg.contains("rho")) a.rho = cfg.at("rho").get<double>();
        if (cfg.contains("C")) a.C = cfg.at("C").get<double>();
        if (cfg.contains("center")) a.center = cfg.at("center").get<std::vector<double>>();
        if (cfg.contains("nt")) a.nt = cfg.at("nt").get<int>();
        if (cfg.contains("nx")) a.nx = cfg.at("nx").get<int>();
        if (cfg.contains("pairs")) a.pairs = cfg.at("pairs").get<int>();
        if (cfg.contains("tolerance")) a.tolerance = cfg.at("tolerance").get<double>();
        if (cfg.contains("seed")) a.seed = cfg.at("seed").get<std::uint64_t>();
        if (cfg.contains("format")) a.format = cfg.at("format").get<std::string>();
        if (cfg.contains("out")) a.out = cfg.at("out").get<std::string>();
    }
    if (a.graph.empty()) throw std::runtime_error("verify: --graph is required");
    if (a.solution.empty()) throw std::runtime_error("verify: --solution is required");
    const WeightedGraph g = load_graph(a.graph);
    const GaussianMixtureSolution sol = solution_from_json(load_json_file(a.solution), g);

    if (std::isnan(a.d) && a.kind != "gamma2") {
        // derive the dimension bound from the graph class when not supplied
        if (is_unweighted_complete(g))
            a.d = hybrid_d_for_euclidean(sol.dimension(), g, DiscreteDSource::analytic_complete);
        else if (validate(g).regular_degree)
            a.d = hybrid_d_for_euclidean(sol.dimension(), g, DiscreteDSource::analytic_ricci_flat);
        else
            throw std::runtime_error("verify: supply --d (no closed-form bound for this graph)");
    }

    SamplePlan plan;
    plan.nt = a.nt;
    plan.nx = a.nx;
    plan.tolerance = a.tolerance;

    InequalityReport report;
    if (a.kind == "liyau") {
        report = verify_liyau_global(sol, a.d, plan);
    } else if (a.kind == "liyau-local") {
        if (a.center.empty()) a.center.assign(static_cast<std::size_t>(sol.dimension()), 0.0);
        report = liyau_local_check(sol, a.theta, a.rho, a.center, a.C, a.d, plan);
    } else if (a.kind == "harnack") {
        PairPlan pair_plan;
        pair_plan.pairs = a.pairs;
        pair_plan.seed = a.seed;
        pair_plan.tolerance = a.tolerance;
        report = verify_harnack_global(sol, a.d, pair_plan);
    } else if (a.kind == "cdhyb") {
        report = verify_cd_hyb(sol, a.kappa, a.d, plan);
    } else if (a.kind == "gamma2") {
        report = verify_gamma2_lemma(sol, plan);
    } else {
        throw std::runtime_error("verify: unknown kind '" + a.kind + "'");
    }
    report.seed = a.seed;

    if (a.format == "csv") {
        const std::string row = inequality_csv_row(report) + "\n";
        if (a.out.empty())
            std::cout << row;
        else
            write_text_file(a.out, row);
        return report.passed ? 0 : 1;
    }

    json out;
    out["command"] = "verify";
    out["config"] = {{"kind", a.kind},         {"graph", a.graph},   {"solution", a.solution},
                     {"d", real_to_json(a.d)}, {"kappa", a.kappa},   {"theta", a.theta},
                     {"rho", a.rho},           {"C", a.C},           {"nt", a.nt},
                     {"nx", a.nx},             {"pairs", a.pairs},   {"tolerance", a.tolerance},
                     {"seed", a.seed}};
    out["graph_hash"] = graph_hash(g);
    out["result"] = to_json(report);
    emit(a.out, out);
    return report.passed ? 0 : 1;
}

int run_simulate(const std::string& config_path, const std::string& graph_flag,
                 const std::string& format, double monitor_d, const std::string& out_prefix) {
    const json cfg_json = load_json_file(config_path);
    const SimulationSetup setup = simulation_setup_from_json(cfg_json);
    const std::string graph_path = graph_flag.empty() ? setup.graph_path : graph_flag;
    if (graph_path.empty())
        throw std::runtime_error("simulate: no graph given (config 'graph' or --graph)");
    const WeightedGraph g = load_graph(graph_path);
    if (setup.initial.is_null()) throw std::runtime_error("simulate: config has no 'initial' block");

    const bool monitoring = !std::isnan(monitor_d);
    SimulateConfig cfg = setup.config;
    if (monitoring) cfg.snapshot_stride = 1;  // the monitor needs consecutive snapshots

    GridState u0;
    if (setup.initial.is_object() && setup.initial.value("type", std::string()) == "grid") {
        io_detail::ensure_keys(setup.initial, {"type", "values"}, "grid initial");
        u0.n = cfg.n;
        u0.h = cfg.h;
        u0.time = cfg.t_start;
        u0.vertices = g.size();
        const int m = grid_cells_per_dim(cfg);
        u0.lo.assign(static_cast<std::size_t>(cfg.n), cfg.box[0]);
        u0.cells.assign(static_cast<std::size_t>(cfg.n), m);
        u0.values = setup.initial.at("values").get<std::vector<double>>();
        u0.require_consistent("grid initial");
    } else {
        const GaussianMixtureSolution sol = solution_from_json(setup.initial, g);
        u0 = eval_on_grid(sol, cfg.t_start, cfg);
    }
    const auto trajectory = simulate(g, cfg, u0);

    json out;
    out["command"] = "simulate";
    out["config"] = to_json(cfg);
    out["config"]["graph"] = graph_path;
    out["config"]["initial"] = setup.initial;
    out["graph_hash"] = graph_hash(g);
    out["snapshots"] = trajectory.size();
    out["final_time"] = trajectory.back().time;
    out["initial_mass"] = grid_total_mass(trajectory.front());
    out["final_mass"] = grid_total_mass(trajectory.back());

    bool monitor_violated = false;
    if (monitoring) {
        // per-snapshot pointwise bound with finite-difference derivatives,
        // within the discretization budget 5 (h^2 + dt^2) * scale
        double min_slack = std::numeric_limits<double>::infinity();
        json worst;
        const double budget_factor = 5.0 * (cfg.h * cfg.h + cfg.dt * cfg.dt);
        const long cells = trajectory.front().cells[0];
        const long stride = std::max<long>(1, cells / 64);
        for (std::size_t m = 1; m + 1 < trajectory.size(); ++m) {
            const auto& curr = trajectory[m];
            for (long c0 = 0; c0 < cells; c0 += stride) {
                std::vector<long> idx{c0};
                if (curr.n == 2) idx.push_back(cells / 2);
                for (int v = 0; v < curr.vertices; ++v) {
                    const auto ld = grid_log_derivs(g, trajectory[m - 1], curr, trajectory[m + 1],
                                                    idx, v);
                    const double lhs = ld.grad_v2 + ld.psi_v - ld.dt_v;
                    const double slack = monitor_d / (2.0 * curr.time) +
                                         budget_factor * grid_residual_scale(ld) - lhs;
                    if (slack < min_slack) {
                        min_slack = slack;
                        worst = {{"t", curr.time}, {"cell", c0}, {"vertex", g.id_of(v)}};
                    }
                }
            }
        }
        monitor_violated = min_slack < 0.0;
        out["monitor"] = {{"d", monitor_d},
                          {"min_slack", real_to_json(min_slack)},
                          {"budget_factor", budget_factor},
                          {"worst", worst},
                          {"passed", !monitor_violated}};
    }

    if (format == "csv") {
        std::ostringstream os;
        write_trajectory_csv(os, g, trajectory);
        if (out_prefix.empty())
            std::cout << os.str();
        else
            write_text_file(out_prefix + ".csv", os.str());
    } else {
        json snaps = json::array();
        for (const auto& s : trajectory) snaps.push_back(grid_state_to_json(g, s));
        out["trajectory"] = snaps;
    }
    emit(out_prefix.empty() ? std::string() : out_prefix + ".json", out);
    return monitor_violated ? 1 : 0;
}

int run_convergence(const std::string& config_path, const std::string& graph_flag, int levels,
                    const std::string& out_path) {
    const json cfg_json = load_json_file(config_path);
    const SimulationSetup setup = simulation_setup_from_json(cfg_json);
    const std::string graph_path = graph_flag.empty() ? setup.graph_path : graph_flag;
    if (graph_path.empty()) throw std::runtime_error("convergence: no graph given");
    const WeightedGraph g = load_graph(graph_path);
    if (setup.initial.is_null())
        throw std::runtime_error("convergence: config has no 'initial' block");
    const GaussianMixtureSolution sol = solution_from_json(setup.initial, g);

    const auto rows = convergence_table(sol, setup.config, levels);
    json out;
    out["command"] = "convergence";
    out["config"] = to_json(setup.config);
    out["config"]["graph"] = graph_path;
    out["config"]["levels"] = levels;
    out["graph_hash"] = graph_hash(g);
    out["results"] = to_json(rows);
    emit(out_path, out);
    if (!out_path.empty()) {
        std::ostringstream table;
        table << "h,dt,linf_error,order,roundoff_flagged\n";
        for (const auto& row : rows)
            table << row.h << ',' << row.dt << ',' << row.linf_error << ','
                  << (std::isnan(row.order) ? std::string("-") : std::to_string(row.order)) << ','
                  << (row.roundoff_flagged ? "yes" : "no") << '\n';
        std::cout << table.str();
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"hybrid continuous-discrete curvature-dimension toolkit"};
    app.require_subcommand(1);

    auto* constants = app.add_subcommand("constants", "optimal quadratic bound constants C(r)");
    std::vector<double> rs;
    double c_tol = Defaults::c_tol;
    std::string c_format = "json", c_out, c_config;
    constants->add_option("--r", rs, "r values (comma separated)")->delimiter(',');
    constants->add_option("--tol", c_tol, "argmin tolerance");
    constants->add_option("--format", c_format, "json|csv")->check(CLI::IsMember({"json", "csv"}));
    constants->add_option("--out", c_out, "output file (default stdout)");
    constants->add_option("--config", c_config, "JSON config overriding the flags");

    auto* cd = app.add_subcommand("cd", "curvature-dimension checks and estimates per vertex");
    CdArgs cd_args;
    cd->add_option("--graph", cd_args.graph, "graph JSON file");
    cd->add_option("--mode", cd_args.mode, "check|estimate")
        ->check(CLI::IsMember({"check", "estimate"}));
    cd->add_option("--kappa", cd_args.kappa, "curvature parameter");
    cd->add_option("--d", cd_args.d, "dimension parameter (omit for inf)");
    cd->add_option("--vertex", cd_args.vertex, "restrict to one vertex id");
    cd->add_option("--seed", cd_args.seed, "sampler seed");
    cd->add_option("--samples", cd_args.samples, "random samples per vertex");
    cd->add_option("--restarts", cd_args.restarts, "optimizer restarts");
    cd->add_option("--out", cd_args.out, "output file");
    cd->add_option("--config", cd_args.config, "JSON config overriding the flags");

    auto* ricci = app.add_subcommand("ricci", "Ricci-flatness certificates");
    std::string r_graph, r_vertex, r_rule = "multiset", r_out, r_config;
    long r_budget = Defaults::ricci_budget;
    int r_trials = Defaults::ricci_trials;
    ricci->add_option("--graph", r_graph, "graph JSON file");
    ricci->add_option("--vertex", r_vertex, "certify a single vertex id");
    ricci->add_option("--budget", r_budget, "search node budget");
    ricci->add_option("--rule", r_rule, "multiset|set commutation rule")
        ->check(CLI::IsMember({"multiset", "set"}));
    ricci->add_option("--trials", r_trials, "verification trial functions");
    ricci->add_option("--out", r_out, "output file");
    ricci->add_option("--config", r_config, "JSON config overriding the flags");

    auto* verify = app.add_subcommand("verify", "inequality checks on closed-form solutions");
    VerifyArgs v;
    verify->add_option("--kind", v.kind, "liyau|liyau-local|harnack|cdhyb|gamma2")->required();
    verify->add_option("--graph", v.graph, "graph JSON file");
    verify->add_option("--solution", v.solution, "solution config JSON file");
    verify->add_option("--d", v.d, "dimension parameter (default: closed-form bound)");
    verify->add_option("--kappa", v.kappa, "curvature parameter (cdhyb)");
    verify->add_option("--theta", v.theta, "localization parameter (liyau-local)");
    verify->add_option("--rho", v.rho, "ball radius (liyau-local)");
    verify->add_option("--C", v.C, "cutoff constant (liyau-local)");
    verify->add_option("--center", v.center, "ball centre coordinates")->delimiter(',');
    verify->add_option("--nt", v.nt, "time samples");
    verify->add_option("--nx", v.nx, "x samples per dimension");
    verify->add_option("--pairs", v.pairs, "harnack pairs");
    verify->add_option("--tolerance", v.tolerance, "slack tolerance");
    verify->add_option("--seed", v.seed, "plan seed");
    verify->add_option("--format", v.format, "json|csv")->check(CLI::IsMember({"json", "csv"}));
    verify->add_option("--out", v.out, "output file");
    verify->add_option("--config", v.config, "JSON config overriding the flags");

    auto* sim = app.add_subcommand("simulate", "finite-difference evolution");
    std::string s_config, s_graph, s_format = "json", s_out;
    double s_monitor_d = std::numeric_limits<double>::quiet_NaN();
    sim->add_option("--config", s_config, "simulation config JSON")->required();
    sim->add_option("--graph", s_graph, "graph JSON (overrides config)");
    sim->add_option("--format", s_format, "json|csv")->check(CLI::IsMember({"json", "csv"}));
    sim->add_option("--monitor-liyau", s_monitor_d, "monitor the pointwise bound with this d");
    sim->add_option("--out", s_out, "output prefix");

    auto* conv = app.add_subcommand("convergence", "order study against the exact evaluator");
    std::string cv_config, cv_graph, cv_out;
    int cv_levels = 3;
    conv->add_option("--config", cv_config, "simulation config JSON")->required();
    conv->add_option("--graph", cv_graph, "graph JSON (overrides config)");
    conv->add_option("--levels", cv_levels, "refinement levels");
    conv->add_option("--out", cv_out, "output file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (constants->parsed()) return run_constants(rs, c_tol, c_format, c_out, c_config);
        if (cd->parsed()) return run_cd(cd_args);
        if (ricci->parsed())
            return run_ricci(r_graph, r_vertex, r_budget, r_rule, r_trials, r_out, r_config);
        if (verify->parsed()) return run_verify(v);
        if (sim->parsed()) return run_simulate(s_config, s_graph, s_format, s_monitor_d, s_out);
        if (conv->parsed()) return run_convergence(cv_config, cv_graph, cv_levels, cv_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
