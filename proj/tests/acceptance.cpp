// Acceptance suite: end-to-end checks of the full toolkit, one pass/fail
// line per criterion.  Every tolerance is pinned here in code.  Exits
// nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hybridcd/io.hpp"

using namespace hybridcd;

namespace {

int failures = 0;

struct Criterion {
    std::string label;
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    bool ok = true;
    std::ostringstream detail;

    explicit Criterion(std::string l) : label(std::move(l)) {}

    void require(bool condition, const std::string& what) {
        if (!condition) {
            if (!ok) detail << "; ";
            detail << "FAILED: " << what;
            ok = false;
        }
    }

    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }

    void finish(const std::string& summary = "") {
        const double secs = seconds();
        std::printf("[%s] %s: %s(%.2fs)\n", ok ? "PASS" : "FAIL", label.c_str(),
                    (ok ? summary + " " : detail.str() + " ").c_str(), secs);
        std::fflush(stdout);
        if (!ok) ++failures;
    }
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

// ---------------------------------------------------------------------------

void criterion_1_c2() {
    Criterion c("1. constant C(2)");
    const auto res = c_of_r(2.0);
    c.require(std::abs(res.value - 1.590) <= 0.01, "C(2) within 0.01 of 1.590");

    // internal oracle: dense uniform scan with 1e7 points on [-50, 50]
    double oracle = std::numeric_limits<double>::infinity();
    const int points = 10'000'000;
    for (int i = 0; i <= points; ++i) {
        const double w = -50.0 + 100.0 * i / points;
        if (std::abs(w) < 1e-8) continue;
        const double num = 2.0 * std::expm1(w) * w + (std::expm1(-w) + w) - (std::expm1(w) - w);
        const double ratio = num / (w * w);
        if (ratio < oracle) oracle = ratio;
    }
    c.require(std::abs(res.value - oracle) <= 1e-6, "golden-section agrees with the dense scan");
    c.require(c.seconds() < 5.0, "runtime below 5 s");
    std::ostringstream s;
    s << "C(2)=" << res.value << ", |golden-scan|=" << std::abs(res.value - oracle);
    c.finish(s.str());
}

void criterion_2_cr_grid() {
    Criterion c("2. C(r) monotonicity and quadratic bound");
    double prev = 0.0;
    double worst_slack = std::numeric_limits<double>::infinity();
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> uw(-50.0, 50.0);
    for (double r = 0.0; r <= 5.0 + 1e-12; r += 0.5) {
        const double cr = c_of_r(r).value;
        c.require(cr >= 1.0 - 1e-12, "C(r) >= 1 at r = " + std::to_string(r));
        c.require(cr >= prev - 1e-9, "C(r) nondecreasing at r = " + std::to_string(r));
        prev = cr;
        for (int i = 0; i < 100'000; ++i) {
            const double w = uw(rng);
            const double slack = nu(r, r - 1.0, w) - cr * w * w;
            worst_slack = std::min(worst_slack, slack);
        }
    }
    c.require(std::abs(c_of_r(0.0).value - 1.0) <= 1e-6, "C(0) = 1 within 1e-6");
    c.require(worst_slack >= -1e-10, "nu(r,r-1,w) >= C(r) w^2 with slack >= -1e-10");
    std::ostringstream s;
    s << "worst quadratic-bound slack=" << worst_slack;
    c.finish(s.str());
}

void criterion_3_two_point() {
    Criterion c("3. two-point graph");
    // composite Psi_2 equals the closed form on 1e4 random (eta, a)
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> eta_dist(0.1, 3.0), a_dist(-4.0, 4.0);
    double worst = 0.0;
    for (int i = 0; i < 10'000; ++i) {
        const double eta = eta_dist(rng), a = a_dist(rng);
        const auto g = graphs::two_point(eta);
        const auto psi2 = psi2_upsilon(g, {0.0, a});
        const double closed = eta * eta / 2.0 * nu(2.0, 1.0, a);
        worst = std::max(worst, std::abs(psi2[0] - closed) / std::max(1.0, std::abs(closed)));
    }
    c.require(worst <= 1e-12, "composite Psi_2 equals (eta^2/2) nu_{2,1}(a) to 1e-12");

    const auto g = graphs::two_point(1.0);
    const auto est = cd_upsilon_estimate_min_d(g, 0);
    const double target = 2.0 / c2();
    c.require(std::abs(est.minimal_d_estimate - target) <= 0.01,
              "minimal-d estimate within 0.01 of 2/C(2)");

    const auto check = cd_upsilon_check_at(g, 0, CdParams(0.0, 2.0));
    c.require(check.satisfied_on_samples, "no sampled violation of the (0, 2) condition");
    c.require(c.seconds() < 30.0, "runtime below 30 s");
    std::ostringstream s;
    s << "estimate=" << est.minimal_d_estimate << " (2/C(2)=" << target << ")";
    c.finish(s.str());
}

void criterion_4_complete_graphs() {
    Criterion c("4. complete graphs K3, K4");
    for (int m : {3, 4}) {
        const auto g = graphs::complete(m);
        const double bound = analytic_d_complete(m);
        for (int y = 0; y < m; ++y) {
            const auto check = cd_upsilon_check_at(g, y, CdParams(0.0, bound));
            c.require(check.satisfied_on_samples,
                      "no sampled violation of (0, 2(m-1)/C(m)) on K" + std::to_string(m));
            const auto est = cd_upsilon_estimate_min_d(g, y);
            c.require(est.minimal_d_estimate <= bound + 0.01,
                      "estimate within bound + 0.01 on K" + std::to_string(m));
        }
    }
    std::ostringstream s;
    s << "bounds: K3=" << analytic_d_complete(3) << ", K4=" << analytic_d_complete(4);
    c.finish(s.str());
}

void criterion_5_ricci() {
    Criterion c("5. Ricci-flat certification");
    struct Case {
        std::string name;
        WeightedGraph graph;
        std::vector<int> vertices;  // empty: all
    };
    std::vector<Case> cases;
    cases.push_back({"K3", graphs::complete(3), {}});
    cases.push_back({"K4", graphs::complete(4), {}});
    cases.push_back({"square", graphs::cycle(4), {}});
    cases.push_back({"K33", graphs::complete_bipartite(3, 3), {}});
    cases.push_back({"Z-ball", graphs::integer_ball(2), {2}});
    for (auto& item : cases) {
        std::vector<int> targets = item.vertices;
        if (targets.empty())
            for (int x = 0; x < item.graph.size(); ++x) targets.push_back(x);
        for (int x : targets) {
            const auto result = certify_at(item.graph, x);
            c.require(result.status == CertifyStatus::certified,
                      item.name + " certified at vertex " + std::to_string(x));
            if (result.certificate) {
                const auto check = verify_certificate(item.graph, *result.certificate, 1000);
                c.require(check.ok, item.name + " certificate verifies (1000 trials + basis)");
            }
        }
    }
    // brute-force enumeration agreement on K3 (independent oracle)
    {
        const auto g = graphs::complete(3);
        std::vector<int> closed{0, 1, 2};
        bool brute_exists = false;
        for (int mask = 0; mask < 8 && !brute_exists; ++mask) {
            std::vector<std::vector<int>> eta(2, std::vector<int>(3));
            for (int col = 0; col < 3; ++col) {
                std::vector<int> ns;
                for (const auto& e : g.out_edges(col)) ns.push_back(e.to);
                std::sort(ns.begin(), ns.end());
                const bool flip = (mask >> col) & 1;
                eta[0][static_cast<std::size_t>(col)] = ns[flip ? 1 : 0];
                eta[1][static_cast<std::size_t>(col)] = ns[flip ? 0 : 1];
            }
            bool ok = true;
            for (int i = 0; i < 2 && ok; ++i) {
                std::vector<int> lhs, rhs;
                for (int j = 0; j < 2; ++j) {
                    lhs.push_back(eta[static_cast<std::size_t>(i)]
                                     [static_cast<std::size_t>(eta[static_cast<std::size_t>(j)][0])]);
                    rhs.push_back(eta[static_cast<std::size_t>(j)]
                                     [static_cast<std::size_t>(eta[static_cast<std::size_t>(i)][0])]);
                }
                std::sort(lhs.begin(), lhs.end());
                std::sort(rhs.begin(), rhs.end());
                if (lhs != rhs) ok = false;
            }
            if (ok) brute_exists = true;
        }
        const bool search_exists = certify_at(g, 0).status == CertifyStatus::certified;
        c.require(brute_exists == search_exists, "brute-force enumeration agrees on K3");
    }
    c.require(c.seconds() < 60.0, "runtime below 60 s");
    c.finish("K3, K4, square, K33, Z-ball centre all certified and re-verified");
}

void criterion_6_liyau() {
    Criterion c("6. global differential Harnack bound");
    double worst = std::numeric_limits<double>::infinity();
    // 20 seeded mixtures on the two-point graph: 25 x 200 x 2 = 1e4 samples
    {
        const auto g = graphs::two_point(1.0);
        const double d = 1.0 + 2.0 / c2();
        SamplePlan plan;
        plan.nt = 25;
        plan.nx = 200;
        for (std::uint64_t seed = 1; seed <= 20; ++seed) {
            const auto sol = random_mixture(g, 1, seed);
            const auto report = verify_liyau_global(sol, d, plan);
            c.require(report.samples == 10'000, "two-point plan has 1e4 samples");
            c.require(report.min_slack >= -1e-9,
                      "two-point mixture seed " + std::to_string(seed) + " slack >= -1e-9");
            worst = std::min(worst, report.min_slack);
        }
    }
    // same for the square graph: 25 x 100 x 4 = 1e4 samples
    {
        const auto g = graphs::cycle(4);
        const double d = 1.0 + 4.0 / c2();
        SamplePlan plan;
        plan.nt = 25;
        plan.nx = 100;
        for (std::uint64_t seed = 1; seed <= 20; ++seed) {
            const auto sol = random_mixture(g, 1, 100 + seed);
            const auto report = verify_liyau_global(sol, d, plan);
            c.require(report.samples == 10'000, "square plan has 1e4 samples");
            c.require(report.min_slack >= -1e-9,
                      "square mixture seed " + std::to_string(seed) + " slack >= -1e-9");
            worst = std::min(worst, report.min_slack);
        }
    }
    // sharpness sentinel: y-constant single Gaussian attains n/(2t) exactly,
    // with t measured from the kernel's origin (solution time + offset tau)
    {
        const double tau = 0.5;
        MixtureTerm term;
        term.alpha = 1.0;
        term.center = {0.0};
        term.tau = tau;
        term.profile = {1.0, 1.0};
        const GaussianMixtureSolution sol(1, graphs::two_point(1.0), {term});
        for (double t : {0.1, 0.5, 2.0, 8.0}) {
            for (double x : {0.0, 0.7, -2.3}) {
                const double lhs = liyau_lhs(sol, t, {x}, 0);
                c.require(std::abs(lhs - 1.0 / (2.0 * (t + tau))) <= 1e-10,
                          "sentinel equality at kernel age " + std::to_string(t + tau));
            }
        }
    }
    std::ostringstream s;
    s << "worst slack over 40 mixtures = " << worst;
    c.finish(s.str());
}

void criterion_7_harnack() {
    Criterion c("7. global two-point comparison");
    double worst = std::numeric_limits<double>::infinity();
    struct Case {
        WeightedGraph graph;
        double d;
        std::uint64_t seed;
    };
    std::vector<Case> cases;
    cases.push_back({graphs::two_point(1.0), 1.0 + 2.0 / c2(), 41});
    cases.push_back({graphs::cycle(4), 1.0 + 4.0 / c2(), 42});
    for (const auto& item : cases) {
        const auto sol = random_mixture(item.graph, 1, item.seed);
        PairPlan plan;
        plan.pairs = 10'000;
        plan.seed = item.seed;
        const auto report = verify_harnack_global(sol, item.d, plan);
        c.require(report.samples == 10'000, "plan has 1e4 pairs");
        c.require(report.min_slack >= -1e-9, "relative slack >= -1e-9");
        worst = std::min(worst, report.min_slack);

        // same-species subfamily: the bound with no discrete penalty term
        std::mt19937_64 rng(item.seed + 1);
        std::uniform_real_distribution<double> ux(-2.0, 2.0), ut(0.1, 2.0), gap(0.1, 2.0);
        const double kmin = k_min(item.graph);
        for (int i = 0; i < 2000; ++i) {
            const double t1 = ut(rng), t2 = t1 + gap(rng);
            const std::vector<double> x1{ux(rng)}, x2{ux(rng)};
            const int y = i % item.graph.size();
            const double rhs = harnack_rhs_global(item.d, t1, t2, x1, x2, 0, kmin);
            const double u1 = sol.value(t1, x1, y), u2 = sol.value(t2, x2, y);
            c.require(u1 <= rhs * u2 * (1.0 + 1e-9), "single-species form holds");
        }
    }
    std::ostringstream s;
    s << "worst relative slack = " << worst;
    c.finish(s.str());
}

void criterion_8_hybrid() {
    Criterion c("8. hybrid iterated form and tensorisation");
    const auto g = graphs::complete(2);
    const double d = 1.0 + 2.0 / c2();
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> ux(-2.5, 2.5), ut(0.05, 6.0);
    double worst_lemma = std::numeric_limits<double>::infinity();
    double worst_cd = std::numeric_limits<double>::infinity();
    int probes = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto sol = random_mixture(g, 1, 500 + seed);
        for (int i = 0; i < 100; ++i) {
            const double t = ut(rng);
            const std::vector<double> x{ux(rng)};
            const int y = i % 2;
            const auto hg = hybrid_gamma2(sol, t, x, y);
            worst_lemma = std::min(worst_lemma, hg.lhs - hg.gamma2 - hg.psi2);
            worst_cd = std::min(worst_cd, hg.lhs - hg.lu * hg.lu / d);
            ++probes;
        }
    }
    c.require(probes == 1000, "1e3 probes evaluated");
    c.require(worst_lemma >= -1e-9, "iterated hybrid form dominates the split sum");
    c.require(worst_cd >= -1e-9, "hybrid condition with d = n + 2/C(2) holds on all probes");

    const auto t1 = tensorise(CdParams(0.0, 3.0), CdParams(0.0, 2.0));
    c.require(t1.kappa == 0.0 && t1.d == 5.0, "tensorise (0,3) x (0,2) = (0,5)");
    const auto t2 =
        tensorise(CdParams(1.0, std::numeric_limits<double>::infinity()), CdParams(-1.0, 4.0));
    c.require(t2.kappa == -1.0 && std::isinf(t2.d), "tensorise absorbs infinity");
    const auto t3 = tensorise(CdParams(0.0, 1.0), CdParams(2.0, 2.0));
    c.require(t3.kappa == 0.0 && t3.d == 3.0, "tensorise keeps the smaller curvature");
    std::ostringstream s;
    s << "worst lemma slack=" << worst_lemma << ", worst hybrid-cd slack=" << worst_cd;
    c.finish(s.str());
}

void criterion_9_simulator() {
    Criterion c("9. simulator convergence, mass, positivity");
    // n = 1
    {
        const auto start = std::chrono::steady_clock::now();
        const auto g = graphs::two_point(1.0);
        const auto sol = random_mixture(g, 1, 7);
        SimulateConfig cfg;
        cfg.n = 1;
        cfg.h = 0.2;
        cfg.box = {-12.8, 12.8};
        cfg.dt = 0.0125;
        cfg.t_start = 0.25;
        cfg.t_end = 0.75;
        const auto rows = convergence_table(sol, cfg, 3);
        for (std::size_t i = 1; i < rows.size(); ++i) {
            c.require(!rows[i].roundoff_flagged, "n=1 errors above the roundoff floor");
            c.require(rows[i].order >= 1.7 && rows[i].order <= 2.3,
                      "n=1 observed order in [1.7, 2.3]");
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        c.require(secs < 120.0, "n=1 study below 2 min");

        // mass and positivity along a stride-1 trajectory
        cfg.snapshot_stride = 10;
        const auto traj = simulate(g, cfg, eval_on_grid(sol, cfg.t_start, cfg));
        const double mass0 = grid_total_mass(traj.front());
        for (const auto& s : traj) {
            double mn = s.values[0];
            for (double v : s.values) mn = std::min(mn, v);
            c.require(mn > 0.0, "n=1 positivity preserved");
            const double horizon = std::max(s.time - cfg.t_start, 1e-9);
            c.require(std::abs(grid_total_mass(s) - mass0) / mass0 <= 1e-10 * std::max(1.0, horizon),
                      "n=1 mass drift within 1e-10 per unit time");
        }
    }
    // n = 2
    {
        const auto start = std::chrono::steady_clock::now();
        MixtureTerm term;
        term.alpha = 1.0;
        term.center = {0.3, -0.2};
        term.tau = 0.4;
        term.profile = {1.0, 2.0};
        const GaussianMixtureSolution sol(2, graphs::two_point(1.0), {term});
        SimulateConfig cfg;
        cfg.n = 2;
        cfg.h = 0.2;
        cfg.box = {-8.0, 8.0};
        cfg.dt = 0.00625;
        cfg.t_start = 0.25;
        cfg.t_end = 0.5;
        const auto rows = convergence_table(sol, cfg, 3);
        for (std::size_t i = 1; i < rows.size(); ++i) {
            c.require(!rows[i].roundoff_flagged, "n=2 errors above the roundoff floor");
            c.require(rows[i].order >= 1.7 && rows[i].order <= 2.3,
                      "n=2 observed order in [1.7, 2.3]");
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        c.require(secs < 600.0, "n=2 study below 10 min");
    }
    c.finish("orders within [1.7, 2.3], mass conserved, positivity preserved");
}

void criterion_10_log_residual() {
    Criterion c("10. log-evolution residual");
    // exact solutions
    double worst_exact = 0.0;
    std::mt19937_64 rng(606);
    std::uniform_real_distribution<double> ux(-2.5, 2.5), ut(0.05, 6.0);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto sol = random_mixture(graphs::cycle(4), 1, 700 + seed);
        for (int i = 0; i < 400; ++i) {
            const double res = std::abs(log_evolution_residual(sol, ut(rng), {ux(rng)}, i % 4));
            worst_exact = std::max(worst_exact, res);
        }
    }
    c.require(worst_exact <= 1e-8, "exact-solution residual below 1e-8");

    // simulated states within the discretization budget 5 (h^2 + dt^2) * scale
    const auto g = graphs::two_point(1.0);
    const auto sol = random_mixture(g, 1, 5);
    double worst_ratio = 0.0;
    for (int level = 0; level < 3; ++level) {
        SimulateConfig cfg;
        cfg.n = 1;
        cfg.h = 0.2 / std::pow(2.0, level);
        cfg.box = {-12.8, 12.8};
        cfg.dt = 0.0125 / std::pow(4.0, level);
        cfg.t_start = 0.25;
        cfg.t_end = 0.5;
        cfg.snapshot_stride = 1;
        const auto traj = simulate(g, cfg, eval_on_grid(sol, cfg.t_start, cfg));
        const double budget_factor = 5.0 * (cfg.h * cfg.h + cfg.dt * cfg.dt);
        const long cells = traj.front().cells[0];
        for (std::size_t m = traj.size() / 4; m + 1 < traj.size(); m += traj.size() / 4) {
            for (long cell = 0; cell < cells; cell += std::max<long>(1, cells / 40)) {
                for (int v = 0; v < 2; ++v) {
                    const auto ld = grid_log_derivs(g, traj[m - 1], traj[m], traj[m + 1], {cell}, v);
                    const double res =
                        std::abs(ld.dt_v - ld.lap_v - ld.ld_v - (ld.grad_v2 + ld.psi_v));
                    const double budget = budget_factor * grid_residual_scale(ld);
                    worst_ratio = std::max(worst_ratio, res / budget);
                    c.require(res <= budget, "simulated-state residual within the budget");
                }
            }
        }
    }
    std::ostringstream s;
    s << "worst exact residual=" << worst_exact << ", worst simulated residual/budget="
      << worst_ratio;
    c.finish(s.str());
}

void criterion_11_determinism() {
    Criterion c("11. determinism");
    // library level: identical seeds give byte-identical serialized reports
    {
        const auto g = graphs::complete(3);
        CdSamplerConfig cfg;
        cfg.seed = 2718;
        const std::string a = to_json(cd_upsilon_check_at(g, 0, CdParams(0.0, 3.0), cfg), g).dump();
        const std::string b = to_json(cd_upsilon_check_at(g, 0, CdParams(0.0, 3.0), cfg), g).dump();
        c.require(a == b, "cd reports byte-identical for equal seeds");

        const auto sol = random_mixture(g, 1, 3);
        PairPlan plan;
        plan.pairs = 500;
        plan.seed = 99;
        const std::string h1 = to_json(verify_harnack_global(sol, 4.0, plan)).dump();
        const std::string h2 = to_json(verify_harnack_global(sol, 4.0, plan)).dump();
        c.require(h1 == h2, "harnack reports byte-identical for equal seeds");
    }
    // CLI level: run the binary twice into different files and compare bytes
    {
        namespace fs = std::filesystem;
        const fs::path dir = fs::path("acceptance_tmp");
        fs::create_directories(dir);
        const fs::path graph_path = dir / "graph.json";
        {
            std::ofstream out(graph_path);
            out << graph_to_json(graphs::cycle(4)).dump(2) << "\n";
        }
        const std::string cli = HYBRIDCD_CLI_PATH;
        auto run = [&](const std::string& out_name) {
            std::ostringstream cmd;
            cmd << cli << " cd --graph " << graph_path.string() << " --mode estimate --seed 7"
                << " --out " << (dir / out_name).string() << " > /dev/null 2>&1";
            return std::system(cmd.str().c_str());
        };
        const int rc1 = run("a.json");
        const int rc2 = run("b.json");
        c.require(rc1 == 0 && rc2 == 0, "CLI runs succeed");
        const std::string a = read_file((dir / "a.json").string());
        const std::string b = read_file((dir / "b.json").string());
        c.require(!a.empty() && a == b, "CLI reports byte-identical for equal seeds");
    }
    c.finish("library and CLI reports reproduce byte-for-byte");
}

} // namespace

int main() {
    std::printf("acceptance suite\n");
    criterion_1_c2();
    criterion_2_cr_grid();
    criterion_3_two_point();
    criterion_4_complete_graphs();
    criterion_5_ricci();
    criterion_6_liyau();
    criterion_7_harnack();
    criterion_8_hybrid();
    criterion_9_simulator();
    criterion_10_log_residual();
    criterion_11_determinism();
    if (failures > 0) {
        std::printf("%d criterion(s) failed\n", failures);
        return 1;
    }
    std::printf("all criteria passed\n");
    return 0;
}
