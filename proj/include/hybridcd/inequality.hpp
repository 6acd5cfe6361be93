// inequality.hpp — sampled verification of the pointwise estimates satisfied
// by positive solutions of du/dt = (Laplacian + L_d) u: the differential
// Harnack bound -L log u <= d/2t (global and ball-local forms), the
// two-point Harnack comparison it integrates to, and the hybrid
// curvature-dimension inequalities evaluated on solution slices.
//
// Verification here means: no violation on an explicit, seeded sample plan.
// Reports carry the plan, the worst sample and the caveat; they never claim
// a proof.

#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "hybridcd/cd.hpp"
#include "hybridcd/graph.hpp"
#include "hybridcd/heat.hpp"

namespace hybridcd {

enum class InequalityKind {
    liyau_global,
    liyau_local,
    harnack_global,
    harnack_local,
    lemma_gamma2,
    cd_hyb,
};

inline const char* to_string(InequalityKind k) {
    switch (k) {
        case InequalityKind::liyau_global: return "liyau_global";
        case InequalityKind::liyau_local: return "liyau_local";
        case InequalityKind::harnack_global: return "harnack_global";
        case InequalityKind::harnack_local: return "harnack_local";
        case InequalityKind::lemma_gamma2: return "lemma_gamma2";
        case InequalityKind::cd_hyb: return "cd_hyb";
    }
    return "unknown";
}

struct ProbePoint {
    double t = 0.0;
    std::vector<double> x;
    int y = 0;
};

struct InequalityReport {
    InequalityKind kind = InequalityKind::liyau_global;
    long samples = 0;
    double min_slack = std::numeric_limits<double>::infinity();
    ProbePoint worst_point;
    std::optional<ProbePoint> worst_point_second;  // pair checks
    std::map<std::string, double> parameters;      // d, theta, rho, C, k_min, plan fields
    bool passed = false;
    double tolerance = 1e-9;
    std::uint64_t seed = 0;
    std::string caveat = kSampledCheckCaveat;
    std::string note;  // extra scope remarks, e.g. finite-vertex-set restriction
};

// Tensor sample plan: log-spaced times, a uniform x-grid per time covering
// the mixture centers padded by pad_sigmas * sqrt(t) per coordinate, and
// every vertex.
struct SamplePlan {
    int nt = 25;
    double t_lo = 0.05;
    double t_hi = 10.0;
    int nx = 20;  // per dimension
    double pad_sigmas = 6.0;
    double tolerance = 1e-9;
};

// Seeded plan of space-time-vertex pairs with t1 < t2.  Leading fractions of
// the plan pin y1 = y2 and x1 = x2 subfamilies.
struct PairPlan {
    int pairs = 10000;
    std::uint64_t seed = 1;
    double t_lo = 0.05;
    double t_hi = 4.0;
    double min_gap = 0.05;
    double max_gap = 3.0;
    double pad_sigmas = 4.0;
    double tolerance = 1e-9;  // relative to u(t1, x1, y1)
    double same_vertex_fraction = 0.2;
    double same_point_fraction = 0.2;
};

namespace detail {

struct LogDerivs {
    double grad_v2 = 0.0;  // |grad log u|^2
    double psi_v = 0.0;    // Psi_Upsilon(log u)(y)
    double dt_v = 0.0;
    double lap_v = 0.0;
    double ld_v = 0.0;     // L_d log u (y)
};

inline LogDerivs log_derivs(const GaussianMixtureSolution& sol,
                            const std::vector<DerivativeBundle>& bundles, int y) {
    const int V = sol.graph().size();
    VertexFunction v(static_cast<std::size_t>(V), 0.0);
    for (int z = 0; z < V; ++z)
        v[static_cast<std::size_t>(z)] = std::log(bundles[static_cast<std::size_t>(z)].u);
    const auto& b = bundles[static_cast<std::size_t>(y)];
    double grad2 = 0.0;
    for (double gc : b.grad_u) grad2 += gc * gc;
    LogDerivs d;
    d.grad_v2 = grad2 / (b.u * b.u);
    d.psi_v = psi_upsilon(sol.graph(), v)[static_cast<std::size_t>(y)];
    d.dt_v = b.dt_u / b.u;
    d.lap_v = b.lap_u / b.u - d.grad_v2;
    d.ld_v = ld_apply(sol.graph(), v)[static_cast<std::size_t>(y)];
    return d;
}

// x-grid covering the mixture centers padded by pad * sqrt(t) (component-wise
// hull), with nx uniform points per dimension
inline std::vector<std::vector<double>> plan_x_grid(const GaussianMixtureSolution& sol, double t,
                                                    int nx, double pad) {
    const int n = sol.dimension();
    std::vector<double> lo(static_cast<std::size_t>(n), std::numeric_limits<double>::infinity());
    std::vector<double> hi(static_cast<std::size_t>(n), -std::numeric_limits<double>::infinity());
    for (const auto& term : sol.terms())
        for (int d = 0; d < n; ++d) {
            lo[static_cast<std::size_t>(d)] = std::min(lo[static_cast<std::size_t>(d)],
                                                       term.center[static_cast<std::size_t>(d)]);
            hi[static_cast<std::size_t>(d)] = std::max(hi[static_cast<std::size_t>(d)],
                                                       term.center[static_cast<std::size_t>(d)]);
        }
    const double padding = pad * std::sqrt(t);
    std::vector<std::vector<double>> axes(static_cast<std::size_t>(n));
    for (int d = 0; d < n; ++d) {
        const double a = lo[static_cast<std::size_t>(d)] - padding;
        const double b = hi[static_cast<std::size_t>(d)] + padding;
        auto& axis = axes[static_cast<std::size_t>(d)];
        for (int i = 0; i < nx; ++i)
            axis.push_back(nx == 1 ? 0.5 * (a + b) : a + (b - a) * i / (nx - 1));
    }
    std::vector<std::vector<double>> points;
    std::vector<int> idx(static_cast<std::size_t>(n), 0);
    while (true) {
        std::vector<double> x(static_cast<std::size_t>(n), 0.0);
        for (int d = 0; d < n; ++d)
            x[static_cast<std::size_t>(d)] = axes[static_cast<std::size_t>(d)][static_cast<std::size_t>(idx[static_cast<std::size_t>(d)])];
        points.push_back(std::move(x));
        int d = 0;
        for (; d < n; ++d) {
            if (++idx[static_cast<std::size_t>(d)] < nx) break;
            idx[static_cast<std::size_t>(d)] = 0;
        }
        if (d == n) break;
    }
    return points;
}

inline std::vector<double> log_spaced(double lo, double hi, int count) {
    std::vector<double> out;
    const double llo = std::log(lo), lhi = std::log(hi);
    for (int i = 0; i < count; ++i)
        out.push_back(std::exp(count == 1 ? llo : llo + (lhi - llo) * i / (count - 1)));
    return out;
}

inline void record_plan(InequalityReport& r, const SamplePlan& p) {
    r.parameters["plan_nt"] = p.nt;
    r.parameters["plan_t_lo"] = p.t_lo;
    r.parameters["plan_t_hi"] = p.t_hi;
    r.parameters["plan_nx"] = p.nx;
    r.parameters["plan_pad_sigmas"] = p.pad_sigmas;
}

} // namespace detail

// ---------------------------------------------------------------------------
// differential Harnack (Li-Yau form)
// ---------------------------------------------------------------------------

// |grad log u|^2 + Psi_Upsilon(log u) - d/dt log u, evaluated analytically
// and cross-checked against -(Laplacian + L_d) log u, which it equals for
// exact solutions.
inline double liyau_lhs(const GaussianMixtureSolution& sol, double t, const std::vector<double>& x,
                        int y) {
    const auto bundles = sol.derivs_all(t, x);
    const auto d = detail::log_derivs(sol, bundles, y);
    const double lhs = d.grad_v2 + d.psi_v - d.dt_v;
    const double other = -(d.lap_v + d.ld_v);
    if (std::abs(lhs - other) > 1e-9 * std::max(1.0, std::abs(lhs)))
        throw std::logic_error("liyau_lhs: the two evaluation routes disagree");
    return lhs;
}

inline double liyau_slack(const GaussianMixtureSolution& sol, double d, double t,
                          const std::vector<double>& x, int y) {
    return d / (2.0 * t) - liyau_lhs(sol, t, x, y);
}

inline InequalityReport verify_liyau_global(const GaussianMixtureSolution& sol, double d,
                                            const SamplePlan& plan = {}) {
    if (!(d >= 1.0)) throw std::invalid_argument("verify_liyau_global: need d >= 1");
    InequalityReport report;
    report.kind = InequalityKind::liyau_global;
    report.tolerance = plan.tolerance;
    report.parameters["d"] = d;
    detail::record_plan(report, plan);

    for (double t : detail::log_spaced(plan.t_lo, plan.t_hi, plan.nt)) {
        const auto slice = sol.time_slice(t);
        for (const auto& x : detail::plan_x_grid(sol, t, plan.nx, plan.pad_sigmas)) {
            const auto bundles = sol.derivs_all(slice, x);
            for (int y = 0; y < sol.graph().size(); ++y) {
                const auto ld = detail::log_derivs(sol, bundles, y);
                const double slack = d / (2.0 * t) - (ld.grad_v2 + ld.psi_v - ld.dt_v);
                ++report.samples;
                if (slack < report.min_slack) {
                    report.min_slack = slack;
                    report.worst_point = {t, x, y};
                }
            }
        }
    }
    report.passed = report.min_slack >= -plan.tolerance;
    return report;
}

// Right-hand side of the ball-local differential Harnack estimate on
// B_rho(z); C is supplied by the caller.
inline double liyau_local_rhs(double d, double theta, double rho, double C, double t) {
    if (!(theta > 0.0 && theta < 1.0))
        throw std::invalid_argument("liyau_local_rhs: theta must lie in (0,1)");
    if (!(rho > 0.0)) throw std::invalid_argument("liyau_local_rhs: rho must be positive");
    return d / (2.0 * t * (1.0 - theta)) +
           C / (2.0 * (1.0 - theta) * rho * rho) * (1.0 + 1.0 / (theta * (1.0 - theta)));
}

inline double liyau_local_slack(const GaussianMixtureSolution& sol, double theta, double rho,
                                double C, double d, double t, const std::vector<double>& x,
                                int y) {
    const auto bundles = sol.derivs_all(t, x);
    const auto ld = detail::log_derivs(sol, bundles, y);
    const double lhs = (1.0 - theta) * (ld.grad_v2 + ld.psi_v) - ld.dt_v;
    return liyau_local_rhs(d, theta, rho, C, t) - lhs;
}

inline InequalityReport liyau_local_check(const GaussianMixtureSolution& sol, double theta,
                                          double rho, const std::vector<double>& z, double C,
                                          double d, const SamplePlan& plan = {}) {
    if (!(theta > 0.0 && theta < 1.0))
        throw std::invalid_argument("liyau_local_check: theta must lie in (0,1)");
    if (!(rho > 0.0)) throw std::invalid_argument("liyau_local_check: rho must be positive");
    if (static_cast<int>(z.size()) != sol.dimension())
        throw std::invalid_argument("liyau_local_check: ball center dimension mismatch");
    InequalityReport report;
    report.kind = InequalityKind::liyau_local;
    report.tolerance = plan.tolerance;
    report.parameters["d"] = d;
    report.parameters["theta"] = theta;
    report.parameters["rho"] = rho;
    report.parameters["C"] = C;
    detail::record_plan(report, plan);

    const int n = sol.dimension();
    for (double t : detail::log_spaced(plan.t_lo, plan.t_hi, plan.nt)) {
        const auto slice = sol.time_slice(t);
        const double rhs = liyau_local_rhs(d, theta, rho, C, t);
        // uniform grid on the bounding cube of B_rho(z), restricted to the ball
        for (int flat = 0; flat < static_cast<int>(std::pow(plan.nx, n)); ++flat) {
            std::vector<double> x(static_cast<std::size_t>(n), 0.0);
            int rest = flat;
            double r2 = 0.0;
            for (int dim = 0; dim < n; ++dim) {
                const int i = rest % plan.nx;
                rest /= plan.nx;
                const double c = plan.nx == 1
                                     ? z[static_cast<std::size_t>(dim)]
                                     : z[static_cast<std::size_t>(dim)] - rho +
                                           2.0 * rho * i / (plan.nx - 1);
                x[static_cast<std::size_t>(dim)] = c;
                const double dc = c - z[static_cast<std::size_t>(dim)];
                r2 += dc * dc;
            }
            if (r2 >= rho * rho) continue;
            const auto bundles = sol.derivs_all(slice, x);
            for (int y = 0; y < sol.graph().size(); ++y) {
                const auto ld = detail::log_derivs(sol, bundles, y);
                const double lhs = (1.0 - theta) * (ld.grad_v2 + ld.psi_v) - ld.dt_v;
                const double slack = rhs - lhs;
                ++report.samples;
                if (slack < report.min_slack) {
                    report.min_slack = slack;
                    report.worst_point = {t, x, y};
                }
            }
        }
    }
    report.passed = report.min_slack >= -plan.tolerance;
    return report;
}

// G(t,x,y) = -t (theta (|grad v|^2 + Psi_Upsilon(v)) + L v) with v = log u,
// evaluated in both equivalent forms and cross-checked.
inline double g_function(const GaussianMixtureSolution& sol, double theta, double t,
                         const std::vector<double>& x, int y) {
    if (!(theta > 0.0 && theta < 1.0))
        throw std::invalid_argument("g_function: theta must lie in (0,1)");
    const auto bundles = sol.derivs_all(t, x);
    const auto d = detail::log_derivs(sol, bundles, y);
    const double carre = d.grad_v2 + d.psi_v;
    const double g1 = -t * (theta * carre + d.lap_v + d.ld_v);
    const double g2 = t * ((1.0 - theta) * carre - d.dt_v);
    if (std::abs(g1 - g2) > 1e-9 * std::max(1.0, std::abs(g1)))
        throw std::logic_error("g_function: the two forms disagree");
    return g1;
}

// ---------------------------------------------------------------------------
// Harnack comparisons
// ---------------------------------------------------------------------------

// (t2/t1)^{d/2} exp(|x2-x1|^2 / 4(t2-t1) + 2 dist^2 / (k_min (t2-t1))).
inline double harnack_rhs_global(double d, double t1, double t2, const std::vector<double>& x1,
                                 const std::vector<double>& x2, int dist_y, double kmin) {
    if (!(0.0 < t1 && t1 < t2))
        throw std::invalid_argument("harnack_rhs_global: need 0 < t1 < t2");
    if (!(kmin > 0.0)) throw std::invalid_argument("harnack_rhs_global: need k_min > 0");
    if (x1.size() != x2.size()) throw std::invalid_argument("harnack_rhs_global: point dimension mismatch");
    double dx2 = 0.0;
    for (std::size_t i = 0; i < x1.size(); ++i) {
        const double dd = x2[i] - x1[i];
        dx2 += dd * dd;
    }
    const double gap = t2 - t1;
    return std::pow(t2 / t1, d / 2.0) *
           std::exp(dx2 / (4.0 * gap) + 2.0 * static_cast<double>(dist_y) * dist_y / (kmin * gap));
}

// Ball-local variant with the (1-theta)-scaled exponents and the cutoff
// contribution C (t2-t1) / (2(1-theta) rho^2) (1 + 1/(theta(1-theta))).
inline double harnack_rhs_local(double d, double theta, double rho, double C, double t1, double t2,
                                const std::vector<double>& x1, const std::vector<double>& x2,
                                int dist_y, double kmin) {
    if (!(theta > 0.0 && theta < 1.0))
        throw std::invalid_argument("harnack_rhs_local: theta must lie in (0,1)");
    if (!(rho > 0.0)) throw std::invalid_argument("harnack_rhs_local: rho must be positive");
    if (!(0.0 < t1 && t1 < t2))
        throw std::invalid_argument("harnack_rhs_local: need 0 < t1 < t2");
    if (!(kmin > 0.0)) throw std::invalid_argument("harnack_rhs_local: need k_min > 0");
    double dx2 = 0.0;
    for (std::size_t i = 0; i < x1.size(); ++i) {
        const double dd = x2[i] - x1[i];
        dx2 += dd * dd;
    }
    const double gap = t2 - t1;
    const double om = 1.0 - theta;
    return std::pow(t2 / t1, d / (2.0 * om)) *
           std::exp(dx2 / (4.0 * om * gap) +
                    2.0 * static_cast<double>(dist_y) * dist_y / (om * kmin * gap) +
                    C * gap / (2.0 * om * rho * rho) * (1.0 + 1.0 / (theta * om)));
}

// Relative slack (RHS u(p2) - u(p1)) / u(p1) of the two-point comparison.
inline double harnack_slack_rel(const GaussianMixtureSolution& sol, double d, const ProbePoint& p1,
                                const ProbePoint& p2, double kmin) {
    const int dist = graph_distance(sol.graph(), p1.y, p2.y);
    const double rhs = harnack_rhs_global(d, p1.t, p2.t, p1.x, p2.x, dist, kmin);
    const double u1 = sol.value(p1.t, p1.x, p1.y);
    const double u2 = sol.value(p2.t, p2.x, p2.y);
    return (rhs * u2 - u1) / u1;
}

inline InequalityReport verify_harnack_global(const GaussianMixtureSolution& sol, double d,
                                              const PairPlan& plan = {}) {
    const auto& g = sol.graph();
    if (!g.symmetric_support())
        throw std::invalid_argument("verify_harnack_global: kernel support must be symmetric");
    if (!validate(g).connected)
        throw std::invalid_argument("verify_harnack_global: graph must be connected");
    const double kmin = k_min(g);

    InequalityReport report;
    report.kind = InequalityKind::harnack_global;
    report.tolerance = plan.tolerance;
    report.seed = plan.seed;
    report.parameters["d"] = d;
    report.parameters["k_min"] = kmin;
    report.note = "finite vertex sets only; countable graphs are represented by finite truncations";
    report.parameters["plan_pairs"] = plan.pairs;
    report.parameters["plan_t_lo"] = plan.t_lo;
    report.parameters["plan_t_hi"] = plan.t_hi;
    report.parameters["plan_pad_sigmas"] = plan.pad_sigmas;

    // hull of the mixture centers
    const int n = sol.dimension();
    std::vector<double> clo(static_cast<std::size_t>(n), std::numeric_limits<double>::infinity());
    std::vector<double> chi(static_cast<std::size_t>(n), -std::numeric_limits<double>::infinity());
    for (const auto& term : sol.terms())
        for (int dim = 0; dim < n; ++dim) {
            clo[static_cast<std::size_t>(dim)] =
                std::min(clo[static_cast<std::size_t>(dim)], term.center[static_cast<std::size_t>(dim)]);
            chi[static_cast<std::size_t>(dim)] =
                std::max(chi[static_cast<std::size_t>(dim)], term.center[static_cast<std::size_t>(dim)]);
        }

    std::mt19937_64 rng(plan.seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    auto draw_x = [&](double t) {
        std::vector<double> x(static_cast<std::size_t>(n), 0.0);
        const double pad = plan.pad_sigmas * std::sqrt(t);
        for (int dim = 0; dim < n; ++dim) {
            const double a = clo[static_cast<std::size_t>(dim)] - pad;
            const double b = chi[static_cast<std::size_t>(dim)] + pad;
            x[static_cast<std::size_t>(dim)] = a + (b - a) * uni(rng);
        }
        return x;
    };

    for (int p = 0; p < plan.pairs; ++p) {
        const double t1 = std::exp(std::log(plan.t_lo) +
                                   (std::log(plan.t_hi) - std::log(plan.t_lo)) * uni(rng));
        const double t2 = t1 + plan.min_gap + (plan.max_gap - plan.min_gap) * uni(rng);
        ProbePoint p1{t1, draw_x(t1), static_cast<int>(uni(rng) * g.size()) % g.size()};
        ProbePoint p2{t2, draw_x(t2), static_cast<int>(uni(rng) * g.size()) % g.size()};
        if (p < static_cast<int>(plan.same_vertex_fraction * plan.pairs)) {
            p2.y = p1.y;  // single-species subfamily
        } else if (p < static_cast<int>((plan.same_vertex_fraction + plan.same_point_fraction) *
                                        plan.pairs)) {
            p2.x = p1.x;  // pure time-and-species subfamily
        }
        const double slack = harnack_slack_rel(sol, d, p1, p2, kmin);
        ++report.samples;
        if (slack < report.min_slack) {
            report.min_slack = slack;
            report.worst_point = p1;
            report.worst_point_second = p2;
        }
    }
    report.passed = report.min_slack >= -plan.tolerance;
    return report;
}

// ---------------------------------------------------------------------------
// hybrid curvature-dimension quantities on solution slices
// ---------------------------------------------------------------------------

struct HybridGamma2 {
    double lhs = 0.0;     // iterated hybrid form
    double gamma2 = 0.0;  // |Hess u|_HS^2 at (x, y)
    double psi2 = 0.0;    // Psi_{2,Upsilon}(u(x, .))(y)
    double carre = 0.0;   // |grad u|^2 + Psi_Upsilon(u)
    double lu = 0.0;      // (Laplacian + L_d) u
};

namespace detail {

// Assembles the iterated hybrid operator from per-vertex derivative data:
//   (1/2)[ L(|grad u|^2 + Psi_Upsilon(u)) - 2 <grad u, grad L u>
//          - B_{Upsilon'}(u, L u) ]
// where L = Laplacian + L_d.  The spatial pieces use
//   Lap |grad u|^2 = 2 |Hess u|^2 + 2 <grad u, grad Lap u>,
//   Lap Psi_Upsilon(u) = sum_z k(y,z) [ e^delta |grad u(z) - grad u(y)|^2
//                                       + Upsilon'(delta)(Lap u(z) - Lap u(y)) ].
inline HybridGamma2 hybrid_gamma2_from_bundles(const WeightedGraph& g,
                                               const std::vector<DerivativeBundle>& bundles,
                                               int n, int y) {
    const int V = g.size();
    VertexFunction uvals(static_cast<std::size_t>(V), 0.0), grad2(static_cast<std::size_t>(V), 0.0),
        lu(static_cast<std::size_t>(V), 0.0);
    for (int z = 0; z < V; ++z) {
        const auto& b = bundles[static_cast<std::size_t>(z)];
        uvals[static_cast<std::size_t>(z)] = b.u;
        double s = 0.0;
        for (double gc : b.grad_u) s += gc * gc;
        grad2[static_cast<std::size_t>(z)] = s;
        lu[static_cast<std::size_t>(z)] = b.lap_u + b.ld_u;
    }
    const VertexFunction psi = psi_upsilon(g, uvals);
    const auto& by = bundles[static_cast<std::size_t>(y)];

    double hess2 = 0.0;
    for (double hv : by.hess_u) hess2 += hv * hv;

    double lap_grad2 = 2.0 * hess2;
    for (int i = 0; i < n; ++i)
        lap_grad2 += 2.0 * by.grad_u[static_cast<std::size_t>(i)] * by.grad_lap_u[static_cast<std::size_t>(i)];

    double lap_psi = 0.0, ld_grad2 = 0.0, ld_psi = 0.0, b_ups_lu = 0.0;
    std::vector<double> grad_ld_u(static_cast<std::size_t>(n), 0.0);
    for (const auto& e : g.out_edges(y)) {
        const auto& bz = bundles[static_cast<std::size_t>(e.to)];
        const double delta = bz.u - by.u;
        double gdiff2 = 0.0;
        for (int i = 0; i < n; ++i) {
            const double dd = bz.grad_u[static_cast<std::size_t>(i)] - by.grad_u[static_cast<std::size_t>(i)];
            gdiff2 += dd * dd;
            grad_ld_u[static_cast<std::size_t>(i)] += e.weight * dd;
        }
        lap_psi += e.weight * (std::exp(delta) * gdiff2 + upsilon_prime(delta) * (bz.lap_u - by.lap_u));
        ld_grad2 += e.weight * (grad2[static_cast<std::size_t>(e.to)] - grad2[static_cast<std::size_t>(y)]);
        ld_psi += e.weight * (psi[static_cast<std::size_t>(e.to)] - psi[static_cast<std::size_t>(y)]);
        b_ups_lu += e.weight * upsilon_prime(delta) *
                    (lu[static_cast<std::size_t>(e.to)] - lu[static_cast<std::size_t>(y)]);
    }

    double grad_cross = 0.0;
    for (int i = 0; i < n; ++i)
        grad_cross += by.grad_u[static_cast<std::size_t>(i)] *
                      (by.grad_lap_u[static_cast<std::size_t>(i)] + grad_ld_u[static_cast<std::size_t>(i)]);

    HybridGamma2 out;
    out.lhs = 0.5 * (lap_grad2 + ld_grad2 + lap_psi + ld_psi - 2.0 * grad_cross - b_ups_lu);
    out.gamma2 = hess2;
    out.psi2 = psi2_upsilon(g, uvals)[static_cast<std::size_t>(y)];
    out.carre = grad2[static_cast<std::size_t>(y)] + psi[static_cast<std::size_t>(y)];
    out.lu = lu[static_cast<std::size_t>(y)];
    return out;
}

} // namespace detail

inline HybridGamma2 hybrid_gamma2(const GaussianMixtureSolution& sol, double t,
                                  const std::vector<double>& x, int y) {
    const auto bundles = sol.derivs_all(t, x);
    return detail::hybrid_gamma2_from_bundles(sol.graph(), bundles, sol.dimension(), y);
}

// x-constant test function (spatially flat auxiliary state on a torus): all
// spatial derivatives vanish and the hybrid form reduces to the discrete
// one.  Runs through the same assembly as the general case.
inline HybridGamma2 hybrid_gamma2_flat(const WeightedGraph& g, const VertexFunction& u, int y) {
    g.require_defined(u, "hybrid_gamma2_flat");
    std::vector<DerivativeBundle> bundles(static_cast<std::size_t>(g.size()));
    const VertexFunction ld_u = ld_apply(g, u);
    for (int z = 0; z < g.size(); ++z) {
        auto& b = bundles[static_cast<std::size_t>(z)];
        b.u = u[static_cast<std::size_t>(z)];
        b.grad_u.assign(1, 0.0);
        b.hess_u.assign(1, 0.0);
        b.grad_lap_u.assign(1, 0.0);
        b.lap_u = 0.0;
        b.ld_u = ld_u[static_cast<std::size_t>(z)];
        b.dt_u = b.ld_u;
    }
    return detail::hybrid_gamma2_from_bundles(g, bundles, 1, y);
}

inline double cd_hyb_slack(const GaussianMixtureSolution& sol, double kappa, double d, double t,
                           const std::vector<double>& x, int y) {
    const auto hg = hybrid_gamma2(sol, t, x, y);
    double slack = hg.lhs - kappa * hg.carre;
    if (std::isfinite(d)) slack -= hg.lu * hg.lu / d;
    return slack;
}

inline double gamma2_lemma_slack(const GaussianMixtureSolution& sol, double t,
                                 const std::vector<double>& x, int y) {
    const auto hg = hybrid_gamma2(sol, t, x, y);
    return hg.lhs - hg.gamma2 - hg.psi2;
}

namespace detail {

template <class SlackFn>
inline InequalityReport sweep_plan(const GaussianMixtureSolution& sol, InequalityKind kind,
                                   const SamplePlan& plan, SlackFn&& slack_fn) {
    InequalityReport report;
    report.kind = kind;
    report.tolerance = plan.tolerance;
    record_plan(report, plan);
    for (double t : log_spaced(plan.t_lo, plan.t_hi, plan.nt)) {
        const auto slice = sol.time_slice(t);
        for (const auto& x : plan_x_grid(sol, t, plan.nx, plan.pad_sigmas)) {
            const auto bundles = sol.derivs_all(slice, x);
            for (int y = 0; y < sol.graph().size(); ++y) {
                const double slack = slack_fn(bundles, t, x, y);
                ++report.samples;
                if (slack < report.min_slack) {
                    report.min_slack = slack;
                    report.worst_point = {t, x, y};
                }
            }
        }
    }
    report.passed = report.min_slack >= -plan.tolerance;
    return report;
}

} // namespace detail

// Slices of the solution at sampled times serve as test functions u(x, y)
// for the hybrid inequality with parameters (kappa, d).
inline InequalityReport verify_cd_hyb(const GaussianMixtureSolution& sol, double kappa, double d,
                                      const SamplePlan& plan = {}) {
    if (!(d >= 1.0) && !std::isinf(d))
        throw std::invalid_argument("verify_cd_hyb: need d >= 1 or d = inf");
    InequalityReport report = detail::sweep_plan(
        sol, InequalityKind::cd_hyb, plan,
        [&](const std::vector<DerivativeBundle>& bundles, double, const std::vector<double>&, int y) {
            const auto hg = detail::hybrid_gamma2_from_bundles(sol.graph(), bundles, sol.dimension(), y);
            double slack = hg.lhs - kappa * hg.carre;
            if (std::isfinite(d)) slack -= hg.lu * hg.lu / d;
            return slack;
        });
    report.parameters["kappa"] = kappa;
    report.parameters["d"] = d;
    return report;
}

inline InequalityReport verify_gamma2_lemma(const GaussianMixtureSolution& sol,
                                            const SamplePlan& plan = {}) {
    return detail::sweep_plan(
        sol, InequalityKind::lemma_gamma2, plan,
        [&](const std::vector<DerivativeBundle>& bundles, double, const std::vector<double>&, int y) {
            const auto hg = detail::hybrid_gamma2_from_bundles(sol.graph(), bundles, sol.dimension(), y);
            return hg.lhs - hg.gamma2 - hg.psi2;
        });
}

// Smallest C for which the ball-local check passes on the given plan, by
// doubling then bisection.
inline double min_passing_c(const GaussianMixtureSolution& sol, double theta, double rho,
                            const std::vector<double>& z, double d, const SamplePlan& plan = {},
                            double tol = 1e-3) {
    auto passes = [&](double C) { return liyau_local_check(sol, theta, rho, z, C, d, plan).passed; };
    if (passes(0.0)) return 0.0;
    double lo = 0.0, hi = 1.0;
    int guard = 0;
    while (!passes(hi)) {
        lo = hi;
        hi *= 2.0;
        if (++guard > 60) throw std::runtime_error("min_passing_c: no passing C below 2^60");
    }
    // invariant: lo fails, hi passes
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        (passes(mid) ? hi : lo) = mid;
    }
    return hi;
}

} // namespace hybridcd
