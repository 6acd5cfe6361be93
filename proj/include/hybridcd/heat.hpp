// heat.hpp — positive solutions of  du/dt = (Laplacian + L_d) u  on R^n x Y:
// closed-form Gauss-Weierstrass mixtures with analytic derivatives up to
// third order, and a finite-difference simulator (Strang splitting with the
// exact discrete flow on the vertex axis) for general positive initial data
// on periodic boxes.

#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "hybridcd/graph.hpp"

namespace hybridcd {

struct MixtureTerm {
    double alpha = 1.0;
    std::vector<double> center;
    double tau = 0.5;        // time offset; keeps the data smooth and positive at t = 0
    VertexFunction profile;  // nonnegative, not identically zero
};

// Analytic derivative queries at a single space-time-vertex point.
struct DerivativeBundle {
    double u = 0.0;
    double dt_u = 0.0;
    std::vector<double> grad_u;      // n
    std::vector<double> hess_u;      // n x n, row-major, symmetric
    double lap_u = 0.0;
    std::vector<double> grad_lap_u;  // n
    double ld_u = 0.0;               // L_d u at the same point
};

namespace detail {

// Gauss-Weierstrass kernel G(s, xi) = (4 pi s)^{-n/2} exp(-|xi|^2 / 4s) and
// its spatial derivatives up to third order.
struct KernelDerivs {
    double g = 0.0;
    std::vector<double> grad;
    std::vector<double> hess;
    double lap = 0.0;
    std::vector<double> grad_lap;
};

inline KernelDerivs gauss_derivs(int n, double s, const std::vector<double>& xi) {
    KernelDerivs k;
    double q = 0.0;
    for (double c : xi) q += c * c;
    q /= 4.0 * s;
    const double g = std::pow(4.0 * std::numbers::pi * s, -0.5 * n) * std::exp(-q);
    k.g = g;
    k.grad.assign(static_cast<std::size_t>(n), 0.0);
    k.hess.assign(static_cast<std::size_t>(n) * n, 0.0);
    k.grad_lap.assign(static_cast<std::size_t>(n), 0.0);
    const double inv2s = 1.0 / (2.0 * s);
    for (int i = 0; i < n; ++i)
        k.grad[static_cast<std::size_t>(i)] = -xi[static_cast<std::size_t>(i)] * inv2s * g;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double v = xi[static_cast<std::size_t>(i)] * xi[static_cast<std::size_t>(j)] /
                       (4.0 * s * s);
            if (i == j) v -= inv2s;
            k.hess[static_cast<std::size_t>(i) * n + j] = v * g;
        }
    const double p = q / s - n * inv2s;  // lap G / G
    k.lap = p * g;
    for (int i = 0; i < n; ++i)
        k.grad_lap[static_cast<std::size_t>(i)] =
            g * xi[static_cast<std::size_t>(i)] * inv2s * (1.0 / s - p);
    return k;
}

} // namespace detail

// u(t,x,y) = sum_j alpha_j G(t + tau_j, x - c_j) (e^{t L_d} v_j)(y).
// Separated variables: each factor solves its own heat flow, so the sum is
// an exact positive solution for t > 0 on connected graphs.
class GaussianMixtureSolution {
public:
    GaussianMixtureSolution(int n, WeightedGraph graph, std::vector<MixtureTerm> terms)
        : n_(n), graph_(std::move(graph)), terms_(std::move(terms)) {
        if (n_ < 1) throw std::invalid_argument("GaussianMixtureSolution: need n >= 1");
        if (terms_.empty()) throw std::invalid_argument("GaussianMixtureSolution: no terms");
        if (!validate(graph_).connected)
            throw std::invalid_argument("GaussianMixtureSolution: graph must be connected");
        for (const auto& term : terms_) {
            if (!(term.alpha > 0.0))
                throw std::invalid_argument("GaussianMixtureSolution: alpha must be positive");
            if (static_cast<int>(term.center.size()) != n_)
                throw std::invalid_argument("GaussianMixtureSolution: center dimension mismatch");
            if (!(term.tau > 0.0))
                throw std::invalid_argument("GaussianMixtureSolution: tau must be positive");
            graph_.require_defined(term.profile, "GaussianMixtureSolution");
            double sum = 0.0;
            for (double v : term.profile) {
                if (v < 0.0)
                    throw std::invalid_argument("GaussianMixtureSolution: profiles must be nonnegative");
                sum += v;
            }
            if (!(sum > 0.0))
                throw std::invalid_argument("GaussianMixtureSolution: profile is identically zero");
        }
    }

    int dimension() const { return n_; }
    const WeightedGraph& graph() const { return graph_; }
    const std::vector<MixtureTerm>& terms() const { return terms_; }

    // Discrete factors evolved to time t, with their L_d images; computing
    // this once per time slice avoids re-exponentiating per probe.
    struct TimeSlice {
        double t = 0.0;
        std::vector<VertexFunction> evolved;     // e^{t L_d} v_j
        std::vector<VertexFunction> ld_evolved;  // L_d e^{t L_d} v_j
    };

    TimeSlice time_slice(double t) const {
        if (!(t > 0.0)) throw std::domain_error("GaussianMixtureSolution: need t > 0");
        TimeSlice s;
        s.t = t;
        const DenseMatrix flow = heat_semigroup_matrix(graph_, t);
        for (const auto& term : terms_) {
            VertexFunction w = flow.apply(term.profile);
            s.ld_evolved.push_back(ld_apply(graph_, w));
            s.evolved.push_back(std::move(w));
        }
        return s;
    }

    double value(const TimeSlice& slice, const std::vector<double>& x, int y) const {
        check_point(slice.t, x);
        double u = 0.0;
        for (std::size_t j = 0; j < terms_.size(); ++j)
            u += terms_[j].alpha * kernel_value(slice.t, x, j) *
                 slice.evolved[j][static_cast<std::size_t>(y)];
        return u;
    }

    double value(double t, const std::vector<double>& x, int y) const {
        return value(time_slice(t), x, y);
    }

    // Full derivative bundles for every vertex at (t, x).  dt_u is assembled
    // as lap_u + L_d u and cross-checked against the per-factor product
    // rule; lap_u is cross-checked against the Hessian trace.
    std::vector<DerivativeBundle> derivs_all(const TimeSlice& slice, const std::vector<double>& x) const {
        check_point(slice.t, x);
        const int V = graph_.size();
        const int n = n_;
        std::vector<DerivativeBundle> out(static_cast<std::size_t>(V));
        for (auto& b : out) {
            b.grad_u.assign(static_cast<std::size_t>(n), 0.0);
            b.hess_u.assign(static_cast<std::size_t>(n) * n, 0.0);
            b.grad_lap_u.assign(static_cast<std::size_t>(n), 0.0);
        }
        std::vector<double> dt_product_rule(static_cast<std::size_t>(V), 0.0);
        std::vector<double> xi(static_cast<std::size_t>(n), 0.0);
        for (std::size_t j = 0; j < terms_.size(); ++j) {
            const auto& term = terms_[j];
            const double s = slice.t + term.tau;
            for (int i = 0; i < n; ++i)
                xi[static_cast<std::size_t>(i)] =
                    x[static_cast<std::size_t>(i)] - term.center[static_cast<std::size_t>(i)];
            const detail::KernelDerivs k = detail::gauss_derivs(n, s, xi);
            for (int y = 0; y < V; ++y) {
                const double w = slice.evolved[j][static_cast<std::size_t>(y)];
                const double lw = slice.ld_evolved[j][static_cast<std::size_t>(y)];
                const double aw = term.alpha * w;
                auto& b = out[static_cast<std::size_t>(y)];
                b.u += term.alpha * k.g * w;
                for (int i = 0; i < n; ++i) {
                    b.grad_u[static_cast<std::size_t>(i)] += aw * k.grad[static_cast<std::size_t>(i)];
                    b.grad_lap_u[static_cast<std::size_t>(i)] += aw * k.grad_lap[static_cast<std::size_t>(i)];
                }
                for (int i = 0; i < n * n; ++i)
                    b.hess_u[static_cast<std::size_t>(i)] += aw * k.hess[static_cast<std::size_t>(i)];
                b.lap_u += aw * k.lap;
                // d/dt of G(t + tau, .) w(t, y) = (lap G) w + G (L_d w)
                dt_product_rule[static_cast<std::size_t>(y)] +=
                    term.alpha * (k.lap * w + k.g * lw);
            }
        }
        // discrete part and consistency checks
        std::vector<double> uvals(static_cast<std::size_t>(V), 0.0);
        for (int y = 0; y < V; ++y) uvals[static_cast<std::size_t>(y)] = out[static_cast<std::size_t>(y)].u;
        const VertexFunction ld_u = ld_apply(graph_, uvals);
        for (int y = 0; y < V; ++y) {
            auto& b = out[static_cast<std::size_t>(y)];
            b.ld_u = ld_u[static_cast<std::size_t>(y)];
            b.dt_u = b.lap_u + b.ld_u;
            // tolerances are relative to the operand scale: both quantities
            // are sums whose terms may cancel, so comparing against the
            // (possibly tiny) result would reject mere roundoff
            double trace = 0.0, diag_scale = 0.0;
            for (int i = 0; i < n; ++i) {
                trace += b.hess_u[static_cast<std::size_t>(i) * n + i];
                diag_scale += std::abs(b.hess_u[static_cast<std::size_t>(i) * n + i]);
            }
            const double lap_scale = std::max({1e-300, diag_scale, std::abs(b.lap_u)});
            if (std::abs(trace - b.lap_u) > 1e-10 * lap_scale)
                throw std::logic_error("GaussianMixtureSolution: Hessian trace and Laplacian disagree");
            const double dt_scale = std::max(
                {1e-300, std::abs(b.lap_u) + std::abs(b.ld_u),
                 std::abs(dt_product_rule[static_cast<std::size_t>(y)])});
            if (std::abs(b.dt_u - dt_product_rule[static_cast<std::size_t>(y)]) > 1e-10 * dt_scale)
                throw std::logic_error("GaussianMixtureSolution: time derivative routes disagree");
        }
        return out;
    }

    std::vector<DerivativeBundle> derivs_all(double t, const std::vector<double>& x) const {
        return derivs_all(time_slice(t), x);
    }

    DerivativeBundle exact_derivs(double t, const std::vector<double>& x, int y) const {
        if (y < 0 || y >= graph_.size())
            throw std::invalid_argument("exact_derivs: vertex index out of range");
        return derivs_all(t, x)[static_cast<std::size_t>(y)];
    }

private:
    void check_point(double t, const std::vector<double>& x) const {
        if (!(t > 0.0)) throw std::domain_error("GaussianMixtureSolution: need t > 0");
        if (static_cast<int>(x.size()) != n_)
            throw std::invalid_argument("GaussianMixtureSolution: point dimension mismatch");
    }

    double kernel_value(double t, const std::vector<double>& x, std::size_t j) const {
        const auto& term = terms_[j];
        const double s = t + term.tau;
        double q = 0.0;
        for (int i = 0; i < n_; ++i) {
            const double d = x[static_cast<std::size_t>(i)] - term.center[static_cast<std::size_t>(i)];
            q += d * d;
        }
        return std::pow(4.0 * std::numbers::pi * s, -0.5 * n_) * std::exp(-q / (4.0 * s));
    }

    int n_;
    WeightedGraph graph_;
    std::vector<MixtureTerm> terms_;
};

// Seeded mixture generator used by verification drivers: 1-3 terms, centers
// near the origin, moderate offsets, strictly positive non-constant
// profiles.
inline GaussianMixtureSolution random_mixture(const WeightedGraph& g, int n, std::uint64_t seed,
                                              int max_terms = 3) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> nterms(1, max_terms);
    std::uniform_real_distribution<double> alpha(0.3, 1.5);
    std::uniform_real_distribution<double> coord(-1.5, 1.5);
    std::uniform_real_distribution<double> tau(0.3, 1.2);
    std::uniform_real_distribution<double> prof(0.2, 2.5);
    std::vector<MixtureTerm> terms;
    const int count = nterms(rng);
    for (int j = 0; j < count; ++j) {
        MixtureTerm term;
        term.alpha = alpha(rng);
        term.center.resize(static_cast<std::size_t>(n));
        for (double& c : term.center) c = coord(rng);
        term.tau = tau(rng);
        term.profile.resize(static_cast<std::size_t>(g.size()));
        for (double& p : term.profile) p = prof(rng);
        terms.push_back(std::move(term));
    }
    return GaussianMixtureSolution(n, g, std::move(terms));
}

// ---------------------------------------------------------------------------
// finite-difference simulator
// ---------------------------------------------------------------------------

// Discretized positive state on a periodic box times the vertex set.
// values are stored cell-major: values[cell * vertices + v].
struct GridState {
    int n = 1;
    double h = 0.1;
    std::vector<double> lo;   // per-dim lower corner
    std::vector<int> cells;   // per-dim counts
    int vertices = 0;
    double time = 0.0;
    std::vector<double> values;

    long cell_count() const {
        long c = 1;
        for (int m : cells) c *= m;
        return c;
    }
    double& at(long cell, int v) { return values[static_cast<std::size_t>(cell) * vertices + v]; }
    double at(long cell, int v) const { return values[static_cast<std::size_t>(cell) * vertices + v]; }
    double coord(int dim, long index) const { return lo[static_cast<std::size_t>(dim)] + h * index; }

    void require_consistent(const char* what) const {
        if (n < 1 || n > 2) throw std::invalid_argument(std::string(what) + ": n must be 1 or 2");
        if (!(h > 0.0)) throw std::invalid_argument(std::string(what) + ": spacing must be positive");
        if (static_cast<int>(lo.size()) != n || static_cast<int>(cells.size()) != n)
            throw std::invalid_argument(std::string(what) + ": box shape mismatch");
        for (int m : cells)
            if (m < 3) throw std::invalid_argument(std::string(what) + ": need at least 3 cells per dim");
        if (static_cast<long>(values.size()) != cell_count() * vertices)
            throw std::invalid_argument(std::string(what) + ": value array shape mismatch");
        for (double v : values)
            if (!(v > 0.0))
                throw std::invalid_argument(std::string(what) + ": state must be strictly positive");
    }
};

struct SimulateConfig {
    int n = 1;
    double h = 0.1;
    std::array<double, 2> box{-5.0, 5.0};  // same extent in every dimension, periodic
    double dt = 0.002;
    double t_start = 0.25;
    double t_end = 1.0;
    std::string scheme = "strang";
    int snapshot_stride = 0;  // 0: keep initial and final states only
};

inline int grid_cells_per_dim(const SimulateConfig& cfg) {
    const double extent = cfg.box[1] - cfg.box[0];
    if (!(extent > 0.0)) throw std::invalid_argument("SimulateConfig: empty box");
    const int m = static_cast<int>(std::lround(extent / cfg.h));
    if (m < 3 || std::abs(m * cfg.h - extent) > 1e-9 * extent)
        throw std::invalid_argument("SimulateConfig: box extent must be an integer multiple of h");
    return m;
}

// Sample a closed-form solution onto a periodic grid (initial data and
// reference states for convergence studies).
inline GridState eval_on_grid(const GaussianMixtureSolution& sol, double t, const SimulateConfig& cfg) {
    if (cfg.n != sol.dimension())
        throw std::invalid_argument("eval_on_grid: dimension mismatch");
    GridState grid;
    grid.n = cfg.n;
    grid.h = cfg.h;
    grid.time = t;
    grid.vertices = sol.graph().size();
    const int m = grid_cells_per_dim(cfg);
    grid.lo.assign(static_cast<std::size_t>(cfg.n), cfg.box[0]);
    grid.cells.assign(static_cast<std::size_t>(cfg.n), m);
    grid.values.assign(static_cast<std::size_t>(grid.cell_count()) * grid.vertices, 0.0);

    const auto slice = sol.time_slice(t);
    std::vector<double> x(static_cast<std::size_t>(cfg.n), 0.0);
    const long cells_total = grid.cell_count();
    for (long cell = 0; cell < cells_total; ++cell) {
        long rest = cell;
        for (int d = 0; d < cfg.n; ++d) {
            x[static_cast<std::size_t>(d)] = grid.coord(d, rest % m);
            rest /= m;
        }
        for (int v = 0; v < grid.vertices; ++v) grid.at(cell, v) = sol.value(slice, x, v);
    }
    grid.require_consistent("eval_on_grid");
    return grid;
}

namespace detail {

inline void vertex_flow_step(GridState& state, const DenseMatrix& flow) {
    const int V = state.vertices;
    std::vector<double> tmp(static_cast<std::size_t>(V), 0.0);
    const long cells_total = state.cell_count();
    for (long cell = 0; cell < cells_total; ++cell) {
        double* cellvals = state.values.data() + static_cast<std::size_t>(cell) * V;
        for (int i = 0; i < V; ++i) {
            double s = 0.0;
            for (int j = 0; j < V; ++j) s += flow(i, j) * cellvals[j];
            tmp[static_cast<std::size_t>(i)] = s;
        }
        for (int i = 0; i < V; ++i) cellvals[i] = tmp[static_cast<std::size_t>(i)];
    }
}

// explicit second-order central-difference heat step, periodic boundary
inline void laplace_step(GridState& state, double dt, std::vector<double>& scratch) {
    const int V = state.vertices;
    const double lam = dt / (state.h * state.h);
    scratch.resize(state.values.size());
    if (state.n == 1) {
        const long m = state.cells[0];
        for (long i = 0; i < m; ++i) {
            const long ip = (i + 1) % m, im = (i + m - 1) % m;
            for (int v = 0; v < V; ++v)
                scratch[static_cast<std::size_t>(i) * V + v] =
                    state.at(i, v) + lam * (state.at(ip, v) - 2.0 * state.at(i, v) + state.at(im, v));
        }
    } else {
        const long m = state.cells[0];
        for (long j = 0; j < m; ++j) {
            const long jp = (j + 1) % m, jm = (j + m - 1) % m;
            for (long i = 0; i < m; ++i) {
                const long ip = (i + 1) % m, im = (i + m - 1) % m;
                const long c = i + m * j;
                const long cxp = ip + m * j, cxm = im + m * j;
                const long cyp = i + m * jp, cym = i + m * jm;
                for (int v = 0; v < V; ++v)
                    scratch[static_cast<std::size_t>(c) * V + v] =
                        state.at(c, v) + lam * (state.at(cxp, v) + state.at(cxm, v) +
                                                state.at(cyp, v) + state.at(cym, v) -
                                                4.0 * state.at(c, v));
            }
        }
    }
    state.values.swap(scratch);
}

} // namespace detail

// Strang splitting per step: exact discrete half-flow, explicit spatial heat
// step, exact discrete half-flow.  The vertex coupling is handled exactly,
// so only the spatial step constrains dt (CFL: dt <= h^2 / 2n), under which
// positivity is preserved.
inline std::vector<GridState> simulate(const WeightedGraph& g, const SimulateConfig& cfg,
                                       const GridState& u0) {
    if (cfg.scheme != "strang")
        throw std::invalid_argument("simulate: unknown scheme '" + cfg.scheme + "'");
    u0.require_consistent("simulate");
    if (u0.vertices != g.size())
        throw std::invalid_argument("simulate: state vertex count does not match the graph");
    const double cfl = cfg.h * cfg.h / (2.0 * cfg.n);
    if (cfg.dt > cfl * (1.0 + 1e-12))
        throw std::invalid_argument("simulate: CFL violation, admissible dt <= " + std::to_string(cfl));
    const double horizon = cfg.t_end - u0.time;
    if (!(horizon > 0.0)) throw std::invalid_argument("simulate: t_end must exceed the initial time");
    const long steps = std::lround(horizon / cfg.dt);
    if (steps < 1 || std::abs(steps * cfg.dt - horizon) > 1e-9 * horizon)
        throw std::invalid_argument("simulate: t_end - t0 must be an integer multiple of dt");

    const DenseMatrix half_flow = heat_semigroup_matrix(g, cfg.dt / 2.0);
    std::vector<GridState> trajectory;
    trajectory.push_back(u0);
    GridState state = u0;
    std::vector<double> scratch;
    for (long step = 1; step <= steps; ++step) {
        detail::vertex_flow_step(state, half_flow);
        detail::laplace_step(state, cfg.dt, scratch);
        detail::vertex_flow_step(state, half_flow);
        state.time = u0.time + step * cfg.dt;
        double minval = state.values[0];
        for (double v : state.values) minval = std::min(minval, v);
        if (!(minval > 0.0))
            throw std::runtime_error("simulate: positivity lost at t = " + std::to_string(state.time));
        if ((cfg.snapshot_stride > 0 && step % cfg.snapshot_stride == 0) || step == steps)
            trajectory.push_back(state);
    }
    return trajectory;
}

inline double grid_total_mass(const GridState& s) {
    double sum = 0.0;
    for (double v : s.values) sum += v;
    return sum * std::pow(s.h, s.n);
}

inline double grid_linf_diff(const GridState& a, const GridState& b) {
    if (a.values.size() != b.values.size())
        throw std::invalid_argument("grid_linf_diff: shape mismatch");
    double best = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i)
        best = std::max(best, std::abs(a.values[i] - b.values[i]));
    return best;
}

struct ConvergenceRow {
    double h = 0.0;
    double dt = 0.0;
    double linf_error = 0.0;
    double order = std::numeric_limits<double>::quiet_NaN();  // vs previous row
    bool roundoff_flagged = false;
};

// Order estimates from an error sequence on grids h, h/2, h/4, ...; entries
// below the roundoff floor are flagged and excluded from the order fit.
inline std::vector<ConvergenceRow> make_order_table(const std::vector<double>& hs,
                                                    const std::vector<double>& dts,
                                                    const std::vector<double>& errors,
                                                    double reference_scale) {
    std::vector<ConvergenceRow> rows;
    const double floor = 1e-12 * std::max(1.0, reference_scale);
    for (std::size_t i = 0; i < errors.size(); ++i) {
        ConvergenceRow row;
        row.h = hs[i];
        row.dt = dts[i];
        row.linf_error = errors[i];
        row.roundoff_flagged = errors[i] < floor;
        if (i > 0 && !row.roundoff_flagged && !rows[i - 1].roundoff_flagged)
            row.order = std::log2(errors[i - 1] / errors[i]);
        rows.push_back(row);
    }
    return rows;
}

// Simulate from exact data at cfg.t_start to cfg.t_end on grids h, h/2,
// h/4, ... with dt refined by 4 per level, and compare against the exact
// evaluator.
inline std::vector<ConvergenceRow> convergence_table(const GaussianMixtureSolution& sol,
                                                     const SimulateConfig& base, int levels = 3) {
    std::vector<double> hs, dts, errors;
    double ref_scale = 1.0;
    for (int level = 0; level < levels; ++level) {
        SimulateConfig cfg = base;
        cfg.h = base.h / std::pow(2.0, level);
        cfg.dt = base.dt / std::pow(4.0, level);
        cfg.snapshot_stride = 0;
        const GridState u0 = eval_on_grid(sol, cfg.t_start, cfg);
        const auto traj = simulate(sol.graph(), cfg, u0);
        const GridState ref = eval_on_grid(sol, cfg.t_end, cfg);
        double umax = 0.0;
        for (double v : ref.values) umax = std::max(umax, std::abs(v));
        ref_scale = std::max(ref_scale, umax);
        hs.push_back(cfg.h);
        dts.push_back(cfg.dt);
        errors.push_back(grid_linf_diff(traj.back(), ref));
    }
    return make_order_table(hs, dts, errors, ref_scale);
}

// ---------------------------------------------------------------------------
// log-evolution residual
// ---------------------------------------------------------------------------

// For v = log u of an exact solution,
//   dv/dt - (Laplacian + L_d) v - (|grad v|^2 + Psi_Upsilon(v)) = 0
// identically; the returned residual measures how far a given point is from
// that identity.
inline double log_evolution_residual(const GaussianMixtureSolution& sol, double t,
                                     const std::vector<double>& x, int y) {
    const auto bundles = sol.derivs_all(t, x);
    const int V = sol.graph().size();
    VertexFunction v(static_cast<std::size_t>(V), 0.0);
    for (int z = 0; z < V; ++z) v[static_cast<std::size_t>(z)] = std::log(bundles[static_cast<std::size_t>(z)].u);
    const auto& b = bundles[static_cast<std::size_t>(y)];
    double grad2 = 0.0;
    for (double gcomp : b.grad_u) grad2 += gcomp * gcomp;
    const double dt_v = b.dt_u / b.u;
    const double lap_v = b.lap_u / b.u - grad2 / (b.u * b.u);
    const double grad_v2 = grad2 / (b.u * b.u);
    const double ld_v = ld_apply(sol.graph(), v)[static_cast<std::size_t>(y)];
    const double psi_v = psi_upsilon(sol.graph(), v)[static_cast<std::size_t>(y)];
    return dt_v - lap_v - ld_v - (grad_v2 + psi_v);
}

// Finite-difference log derivatives at one grid point of the middle of three
// consecutive snapshots.  cell_index is per-dimension and wraps periodically.
struct GridLogDerivs {
    double dt_v = 0.0;
    double lap_v = 0.0;
    double grad_v2 = 0.0;
    double ld_v = 0.0;
    double psi_v = 0.0;
};

inline GridLogDerivs grid_log_derivs(const WeightedGraph& g, const GridState& prev,
                                     const GridState& curr, const GridState& next,
                                     const std::vector<long>& cell_index, int vertex) {
    if (prev.values.size() != curr.values.size() || next.values.size() != curr.values.size())
        throw std::invalid_argument("grid_log_derivs: snapshot shapes differ");
    const double dt2 = next.time - prev.time;
    if (!(dt2 > 0.0)) throw std::invalid_argument("grid_log_derivs: snapshots not time-ordered");
    const long m = curr.cells[0];
    auto flat = [&](const std::vector<long>& idx) {
        long cell = 0, strider = 1;
        for (int d = 0; d < curr.n; ++d) {
            long w = ((idx[static_cast<std::size_t>(d)] % m) + m) % m;
            cell += w * strider;
            strider *= m;
        }
        return cell;
    };
    const long cell = flat(cell_index);
    const int V = curr.vertices;

    GridLogDerivs out;
    const double v0 = std::log(curr.at(cell, vertex));
    out.dt_v = (std::log(next.at(cell, vertex)) - std::log(prev.at(cell, vertex))) / dt2;
    for (int d = 0; d < curr.n; ++d) {
        std::vector<long> up = cell_index, dn = cell_index;
        ++up[static_cast<std::size_t>(d)];
        --dn[static_cast<std::size_t>(d)];
        const double vp = std::log(curr.at(flat(up), vertex));
        const double vm = std::log(curr.at(flat(dn), vertex));
        out.lap_v += (vp - 2.0 * v0 + vm) / (curr.h * curr.h);
        const double gd = (vp - vm) / (2.0 * curr.h);
        out.grad_v2 += gd * gd;
    }
    VertexFunction v(static_cast<std::size_t>(V), 0.0);
    for (int z = 0; z < V; ++z) v[static_cast<std::size_t>(z)] = std::log(curr.at(cell, z));
    out.ld_v = ld_apply(g, v)[static_cast<std::size_t>(vertex)];
    out.psi_v = psi_upsilon(g, v)[static_cast<std::size_t>(vertex)];
    return out;
}

inline double grid_log_residual(const WeightedGraph& g, const GridState& prev,
                                const GridState& curr, const GridState& next,
                                const std::vector<long>& cell_index, int vertex) {
    const auto d = grid_log_derivs(g, prev, curr, next, cell_index, vertex);
    return d.dt_v - d.lap_v - d.ld_v - (d.grad_v2 + d.psi_v);
}

// Local derivative scale for the discretization tolerance
// 5 (h^2 + dt^2) * scale of grid-state checks.
inline double grid_residual_scale(const GridLogDerivs& d) {
    return std::max(1.0, std::abs(d.lap_v) + d.grad_v2 + std::abs(d.ld_v) + d.psi_v);
}

} // namespace hybridcd
