// graph.hpp — weighted graphs with nonnegative kernel k(y,z), the discrete
// Laplacian L_d w(y) = sum_z k(y,z)(w(z) - w(y)), and the discrete operators
// Psi_H, B_H, Psi_{2,Upsilon} built from it.  Graphs are immutable after
// construction; every operation here is read-only.

#pragma once

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "hybridcd/matexp.hpp"
#include "hybridcd/upsilon.hpp"

namespace hybridcd {

// Real-valued function on the vertex set, aligned with the graph's vertex
// order.
using VertexFunction = std::vector<double>;

struct GraphEdge {
    int to = 0;
    double weight = 0.0;
};

class WeightedGraph {
public:
    // Directed weighted edges over an ordered vertex list.  Self-loops and
    // negative weights are rejected; zero-weight entries are dropped.
    WeightedGraph(std::vector<std::string> vertex_ids,
                  const std::vector<std::tuple<int, int, double>>& edges)
        : ids_(std::move(vertex_ids)), adj_(ids_.size()) {
        if (ids_.empty())
            throw std::invalid_argument("WeightedGraph: vertex set is empty");
        for (std::size_t i = 0; i < ids_.size(); ++i) {
            if (!index_.emplace(ids_[i], static_cast<int>(i)).second)
                throw std::invalid_argument("WeightedGraph: duplicate vertex id '" + ids_[i] + "'");
        }
        const int n = size();
        std::vector<std::vector<double>> dense(static_cast<std::size_t>(n),
                                               std::vector<double>(static_cast<std::size_t>(n), 0.0));
        for (const auto& [from, to, w] : edges) {
            if (from < 0 || from >= n || to < 0 || to >= n)
                throw std::invalid_argument("WeightedGraph: edge endpoint out of range");
            if (from == to)
                throw std::invalid_argument("WeightedGraph: kernel diagonal must be zero (self-loop on '" +
                                            ids_[static_cast<std::size_t>(from)] + "')");
            if (w < 0.0)
                throw std::invalid_argument("WeightedGraph: negative weight on edge " +
                                            ids_[static_cast<std::size_t>(from)] + " -> " +
                                            ids_[static_cast<std::size_t>(to)]);
            dense[static_cast<std::size_t>(from)][static_cast<std::size_t>(to)] += w;
        }
        generator_ = DenseMatrix(n);
        for (int y = 0; y < n; ++y) {
            double row_sum = 0.0;
            for (int z = 0; z < n; ++z) {
                const double w = dense[static_cast<std::size_t>(y)][static_cast<std::size_t>(z)];
                if (w > 0.0) {
                    adj_[static_cast<std::size_t>(y)].push_back({z, w});
                    generator_(y, z) = w;
                    row_sum += w;
                }
            }
            generator_(y, y) = -row_sum;
        }
        symmetric_support_ = true;
        symmetric_weights_ = true;
        for (int y = 0; y < n; ++y)
            for (const auto& e : adj_[static_cast<std::size_t>(y)]) {
                const double back = weight(e.to, y);
                if (back <= 0.0) symmetric_support_ = false;
                if (back != e.weight) symmetric_weights_ = false;
            }
    }

    int size() const { return static_cast<int>(ids_.size()); }
    const std::vector<std::string>& vertex_ids() const { return ids_; }
    const std::string& id_of(int y) const { return ids_.at(static_cast<std::size_t>(y)); }

    int index_of(const std::string& id) const {
        const auto it = index_.find(id);
        if (it == index_.end())
            throw std::invalid_argument("WeightedGraph: unknown vertex id '" + id + "'");
        return it->second;
    }

    const std::vector<GraphEdge>& out_edges(int y) const {
        return adj_.at(static_cast<std::size_t>(y));
    }

    double weight(int y, int z) const {
        for (const auto& e : adj_.at(static_cast<std::size_t>(y)))
            if (e.to == z) return e.weight;
        return 0.0;
    }

    bool symmetric_support() const { return symmetric_support_; }
    bool symmetric_weights() const { return symmetric_weights_; }

    // Dense matrix of L_d (rows sum to zero).
    const DenseMatrix& generator() const { return generator_; }

    void require_defined(const VertexFunction& u, const char* what) const {
        if (static_cast<int>(u.size()) != size())
            throw std::invalid_argument(std::string(what) + ": function not defined on the vertex set");
    }

private:
    std::vector<std::string> ids_;
    std::map<std::string, int> index_;
    std::vector<std::vector<GraphEdge>> adj_;
    DenseMatrix generator_;
    bool symmetric_support_ = true;
    bool symmetric_weights_ = true;
};

// Scalar kernel H for Psi_H / B_H, carried with a name so reports can state
// which operator they used.
struct ScalarKernel {
    std::string name;
    std::function<double(double)> fn;
};

namespace kernels {
inline ScalarKernel upsilon_kernel() { return {"upsilon", [](double x) { return upsilon(x); }}; }
inline ScalarKernel upsilon_prime_kernel() { return {"upsilon_prime", [](double x) { return upsilon_prime(x); }}; }
inline ScalarKernel exp_kernel() { return {"exp", [](double x) { return std::exp(x); }}; }
inline ScalarKernel square_half_kernel() { return {"square_half", [](double x) { return 0.5 * x * x; }}; }
inline ScalarKernel identity_kernel() { return {"identity", [](double x) { return x; }}; }
} // namespace kernels

// L_d u(y) = sum_z k(y,z) (u(z) - u(y)).
inline VertexFunction ld_apply(const WeightedGraph& g, const VertexFunction& u) {
    g.require_defined(u, "ld_apply");
    VertexFunction out(u.size(), 0.0);
    for (int y = 0; y < g.size(); ++y) {
        double s = 0.0;
        for (const auto& e : g.out_edges(y))
            s += e.weight * (u[static_cast<std::size_t>(e.to)] - u[static_cast<std::size_t>(y)]);
        out[static_cast<std::size_t>(y)] = s;
    }
    return out;
}

// Psi_H(u)(y) = sum_z k(y,z) H(u(z) - u(y)).
inline VertexFunction psi_h(const WeightedGraph& g, const VertexFunction& u, const ScalarKernel& H) {
    g.require_defined(u, "psi_h");
    VertexFunction out(u.size(), 0.0);
    for (int y = 0; y < g.size(); ++y) {
        double s = 0.0;
        for (const auto& e : g.out_edges(y))
            s += e.weight * H.fn(u[static_cast<std::size_t>(e.to)] - u[static_cast<std::size_t>(y)]);
        out[static_cast<std::size_t>(y)] = s;
    }
    return out;
}

// B_H(u,v)(y) = sum_z k(y,z) H(u(z) - u(y)) (v(z) - v(y)).
inline VertexFunction b_h(const WeightedGraph& g, const VertexFunction& u, const VertexFunction& v,
                          const ScalarKernel& H) {
    g.require_defined(u, "b_h");
    g.require_defined(v, "b_h");
    VertexFunction out(u.size(), 0.0);
    for (int y = 0; y < g.size(); ++y) {
        double s = 0.0;
        for (const auto& e : g.out_edges(y))
            s += e.weight * H.fn(u[static_cast<std::size_t>(e.to)] - u[static_cast<std::size_t>(y)]) *
                 (v[static_cast<std::size_t>(e.to)] - v[static_cast<std::size_t>(y)]);
        out[static_cast<std::size_t>(y)] = s;
    }
    return out;
}

inline VertexFunction psi_upsilon(const WeightedGraph& g, const VertexFunction& u) {
    return psi_h(g, u, kernels::upsilon_kernel());
}

// Psi_{2,Upsilon}(u) = (1/2) (L_d Psi_Upsilon(u) - B_{Upsilon'}(u, L_d u)).
// The value at y depends on u within graph distance 2 of y only.
inline VertexFunction psi2_upsilon(const WeightedGraph& g, const VertexFunction& u) {
    g.require_defined(u, "psi2_upsilon");
    const VertexFunction psi = psi_upsilon(g, u);
    const VertexFunction ld_u = ld_apply(g, u);
    const VertexFunction a = ld_apply(g, psi);
    const VertexFunction b = b_h(g, u, ld_u, kernels::upsilon_prime_kernel());
    VertexFunction out(u.size(), 0.0);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = 0.5 * (a[i] - b[i]);
    return out;
}

// Vertices within the given hop radius of y along out-edges (y included).
inline std::vector<int> ball(const WeightedGraph& g, int y, int radius) {
    std::vector<int> dist(static_cast<std::size_t>(g.size()), -1);
    std::deque<int> queue;
    dist[static_cast<std::size_t>(y)] = 0;
    queue.push_back(y);
    std::vector<int> out{y};
    while (!queue.empty()) {
        const int v = queue.front();
        queue.pop_front();
        if (dist[static_cast<std::size_t>(v)] == radius) continue;
        for (const auto& e : g.out_edges(v)) {
            if (dist[static_cast<std::size_t>(e.to)] >= 0) continue;
            dist[static_cast<std::size_t>(e.to)] = dist[static_cast<std::size_t>(v)] + 1;
            out.push_back(e.to);
            queue.push_back(e.to);
        }
    }
    return out;
}

// Shortest-path edge count on the support of k.  Requires symmetric support;
// throws if the two vertices are not connected.
inline int graph_distance(const WeightedGraph& g, int y1, int y2) {
    if (!g.symmetric_support())
        throw std::domain_error("graph_distance: support of k must be symmetric");
    if (y1 == y2) return 0;
    std::vector<int> dist(static_cast<std::size_t>(g.size()), -1);
    std::deque<int> queue;
    dist[static_cast<std::size_t>(y1)] = 0;
    queue.push_back(y1);
    while (!queue.empty()) {
        const int v = queue.front();
        queue.pop_front();
        for (const auto& e : g.out_edges(v)) {
            if (dist[static_cast<std::size_t>(e.to)] >= 0) continue;
            dist[static_cast<std::size_t>(e.to)] = dist[static_cast<std::size_t>(v)] + 1;
            if (e.to == y2) return dist[static_cast<std::size_t>(e.to)];
            queue.push_back(e.to);
        }
    }
    throw std::runtime_error("graph_distance: vertices '" + g.id_of(y1) + "' and '" +
                             g.id_of(y2) + "' are not connected");
}

// Minimum over strictly positive weights.
inline double k_min(const WeightedGraph& g) {
    double best = std::numeric_limits<double>::infinity();
    for (int y = 0; y < g.size(); ++y)
        for (const auto& e : g.out_edges(y)) best = std::min(best, e.weight);
    if (!std::isfinite(best))
        throw std::domain_error("k_min: graph has no edges");
    return best;
}

struct GraphValidationReport {
    bool connected = false;
    bool symmetric_support = false;
    bool symmetric_weights = false;
    std::optional<int> regular_degree;  // common degree when unweighted & regular
    std::optional<double> k_min;
};

inline GraphValidationReport validate(const WeightedGraph& g) {
    GraphValidationReport r;
    r.symmetric_support = g.symmetric_support();
    r.symmetric_weights = g.symmetric_weights();

    // connectivity of the undirected support
    std::vector<std::vector<int>> undirected(static_cast<std::size_t>(g.size()));
    for (int y = 0; y < g.size(); ++y)
        for (const auto& e : g.out_edges(y)) {
            undirected[static_cast<std::size_t>(y)].push_back(e.to);
            undirected[static_cast<std::size_t>(e.to)].push_back(y);
        }
    std::vector<char> seen(static_cast<std::size_t>(g.size()), 0);
    std::deque<int> queue{0};
    seen[0] = 1;
    int count = 1;
    while (!queue.empty()) {
        const int v = queue.front();
        queue.pop_front();
        for (int w : undirected[static_cast<std::size_t>(v)])
            if (!seen[static_cast<std::size_t>(w)]) {
                seen[static_cast<std::size_t>(w)] = 1;
                ++count;
                queue.push_back(w);
            }
    }
    r.connected = (count == g.size());

    bool unweighted = true;
    bool has_edges = false;
    double kmin = std::numeric_limits<double>::infinity();
    for (int y = 0; y < g.size(); ++y)
        for (const auto& e : g.out_edges(y)) {
            has_edges = true;
            kmin = std::min(kmin, e.weight);
            if (e.weight != 1.0) unweighted = false;
        }
    if (has_edges) r.k_min = kmin;

    if (unweighted && has_edges) {
        const int deg = static_cast<int>(g.out_edges(0).size());
        bool regular = true;
        for (int y = 1; y < g.size(); ++y)
            if (static_cast<int>(g.out_edges(y).size()) != deg) { regular = false; break; }
        if (regular) r.regular_degree = deg;
    }
    return r;
}

// Dense e^{t L_d} for reuse across many vertex functions (splitting schemes,
// per-time-slice evaluation).
inline DenseMatrix heat_semigroup_matrix(const WeightedGraph& g, double t) {
    if (t < 0.0) throw std::domain_error("heat_semigroup_matrix: t must be >= 0");
    if (t == 0.0) return DenseMatrix::identity(g.size());
    DenseMatrix m = g.generator();
    m *= t;
    return expm(m);
}

// e^{t L_d} u.  Preserves constants (L_d annihilates them) and maps
// nonnegative nonzero data to strictly positive data for t > 0 on connected
// graphs.
inline VertexFunction heat_semigroup_apply(const WeightedGraph& g, double t, const VertexFunction& u) {
    g.require_defined(u, "heat_semigroup_apply");
    if (t < 0.0) throw std::domain_error("heat_semigroup_apply: t must be >= 0");
    if (t == 0.0) return u;
    return heat_semigroup_matrix(g, t).apply(u);
}

// Ready-made graphs used throughout the test surface and the CLI examples.
namespace graphs {

inline WeightedGraph two_point(double eta = 1.0) {
    return WeightedGraph({"y1", "y2"}, {{0, 1, eta}, {1, 0, eta}});
}

inline WeightedGraph complete(int m) {
    if (m < 2) throw std::invalid_argument("graphs::complete: need at least 2 vertices");
    std::vector<std::string> ids;
    std::vector<std::tuple<int, int, double>> edges;
    for (int i = 0; i < m; ++i) ids.push_back("y" + std::to_string(i + 1));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            if (i != j) edges.emplace_back(i, j, 1.0);
    return WeightedGraph(std::move(ids), edges);
}

inline WeightedGraph cycle(int m) {
    if (m < 3) throw std::invalid_argument("graphs::cycle: need at least 3 vertices");
    std::vector<std::string> ids;
    std::vector<std::tuple<int, int, double>> edges;
    for (int i = 0; i < m; ++i) ids.push_back("y" + std::to_string(i + 1));
    for (int i = 0; i < m; ++i) {
        const int j = (i + 1) % m;
        edges.emplace_back(i, j, 1.0);
        edges.emplace_back(j, i, 1.0);
    }
    return WeightedGraph(std::move(ids), edges);
}

inline WeightedGraph path(int m) {
    if (m < 2) throw std::invalid_argument("graphs::path: need at least 2 vertices");
    std::vector<std::string> ids;
    std::vector<std::tuple<int, int, double>> edges;
    for (int i = 0; i < m; ++i) ids.push_back("y" + std::to_string(i + 1));
    for (int i = 0; i + 1 < m; ++i) {
        edges.emplace_back(i, i + 1, 1.0);
        edges.emplace_back(i + 1, i, 1.0);
    }
    return WeightedGraph(std::move(ids), edges);
}

inline WeightedGraph complete_bipartite(int p, int q) {
    if (p < 1 || q < 1) throw std::invalid_argument("graphs::complete_bipartite: parts must be nonempty");
    std::vector<std::string> ids;
    std::vector<std::tuple<int, int, double>> edges;
    for (int i = 0; i < p; ++i) ids.push_back("a" + std::to_string(i + 1));
    for (int j = 0; j < q; ++j) ids.push_back("b" + std::to_string(j + 1));
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < q; ++j) {
            edges.emplace_back(i, p + j, 1.0);
            edges.emplace_back(p + j, i, 1.0);
        }
    return WeightedGraph(std::move(ids), edges);
}

// Finite ball of the integer lattice: a path of 2*radius + 1 vertices whose
// middle vertex sees the full lattice structure up to the given radius.
inline WeightedGraph integer_ball(int radius) {
    if (radius < 1) throw std::invalid_argument("graphs::integer_ball: radius must be >= 1");
    return path(2 * radius + 1);
}

} // namespace graphs

} // namespace hybridcd
