// ricci.hpp — certification of Ricci-flatness for unweighted regular graphs:
// a backtracking search for maps eta_1..eta_D on the closed neighbourhood
// N(x) with
//   (i)   eta_i(y) ~ y,
//   (ii)  eta_i(y) != eta_j(y) for i != j,
//   (iii) the families { eta_i(eta_j(x)) }_j and { eta_j(eta_i(x)) }_j agree
//         for every i.
// Property (iii) is enforced as multiset equality by default (the reading
// under which the sum identity over arbitrary vertex functions becomes an
// exact consequence); plain set equality is available behind a flag.

#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "hybridcd/graph.hpp"

namespace hybridcd {

struct RicciCertificate {
    std::string vertex;
    int degree = 0;
    std::vector<std::string> neighbourhood;          // N(x) in graph order, x included
    std::vector<std::vector<std::string>> maps;      // maps[i][c] = eta_{i+1}(neighbourhood[c])
};

enum class CertifyStatus { certified, not_ricci_flat, inconclusive };

struct CertifyResult {
    CertifyStatus status = CertifyStatus::inconclusive;
    std::optional<RicciCertificate> certificate;
    long nodes_explored = 0;
};

struct CertifyConfig {
    long node_budget = 10'000'000;
    bool multiset_rule = true;
};

namespace detail {

inline void require_unweighted_symmetric(const WeightedGraph& g, const char* what) {
    if (!g.symmetric_support() || !g.symmetric_weights())
        throw std::domain_error(std::string(what) + ": kernel must be symmetric");
    for (int y = 0; y < g.size(); ++y)
        for (const auto& e : g.out_edges(y))
            if (e.weight != 1.0)
                throw std::domain_error(std::string(what) + ": graph must be unweighted "
                                        "(all positive weights equal to 1)");
}

inline std::vector<int> sorted_neighbours(const WeightedGraph& g, int y) {
    std::vector<int> out;
    for (const auto& e : g.out_edges(y)) out.push_back(e.to);
    std::sort(out.begin(), out.end());
    return out;
}

inline bool multiset_equal(std::vector<int> a, std::vector<int> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    return a == b;
}

inline bool set_equal(std::vector<int> a, std::vector<int> b) {
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
    return a == b;
}

} // namespace detail

// Search for the maps at a single vertex.  Requires every vertex of N(x) to
// have the same degree as x (global regularity implies this).  Columns are
// assigned in graph order, map candidates in lexicographic order, so the
// first certificate found is deterministic.
inline CertifyResult certify_at(const WeightedGraph& g, int x, const CertifyConfig& cfg = {}) {
    detail::require_unweighted_symmetric(g, "certify_at");
    const int D = static_cast<int>(g.out_edges(x).size());
    if (D == 0)
        throw std::domain_error("certify_at: vertex '" + g.id_of(x) + "' is isolated");

    std::vector<int> closed{x};
    for (int z : detail::sorted_neighbours(g, x)) closed.push_back(z);
    std::sort(closed.begin(), closed.end());
    for (int z : closed)
        if (static_cast<int>(g.out_edges(z).size()) != D)
            throw std::domain_error("certify_at: graph is not regular on the neighbourhood of '" +
                                    g.id_of(x) + "' (degree of '" + g.id_of(z) + "' differs)");

    const int cols = static_cast<int>(closed.size());
    std::vector<int> col_of(static_cast<std::size_t>(g.size()), -1);
    for (int c = 0; c < cols; ++c) col_of[static_cast<std::size_t>(closed[c])] = c;
    const int x_col = col_of[static_cast<std::size_t>(x)];

    // assignment[c] = the column's map values (eta_1(y_c), ..., eta_D(y_c));
    // each is a permutation of the sorted neighbour list of y_c
    std::vector<std::vector<int>> assignment(static_cast<std::size_t>(cols));
    std::vector<std::vector<int>> neighbour_lists;
    for (int c = 0; c < cols; ++c)
        neighbour_lists.push_back(detail::sorted_neighbours(g, closed[static_cast<std::size_t>(c)]));

    long nodes = 0;
    bool out_of_budget = false;

    auto check_leaf = [&]() {
        // property (iii) over all i, using the x column to enumerate eta_j(x)
        const auto& x_column = assignment[static_cast<std::size_t>(x_col)];
        for (int i = 0; i < D; ++i) {
            std::vector<int> lhs, rhs;
            for (int j = 0; j < D; ++j) {
                const int zj = x_column[static_cast<std::size_t>(j)];  // eta_j(x)
                lhs.push_back(assignment[static_cast<std::size_t>(col_of[static_cast<std::size_t>(zj)])]
                                        [static_cast<std::size_t>(i)]);
                const int zi = x_column[static_cast<std::size_t>(i)];  // eta_i(x)
                rhs.push_back(assignment[static_cast<std::size_t>(col_of[static_cast<std::size_t>(zi)])]
                                        [static_cast<std::size_t>(j)]);
            }
            const bool ok = cfg.multiset_rule ? detail::multiset_equal(lhs, rhs)
                                              : detail::set_equal(lhs, rhs);
            if (!ok) return false;
        }
        return true;
    };

    // under the multiset rule each map may send at most one neighbour of x
    // back to x; prune partial assignments that already break this
    auto back_count_ok = [&](int assigned_cols) {
        if (!cfg.multiset_rule) return true;
        std::vector<int> count(static_cast<std::size_t>(D), 0);
        for (int c = 0; c < assigned_cols; ++c) {
            if (c == x_col) continue;
            for (int i = 0; i < D; ++i)
                if (assignment[static_cast<std::size_t>(c)][static_cast<std::size_t>(i)] == x &&
                    ++count[static_cast<std::size_t>(i)] > 1)
                    return false;
        }
        return true;
    };

    std::function<bool(int)> search = [&](int c) -> bool {
        if (out_of_budget) return false;
        if (c == cols) return check_leaf();
        std::vector<int> perm = neighbour_lists[static_cast<std::size_t>(c)];
        do {
            if (++nodes > cfg.node_budget) { out_of_budget = true; return false; }
            assignment[static_cast<std::size_t>(c)] = perm;
            if (!back_count_ok(c + 1)) continue;
            if (search(c + 1)) return true;
        } while (std::next_permutation(perm.begin(), perm.end()));
        assignment[static_cast<std::size_t>(c)].clear();
        return false;
    };

    CertifyResult result;
    const bool found = search(0);
    result.nodes_explored = nodes;
    if (found) {
        RicciCertificate cert;
        cert.vertex = g.id_of(x);
        cert.degree = D;
        for (int c = 0; c < cols; ++c)
            cert.neighbourhood.push_back(g.id_of(closed[static_cast<std::size_t>(c)]));
        cert.maps.assign(static_cast<std::size_t>(D), std::vector<std::string>(static_cast<std::size_t>(cols)));
        for (int i = 0; i < D; ++i)
            for (int c = 0; c < cols; ++c)
                cert.maps[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)] =
                    g.id_of(assignment[static_cast<std::size_t>(c)][static_cast<std::size_t>(i)]);
        result.certificate = std::move(cert);
        result.status = CertifyStatus::certified;
    } else {
        result.status = out_of_budget ? CertifyStatus::inconclusive : CertifyStatus::not_ricci_flat;
    }
    return result;
}

// Per-vertex certification of the whole graph; requires global D-regularity.
inline std::vector<CertifyResult> certify(const WeightedGraph& g, const CertifyConfig& cfg = {}) {
    detail::require_unweighted_symmetric(g, "certify");
    const auto v = validate(g);
    if (!v.regular_degree)
        throw std::domain_error("certify: graph is not regular");
    std::vector<CertifyResult> out;
    out.reserve(static_cast<std::size_t>(g.size()));
    for (int x = 0; x < g.size(); ++x) out.push_back(certify_at(g, x, cfg));
    return out;
}

struct CertificateCheck {
    bool ok = true;
    std::string failed_clause;
};

// Re-checks a certificate from scratch: structure, properties (i)-(iii), the
// sum identity sum_j u(eta_i(eta_j(x))) = sum_j u(eta_j(eta_i(x))) on the
// indicator basis and on `trials` random vertex functions, and existence and
// bijectivity of the inverse assignment i -> i* with eta_i(eta_{i*}(x)) = x.
inline CertificateCheck verify_certificate(const WeightedGraph& g, const RicciCertificate& cert,
                                           int trials, std::uint64_t seed = 1,
                                           bool multiset_rule = true) {
    auto fail = [](const char* clause) { return CertificateCheck{false, clause}; };

    int x = -1;
    try {
        x = g.index_of(cert.vertex);
    } catch (const std::exception&) {
        return fail("structure: unknown vertex");
    }
    const int D = static_cast<int>(g.out_edges(x).size());
    if (cert.degree != D) return fail("structure: degree mismatch");

    std::vector<int> closed{x};
    for (int z : detail::sorted_neighbours(g, x)) closed.push_back(z);
    std::sort(closed.begin(), closed.end());
    if (static_cast<int>(cert.neighbourhood.size()) != static_cast<int>(closed.size()))
        return fail("structure: neighbourhood size mismatch");
    std::vector<int> hood;
    for (const auto& id : cert.neighbourhood) {
        try {
            hood.push_back(g.index_of(id));
        } catch (const std::exception&) {
            return fail("structure: unknown vertex in neighbourhood");
        }
    }
    {
        std::vector<int> sorted_hood = hood;
        std::sort(sorted_hood.begin(), sorted_hood.end());
        if (sorted_hood != closed) return fail("structure: neighbourhood is not N(x)");
    }
    if (static_cast<int>(cert.maps.size()) != D) return fail("structure: map count mismatch");
    for (const auto& row : cert.maps)
        if (row.size() != hood.size()) return fail("structure: map row length mismatch");

    const int cols = static_cast<int>(hood.size());
    std::vector<std::vector<int>> eta(static_cast<std::size_t>(D),
                                      std::vector<int>(static_cast<std::size_t>(cols)));
    for (int i = 0; i < D; ++i)
        for (int c = 0; c < cols; ++c) {
            try {
                eta[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)] =
                    g.index_of(cert.maps[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)]);
            } catch (const std::exception&) {
                return fail("structure: unknown vertex in maps");
            }
        }
    std::vector<int> col_of(static_cast<std::size_t>(g.size()), -1);
    for (int c = 0; c < cols; ++c) col_of[static_cast<std::size_t>(hood[c])] = c;
    const int x_col = col_of[static_cast<std::size_t>(x)];

    // (i)
    for (int i = 0; i < D; ++i)
        for (int c = 0; c < cols; ++c)
            if (g.weight(hood[static_cast<std::size_t>(c)],
                         eta[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)]) <= 0.0)
                return fail("(i) neighbour property");
    // (ii)
    for (int c = 0; c < cols; ++c)
        for (int i = 0; i < D; ++i)
            for (int j = i + 1; j < D; ++j)
                if (eta[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)] ==
                    eta[static_cast<std::size_t>(j)][static_cast<std::size_t>(c)])
                    return fail("(ii) distinctness");

    auto eta_at = [&](int i, int vertex) {
        const int c = col_of[static_cast<std::size_t>(vertex)];
        if (c < 0) return -1;
        return eta[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)];
    };

    // (iii)
    for (int i = 0; i < D; ++i) {
        std::vector<int> lhs, rhs;
        for (int j = 0; j < D; ++j) {
            const int zj = eta[static_cast<std::size_t>(j)][static_cast<std::size_t>(x_col)];
            const int zi = eta[static_cast<std::size_t>(i)][static_cast<std::size_t>(x_col)];
            const int a = eta_at(i, zj);
            const int b = eta_at(j, zi);
            if (a < 0 || b < 0) return fail("(iii) commutation");
            lhs.push_back(a);
            rhs.push_back(b);
        }
        const bool ok = multiset_rule ? detail::multiset_equal(lhs, rhs)
                                      : detail::set_equal(lhs, rhs);
        if (!ok) return fail("(iii) commutation");
    }

    // sum identity on the indicator basis (equivalent to multiset equality)
    // and on random vertex functions
    auto sum_identity_holds = [&](const VertexFunction& u) {
        for (int i = 0; i < D; ++i) {
            double lhs = 0.0, rhs = 0.0;
            for (int j = 0; j < D; ++j) {
                const int zj = eta[static_cast<std::size_t>(j)][static_cast<std::size_t>(x_col)];
                const int zi = eta[static_cast<std::size_t>(i)][static_cast<std::size_t>(x_col)];
                lhs += u[static_cast<std::size_t>(eta_at(i, zj))];
                rhs += u[static_cast<std::size_t>(eta_at(j, zi))];
            }
            if (std::abs(lhs - rhs) > 1e-12 * std::max(1.0, std::abs(lhs)))
                return false;
        }
        return true;
    };
    for (int w = 0; w < g.size(); ++w) {
        VertexFunction u(static_cast<std::size_t>(g.size()), 0.0);
        u[static_cast<std::size_t>(w)] = 1.0;
        if (!sum_identity_holds(u)) return fail("sum identity");
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    for (int t = 0; t < trials; ++t) {
        VertexFunction u(static_cast<std::size_t>(g.size()), 0.0);
        for (double& v : u) v = uni(rng);
        if (!sum_identity_holds(u)) return fail("sum identity");
    }

    // inverse assignment i -> i*
    std::vector<int> inv(static_cast<std::size_t>(D), -1);
    for (int i = 0; i < D; ++i) {
        for (int j = 0; j < D; ++j) {
            const int zj = eta[static_cast<std::size_t>(j)][static_cast<std::size_t>(x_col)];
            if (eta_at(i, zj) == x) {
                if (inv[static_cast<std::size_t>(i)] >= 0)
                    return fail("inverse permutation");  // not unique
                inv[static_cast<std::size_t>(i)] = j;
            }
        }
        if (inv[static_cast<std::size_t>(i)] < 0)
            return fail("inverse permutation");  // no inverse
    }
    std::vector<char> hit(static_cast<std::size_t>(D), 0);
    for (int i = 0; i < D; ++i) {
        if (hit[static_cast<std::size_t>(inv[static_cast<std::size_t>(i)])])
            return fail("inverse permutation");  // not a permutation
        hit[static_cast<std::size_t>(inv[static_cast<std::size_t>(i)])] = 1;
    }

    return {};
}

} // namespace hybridcd
