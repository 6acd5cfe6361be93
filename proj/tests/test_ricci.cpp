#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <vector>

#include "hybridcd/ricci.hpp"

using namespace hybridcd;

namespace {

// exhaustive oracle for K3: enumerate every map assignment directly and
// report whether any satisfies (i)-(iii) under the multiset rule
bool k3_brute_force_exists(const WeightedGraph& g, int x) {
    std::vector<int> closed{x};
    for (const auto& e : g.out_edges(x)) closed.push_back(e.to);
    std::sort(closed.begin(), closed.end());
    const int D = 2;

    std::vector<std::vector<int>> neigh;
    for (int v : closed) {
        std::vector<int> ns;
        for (const auto& e : g.out_edges(v)) ns.push_back(e.to);
        std::sort(ns.begin(), ns.end());
        neigh.push_back(ns);
    }
    std::vector<int> col_of(static_cast<std::size_t>(g.size()), -1);
    for (std::size_t c = 0; c < closed.size(); ++c) col_of[static_cast<std::size_t>(closed[c])] = static_cast<int>(c);

    // each column is one of the two orderings of the two neighbours
    for (int mask = 0; mask < 8; ++mask) {
        std::vector<std::vector<int>> eta(2, std::vector<int>(3));
        for (int c = 0; c < 3; ++c) {
            const bool flip = (mask >> c) & 1;
            eta[0][static_cast<std::size_t>(c)] = neigh[static_cast<std::size_t>(c)][flip ? 1 : 0];
            eta[1][static_cast<std::size_t>(c)] = neigh[static_cast<std::size_t>(c)][flip ? 0 : 1];
        }
        bool ok = true;
        const int xc = col_of[static_cast<std::size_t>(x)];
        for (int i = 0; i < D && ok; ++i) {
            std::vector<int> lhs, rhs;
            for (int j = 0; j < D; ++j) {
                const int zj = eta[static_cast<std::size_t>(j)][static_cast<std::size_t>(xc)];
                const int zi = eta[static_cast<std::size_t>(i)][static_cast<std::size_t>(xc)];
                lhs.push_back(eta[static_cast<std::size_t>(i)][static_cast<std::size_t>(col_of[static_cast<std::size_t>(zj)])]);
                rhs.push_back(eta[static_cast<std::size_t>(j)][static_cast<std::size_t>(col_of[static_cast<std::size_t>(zi)])]);
            }
            std::sort(lhs.begin(), lhs.end());
            std::sort(rhs.begin(), rhs.end());
            if (lhs != rhs) ok = false;
        }
        if (ok) return true;
    }
    return false;
}

} // namespace

TEST_CASE("complete graphs are certified") {
    for (int m : {3, 4}) {
        const auto g = graphs::complete(m);
        const auto results = certify(g);
        REQUIRE(static_cast<int>(results.size()) == m);
        for (const auto& r : results) {
            CHECK(r.status == CertifyStatus::certified);
            REQUIRE(r.certificate.has_value());
            const auto check = verify_certificate(g, *r.certificate, 1000);
            CHECK(check.ok);
        }
    }
}

TEST_CASE("the square is certified at every vertex") {
    const auto g = graphs::cycle(4);
    const auto results = certify(g);
    for (const auto& r : results) {
        REQUIRE(r.status == CertifyStatus::certified);
        CHECK(verify_certificate(g, *r.certificate, 1000).ok);
    }
}

TEST_CASE("complete bipartite K33 is certified at every vertex") {
    const auto g = graphs::complete_bipartite(3, 3);
    const auto results = certify(g);
    for (const auto& r : results) {
        REQUIRE(r.status == CertifyStatus::certified);
        CHECK(verify_certificate(g, *r.certificate, 500).ok);
    }
}

TEST_CASE("the centre of a lattice ball is certified with the shift maps") {
    const auto g = graphs::integer_ball(2);  // path y1..y5, centre y3
    const auto result = certify_at(g, 2);
    REQUIRE(result.status == CertifyStatus::certified);
    const auto& cert = *result.certificate;
    CHECK(cert.degree == 2);
    CHECK(verify_certificate(g, cert, 1000).ok);
    // the two maps act as +1 / -1 shifts on the centre's neighbourhood
    // (columns are orderings of each vertex's two path neighbours)
    REQUIRE(cert.neighbourhood == std::vector<std::string>{"y2", "y3", "y4"});
    for (int c = 0; c < 3; ++c) {
        const std::vector<std::string> column{cert.maps[0][static_cast<std::size_t>(c)],
                                              cert.maps[1][static_cast<std::size_t>(c)]};
        const std::string& base = cert.neighbourhood[static_cast<std::size_t>(c)];
        const int idx = base[1] - '0';
        const std::vector<std::string> expect{"y" + std::to_string(idx - 1),
                                              "y" + std::to_string(idx + 1)};
        CHECK((column == expect ||
               (column[0] == expect[1] && column[1] == expect[0])));
    }
}

TEST_CASE("whole-graph certification rejects non-regular graphs") {
    const auto path = graphs::path(5);
    CHECK_THROWS_AS(certify(path), std::domain_error);
    const auto weighted = graphs::two_point(0.5);
    CHECK_THROWS_AS(certify(weighted), std::domain_error);
    CHECK_THROWS_AS(certify_at(weighted, 0), std::domain_error);
}

TEST_CASE("certify_at rejects locally irregular neighbourhoods") {
    // endpoint of a path: its neighbour has a different degree
    const auto path = graphs::path(3);
    CHECK_THROWS_AS(certify_at(path, 0), std::domain_error);
}

TEST_CASE("node budget aborts with an inconclusive status") {
    CertifyConfig cfg;
    cfg.node_budget = 1;
    const auto result = certify_at(graphs::complete(4), 0, cfg);
    CHECK(result.status == CertifyStatus::inconclusive);
    CHECK_FALSE(result.certificate.has_value());
}

TEST_CASE("brute-force enumeration agrees on K3") {
    const auto g = graphs::complete(3);
    for (int x = 0; x < 3; ++x) {
        const bool exists = k3_brute_force_exists(g, x);
        const auto result = certify_at(g, x);
        CHECK(exists == (result.status == CertifyStatus::certified));
    }
}

TEST_CASE("mutated certificates fail verification with the clause named") {
    const auto g = graphs::complete(3);
    const auto result = certify_at(g, 0);
    REQUIRE(result.status == CertifyStatus::certified);
    const auto cert = *result.certificate;

    SECTION("duplicate entry in a column") {
        auto bad = cert;
        bad.maps[1][0] = bad.maps[0][0];
        const auto check = verify_certificate(g, bad, 10);
        CHECK_FALSE(check.ok);
        CHECK(check.failed_clause == "(ii) distinctness");
    }

    SECTION("swapping one column breaks the commutation multiset") {
        // swapping both entries of one column preserves (i) and (ii), so any
        // verification failure must come from clause (iii)
        int failures = 0;
        for (std::size_t col = 0; col < cert.neighbourhood.size(); ++col) {
            auto bad = cert;
            std::swap(bad.maps[0][col], bad.maps[1][col]);
            const auto check = verify_certificate(g, bad, 10);
            if (!check.ok) {
                ++failures;
                CHECK(check.failed_clause == "(iii) commutation");
            }
        }
        CHECK(failures >= 1);
    }

    SECTION("structure errors are reported") {
        auto bad = cert;
        bad.degree = 5;
        CHECK(verify_certificate(g, bad, 1).failed_clause == "structure: degree mismatch");
    }
}

TEST_CASE("set rule also certifies the reference graphs") {
    CertifyConfig cfg;
    cfg.multiset_rule = false;
    for (const auto& r : certify(graphs::complete(3), cfg))
        CHECK(r.status == CertifyStatus::certified);
    for (const auto& r : certify(graphs::cycle(4), cfg))
        CHECK(r.status == CertifyStatus::certified);
}

TEST_CASE("certified output is deterministic") {
    const auto g = graphs::complete_bipartite(3, 3);
    const auto a = certify_at(g, 0);
    const auto b = certify_at(g, 0);
    REQUIRE(a.certificate.has_value());
    REQUIRE(b.certificate.has_value());
    CHECK(a.certificate->maps == b.certificate->maps);
    CHECK(a.nodes_explored == b.nodes_explored);
}
