// io.hpp — JSON schemas for graphs, solution configs, simulator configs and
// all report types, plus CSV export.  Parsers are strict: unknown keys are
// rejected so that a config typo cannot silently change a run.

#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "hybridcd/cd.hpp"
#include "hybridcd/graph.hpp"
#include "hybridcd/heat.hpp"
#include "hybridcd/inequality.hpp"
#include "hybridcd/ricci.hpp"

namespace hybridcd {

using nlohmann::json;

namespace io_detail {

inline void ensure_keys(const json& j, const std::vector<std::string>& allowed,
                        const std::string& context) {
    if (!j.is_object()) throw std::runtime_error(context + ": expected a JSON object");
    for (const auto& item : j.items()) {
        bool ok = false;
        for (const auto& k : allowed)
            if (item.key() == k) { ok = true; break; }
        if (!ok) throw std::runtime_error(context + ": unknown field '" + item.key() + "'");
    }
}

inline void require_key(const json& j, const std::string& key, const std::string& context) {
    if (!j.contains(key)) throw std::runtime_error(context + ": missing field '" + key + "'");
}

} // namespace io_detail

// Doubles with infinities survive the trip through JSON as the strings
// "inf" / "-inf" (plain JSON has no representation for them).
inline json real_to_json(double v) {
    if (std::isinf(v)) return v > 0 ? json("inf") : json("-inf");
    if (std::isnan(v)) return json(nullptr);
    return json(v);
}

inline double real_from_json(const json& j, const std::string& context) {
    if (j.is_number()) return j.get<double>();
    if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        if (s == "inf" || s == "Infinity") return std::numeric_limits<double>::infinity();
        if (s == "-inf" || s == "-Infinity") return -std::numeric_limits<double>::infinity();
    }
    throw std::runtime_error(context + ": expected a number or 'inf'/'-inf'");
}

// ---------------------------------------------------------------------------
// graph file format
// ---------------------------------------------------------------------------
// { "vertices": ["y1", ...],
//   "edges": [ {"from": "y1", "to": "y2", "weight": 1.0}, ... ],
//   "symmetric": true }
// With "symmetric": true each listed edge implies its reverse with the same
// weight.

inline WeightedGraph graph_from_json(const json& j) {
    io_detail::ensure_keys(j, {"vertices", "edges", "symmetric"}, "graph");
    io_detail::require_key(j, "vertices", "graph");
    io_detail::require_key(j, "edges", "graph");
    std::vector<std::string> ids = j.at("vertices").get<std::vector<std::string>>();
    std::map<std::string, int> index;
    for (std::size_t i = 0; i < ids.size(); ++i) index[ids[i]] = static_cast<int>(i);
    const bool symmetric = j.value("symmetric", false);

    std::vector<std::tuple<int, int, double>> edges;
    for (const auto& e : j.at("edges")) {
        io_detail::ensure_keys(e, {"from", "to", "weight"}, "graph edge");
        io_detail::require_key(e, "from", "graph edge");
        io_detail::require_key(e, "to", "graph edge");
        const std::string from = e.at("from").get<std::string>();
        const std::string to = e.at("to").get<std::string>();
        const double w = e.value("weight", 1.0);
        if (!index.count(from)) throw std::runtime_error("graph edge: unknown vertex '" + from + "'");
        if (!index.count(to)) throw std::runtime_error("graph edge: unknown vertex '" + to + "'");
        if (from == to) throw std::runtime_error("graph edge: self-loop on '" + from + "' (diagonal must be zero)");
        if (w < 0.0) throw std::runtime_error("graph edge: negative weight on " + from + " -> " + to);
        edges.emplace_back(index[from], index[to], w);
        if (symmetric) edges.emplace_back(index[to], index[from], w);
    }
    return WeightedGraph(std::move(ids), edges);
}

inline json graph_to_json(const WeightedGraph& g) {
    json j;
    j["vertices"] = g.vertex_ids();
    j["symmetric"] = false;  // edges listed explicitly in both directions
    json edges = json::array();
    for (int y = 0; y < g.size(); ++y)
        for (const auto& e : g.out_edges(y))
            edges.push_back({{"from", g.id_of(y)}, {"to", g.id_of(e.to)}, {"weight", e.weight}});
    j["edges"] = edges;
    return j;
}

inline WeightedGraph load_graph(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_graph: cannot open '" + path + "'");
    json j;
    in >> j;
    return graph_from_json(j);
}

// FNV-1a over the canonical edge list; echoed into reports so a report can
// be matched to its exact input graph.
inline std::string graph_hash(const WeightedGraph& g) {
    std::ostringstream os;
    for (const auto& id : g.vertex_ids()) os << id << ';';
    os << '|';
    for (int y = 0; y < g.size(); ++y)
        for (const auto& e : g.out_edges(y))
            os << g.id_of(y) << "->" << g.id_of(e.to) << ':' << e.weight << ';';
    const std::string s = os.str();
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    std::ostringstream hex;
    hex << std::hex << h;
    return hex.str();
}

// ---------------------------------------------------------------------------
// reports
// ---------------------------------------------------------------------------

inline json to_json(const GraphValidationReport& r) {
    json j;
    j["connected"] = r.connected;
    j["symmetric_support"] = r.symmetric_support;
    j["symmetric_weights"] = r.symmetric_weights;
    j["regular_degree"] = r.regular_degree ? json(*r.regular_degree) : json(nullptr);
    j["k_min"] = r.k_min ? json(*r.k_min) : json(nullptr);
    return j;
}

inline json vertex_function_to_json(const WeightedGraph& g, const VertexFunction& u) {
    json j = json::object();
    for (int y = 0; y < g.size(); ++y) j[g.id_of(y)] = u[static_cast<std::size_t>(y)];
    return j;
}

inline VertexFunction vertex_function_from_json(const WeightedGraph& g, const json& j,
                                                const std::string& context) {
    if (!j.is_object()) throw std::runtime_error(context + ": expected an object of vertex values");
    VertexFunction u(static_cast<std::size_t>(g.size()), 0.0);
    std::vector<char> seen(static_cast<std::size_t>(g.size()), 0);
    for (const auto& item : j.items()) {
        const int y = g.index_of(item.key());
        u[static_cast<std::size_t>(y)] = item.value().get<double>();
        seen[static_cast<std::size_t>(y)] = 1;
    }
    for (int y = 0; y < g.size(); ++y)
        if (!seen[static_cast<std::size_t>(y)])
            throw std::runtime_error(context + ": missing value for vertex '" + g.id_of(y) + "'");
    return u;
}

inline json to_json(const CdReport& r, const WeightedGraph& g) {
    json j;
    j["vertex"] = r.vertex;
    j["kappa"] = r.params.kappa;
    j["d"] = real_to_json(r.params.d);
    j["satisfied_on_samples"] = r.satisfied_on_samples;
    j["minimal_d_estimate"] = real_to_json(r.minimal_d_estimate);
    j["worst_slack"] = real_to_json(r.worst_slack);
    j["witness"] = r.witness.empty() ? json(nullptr) : vertex_function_to_json(g, r.witness);
    j["ratio_witness"] =
        r.ratio_witness.empty() ? json(nullptr) : vertex_function_to_json(g, r.ratio_witness);
    j["samples_evaluated"] = r.samples_evaluated;
    j["seed"] = r.seed;
    j["near_degenerate"] = r.near_degenerate;
    j["status"] = r.status;
    j["caveat"] = r.caveat;
    j["graph_hash"] = graph_hash(g);
    return j;
}

inline json to_json(const RicciCertificate& c) {
    json j;
    j["vertex"] = c.vertex;
    j["degree"] = c.degree;
    j["neighbourhood"] = c.neighbourhood;
    j["maps"] = c.maps;
    return j;
}

inline RicciCertificate certificate_from_json(const json& j) {
    io_detail::ensure_keys(j, {"vertex", "degree", "neighbourhood", "maps"}, "certificate");
    io_detail::require_key(j, "vertex", "certificate");
    io_detail::require_key(j, "degree", "certificate");
    io_detail::require_key(j, "neighbourhood", "certificate");
    io_detail::require_key(j, "maps", "certificate");
    RicciCertificate c;
    c.vertex = j.at("vertex").get<std::string>();
    c.degree = j.at("degree").get<int>();
    c.neighbourhood = j.at("neighbourhood").get<std::vector<std::string>>();
    c.maps = j.at("maps").get<std::vector<std::vector<std::string>>>();
    return c;
}

inline json to_json(const CertifyResult& r) {
    json j;
    switch (r.status) {
        case CertifyStatus::certified: j["status"] = "certified"; break;
        case CertifyStatus::not_ricci_flat: j["status"] = "not_ricci_flat"; break;
        case CertifyStatus::inconclusive: j["status"] = "inconclusive"; break;
    }
    j["nodes_explored"] = r.nodes_explored;
    j["certificate"] = r.certificate ? to_json(*r.certificate) : json(nullptr);
    return j;
}

inline json to_json(const ProbePoint& p) {
    json j;
    j["t"] = p.t;
    j["x"] = p.x;
    j["y"] = p.y;
    return j;
}

inline json to_json(const InequalityReport& r) {
    json j;
    j["kind"] = to_string(r.kind);
    j["samples"] = r.samples;
    j["min_slack"] = real_to_json(r.min_slack);
    j["worst_point"] = to_json(r.worst_point);
    j["worst_point_second"] = r.worst_point_second ? to_json(*r.worst_point_second) : json(nullptr);
    json params = json::object();
    for (const auto& [k, v] : r.parameters) params[k] = real_to_json(v);
    j["parameters"] = params;
    j["passed"] = r.passed;
    j["tolerance"] = r.tolerance;
    j["seed"] = r.seed;
    j["caveat"] = r.caveat;
    if (!r.note.empty()) j["note"] = r.note;
    return j;
}

// one row per check: kind, params, samples, min_slack, passed
inline std::string inequality_csv_row(const InequalityReport& r) {
    std::ostringstream os;
    os << to_string(r.kind) << ',';
    bool first = true;
    for (const auto& [k, v] : r.parameters) {
        if (!first) os << ' ';
        os << k << '=' << v;
        first = false;
    }
    os << ',' << r.samples << ',' << r.min_slack << ',' << (r.passed ? "true" : "false");
    return os.str();
}

inline json to_json(const std::vector<ConvergenceRow>& rows) {
    json arr = json::array();
    for (const auto& row : rows) {
        json j;
        j["h"] = row.h;
        j["dt"] = row.dt;
        j["linf_error"] = row.linf_error;
        j["order"] = real_to_json(row.order);
        j["roundoff_flagged"] = row.roundoff_flagged;
        arr.push_back(j);
    }
    return arr;
}

// ---------------------------------------------------------------------------
// solution configs
// ---------------------------------------------------------------------------
// {"type": "mixture", "n": 1,
//  "terms": [{"alpha": 1.0, "center": [0.0], "tau": 0.5,
//             "profile": {"y1": 1.0, "y2": 2.0}}]}
// or {"type": "random_mixture", "n": 1, "seed": 7, "max_terms": 3}

inline GaussianMixtureSolution solution_from_json(const json& j, const WeightedGraph& g) {
    io_detail::ensure_keys(j, {"type", "n", "terms", "seed", "max_terms"}, "solution");
    io_detail::require_key(j, "type", "solution");
    io_detail::require_key(j, "n", "solution");
    const std::string type = j.at("type").get<std::string>();
    const int n = j.at("n").get<int>();
    if (type == "random_mixture") {
        const std::uint64_t seed = j.value("seed", 1);
        const int max_terms = j.value("max_terms", 3);
        return random_mixture(g, n, seed, max_terms);
    }
    if (type != "mixture")
        throw std::runtime_error("solution: unknown type '" + type + "'");
    io_detail::require_key(j, "terms", "solution");
    std::vector<MixtureTerm> terms;
    for (const auto& tj : j.at("terms")) {
        io_detail::ensure_keys(tj, {"alpha", "center", "tau", "profile"}, "solution term");
        io_detail::require_key(tj, "center", "solution term");
        io_detail::require_key(tj, "profile", "solution term");
        MixtureTerm term;
        term.alpha = tj.value("alpha", 1.0);
        term.center = tj.at("center").get<std::vector<double>>();
        term.tau = tj.value("tau", 0.5);
        term.profile = vertex_function_from_json(g, tj.at("profile"), "solution term profile");
        terms.push_back(std::move(term));
    }
    return GaussianMixtureSolution(n, g, std::move(terms));
}

inline json solution_to_json(const GaussianMixtureSolution& sol) {
    json j;
    j["type"] = "mixture";
    j["n"] = sol.dimension();
    json terms = json::array();
    for (const auto& term : sol.terms()) {
        json tj;
        tj["alpha"] = term.alpha;
        tj["center"] = term.center;
        tj["tau"] = term.tau;
        tj["profile"] = vertex_function_to_json(sol.graph(), term.profile);
        terms.push_back(tj);
    }
    j["terms"] = terms;
    return j;
}

// ---------------------------------------------------------------------------
// simulator configs
// ---------------------------------------------------------------------------
// {"n": 1, "h": 0.1, "box": [-5, 5], "dt": 0.002, "t_start": 0.25,
//  "t_end": 1.0, "scheme": "strang", "snapshot_stride": 0,
//  "graph": "graph.json" (optional here; the CLI resolves it),
//  "initial": {...solution config...}}

struct SimulationSetup {
    SimulateConfig config;
    std::string graph_path;  // empty if not given
    json initial;            // solution config, may be null
};

inline SimulationSetup simulation_setup_from_json(const json& j) {
    io_detail::ensure_keys(j,
                           {"n", "h", "box", "dt", "t_start", "t_end", "scheme", "snapshot_stride",
                            "graph", "initial"},
                           "simulate config");
    SimulationSetup s;
    s.config.n = j.value("n", 1);
    s.config.h = j.value("h", 0.1);
    if (j.contains("box")) {
        const auto box = j.at("box").get<std::vector<double>>();
        if (box.size() != 2) throw std::runtime_error("simulate config: box must be [lo, hi]");
        s.config.box = {box[0], box[1]};
    }
    s.config.dt = j.value("dt", 0.002);
    s.config.t_start = j.value("t_start", 0.25);
    s.config.t_end = j.value("t_end", 1.0);
    s.config.scheme = j.value("scheme", std::string("strang"));
    s.config.snapshot_stride = j.value("snapshot_stride", 0);
    s.graph_path = j.value("graph", std::string());
    if (j.contains("initial")) s.initial = j.at("initial");
    return s;
}

inline json to_json(const SimulateConfig& c) {
    json j;
    j["n"] = c.n;
    j["h"] = c.h;
    j["box"] = {c.box[0], c.box[1]};
    j["dt"] = c.dt;
    j["t_start"] = c.t_start;
    j["t_end"] = c.t_end;
    j["scheme"] = c.scheme;
    j["snapshot_stride"] = c.snapshot_stride;
    return j;
}

// trajectory CSV: t, cell, vertex, value
inline void write_trajectory_csv(std::ostream& os, const WeightedGraph& g,
                                 const std::vector<GridState>& trajectory) {
    os << "t,cell,vertex,value\n";
    for (const auto& state : trajectory) {
        const long cells = state.cell_count();
        for (long cell = 0; cell < cells; ++cell)
            for (int v = 0; v < state.vertices; ++v)
                os << state.time << ',' << cell << ',' << g.id_of(v) << ',' << state.at(cell, v)
                   << '\n';
    }
}

inline json grid_state_to_json(const WeightedGraph& g, const GridState& s) {
    json j;
    j["t"] = s.time;
    j["n"] = s.n;
    j["h"] = s.h;
    j["lo"] = s.lo;
    j["cells"] = s.cells;
    j["vertices"] = g.vertex_ids();
    j["values"] = s.values;  // cell-major, vertex fastest
    return j;
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << content;
}

} // namespace hybridcd
