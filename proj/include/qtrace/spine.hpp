#pragma once

// Trivalent spine graphs of handlebodies (pants decompositions of the boundary
// surface), their admissible colorings, Verlinde dimensions, basis norms and
// the spanning-tree complement used to pack coloring cells.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qtrace/error.hpp"
#include "qtrace/qnum.hpp"

namespace qtrace {

struct SpineEdge {
    std::string id;
    /// Vertex indices (dense, 0-based). Both are -1 for the free loop.
    int tail = -1;
    int head = -1;

    bool is_self_loop() const { return tail >= 0 && tail == head; }
};

/// A connected trivalent graph, or the single free loop standing for the
/// genus-1 handlebody. Edges keep their document order; that order drives
/// enumeration order, contraction tie-breaks and the spanning-tree choice.
class SpineGraph {
  public:
    static SpineGraph free_loop(std::string id = "e1") {
        SpineGraph g;
        g.free_loop_ = true;
        g.edges_.push_back(SpineEdge{std::move(id), -1, -1});
        g.finish();
        return g;
    }

    /// Builds a graph from (id, vertex label, vertex label) triples. Labels
    /// are arbitrary integers and are renumbered in ascending order.
    static SpineGraph from_edges(const std::vector<std::tuple<std::string, int, int>>& edges) {
        SpineGraph g;
        std::set<int> labels;
        for (const auto& [id, a, b] : edges) {
            labels.insert(a);
            labels.insert(b);
        }
        std::map<int, int> dense;
        for (int label : labels)
            dense.emplace(label, static_cast<int>(dense.size()));
        g.vertex_labels_.assign(labels.begin(), labels.end());
        for (const auto& [id, a, b] : edges)
            g.edges_.push_back(SpineEdge{id, dense.at(a), dense.at(b)});
        g.finish();
        return g;
    }

    bool is_free_loop() const { return free_loop_; }
    int num_edges() const { return static_cast<int>(edges_.size()); }
    int num_vertices() const { return static_cast<int>(incidence_.size()); }
    /// d: the number of edges, 3g-3 for g >= 2 and 1 for the free loop.
    int dim() const { return num_edges(); }
    int genus() const { return free_loop_ ? 1 : num_edges() - num_vertices() + 1; }
    bool has_self_loops() const {
        return std::any_of(edges_.begin(), edges_.end(), [](const SpineEdge& e) { return e.is_self_loop(); });
    }

    const std::vector<SpineEdge>& edges() const { return edges_; }
    const SpineEdge& edge(int i) const { return edges_.at(static_cast<std::size_t>(i)); }

    /// The three edge slots at vertex v; a self-loop occupies two slots.
    const std::array<int, 3>& incident(int v) const { return incidence_.at(static_cast<std::size_t>(v)); }
    int vertex_label(int v) const { return vertex_labels_.at(static_cast<std::size_t>(v)); }

    std::optional<int> find_edge(const std::string& id) const {
        auto it = index_.find(id);
        if (it == index_.end())
            return std::nullopt;
        return it->second;
    }

    int edge_index(const std::string& id) const {
        auto idx = find_edge(id);
        if (!idx)
            throw input_error("unknown edge id '" + id + "'");
        return *idx;
    }

  private:
    SpineGraph() = default;

    void finish() {
        if (edges_.empty())
            throw input_error("graph has no edges");
        for (int i = 0; i < num_edges(); ++i) {
            if (!index_.emplace(edges_[static_cast<std::size_t>(i)].id, i).second)
                throw input_error("duplicate edge id '" + edges_[static_cast<std::size_t>(i)].id + "'");
        }
        if (free_loop_) {
            if (edges_.size() != 1)
                throw input_error("a free-loop graph consists of exactly one edge");
            return;
        }
        const int nv = static_cast<int>(vertex_labels_.size());
        std::vector<std::vector<int>> slots(static_cast<std::size_t>(nv));
        for (int i = 0; i < num_edges(); ++i) {
            const SpineEdge& e = edges_[static_cast<std::size_t>(i)];
            if (e.tail < 0 || e.head < 0)
                throw input_error("edge '" + e.id + "' has no endpoints in a vertexed graph");
            slots[static_cast<std::size_t>(e.tail)].push_back(i);
            slots[static_cast<std::size_t>(e.head)].push_back(i);
        }
        for (int v = 0; v < nv; ++v) {
            const auto& s = slots[static_cast<std::size_t>(v)];
            if (s.size() != 3)
                throw input_error("vertex " + std::to_string(vertex_labels_[static_cast<std::size_t>(v)]) +
                                  " has valence " + std::to_string(s.size()) + ", expected 3");
            incidence_.push_back({s[0], s[1], s[2]});
        }
        // connectivity by union-find
        std::vector<int> parent(static_cast<std::size_t>(nv));
        std::iota(parent.begin(), parent.end(), 0);
        auto root = [&](int x) {
            while (parent[static_cast<std::size_t>(x)] != x)
                x = parent[static_cast<std::size_t>(x)];
            return x;
        };
        int components = nv;
        for (const SpineEdge& e : edges_) {
            int a = root(e.tail), b = root(e.head);
            if (a != b) {
                parent[static_cast<std::size_t>(a)] = b;
                --components;
            }
        }
        if (components != 1)
            throw input_error("graph is disconnected (" + std::to_string(components) + " components)");
    }

    bool free_loop_ = false;
    std::vector<SpineEdge> edges_;
    std::vector<int> vertex_labels_;
    std::vector<std::array<int, 3>> incidence_;
    std::map<std::string, int> index_;
};

// ---------------------------------------------------------------------------
// Standard spines

namespace graphs {

inline SpineGraph theta() { return SpineGraph::from_edges({{"e1", 0, 1}, {"e2", 0, 1}, {"e3", 0, 1}}); }

/// Two self-loops joined by a bridge; edge order (loop a, bridge b, loop c).
inline SpineGraph dumbbell() { return SpineGraph::from_edges({{"a", 0, 0}, {"b", 0, 1}, {"c", 1, 1}}); }

/// Complete graph on four vertices, genus 3.
inline SpineGraph tetrahedron() {
    return SpineGraph::from_edges(
        {{"e1", 0, 1}, {"e2", 0, 2}, {"e3", 0, 3}, {"e4", 1, 2}, {"e5", 1, 3}, {"e6", 2, 3}});
}

/// Genus-3 chain: self-loop, bridge, doubled edge, bridge, self-loop.
inline SpineGraph chain3() {
    return SpineGraph::from_edges(
        {{"l1", 0, 0}, {"b1", 0, 1}, {"m1", 1, 2}, {"m2", 1, 2}, {"b2", 2, 3}, {"l2", 3, 3}});
}

/// Triangular prism, genus 4 (d = 9).
inline SpineGraph prism() {
    return SpineGraph::from_edges({{"t1", 0, 1},
                                   {"t2", 1, 2},
                                   {"t3", 2, 0},
                                   {"s1", 0, 3},
                                   {"s2", 1, 4},
                                   {"s3", 2, 5},
                                   {"u1", 3, 4},
                                   {"u2", 4, 5},
                                   {"u3", 5, 3}});
}

} // namespace graphs

// ---------------------------------------------------------------------------
// File formats

inline SpineGraph graph_from_json(const nlohmann::json& doc) {
    if (!doc.is_object() || !doc.contains("edges") || !doc["edges"].is_array())
        throw input_error("graph document needs an \"edges\" array");
    const bool free_loop = doc.value("free_loop", false);
    const auto& edges = doc["edges"];
    if (free_loop) {
        if (edges.size() != 1)
            throw input_error("a free-loop graph consists of exactly one edge");
        const auto& e = edges.front();
        if (!e.contains("id") || !e["id"].is_string())
            throw input_error("edge without string id");
        if (e.contains("ends"))
            throw input_error("free-loop edge cannot have ends");
        return SpineGraph::free_loop(e["id"].get<std::string>());
    }
    std::vector<std::tuple<std::string, int, int>> list;
    for (const auto& e : edges) {
        if (!e.is_object() || !e.contains("id") || !e["id"].is_string())
            throw input_error("edge without string id");
        if (!e.contains("ends")) {
            throw input_error("edge '" + e["id"].get<std::string>() +
                              "' has no ends; free loops need \"free_loop\": true and a single edge");
        }
        const auto& ends = e["ends"];
        if (!ends.is_array() || ends.size() != 2 || !ends[0].is_number_integer() || !ends[1].is_number_integer())
            throw input_error("edge '" + e["id"].get<std::string>() + "': ends must be two integers");
        list.emplace_back(e["id"].get<std::string>(), ends[0].get<int>(), ends[1].get<int>());
    }
    return SpineGraph::from_edges(list);
}

inline nlohmann::json graph_to_json(const SpineGraph& g) {
    nlohmann::json edges = nlohmann::json::array();
    for (const SpineEdge& e : g.edges()) {
        if (g.is_free_loop())
            edges.push_back({{"id", e.id}});
        else
            edges.push_back({{"id", e.id}, {"ends", {g.vertex_label(e.tail), g.vertex_label(e.head)}}});
    }
    return {{"edges", edges}, {"free_loop", g.is_free_loop()}};
}

inline nlohmann::json parse_json_text(const std::string& text) {
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw input_error(std::string("malformed JSON: ") + e.what());
    }
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw input_error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline SpineGraph load_graph(const std::string& document) { return graph_from_json(parse_json_text(document)); }
inline SpineGraph load_graph_file(const std::string& path) { return load_graph(read_text_file(path)); }

// ---------------------------------------------------------------------------
// Adapted multicurves

/// m_e parallel copies of the meridian curve of each edge, indexed like the
/// graph's edges.
struct AdaptedMulticurve {
    std::vector<int> multiplicities;

    static AdaptedMulticurve empty(const SpineGraph& g) {
        return {std::vector<int>(static_cast<std::size_t>(g.num_edges()), 0)};
    }

    int total() const { return std::accumulate(multiplicities.begin(), multiplicities.end(), 0); }
    bool is_empty() const { return total() == 0; }

    friend AdaptedMulticurve operator+(const AdaptedMulticurve& x, const AdaptedMulticurve& y) {
        if (x.multiplicities.size() != y.multiplicities.size())
            throw input_error("multicurves live on different graphs");
        AdaptedMulticurve out = x;
        for (std::size_t i = 0; i < out.multiplicities.size(); ++i)
            out.multiplicities[i] += y.multiplicities[i];
        return out;
    }

    friend bool operator==(const AdaptedMulticurve&, const AdaptedMulticurve&) = default;
};

inline void check_multicurve(const SpineGraph& g, const AdaptedMulticurve& m) {
    if (static_cast<int>(m.multiplicities.size()) != g.num_edges())
        throw input_error("multicurve has " + std::to_string(m.multiplicities.size()) + " entries, graph has " +
                          std::to_string(g.num_edges()) + " edges");
    for (int v : m.multiplicities)
        if (v < 0)
            throw input_error("negative multiplicity");
}

/// Multicurve by edge id; ids not listed default to 0.
inline AdaptedMulticurve make_multicurve(const SpineGraph& g, const std::map<std::string, int>& by_id) {
    AdaptedMulticurve m = AdaptedMulticurve::empty(g);
    for (const auto& [id, count] : by_id) {
        if (count < 0)
            throw input_error("negative multiplicity for edge '" + id + "'");
        m.multiplicities[static_cast<std::size_t>(g.edge_index(id))] = count;
    }
    return m;
}

inline AdaptedMulticurve multicurve_from_json(const SpineGraph& g, const nlohmann::json& doc) {
    if (!doc.is_object() || !doc.contains("multiplicities") || !doc["multiplicities"].is_object())
        throw input_error("multicurve document needs a \"multiplicities\" object");
    std::map<std::string, int> by_id;
    for (const auto& [id, value] : doc["multiplicities"].items()) {
        if (!value.is_number_integer())
            throw input_error("multiplicity for '" + id + "' is not an integer");
        by_id[id] = value.get<int>();
    }
    return make_multicurve(g, by_id);
}

inline AdaptedMulticurve load_multicurve(const SpineGraph& g, const std::string& document) {
    return multicurve_from_json(g, parse_json_text(document));
}

inline AdaptedMulticurve load_multicurve_file(const SpineGraph& g, const std::string& path) {
    return load_multicurve(g, read_text_file(path));
}

inline std::string multicurve_label(const SpineGraph& g, const AdaptedMulticurve& m) {
    std::string out;
    for (int i = 0; i < g.num_edges(); ++i) {
        const int k = m.multiplicities[static_cast<std::size_t>(i)];
        if (k == 0)
            continue;
        if (!out.empty())
            out += "+";
        out += (k == 1 ? "" : std::to_string(k)) + g.edge(i).id;
    }
    return out.empty() ? "empty" : out;
}

// ---------------------------------------------------------------------------
// Colorings

using Coloring = std::vector<int>;

inline bool is_admissible_coloring(const SpineGraph& g, const Level& level, std::span<const int> colors) {
    if (static_cast<int>(colors.size()) != g.num_edges())
        return false;
    for (int c : colors)
        if (!level.is_color(c))
            return false;
    for (int v = 0; v < g.num_vertices(); ++v) {
        const auto& s = g.incident(v);
        if (!is_admissible(level, colors[static_cast<std::size_t>(s[0])], colors[static_cast<std::size_t>(s[1])],
                           colors[static_cast<std::size_t>(s[2])]))
            return false;
    }
    return true;
}

/**
 * Visits every admissible coloring exactly once, in lexicographic order of
 * the color vector (first edge most significant, colors ascending).
 *
 * Colors are assigned edge by edge; a vertex is checked as soon as the last
 * of its incident edges is colored, which prunes most of the (r-1)^d box.
 * If `first_color` is set, only colorings with that color on edge 0 are
 * visited, which splits the stream into r-1 independent chunks.
 */
template <class Visitor>
void for_each_coloring(const SpineGraph& g, const Level& level, Visitor&& visit,
                       std::optional<int> first_color = std::nullopt) {
    const int d = g.num_edges();
    const int top = level.max_color();
    // vertices to check once edge i is colored
    std::vector<std::vector<int>> closing(static_cast<std::size_t>(d));
    for (int v = 0; v < g.num_vertices(); ++v) {
        const auto& s = g.incident(v);
        closing[static_cast<std::size_t>(*std::max_element(s.begin(), s.end()))].push_back(v);
    }
    Coloring colors(static_cast<std::size_t>(d), 0);
    const int lo0 = first_color.value_or(0);
    const int hi0 = first_color.value_or(top);
    if (lo0 < 0 || hi0 > top)
        return;

    std::function<void(int)> assign = [&](int i) {
        if (i == d) {
            visit(std::span<const int>(colors));
            return;
        }
        const int lo = (i == 0) ? lo0 : 0;
        const int hi = (i == 0) ? hi0 : top;
        for (int c = lo; c <= hi; ++c) {
            colors[static_cast<std::size_t>(i)] = c;
            bool ok = true;
            for (int v : closing[static_cast<std::size_t>(i)]) {
                const auto& s = g.incident(v);
                if (!is_admissible(level, colors[static_cast<std::size_t>(s[0])], colors[static_cast<std::size_t>(s[1])],
                                   colors[static_cast<std::size_t>(s[2])])) {
                    ok = false;
                    break;
                }
            }
            if (ok)
                assign(i + 1);
        }
    };
    assign(0);
}

inline std::vector<Coloring> enumerate_colorings(const SpineGraph& g, const Level& level) {
    std::vector<Coloring> out;
    for_each_coloring(g, level, [&](std::span<const int> c) { out.emplace_back(c.begin(), c.end()); });
    return out;
}

/// dim V_p(Sigma): the number of admissible colorings.
inline std::uint64_t verlinde_dim(const SpineGraph& g, const Level& level) {
    std::uint64_t n = 0;
    for_each_coloring(g, level, [&](std::span<const int>) { ++n; });
    return n;
}

// ---------------------------------------------------------------------------
// Basis norms

enum class SelfLoopPolicy { reject, allow };

/**
 * <u_sigma, u_sigma> = eta^(#v - #e) * prod_v <sigma_v> / prod_e <sigma_e>,
 * with <sigma_v> the theta symbol of the colors at v and <sigma_e> the loop
 * symbol. The free loop has norm 1.
 *
 * The product formula is only established for graphs without closed loops;
 * graphs with self-loop edges are rejected unless the caller opts in.
 */
template <class Real = double>
Real basis_norm(const SpineGraph& g, std::span<const int> coloring, const Level& level,
                SelfLoopPolicy policy = SelfLoopPolicy::reject) {
    if (g.is_free_loop()) {
        if (coloring.size() != 1 || !level.is_color(coloring[0]))
            throw input_error("basis_norm: invalid coloring of the free loop");
        return Real(1);
    }
    if (!is_admissible_coloring(g, level, coloring))
        throw input_error("basis_norm: coloring is not admissible");
    if (g.has_self_loops() && policy == SelfLoopPolicy::reject)
        throw input_error("basis_norm: graph contains self-loops; the norm formula is unverified there");
    using std::pow;
    Real out = pow(eta<Real>(level), g.num_vertices() - g.num_edges());
    for (int v = 0; v < g.num_vertices(); ++v) {
        const auto& s = g.incident(v);
        out *= theta_symbol<Real>(level, coloring[static_cast<std::size_t>(s[0])],
                                  coloring[static_cast<std::size_t>(s[1])], coloring[static_cast<std::size_t>(s[2])]);
    }
    for (int c : coloring)
        out /= loop_symbol<Real>(level, c);
    return out;
}

// ---------------------------------------------------------------------------
// Parity complement

/// Edges of a spanning tree, chosen greedily in edge order (self-loops never
/// qualify). Their indicator vectors span a complement S of the cycle space
/// Z_1(G; Z/2) in C_1(G; Z/2), and the boundary map is injective on S.
struct ParityComplement {
    std::vector<int> edges;

    int dim() const { return static_cast<int>(edges.size()); }
    bool contains(int e) const { return std::find(edges.begin(), edges.end(), e) != edges.end(); }
};

inline ParityComplement parity_complement(const SpineGraph& g) {
    ParityComplement out;
    if (g.is_free_loop())
        return out;
    std::vector<int> parent(static_cast<std::size_t>(g.num_vertices()));
    std::iota(parent.begin(), parent.end(), 0);
    auto root = [&](int x) {
        while (parent[static_cast<std::size_t>(x)] != x)
            x = parent[static_cast<std::size_t>(x)];
        return x;
    };
    for (int i = 0; i < g.num_edges(); ++i) {
        const SpineEdge& e = g.edge(i);
        const int a = root(e.tail), b = root(e.head);
        if (a == b)
            continue;
        parent[static_cast<std::size_t>(a)] = b;
        out.edges.push_back(i);
    }
    return out;
}

} // namespace qtrace
