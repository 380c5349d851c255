#pragma once

#include <optional>
#include <string>
#include <vector>

#include "exact/modpoly.hpp"

namespace exact {

struct ParseError : std::runtime_error {
    explicit ParseError(const std::string &w) : std::runtime_error(w) {}
};
struct StructureError : std::runtime_error {
    explicit StructureError(const std::string &w) : std::runtime_error(w) {}
};

// Vertices are 1..n everywhere.
struct Graph {
    int n = 0;
    std::vector<u64> adj; // adj[v] bit (u-1); index 0 unused

    explicit Graph(int n_ = 0) : n(n_), adj(n_ + 1, 0) {
        if (n_ < 0 || n_ > 62)
            throw StructureError("Graph: vertex count out of range");
    }
    void add_edge(int u, int v);
    bool has_edge(int u, int v) const {
        return u >= 1 && u <= n && v >= 1 && v <= n && (adj[u] >> (v - 1) & 1);
    }
    int degree(int v) const { return __builtin_popcountll(adj[v]); }
    int max_degree() const;
    long long edge_count() const;
    double avg_degree() const {
        return n ? 2.0 * edge_count() / n : 0.0;
    }
    std::vector<std::pair<int, int>> edges() const;
    u64 full_mask() const { return n ? (1ULL << n) - 1 : 0; }
};

struct WeightedDigraph {
    int n = 0;
    std::vector<std::vector<u64>> w; // w[u][v], 0 = no arc, else weight in [1,M]
    u64 M = 1;

    explicit WeightedDigraph(int n_ = 0)
        : n(n_), w(n_ + 1, std::vector<u64>(n_ + 1, 0)) {}
    void add_arc(int u, int v, u64 weight);
    bool has_arc(int u, int v) const { return w[u][v] != 0; }
    Graph support() const; // undirected structure (arc either way)
};

struct LabeledMultigraph {
    int n = 0;
    struct Edge {
        int u = 0, v = 0; // u <= v
        int la = 0, lb = 0; // 2-element label, la < lb, values in [1, 2n0]
        bool loop = false;
        int id = 0;
    };
    std::vector<Edge> edges;
    int label_universe = 0; // labels live in [1, label_universe]
};

// ----------------------------------------------------------------- DIMACS

struct DimacsGraph {
    Graph graph{0};
    WeightedDigraph weighted{0}; // symmetric arcs, unweighted edges = 1
};

DimacsGraph parse_dimacs(const std::string &text);
std::string write_dimacs(const Graph &g);

// ------------------------------------------------------------ structure

/// Join vertices at distance <= 2.
Graph square(const Graph &g);

struct GreedySet {
    std::vector<int> verts;
    bool shortfall = false; // target was not reachable
};

/// Greedy (ascending index) independent set in G^2, stopping at `target`
/// vertices when positive.
GreedySet greedy_independent_in_square(const Graph &g, int target);

/// Maximum matching of the complement of g (on 2n vertices), as vertex
/// pairs.  Throws StructureError when the matching stays below n - 3d for
/// the recorded average degree d.
std::vector<std::pair<int, int>> complement_matching(const Graph &g);

// ------------------------------------------------------- decomposition

struct DecomposeConfig {
    // defaults: T = 4d, alpha = 1/(2(16d^2+1)), c = 1/(2d+1)
    std::optional<int> threshold;
    std::optional<double> alpha;
    std::optional<double> c;
};

struct Decomposition {
    std::vector<int> A;
    std::vector<int> Y;
    int d = 0;
};

/// Y = high-degree vertices, A = greedy independent set in (G \ Y)^2 among
/// vertices of G\Y-degree <= 2d.  Returns nothing (the caller falls back)
/// unless |A| >= 2|Y|, |A| >= alpha*n and at least one family of size
/// 2d+1 fits in [n].
std::optional<Decomposition> decompose_avg_degree(const Graph &g, int d,
                                                  const DecomposeConfig &cfg = {});

} // namespace exact
