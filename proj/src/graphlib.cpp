#include "exact/graphlib.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace exact {

void Graph::add_edge(int u, int v) {
    if (u < 1 || u > n || v < 1 || v > n)
        throw StructureError("add_edge: vertex outside [n]");
    if (u == v)
        throw StructureError("add_edge: loops not allowed in a simple graph");
    adj[u] |= 1ULL << (v - 1);
    adj[v] |= 1ULL << (u - 1);
}

int Graph::max_degree() const {
    int d = 0;
    for (int v = 1; v <= n; ++v)
        d = std::max(d, degree(v));
    return d;
}

long long Graph::edge_count() const {
    long long s = 0;
    for (int v = 1; v <= n; ++v)
        s += degree(v);
    return s / 2;
}

std::vector<std::pair<int, int>> Graph::edges() const {
    std::vector<std::pair<int, int>> out;
    for (int u = 1; u <= n; ++u)
        for (int v = u + 1; v <= n; ++v)
            if (has_edge(u, v))
                out.emplace_back(u, v);
    return out;
}

void WeightedDigraph::add_arc(int u, int v, u64 weight) {
    if (u < 1 || u > n || v < 1 || v > n || u == v)
        throw StructureError("add_arc: bad endpoints");
    if (weight < 1)
        throw StructureError("add_arc: weights start at 1");
    w[u][v] = weight;
    M = std::max(M, weight);
}

Graph WeightedDigraph::support() const {
    Graph g(n);
    for (int u = 1; u <= n; ++u)
        for (int v = u + 1; v <= n; ++v)
            if (w[u][v] || w[v][u])
                g.add_edge(u, v);
    return g;
}

// ----------------------------------------------------------------- DIMACS

DimacsGraph parse_dimacs(const std::string &text) {
    std::istringstream in(text);
    std::string line;
    int ln = 0;
    int n = -1;
    long long declared_edges = -1;
    DimacsGraph out;
    while (std::getline(in, line)) {
        ++ln;
        if (line.empty() || line[0] == 'c' || line[0] == '\r')
            continue;
        std::istringstream ls(line);
        std::string kind;
        ls >> kind;
        if (kind == "p") {
            std::string fmt;
            long long nn = -1, mm = -1;
            ls >> fmt >> nn >> mm;
            if (!ls || (fmt != "edge" && fmt != "edges" && fmt != "col") ||
                nn < 0 || mm < 0 || nn > 62)
                throw ParseError("dimacs: bad problem line at line " +
                                 std::to_string(ln));
            if (n >= 0)
                throw ParseError("dimacs: duplicate problem line at line " +
                                 std::to_string(ln));
            n = static_cast<int>(nn);
            declared_edges = mm;
            out.graph = Graph(n);
            out.weighted = WeightedDigraph(n);
        } else if (kind == "e") {
            if (n < 0)
                throw ParseError("dimacs: edge before problem line at line " +
                                 std::to_string(ln));
            long long u = 0, v = 0;
            ls >> u >> v;
            if (!ls)
                throw ParseError("dimacs: bad edge line at line " +
                                 std::to_string(ln));
            long long weight = 1;
            if (ls >> weight) {
                if (weight < 1)
                    throw ParseError("dimacs: weight must be positive at line " +
                                     std::to_string(ln));
            } else {
                weight = 1;
            }
            if (u < 1 || u > n || v < 1 || v > n || u == v)
                throw ParseError("dimacs: edge endpoints out of range at line " +
                                 std::to_string(ln));
            if (!out.graph.has_edge(static_cast<int>(u), static_cast<int>(v)))
                out.graph.add_edge(static_cast<int>(u), static_cast<int>(v));
            out.weighted.add_arc(static_cast<int>(u), static_cast<int>(v),
                                 static_cast<u64>(weight));
            out.weighted.add_arc(static_cast<int>(v), static_cast<int>(u),
                                 static_cast<u64>(weight));
        } else {
            throw ParseError("dimacs: unknown line type at line " +
                             std::to_string(ln));
        }
    }
    if (n < 0)
        throw ParseError("dimacs: missing problem line");
    (void)declared_edges; // header count is informational
    return out;
}

std::string write_dimacs(const Graph &g) {
    std::ostringstream out;
    auto es = g.edges();
    out << "p edge " << g.n << " " << es.size() << "\n";
    for (auto [u, v] : es)
        out << "e " << u << " " << v << "\n";
    return out.str();
}

// ------------------------------------------------------------ structure

Graph square(const Graph &g) {
    Graph s(g.n);
    for (int u = 1; u <= g.n; ++u) {
        u64 reach = g.adj[u];
        for (int v = 1; v <= g.n; ++v)
            if (g.adj[u] >> (v - 1) & 1)
                reach |= g.adj[v];
        reach &= ~(1ULL << (u - 1));
        for (int v = 1; v <= g.n; ++v)
            if ((reach >> (v - 1) & 1) && u < v)
                s.add_edge(u, v);
    }
    return s;
}

GreedySet greedy_independent_in_square(const Graph &g, int target) {
    if (g.n < 1)
        throw StructureError("greedy_independent_in_square: empty graph");
    Graph sq = square(g);
    GreedySet out;
    u64 blocked = 0;
    for (int v = 1; v <= g.n; ++v) {
        if (blocked >> (v - 1) & 1)
            continue;
        out.verts.push_back(v);
        blocked |= 1ULL << (v - 1);
        blocked |= sq.adj[v];
        if (target > 0 && static_cast<int>(out.verts.size()) >= target)
            return out;
    }
    out.shortfall = target > 0 && static_cast<int>(out.verts.size()) < target;
    return out;
}

// ----------------------------------------------------- maximum matching

namespace {

// Blossom algorithm on an adjacency-matrix graph, O(V^3).
class Matcher {
  public:
    explicit Matcher(int n) : n_(n), adj_(n + 1, std::vector<char>(n + 1, 0)) {}
    void add_edge(int u, int v) { adj_[u][v] = adj_[v][u] = 1; }

    std::vector<int> solve() {
        match_.assign(n_ + 1, 0);
        for (int v = 1; v <= n_; ++v)
            if (!match_[v])
                augment(v);
        return match_;
    }

  private:
    int n_;
    std::vector<std::vector<char>> adj_;
    std::vector<int> match_, parent_, base_;
    std::vector<char> used_, blossom_;

    int lca(int a, int b) {
        std::vector<char> mark(n_ + 1, 0);
        for (;;) {
            a = base_[a];
            mark[a] = 1;
            if (!match_[a])
                break;
            a = parent_[match_[a]];
        }
        for (;;) {
            b = base_[b];
            if (mark[b])
                return b;
            b = parent_[match_[b]];
        }
    }

    void mark_path(int v, int b, int child) {
        while (base_[v] != b) {
            blossom_[base_[v]] = 1;
            blossom_[base_[match_[v]]] = 1;
            parent_[v] = child;
            child = match_[v];
            v = parent_[match_[v]];
        }
    }

    int find_path(int root) {
        used_.assign(n_ + 1, 0);
        parent_.assign(n_ + 1, 0);
        base_.resize(n_ + 1);
        for (int i = 0; i <= n_; ++i)
            base_[i] = i;
        used_[root] = 1;
        std::vector<int> queue = {root};
        for (size_t qi = 0; qi < queue.size(); ++qi) {
            int v = queue[qi];
            for (int to = 1; to <= n_; ++to) {
                if (!adj_[v][to] || base_[v] == base_[to] || match_[v] == to)
                    continue;
                if (to == root || (match_[to] && parent_[match_[to]])) {
                    int cur = lca(v, to);
                    blossom_.assign(n_ + 1, 0);
                    mark_path(v, cur, to);
                    mark_path(to, cur, v);
                    for (int i = 1; i <= n_; ++i)
                        if (blossom_[base_[i]]) {
                            base_[i] = cur;
                            if (!used_[i]) {
                                used_[i] = 1;
                                queue.push_back(i);
                            }
                        }
                } else if (!parent_[to]) {
                    parent_[to] = v;
                    if (!match_[to])
                        return to;
                    used_[match_[to]] = 1;
                    queue.push_back(match_[to]);
                }
            }
        }
        return 0;
    }

    void augment(int root) {
        int v = find_path(root);
        while (v) {
            int pv = parent_[v], ppv = match_[pv];
            match_[v] = pv;
            match_[pv] = v;
            v = ppv;
        }
    }
};

} // namespace

std::vector<std::pair<int, int>> complement_matching(const Graph &g) {
    if (g.n % 2 != 0)
        throw StructureError("complement_matching: vertex count must be even");
    Matcher m(g.n);
    for (int u = 1; u <= g.n; ++u)
        for (int v = u + 1; v <= g.n; ++v)
            if (!g.has_edge(u, v))
                m.add_edge(u, v);
    auto match = m.solve();
    std::vector<std::pair<int, int>> pairs;
    for (int v = 1; v <= g.n; ++v)
        if (match[v] > v)
            pairs.emplace_back(v, match[v]);
    int half = g.n / 2;
    double d = g.avg_degree();
    if (static_cast<double>(pairs.size()) < half - 3.0 * d)
        throw StructureError("complement_matching: matching below n - 3d; "
                             "input denser than declared");
    return pairs;
}

// ------------------------------------------------------- decomposition

std::optional<Decomposition> decompose_avg_degree(const Graph &g, int d,
                                                  const DecomposeConfig &cfg) {
    if (d < 1 || g.n < 1)
        return std::nullopt;
    int T = cfg.threshold.value_or(4 * d);
    if (T < 2 * d)
        T = 2 * d;
    double alpha = cfg.alpha.value_or(1.0 / (2.0 * (16.0 * d * d + 1.0)));
    Decomposition out;
    out.d = d;
    u64 ymask = 0;
    for (int v = 1; v <= g.n; ++v)
        if (g.degree(v) > T) {
            out.Y.push_back(v);
            ymask |= 1ULL << (v - 1);
        }
    // restrict to G \ Y and keep vertices of degree <= 2d there
    Graph rest(g.n);
    for (auto [u, v] : g.edges())
        if (!((ymask >> (u - 1) & 1) || (ymask >> (v - 1) & 1)))
            rest.add_edge(u, v);
    Graph rest_sq = square(rest);
    u64 blocked = ymask;
    for (int v = 1; v <= g.n; ++v)
        if (!(ymask >> (v - 1) & 1) && rest.degree(v) > 2 * d)
            blocked |= 1ULL << (v - 1); // cannot serve as a family center
    for (int v = 1; v <= g.n; ++v) {
        if (blocked >> (v - 1) & 1)
            continue;
        out.A.push_back(v);
        blocked |= 1ULL << (v - 1);
        blocked |= rest_sq.adj[v];
    }
    if (out.A.size() < 2 * out.Y.size())
        return std::nullopt;
    if (static_cast<double>(out.A.size()) < alpha * g.n)
        return std::nullopt;
    if (g.n < 2 * d + 1)
        return std::nullopt; // no family of size 2d+1 fits, c*n < 1
    return out;
}

} // namespace exact
