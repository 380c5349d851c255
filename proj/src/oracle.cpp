#include "exact/oracle.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

namespace exact {
namespace oracle {

const OracleBudget &budget() {
    static const OracleBudget b;
    return b;
}

std::optional<u64> held_karp(const WeightedDigraph &g) {
    const int n = g.n;
    if (n > budget().held_karp_max_n)
        throw BudgetError("held_karp: n beyond oracle budget");
    if (n == 1)
        return 0;
    if (n < 1)
        return std::nullopt;
    const u64 INF = ~0ULL >> 2;
    const size_t full = 1ULL << (n - 1); // subsets of {2..n}
    std::vector<std::vector<u64>> dp(full, std::vector<u64>(n + 1, INF));
    for (int v = 2; v <= n; ++v)
        if (g.w[1][v])
            dp[1ULL << (v - 2)][v] = g.w[1][v];
    for (size_t mask = 1; mask < full; ++mask) {
        for (int v = 2; v <= n; ++v) {
            if (!(mask >> (v - 2) & 1) || dp[mask][v] >= INF)
                continue;
            u64 base = dp[mask][v];
            for (int u = 2; u <= n; ++u) {
                if ((mask >> (u - 2) & 1) || !g.w[v][u])
                    continue;
                size_t nm = mask | (1ULL << (u - 2));
                dp[nm][u] = std::min(dp[nm][u], base + g.w[v][u]);
            }
        }
    }
    u64 best = INF;
    for (int v = 2; v <= n; ++v)
        if (dp[full - 1][v] < INF && g.w[v][1])
            best = std::min(best, dp[full - 1][v] + g.w[v][1]);
    if (best >= INF)
        return std::nullopt;
    return best;
}

std::optional<u64> brute_tsp(const WeightedDigraph &g) {
    const int n = g.n;
    if (n > budget().brute_tsp_max_n)
        throw BudgetError("brute_tsp: n beyond oracle budget");
    if (n == 1)
        return 0;
    if (n < 1)
        return std::nullopt;
    std::vector<int> perm(n - 1);
    std::iota(perm.begin(), perm.end(), 2);
    const u64 INF = ~0ULL >> 2;
    u64 best = INF;
    do {
        u64 total = 0;
        int prev = 1;
        bool ok = true;
        for (int v : perm) {
            if (!g.w[prev][v]) {
                ok = false;
                break;
            }
            total += g.w[prev][v];
            prev = v;
        }
        if (ok && g.w[prev][1])
            best = std::min(best, total + g.w[prev][1]);
    } while (std::next_permutation(perm.begin(), perm.end()));
    if (best >= INF)
        return std::nullopt;
    return best;
}

namespace {

bool colorable_rec(const Graph &g, std::vector<int> &color, int v, int k) {
    if (v > g.n)
        return true;
    int used_max = 0;
    for (int u = 1; u < v; ++u)
        used_max = std::max(used_max, color[u]);
    int limit = std::min(k, used_max + 1); // symmetry: one fresh color only
    for (int c = 1; c <= limit; ++c) {
        bool ok = true;
        for (int u = 1; u < v; ++u)
            if (g.has_edge(u, v) && color[u] == c) {
                ok = false;
                break;
            }
        if (!ok)
            continue;
        color[v] = c;
        if (colorable_rec(g, color, v + 1, k))
            return true;
        color[v] = 0;
    }
    return false;
}

} // namespace

int brute_chromatic(const Graph &g) {
    if (g.n > budget().coloring_max_n)
        throw BudgetError("brute_chromatic: n beyond oracle budget");
    if (g.n == 0)
        return 0;
    for (int k = 1; k <= g.n; ++k) {
        std::vector<int> color(g.n + 1, 0);
        if (colorable_rec(g, color, 1, k))
            return k;
    }
    return g.n;
}

namespace {

bool domatic_rec(const Graph &g, std::vector<int> &part, int v, int k) {
    if (v > g.n) {
        for (int c = 1; c <= k; ++c) {
            u64 members = 0;
            for (int u = 1; u <= g.n; ++u)
                if (part[u] == c)
                    members |= 1ULL << (u - 1);
            for (int u = 1; u <= g.n; ++u) {
                u64 closed = g.adj[u] | (1ULL << (u - 1));
                if (!(closed & members))
                    return false;
            }
        }
        return true;
    }
    for (int c = 1; c <= k; ++c) {
        part[v] = c;
        if (domatic_rec(g, part, v + 1, k))
            return true;
    }
    part[v] = 0;
    return false;
}

} // namespace

int brute_domatic(const Graph &g) {
    if (g.n > budget().domatic_max_n)
        throw BudgetError("brute_domatic: n beyond oracle budget");
    if (g.n == 0)
        return 0;
    int best = 1;
    int cap = g.n;
    for (int v = 1; v <= g.n; ++v)
        cap = std::min(cap, g.degree(v) + 1);
    for (int k = cap; k >= 2; --k) {
        std::vector<int> part(g.n + 1, 0);
        if (domatic_rec(g, part, 1, k)) {
            best = k;
            break;
        }
    }
    return best;
}

namespace {

u64 match_rec(const Graph &g, u64 unmatched) {
    if (!unmatched)
        return 1;
    int v = __builtin_ctzll(unmatched) + 1;
    u64 rest = unmatched & ~(1ULL << (v - 1));
    u64 total = 0;
    u64 cands = g.adj[v] & rest;
    while (cands) {
        int u = __builtin_ctzll(cands) + 1;
        cands &= cands - 1;
        total += match_rec(g, rest & ~(1ULL << (u - 1)));
    }
    return total;
}

} // namespace

u64 brute_count_matchings(const Graph &g) {
    if (g.n > budget().matchings_max_n)
        throw BudgetError("brute_count_matchings: n beyond oracle budget");
    if (g.n % 2 != 0)
        return 0;
    return match_rec(g, g.full_mask());
}

u64 brute_cycle_covers(const LabeledMultigraph &g, int t) {
    if (g.n > budget().cycle_cover_max_n)
        throw BudgetError("brute_cycle_covers: n beyond oracle budget");
    const int m = static_cast<int>(g.edges.size());
    if (g.n == 0)
        return t == 0 ? 1 : 0;
    if (m > 62)
        throw BudgetError("brute_cycle_covers: too many edges");
    if (m < g.n)
        return 0;
    u64 count = 0;
    auto process = [&](u64 sub) {
        std::vector<int> deg(g.n + 1, 0);
        u64 labels = 0;
        bool ok = true;
        for (int e = 0; e < m && ok; ++e) {
            if (!(sub >> e & 1))
                continue;
            const auto &ed = g.edges[e];
            if (ed.loop)
                deg[ed.u] += 2;
            else {
                deg[ed.u] += 1;
                deg[ed.v] += 1;
            }
            u64 lm = (1ULL << (ed.la - 1)) | (1ULL << (ed.lb - 1));
            if (labels & lm)
                ok = false;
            labels |= lm;
        }
        if (!ok)
            return;
        for (int v = 1; v <= g.n && ok; ++v)
            ok = deg[v] == 2;
        if (!ok)
            return;
        if (g.label_universe > 0 &&
            labels != ((g.label_universe >= 64) ? ~0ULL
                                                : (1ULL << g.label_universe) - 1))
            return;
        // count connected components among chosen edges
        std::vector<int> parent(g.n + 1);
        std::iota(parent.begin(), parent.end(), 0);
        std::function<int(int)> find = [&](int x) {
            while (parent[x] != x)
                x = parent[x] = parent[parent[x]];
            return x;
        };
        for (int e = 0; e < m; ++e) {
            if (!(sub >> e & 1))
                continue;
            const auto &ed = g.edges[e];
            parent[find(ed.u)] = find(ed.v);
        }
        int comps = 0;
        for (int v = 1; v <= g.n; ++v)
            if (find(v) == v)
                ++comps;
        if (comps == t)
            ++count;
    };
    // every cover uses exactly n edges; Gosper's hack walks the n-subsets
    const u64 last = ((1ULL << g.n) - 1) << (m - g.n);
    u64 sub = (1ULL << g.n) - 1;
    for (;;) {
        process(sub);
        if (sub == last)
            break;
        u64 c = sub & (~sub + 1), r = sub + c;
        sub = r | (((r ^ sub) >> 2) / c);
    }
    return count;
}

std::vector<u128> schoolbook_multiply(const std::vector<u64> &p,
                                      const std::vector<u64> &r) {
    if (p.empty() || r.empty())
        return {};
    std::vector<u128> out(p.size() + r.size() - 1, 0);
    for (size_t i = 0; i < p.size(); ++i)
        for (size_t j = 0; j < r.size(); ++j)
            out[i + j] += static_cast<u128>(p[i]) * r[j];
    return out;
}

namespace {

bool list_color_rec(const Graph &g, const std::vector<u64> &lists, int v, int k,
                    std::vector<int> &color,
                    const std::vector<std::pair<int, int>> *pairs) {
    if (v > g.n) {
        if (pairs) {
            for (auto [u, vv] : *pairs) {
                u64 closed = g.adj[u] | (1ULL << (u - 1));
                bool hit = false;
                for (int w = 1; w <= g.n && !hit; ++w)
                    if ((closed >> (w - 1) & 1) && color[w] == color[vv])
                        hit = true;
                if (!hit)
                    return false;
            }
        }
        return true;
    }
    for (int c = 1; c <= k; ++c) {
        if (!(lists[v] >> (c - 1) & 1))
            continue;
        bool ok = true;
        for (int u = 1; u < v; ++u)
            if (g.has_edge(u, v) && color[u] == c) {
                ok = false;
                break;
            }
        if (!ok)
            continue;
        color[v] = c;
        if (list_color_rec(g, lists, v + 1, k, color, pairs))
            return true;
        color[v] = 0;
    }
    return false;
}

} // namespace

bool brute_list_coloring(const Graph &g, const std::vector<u64> &lists, int k) {
    if (g.n > budget().coloring_max_n)
        throw BudgetError("brute_list_coloring: n beyond oracle budget");
    std::vector<int> color(g.n + 1, 0);
    return list_color_rec(g, lists, 1, k, color, nullptr);
}

bool brute_preference_coloring(const Graph &g, const std::vector<u64> &lists,
                               int k,
                               const std::vector<std::pair<int, int>> &pairs) {
    if (g.n > budget().coloring_max_n)
        throw BudgetError("brute_preference_coloring: n beyond oracle budget");
    std::vector<int> color(g.n + 1, 0);
    return list_color_rec(g, lists, 1, k, color, &pairs);
}

namespace {

void walk_rec(const WeightedDigraph &g, int v, int steps_left, u64 weight,
              std::vector<int> &deg, std::vector<WalkMonomial> &out) {
    if (steps_left == 0) {
        if (g.w[v][1]) {
            WalkMonomial m;
            m.degree = deg;
            m.weight = weight + g.w[v][1];
            out.push_back(std::move(m));
        }
        return;
    }
    for (int u = 1; u <= g.n; ++u) {
        if (!g.w[v][u])
            continue;
        ++deg[u];
        walk_rec(g, u, steps_left - 1, weight + g.w[v][u], deg, out);
        --deg[u];
    }
}

} // namespace

std::vector<WalkMonomial> enumerate_closed_walks(const WeightedDigraph &g) {
    if (g.n > 8)
        throw BudgetError("enumerate_closed_walks: n beyond oracle budget");
    std::vector<WalkMonomial> out;
    if (g.n < 2)
        return out;
    std::vector<int> deg(g.n + 1, 0);
    deg[1] = 1;
    walk_rec(g, 1, g.n - 1, 0, deg, out);
    return out;
}

} // namespace oracle
} // namespace exact
