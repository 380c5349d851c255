#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "exact/oracle.hpp"
#include "exact/solvers.hpp"

using namespace exact;

namespace {

Graph cycle(int n) {
    Graph g(n);
    for (int v = 1; v <= n; ++v)
        g.add_edge(v, v % n + 1);
    return g;
}

Graph complete(int n) {
    Graph g(n);
    for (int u = 1; u <= n; ++u)
        for (int v = u + 1; v <= n; ++v)
            g.add_edge(u, v);
    return g;
}

Graph petersen() {
    Graph g(10);
    for (int v = 1; v <= 5; ++v) {
        g.add_edge(v, v % 5 + 1);
        g.add_edge(v, v + 5);
        g.add_edge(v + 5, (v + 1) % 5 + 6);
    }
    return g;
}

Graph random_graph(int n, double prob, std::mt19937_64 &rng) {
    Graph g(n);
    std::uniform_real_distribution<> coin(0, 1);
    for (int u = 1; u <= n; ++u)
        for (int v = u + 1; v <= n; ++v)
            if (coin(rng) < prob)
                g.add_edge(u, v);
    return g;
}

std::optional<Graph> try_random_regular(int n, int deg, std::mt19937_64 &rng) {
    std::vector<int> stubs;
    for (int v = 1; v <= n; ++v)
        for (int i = 0; i < deg; ++i)
            stubs.push_back(v);
    std::shuffle(stubs.begin(), stubs.end(), rng);
    Graph g(n);
    for (size_t i = 0; i + 1 < stubs.size(); i += 2) {
        int u = stubs[i], v = stubs[i + 1];
        if (u == v || g.has_edge(u, v))
            return std::nullopt;
        g.add_edge(u, v);
    }
    return g;
}

Graph random_regular(int n, int deg, std::mt19937_64 &rng) {
    for (;;) {
        auto g = try_random_regular(n, deg, rng);
        if (g)
            return *g;
    }
}

} // namespace

TEST_CASE("chromatic_number fixed points") {
    CHECK(chromatic_number(cycle(5)) == 3);
    CHECK(chromatic_number(complete(4)) == 4);
    CHECK(chromatic_number(petersen()) == 3);
    CHECK(chromatic_number(Graph(4)) == 1);
    CHECK(chromatic_number(Graph(0)) == 0);
}

TEST_CASE("chromatic_number equals the oracle on random graphs") {
    std::mt19937_64 rng(7);
    for (int it = 0; it < 40; ++it) {
        int n = 3 + static_cast<int>(rng() % 6);
        auto g = random_graph(n, 0.2 + 0.08 * (it % 8), rng);
        CHECK(chromatic_number(g) == oracle::brute_chromatic(g));
    }
}

TEST_CASE("chromatic_avg_degree on small cycles") {
    auto c6k2 = chromatic_avg_degree(cycle(6), 2);
    CHECK(c6k2.colorable);
    auto c5k2 = chromatic_avg_degree(cycle(5), 2);
    CHECK_FALSE(c5k2.colorable);
    auto c5k3 = chromatic_avg_degree(cycle(5), 3);
    CHECK(c5k3.colorable);
}

TEST_CASE("chromatic_avg_degree high-degree route") {
    // k >= 2d: color the high-degree core, extend greedily
    auto c5 = cycle(5);
    auto r = chromatic_avg_degree(c5, 4);
    CHECK(r.route == "high-degree");
    CHECK(r.colorable);

    Graph wheel(6); // hub of degree 5 over C5
    for (int v = 1; v <= 5; ++v) {
        wheel.add_edge(v, v % 5 + 1);
        wheel.add_edge(v, 6);
    }
    // avg degree 10/3 -> d=4; k=8 takes the high-degree route
    auto w = chromatic_avg_degree(wheel, 8);
    CHECK(w.route == "high-degree");
    CHECK(w.colorable == (oracle::brute_chromatic(wheel) <= 8));
}

TEST_CASE("chromatic_avg_degree uses preferences on 3-regular graphs") {
    std::mt19937_64 rng(19);
    auto g = random_regular(10, 3, rng);
    auto r = chromatic_avg_degree(g, 3);
    CHECK(r.route == "preferences");
    CHECK(r.colorable == (oracle::brute_chromatic(g) <= 3));
    if (!r.infants_runs.empty())
        CHECK(r.infants_runs.front().p >= 0);
}

TEST_CASE("chromatic_avg_degree equals the oracle on 3-regular graphs") {
    std::mt19937_64 rng(23);
    for (int it = 0; it < 6; ++it) {
        auto g = random_regular(10, 3, rng);
        int chi = oracle::brute_chromatic(g);
        for (int k = 2; k <= 4; ++k) {
            auto r = chromatic_avg_degree(g, k);
            CHECK(r.colorable == (chi <= k));
        }
    }
}

TEST_CASE("adding an edge never lowers the chromatic number") {
    std::mt19937_64 rng(47);
    for (int it = 0; it < 15; ++it) {
        int n = 4 + static_cast<int>(rng() % 4);
        auto g = random_graph(n, 0.3, rng);
        int before = chromatic_number(g);
        Graph more = g;
        bool added = false;
        for (int u = 1; u <= n && !added; ++u)
            for (int v = u + 1; v <= n && !added; ++v)
                if (!more.has_edge(u, v)) {
                    more.add_edge(u, v);
                    added = true;
                }
        if (!added)
            continue;
        CHECK(chromatic_number(more) >= before);
    }
}

TEST_CASE("preference_families without pairs lists every list-respecting set") {
    Graph path(4);
    path.add_edge(1, 2);
    path.add_edge(2, 3);
    path.add_edge(3, 4);
    ColoringInstance inst;
    inst.graph = path;
    inst.k = 2;
    inst.lists.assign(5, 0b11);
    inst.lists[2] = 0b01; // vertex 2 only allows color 1
    auto fams = preference_families(inst);
    REQUIRE(fams.size() == 2);
    for (u64 I : fams[1]) // color 2
        CHECK_FALSE(static_cast<bool>(I >> 1 & 1));
    // color 1 families: every independent set of the path
    size_t is_count = 0;
    for (u64 mask = 0; mask < 16; ++mask) {
        bool ok = true;
        for (int v = 1; v <= 4 && ok; ++v)
            if ((mask >> (v - 1) & 1) && (path.adj[v] & mask))
                ok = false;
        if (ok)
            ++is_count;
    }
    CHECK(fams[0].size() == is_count);
}

TEST_CASE("a preference pair excludes exactly the violating sets") {
    // path on 7 vertices; pair (u=2, v=6) is independent in G^2
    Graph path(7);
    for (int v = 1; v < 7; ++v)
        path.add_edge(v, v + 1);
    ColoringInstance inst;
    inst.graph = path;
    inst.k = 2;
    inst.lists.assign(8, 0b11);
    inst.preferences = {{2, 6}};
    auto fams = preference_families(inst);
    for (int c = 0; c < 2; ++c) {
        for (u64 mask = 0; mask < (1ULL << 7); ++mask) {
            bool indep = true;
            for (int v = 1; v <= 7 && indep; ++v)
                if ((mask >> (v - 1) & 1) && (path.adj[v] & mask))
                    indep = false;
            if (!indep)
                continue;
            bool has_v = mask >> 5 & 1;
            u64 closed_u = path.adj[2] | (1ULL << 1);
            bool pref_ok = !has_v || (mask & closed_u);
            bool listed = std::find(fams[c].begin(), fams[c].end(), mask) !=
                          fams[c].end();
            CHECK(listed == pref_ok);
        }
    }
}

TEST_CASE("preference instance validation rejects bad pairs") {
    Graph path(4);
    path.add_edge(1, 2);
    path.add_edge(2, 3);
    path.add_edge(3, 4);
    ColoringInstance inst;
    inst.graph = path;
    inst.k = 2;
    inst.lists.assign(5, 0b11);
    inst.preferences = {{1, 2}}; // adjacent, not independent in G^2
    CHECK_THROWS_AS(preference_families(inst), StructureError);

    inst.preferences = {{1, 4}};
    inst.lists[4] = 0b01; // lists differ
    CHECK_THROWS_AS(preference_families(inst), StructureError);
}

TEST_CASE("preference solvability equals plain list coloring") {
    std::mt19937_64 rng(31);
    int tested = 0;
    for (int it = 0; it < 200 && tested < 60; ++it) {
        int n = 4 + static_cast<int>(rng() % 5);
        auto g = random_graph(n, 0.25, rng);
        int k = 2 + static_cast<int>(rng() % 2);
        std::vector<u64> lists(n + 1, 0);
        for (int v = 1; v <= n; ++v)
            lists[v] = 1 + (rng() & ((1ULL << k) - 1)); // nonempty
        // find a valid pair: distinct vertices, independent in G^2
        auto sq = square(g);
        std::vector<std::pair<int, int>> candidates;
        for (int u = 1; u <= n; ++u)
            for (int v = 1; v <= n; ++v)
                if (u != v && !sq.has_edge(u, v))
                    candidates.emplace_back(u, v);
        if (candidates.empty())
            continue;
        auto [u, v] = candidates[rng() % candidates.size()];
        lists[u] = lists[v]; // def:pref requires equal lists
        ColoringInstance inst;
        inst.graph = g;
        inst.k = k;
        inst.lists = lists;
        inst.preferences = {{u, v}};
        auto fams = preference_families(inst);
        PartitionProblem prob;
        prob.n = n;
        prob.k = k;
        prob.families = fams;
        bool via_partition = partition_solve(prob);
        bool plain = oracle::brute_list_coloring(g, lists, k);
        bool direct = oracle::brute_preference_coloring(g, lists, k,
                                                        inst.preferences);
        CHECK(via_partition == plain);
        CHECK(direct == plain);
        ++tested;
    }
    CHECK(tested > 0);
}
