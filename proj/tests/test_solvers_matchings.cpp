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

} // namespace

TEST_CASE("contract_for_matchings on C4") {
    auto m = contract_for_matchings(cycle(4));
    CHECK(m.n == 2);
    CHECK(m.edges.size() == 4);
    u64 labels = 0;
    for (const auto &e : m.edges) {
        CHECK_FALSE(e.loop);
        labels |= 1ULL << (e.la - 1);
        labels |= 1ULL << (e.lb - 1);
    }
    CHECK(labels == 0b1111); // labels cover {1..4}
}

TEST_CASE("contract_for_matchings on K4 leaves at most two loops") {
    auto m = contract_for_matchings(complete(4));
    int loops = 0;
    for (const auto &e : m.edges)
        loops += e.loop;
    CHECK(loops <= 2);
    CHECK(m.n == 2);
}

TEST_CASE("cycle covers of contractions carry disjoint covering labels") {
    std::mt19937_64 rng(3);
    for (int it = 0; it < 10; ++it) {
        int half = 2 + static_cast<int>(rng() % 3);
        auto g = random_graph(2 * half, 0.5, rng);
        auto m = contract_for_matchings(g);
        // strip loops; brute_cycle_covers verifies the label partition
        LabeledMultigraph loopless = m;
        loopless.edges.clear();
        for (const auto &e : m.edges)
            if (!e.loop)
                loopless.edges.push_back(e);
        u64 any = 0;
        for (int t = 1; t <= m.n; ++t)
            any += oracle::brute_cycle_covers(loopless, t);
        (void)any; // exercised for the label checks inside
    }
}

TEST_CASE("count_perfect_matchings fixed points") {
    CHECK(count_perfect_matchings(cycle(6)).total.to_u64() == 2);
    CHECK(count_perfect_matchings(complete(4)).total.to_u64() == 3);
    Graph k33(6);
    for (int u = 1; u <= 3; ++u)
        for (int v = 4; v <= 6; ++v)
            k33.add_edge(u, v);
    CHECK(count_perfect_matchings(k33).total.to_u64() == 6);
    CHECK(count_perfect_matchings(petersen()).total.to_u64() == 6);
}

TEST_CASE("odd vertex count counts zero matchings") {
    CHECK(count_perfect_matchings(cycle(5)).total.is_zero());
}

TEST_CASE("per_t decomposition is consistent") {
    auto r = count_perfect_matchings(cycle(6));
    BigUint sum(0);
    for (const auto &c : r.per_t)
        sum += c;
    CHECK(sum == r.total);
    CHECK(r.selfloop_cases >= 1);
}

TEST_CASE("count_perfect_matchings equals brute force on random graphs") {
    std::mt19937_64 rng(11);
    for (int it = 0; it < 25; ++it) {
        int n = 2 * (2 + static_cast<int>(rng() % 4)); // 4..10 vertices
        auto g = random_graph(n, 0.2 + 0.1 * (it % 6), rng);
        auto got = count_perfect_matchings(g);
        u64 want = oracle::brute_count_matchings(g);
        CHECK(got.total.to_u64() == want);
        BigUint sum(0);
        for (const auto &c : got.per_t)
            sum += c;
        CHECK(sum == got.total);
    }
}

TEST_CASE("canonical cycle polynomial matches exhaustive cycle covers") {
    std::mt19937_64 rng(17);
    for (int it = 0; it < 12; ++it) {
        int half = 2 + static_cast<int>(rng() % 3);
        auto g = random_graph(2 * half, 0.45, rng);
        auto m = contract_for_matchings(g);
        LabeledMultigraph loopless = m;
        loopless.edges.clear();
        for (const auto &e : m.edges)
            if (!e.loop)
                loopless.edges.push_back(e);
        for (size_t i = 0; i < loopless.edges.size(); ++i)
            loopless.edges[i].id = static_cast<int>(i);
        auto per_t = cycle_cover_counts(loopless);
        for (int t = 1; t <= loopless.n; ++t)
            CHECK(per_t[t].to_u64() == oracle::brute_cycle_covers(loopless, t));
    }
}

TEST_CASE("complete graphs hit the double-factorial counts") {
    // (n-1)!! perfect matchings; K10 contracts with the maximum number of
    // self-loop subcases
    CHECK(count_perfect_matchings(complete(6)).total.to_u64() == 15);
    auto k10 = count_perfect_matchings(complete(10));
    CHECK(k10.total.to_u64() == 945);
    CHECK(k10.selfloop_cases == 32);
}

TEST_CASE("matchings of an even path") {
    Graph path(8);
    for (int v = 1; v < 8; ++v)
        path.add_edge(v, v + 1);
    CHECK(count_perfect_matchings(path).total.to_u64() == 1);
    CHECK(oracle::brute_count_matchings(path) == 1);
}
