#pragma once

#include <optional>
#include <vector>

#include "exact/graphlib.hpp"

namespace exact {
namespace oracle {

struct BudgetError : std::runtime_error {
    explicit BudgetError(const std::string &w) : std::runtime_error(w) {}
};

// Oracles refuse inputs beyond these sizes instead of running unbounded.
struct OracleBudget {
    int brute_tsp_max_n = 10;  // (n-1)! anchored permutations
    int held_karp_max_n = 18;  // 2^n subset DP
    int coloring_max_n = 12;
    int domatic_max_n = 10;
    int matchings_max_n = 14;       // vertices of the original graph
    int cycle_cover_max_n = 5;      // contracted multigraph vertices
};

const OracleBudget &budget();

/// Bitmask DP over subsets; minimum Hamiltonian cycle weight.
std::optional<u64> held_karp(const WeightedDigraph &g);

/// All (n-1)! permutations anchored at vertex 1.
std::optional<u64> brute_tsp(const WeightedDigraph &g);

/// Backtracking with symmetry pruning (a new vertex may only open one new
/// color).
int brute_chromatic(const Graph &g);

/// Largest k such that V splits into k dominating sets, by exhaustive
/// assignment.
int brute_domatic(const Graph &g);

/// Recursive pairing of the lowest unmatched vertex.
u64 brute_count_matchings(const Graph &g);

/// Cycle covers of a multigraph with exactly t cycles whose labels are
/// pairwise disjoint and cover [label_universe].  Exhaustive over edge
/// subsets.
u64 brute_cycle_covers(const LabeledMultigraph &g, int t);

/// O(len^2) integer convolution.
std::vector<u128> schoolbook_multiply(const std::vector<u64> &p,
                                      const std::vector<u64> &r);

/// All proper colorings with per-vertex allowed lists; exhaustive search.
bool brute_list_coloring(const Graph &g, const std::vector<u64> &lists, int k);

/// As above with preference pairs: for each (u,v) some vertex of N[u]
/// must share v's color.
bool brute_preference_coloring(const Graph &g, const std::vector<u64> &lists,
                               int k,
                               const std::vector<std::pair<int, int>> &pairs);

/// Explicit list of anchored closed-walk monomials of length n: visited
/// vertex multiset as per-vertex degrees plus total weight.
struct WalkMonomial {
    std::vector<int> degree; // indexed 1..n
    u64 weight = 0;
};
std::vector<WalkMonomial> enumerate_closed_walks(const WeightedDigraph &g);

} // namespace oracle
} // namespace exact
