#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "exact/graphlib.hpp"
#include "exact/infants.hpp"
#include "exact/kronecker.hpp"

namespace exact {

// --------------------------------------------------------- walk circuit

/// Evaluator for the anchored closed-walk polynomial: one monomial per
/// length-n closed walk 1 -> i2 -> ... -> in -> 1, variables recording the
/// visited vertices and z the total weight.  Transitions listed in
/// `forbidden` are deleted from the dynamic program.
struct ClosedWalkCircuit {
    WeightedDigraph g;
    std::vector<u64> forbidden_mask; // forbidden_mask[u] bit (v-1)
    struct Arc {
        int u = 0, v = 0;
        u64 w = 0;
        int widx = 0; // index into distinct_weights
    };
    std::vector<Arc> arcs; // allowed arcs only
    std::vector<u64> distinct_weights;

    bool allowed(int u, int v) const {
        return g.w[u][v] && !(forbidden_mask[u] >> (v - 1) & 1);
    }
    u64 z_bound() const { return static_cast<u64>(g.n) * g.M; }
    /// P(x_1..x_n, z) mod field.q; xs indexed 1..n.
    u64 eval(const std::vector<u64> &xs, u64 z, const ModPrime &field) const;
    /// Exact number of anchored closed walks (coefficient bound).
    u128 count_walks() const;
};

ClosedWalkCircuit
closed_walk_circuit(const WeightedDigraph &g,
                    const std::vector<std::pair<int, int>> &forbidden);

// --------------------------------------------------------------- reports

struct InfantsAccounting {
    int n = 0, p = 0, q = 0, L = 0;
    u64 d = 0;
    u128 domain_size = 0;   // infants-encoding exponent bound
    u128 plain_domain = 0;  // plain-tier exponent bound for the same run
};

struct TspResult {
    std::optional<u64> optimum;
    std::string tier;
    bool fell_back = false;
    u64 guess_count = 0;
    u64 cycle_multiplicity = 0;
    u128 domain_bound = 0;
    std::vector<u64> moduli;
    std::vector<std::optional<u64>> guess_values; // avg tier, per guess
    std::optional<InfantsAccounting> infants;
};

struct TspConfig {
    int max_degree_cap = 8; // bounded-degree tier precondition
    u64 guess_cap = 4096;
    int threads = 1;
    DecomposeConfig decompose; // avg-degree tier decomposition knobs
};

TspResult tsp_fft(const WeightedDigraph &g, const TspConfig &cfg = {});
TspResult tsp_bounded_max_degree(const WeightedDigraph &g,
                                 const TspConfig &cfg = {});
TspResult tsp_avg_degree(const WeightedDigraph &g, const TspConfig &cfg = {});

// -------------------------------------------------------------- coloring

/// List coloring instance with preference pairs (u_i, v_i): some vertex of
/// N[u_i] must get v_i's color.
struct ColoringInstance {
    Graph graph{0};
    int k = 0;
    std::vector<u64> lists; // indexed 1..n, bit c-1 = color c
    std::vector<std::pair<int, int>> preferences;

    void validate() const; // pair vertices distinct, independent in G^2, equal lists
};

/// Per-color family lists: independent sets respecting lists and
/// preference constraints.
std::vector<std::vector<u64>> preference_families(const ColoringInstance &inst);

int chromatic_number(const Graph &g);

struct ChromaticAvgResult {
    bool colorable = false;
    std::string route; // "high-degree" | "preferences" | "fallback"
    bool fell_back = false;
    std::vector<InfantsAccounting> infants_runs;
};

ChromaticAvgResult chromatic_avg_degree(const Graph &g, int k);

// --------------------------------------------------------------- domatic

struct DomaticResult {
    int k = 1;
    std::string tier;
    bool fell_back = false;
    std::vector<InfantsAccounting> infants_runs;
};

DomaticResult domatic_number(const Graph &g);

// ------------------------------------------------------------- matchings

LabeledMultigraph contract_for_matchings(const Graph &g);

struct MatchingCount {
    BigUint total;
    std::vector<BigUint> per_t; // index = number of cycles
    int selfloop_cases = 0;
};

MatchingCount count_perfect_matchings(const Graph &g);

/// Per-t cycle cover counts of a loop-free labeled multigraph via the
/// canonical-walk polynomial (exposed for cross-validation against the
/// exhaustive oracle).
std::vector<BigUint> cycle_cover_counts(const LabeledMultigraph &g);

} // namespace exact
