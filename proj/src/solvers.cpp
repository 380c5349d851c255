#include "exact/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <tuple>

namespace exact {

namespace {

u64 checked_add(u64 a, u64 b) {
    u64 s;
    if (__builtin_add_overflow(a, b, &s))
        throw OverflowError("solver: count overflow");
    return s;
}

u64 full_mask_n(int n) { return n >= 64 ? ~0ULL : (1ULL << n) - 1; }

} // namespace

// --------------------------------------------------------- walk circuit

ClosedWalkCircuit
closed_walk_circuit(const WeightedDigraph &g,
                    const std::vector<std::pair<int, int>> &forbidden) {
    if (g.n < 2)
        throw StructureError("closed_walk_circuit: need n >= 2");
    ClosedWalkCircuit c;
    c.g = g;
    c.forbidden_mask.assign(g.n + 1, 0);
    for (auto [u, v] : forbidden) {
        if (u < 1 || u > g.n || v < 1 || v > g.n)
            throw StructureError("closed_walk_circuit: forbidden transition "
                                 "outside [n]");
        c.forbidden_mask[u] |= 1ULL << (v - 1);
    }
    for (int u = 1; u <= g.n; ++u)
        for (int v = 1; v <= g.n; ++v)
            if (c.allowed(u, v))
                c.distinct_weights.push_back(g.w[u][v]);
    std::sort(c.distinct_weights.begin(), c.distinct_weights.end());
    c.distinct_weights.erase(
        std::unique(c.distinct_weights.begin(), c.distinct_weights.end()),
        c.distinct_weights.end());
    for (int u = 1; u <= g.n; ++u)
        for (int v = 1; v <= g.n; ++v)
            if (c.allowed(u, v)) {
                int widx = static_cast<int>(
                    std::lower_bound(c.distinct_weights.begin(),
                                     c.distinct_weights.end(), g.w[u][v]) -
                    c.distinct_weights.begin());
                c.arcs.push_back({u, v, g.w[u][v], widx});
            }
    return c;
}

u64 ClosedWalkCircuit::eval(const std::vector<u64> &xs, u64 z,
                            const ModPrime &field) const {
    const u64 q = field.q;
    const int n = g.n;
    std::vector<u64> zpow(distinct_weights.size());
    for (size_t i = 0; i < distinct_weights.size(); ++i)
        zpow[i] = pow_mod(z % q, distinct_weights[i], q);
    std::vector<u64> xv(n + 1);
    for (int v = 1; v <= n; ++v)
        xv[v] = xs[v] % q;
    std::vector<u64> cur(n + 1, 0), next(n + 1, 0);
    cur[1] = xv[1]; // anchored at vertex 1
    for (int step = 2; step <= n; ++step) {
        std::fill(next.begin(), next.end(), 0);
        for (const auto &a : arcs) {
            if (!cur[a.u])
                continue;
            u64 term = mul_mod(cur[a.u], zpow[a.widx], q);
            next[a.v] = add_mod(next[a.v], mul_mod(term, xv[a.v], q), q);
        }
        std::swap(cur, next);
    }
    u64 out = 0;
    for (const auto &a : arcs) {
        if (a.v != 1 || !cur[a.u])
            continue;
        out = add_mod(out, mul_mod(cur[a.u], zpow[a.widx], q), q);
    }
    return out;
}

u128 ClosedWalkCircuit::count_walks() const {
    const int n = g.n;
    std::vector<u128> cur(n + 1, 0), next(n + 1, 0);
    cur[1] = 1;
    for (int step = 2; step <= n; ++step) {
        std::fill(next.begin(), next.end(), 0);
        for (int u = 1; u <= n; ++u) {
            if (!cur[u])
                continue;
            for (int v = 1; v <= n; ++v)
                if (allowed(u, v))
                    next[v] += cur[u];
        }
        std::swap(cur, next);
    }
    u128 total = 0;
    for (int v = 1; v <= n; ++v)
        if (cur[v] && allowed(v, 1))
            total += cur[v];
    return total;
}

// ------------------------------------------------------------- TSP tiers

namespace {

u128 plain_tsp_domain(const WeightedDigraph &g) {
    // single uniform-degree factor: exponent = z + (nM+1) * mask-sum
    u64 zmax = static_cast<u64>(g.n) * g.M;
    u128 mask_sum_max =
        static_cast<u128>(g.n) * (g.n >= 2 ? (1ULL << (g.n - 1)) : 1);
    return zmax + (static_cast<u128>(zmax) + 1) * mask_sum_max + 1;
}

TspResult tsp_trivial(const WeightedDigraph &g, const char *tier) {
    TspResult r;
    r.tier = tier;
    if (g.n == 1) {
        r.optimum = 0;
        r.cycle_multiplicity = 1;
    }
    return r;
}

} // namespace

TspResult tsp_fft(const WeightedDigraph &g, const TspConfig &cfg) {
    if (g.n < 2)
        return tsp_trivial(g, "fft2n");
    TspResult r;
    r.tier = "fft2n";
    ClosedWalkCircuit circuit = closed_walk_circuit(g, {});
    u128 walks = circuit.count_walks();
    if (walks == 0)
        return r; // no closed walk at all, certainly no cycle
    StreamFactor f;
    f.z_bound = circuit.z_bound();
    f.max_xdegree = g.n;
    f.uniform_xdegree = g.n;
    f.max_mask_sum = static_cast<u64>(g.n) * (1ULL << (g.n - 1));
    f.eval = [circuit](const std::vector<u64> &xs, u64 z,
                       const ModPrime &field) {
        return circuit.eval(xs, z, field);
    };
    StandardEncoding enc = StandardEncoding::make(g.n, g.M);
    StreamOptions opts;
    opts.coefficient_bound = BigUint::from_u128(walks);
    opts.threads = cfg.threads;
    StreamStats stats;
    auto res = detect_min_k_stream({f}, enc, opts, &stats);
    r.domain_bound = stats.domain_bound;
    r.moduli = stats.moduli;
    if (res) {
        r.optimum = res->k;
        r.cycle_multiplicity = res->coefficient.to_u64();
    }
    return r;
}

namespace {

// Sparse walk DP over the infants encoding.  Exponent keys are signed:
// prefixes that visit an infant before its relative dip below zero, the
// complete walks admitted by a valid system never do.
std::optional<DetectResult64>
detect_walks_infants(const ClosedWalkCircuit &circuit, const FamilySystem &sys,
                     const InfantEncoding &enc, size_t max_terms) {
    const int n = circuit.g.n;
    // system validity for the walk family: every allowed transition into an
    // infant must come from a relative
    for (const auto &fam : sys.families) {
        int infant = fam[0];
        for (int u = 1; u <= n; ++u) {
            if (u == infant || !circuit.allowed(u, infant))
                continue;
            if (std::find(fam.begin() + 1, fam.end(), u) == fam.end())
                throw SystemError(
                    "infants walk detection: transition into an infant from "
                    "outside its family; system invalid for this graph");
        }
    }
    std::vector<i128> delta(n + 1);
    for (int v = 1; v <= n; ++v)
        delta[v] = enc.step_delta(v, sys);
    std::vector<SparseExp> cur(n + 1), next(n + 1);
    cur[1][delta[1]] = 1;
    size_t live = 1;
    for (int step = 2; step <= n; ++step) {
        for (auto &m : next)
            m.clear();
        live = 0;
        for (int u = 1; u <= n; ++u) {
            if (cur[u].empty())
                continue;
            for (int v = 1; v <= n; ++v) {
                if (!circuit.allowed(u, v))
                    continue;
                i128 shift = delta[v] + enc.z_delta(circuit.g.w[u][v]);
                auto &dst = next[v];
                for (const auto &[e, c] : cur[u]) {
                    u64 &slot = dst[e + shift];
                    slot = checked_add(slot, c);
                }
            }
        }
        for (const auto &m : next)
            live += m.size();
        if (live > max_terms)
            throw ResourceError("infants walk detection: state explosion");
        std::swap(cur, next);
    }
    SparseExp closed;
    for (int v = 1; v <= n; ++v) {
        if (cur[v].empty() || !circuit.allowed(v, 1))
            continue;
        i128 shift = enc.z_delta(circuit.g.w[v][1]);
        for (const auto &[e, c] : cur[v]) {
            u64 &slot = closed[e + shift];
            slot = checked_add(slot, c);
        }
    }
    u64 kmax = enc.d * static_cast<u64>(n);
    for (u64 k = 0; k <= kmax; ++k) {
        auto it = closed.find(target_exponent_infants(sys, enc, k));
        if (it != closed.end() && it->second)
            return DetectResult64{k, it->second};
    }
    return std::nullopt;
}

FamilySystem tsp_family_system(const Graph &support,
                               const std::vector<int> &centers, int q) {
    std::vector<std::vector<int>> raw;
    for (int c : centers) {
        std::vector<int> fam = {c};
        for (int v = 1; v <= support.n; ++v)
            if (support.has_edge(c, v))
                fam.push_back(v);
        raw.push_back(std::move(fam));
    }
    return pad_families(support.n, raw, q);
}

} // namespace

TspResult tsp_bounded_max_degree(const WeightedDigraph &g, const TspConfig &cfg) {
    if (g.n < 2)
        return tsp_trivial(g, "infants-max");
    Graph support = g.support();
    int delta = support.max_degree();
    auto fallback = [&](const char *why) {
        TspResult r = tsp_fft(g, cfg);
        r.tier = std::string("infants-max->fft2n (") + why + ")";
        r.fell_back = true;
        return r;
    };
    if (delta > cfg.max_degree_cap || delta < 1)
        return fallback("degree cap");
    int q = delta + 1;
    int pmax = support.n / q;
    if (pmax < 1)
        return fallback("no family fits");
    int target = std::max(1, support.n / (delta * delta + 1));
    auto greedy = greedy_independent_in_square(support, std::min(target, pmax));
    int p = std::min<int>(greedy.verts.size(), pmax);
    if (p < 1)
        return fallback("empty independent set");
    std::vector<int> centers(greedy.verts.begin(), greedy.verts.begin() + p);
    TspResult r;
    r.tier = "infants-max";
    try {
        FamilySystem sys = tsp_family_system(support, centers, q);
        InfantEncoding enc = InfantEncoding::make(sys, g.M);
        ClosedWalkCircuit circuit = closed_walk_circuit(g, {});
        auto res = detect_walks_infants(circuit, sys, enc, 1 << 24);
        r.domain_bound = enc.domain_size;
        r.infants = InfantsAccounting{sys.n,  sys.p, sys.q,
                                      static_cast<int>(sys.leftover.size()),
                                      g.M,    enc.domain_size,
                                      plain_tsp_domain(g)};
        if (res) {
            r.optimum = res->k;
            r.cycle_multiplicity = res->coefficient;
        }
        return r;
    } catch (const ResourceError &) {
        return fallback("state budget");
    } catch (const SystemError &) {
        return fallback("system validation");
    }
}

TspResult tsp_avg_degree(const WeightedDigraph &g, const TspConfig &cfg) {
    if (g.n < 2)
        return tsp_trivial(g, "infants-avg");
    Graph support = g.support();
    int d = std::max(1, static_cast<int>(std::ceil(support.avg_degree())));
    auto fallback = [&](const char *why) {
        TspResult r = tsp_fft(g, cfg);
        r.tier = std::string("infants-avg->fft2n (") + why + ")";
        r.fell_back = true;
        return r;
    };
    auto dec = decompose_avg_degree(support, d, cfg.decompose);
    if (!dec)
        return fallback("decomposition failure");
    const int q = 2 * d + 1;
    const int pmax = support.n / q;
    if (pmax < 1)
        return fallback("no family fits");

    // guesses of A, interpreted as the successors of Y on the optimal
    // cycle, enumerated by increasing size
    std::vector<u64> guesses;
    {
        const size_t an = dec->A.size();
        const size_t ylim = std::min(dec->Y.size(), an);
        std::vector<int> pick;
        std::function<bool(size_t, size_t)> combos = [&](size_t from,
                                                         size_t left) -> bool {
            if (left == 0) {
                u64 sub = 0;
                for (int i : pick)
                    sub |= 1ULL << i;
                guesses.push_back(sub);
                return guesses.size() <= cfg.guess_cap;
            }
            for (size_t i = from; i + left <= an; ++i) {
                pick.push_back(static_cast<int>(i));
                bool ok = combos(i + 1, left - 1);
                pick.pop_back();
                if (!ok)
                    return false;
            }
            return true;
        };
        for (size_t sz = 0; sz <= ylim; ++sz)
            if (!combos(0, sz))
                return fallback("guess budget");
    }

    // restriction of the support graph used for family construction
    Graph rest(support.n);
    u64 ymask = 0;
    for (int y : dec->Y)
        ymask |= 1ULL << (y - 1);
    for (auto [u, v] : support.edges())
        if (!((ymask >> (u - 1) & 1) || (ymask >> (v - 1) & 1)))
            rest.add_edge(u, v);

    u64 min_weight = ~0ULL;
    for (int u = 1; u <= g.n; ++u)
        for (int v = 1; v <= g.n; ++v)
            if (g.w[u][v])
                min_weight = std::min(min_weight, g.w[u][v]);
    const u64 trivial_lb = min_weight == ~0ULL ? 0 : min_weight * g.n;

    TspResult r;
    r.tier = "infants-avg";
    std::optional<u64> best;
    u64 best_mult = 0;
    try {
        for (u64 sub : guesses) {
            ++r.guess_count;
            std::vector<int> aprime;
            for (size_t i = 0; i < dec->A.size(); ++i)
                if (!(sub >> i & 1))
                    aprime.push_back(dec->A[i]);
            int p = std::min<int>(aprime.size(), pmax);
            std::vector<int> centers(aprime.begin(), aprime.begin() + p);
            std::vector<std::pair<int, int>> forbidden;
            for (int y : dec->Y)
                for (int a : aprime)
                    forbidden.emplace_back(y, a);
            FamilySystem sys = tsp_family_system(rest, centers, q);
            InfantEncoding enc = InfantEncoding::make(sys, g.M);
            ClosedWalkCircuit circuit = closed_walk_circuit(g, forbidden);
            auto res = detect_walks_infants(circuit, sys, enc, 1 << 24);
            if (!r.infants)
                r.infants = InfantsAccounting{
                    sys.n,  sys.p, sys.q, static_cast<int>(sys.leftover.size()),
                    g.M,    enc.domain_size, plain_tsp_domain(g)};
            r.domain_bound = std::max(r.domain_bound, enc.domain_size);
            r.guess_values.push_back(res ? std::optional<u64>(res->k)
                                         : std::nullopt);
            if (res && (!best || res->k < *best)) {
                best = res->k;
                best_mult = res->coefficient;
            }
            if (best && *best <= trivial_lb)
                break; // nothing can improve on n * min-weight
        }
    } catch (const ResourceError &) {
        return fallback("state budget");
    }
    r.optimum = best;
    r.cycle_multiplicity = best_mult;
    return r;
}

// -------------------------------------------------------------- coloring

void ColoringInstance::validate() const {
    if (static_cast<int>(lists.size()) != graph.n + 1)
        throw StructureError("ColoringInstance: lists must cover 1..n");
    Graph sq = square(graph);
    u64 seen = 0;
    for (auto [u, v] : preferences) {
        if (u < 1 || u > graph.n || v < 1 || v > graph.n || u == v)
            throw StructureError("ColoringInstance: bad preference pair");
        for (int x : {u, v}) {
            if (seen >> (x - 1) & 1)
                throw StructureError("ColoringInstance: pair vertices repeat");
            seen |= 1ULL << (x - 1);
        }
        if (lists[u] != lists[v])
            throw StructureError("ColoringInstance: pair lists differ");
    }
    for (int a = 1; a <= graph.n; ++a)
        for (int b = a + 1; b <= graph.n; ++b)
            if ((seen >> (a - 1) & 1) && (seen >> (b - 1) & 1) &&
                sq.has_edge(a, b))
                throw StructureError(
                    "ColoringInstance: pair vertices not independent in G^2");
}

namespace {

std::vector<u64> independent_sets(const Graph &g) {
    if (g.n > 20)
        throw StructureError("independent set enumeration beyond n=20");
    std::vector<u64> out;
    for (u64 mask = 0; mask <= g.full_mask(); ++mask) {
        bool ok = true;
        for (int v = 1; v <= g.n && ok; ++v)
            if ((mask >> (v - 1) & 1) && (g.adj[v] & mask))
                ok = false;
        if (ok)
            out.push_back(mask);
        if (g.n == 0)
            break;
    }
    return out;
}

int greedy_clique_lower_bound(const Graph &g) {
    int best = g.n ? 1 : 0;
    for (int s = 1; s <= g.n; ++s) {
        u64 clique = 1ULL << (s - 1);
        int size = 1;
        for (int v = 1; v <= g.n; ++v) {
            if (v == s || (clique >> (v - 1) & 1))
                continue;
            if ((clique & g.adj[v]) == clique) {
                clique |= 1ULL << (v - 1);
                ++size;
            }
        }
        best = std::max(best, size);
    }
    return best;
}

} // namespace

std::vector<std::vector<u64>> preference_families(const ColoringInstance &inst) {
    inst.validate();
    auto is_list = independent_sets(inst.graph);
    std::vector<std::vector<u64>> families(inst.k);
    for (int c = 1; c <= inst.k; ++c) {
        for (u64 I : is_list) {
            bool ok = true;
            for (int v = 1; v <= inst.graph.n && ok; ++v)
                if ((I >> (v - 1) & 1) && !(inst.lists[v] >> (c - 1) & 1))
                    ok = false;
            for (auto [u, v] : inst.preferences) {
                if (!ok)
                    break;
                if (!(I >> (v - 1) & 1))
                    continue;
                u64 closed = inst.graph.adj[u] | (1ULL << (u - 1));
                if (!(closed & I))
                    ok = false;
            }
            if (ok)
                families[c - 1].push_back(I);
        }
    }
    return families;
}

int chromatic_number(const Graph &g) {
    if (g.n == 0)
        return 0;
    auto is_list = independent_sets(g);
    for (int k = std::max(1, greedy_clique_lower_bound(g)); k <= g.n; ++k) {
        PartitionProblem prob;
        prob.n = g.n;
        prob.k = k;
        prob.families.assign(k, is_list);
        if (partition_solve(prob))
            return k;
    }
    return g.n;
}

ChromaticAvgResult chromatic_avg_degree(const Graph &g, int k) {
    ChromaticAvgResult out;
    if (k < 1 || g.n == 0) {
        out.colorable = g.n == 0;
        out.route = "trivial";
        return out;
    }
    int d = std::max(1, static_cast<int>(std::ceil(g.avg_degree())));
    if (k >= 2 * d) {
        // coloring the high-degree core extends greedily: every remaining
        // vertex has degree at most k-1, so a vacant color always exists
        out.route = "high-degree";
        std::vector<int> high;
        for (int v = 1; v <= g.n; ++v)
            if (g.degree(v) >= k)
                high.push_back(v);
        if (high.empty()) {
            out.colorable = true;
            return out;
        }
        Graph h(static_cast<int>(high.size()));
        for (size_t a = 0; a < high.size(); ++a)
            for (size_t b = a + 1; b < high.size(); ++b)
                if (g.has_edge(high[a], high[b]))
                    h.add_edge(static_cast<int>(a + 1), static_cast<int>(b + 1));
        out.colorable = chromatic_number(h) <= k;
        return out;
    }
    auto fallback = [&] {
        out.route = "fallback";
        out.fell_back = true;
        out.colorable = chromatic_number(g) <= k;
        return out;
    };
    auto dec = decompose_avg_degree(g, d);
    if (!dec)
        return fallback();
    const auto &Y = dec->Y;
    double combos = std::pow(static_cast<double>(k), static_cast<double>(Y.size()));
    if (combos > 4096.0)
        return fallback();

    // renumber G \ Y
    std::vector<int> old_of;
    std::vector<int> new_of(g.n + 1, 0);
    for (int v = 1; v <= g.n; ++v)
        if (std::find(Y.begin(), Y.end(), v) == Y.end()) {
            old_of.push_back(v);
            new_of[v] = static_cast<int>(old_of.size());
        }
    int n2 = static_cast<int>(old_of.size());
    Graph g2(n2);
    for (auto [u, v] : g.edges())
        if (new_of[u] && new_of[v])
            g2.add_edge(new_of[u], new_of[v]);

    out.route = "preferences";
    const int q = 2 * d + 2; // families are N[u_i] plus the infant v_i
    std::vector<int> ycolor(Y.size(), 1);
    u64 total = 1;
    for (size_t i = 0; i < Y.size(); ++i)
        total *= static_cast<u64>(k);
    for (u64 code = 0; code < std::max<u64>(total, 1); ++code) {
        u64 c = code;
        for (size_t i = 0; i < Y.size(); ++i) {
            ycolor[i] = static_cast<int>(c % k) + 1;
            c /= k;
        }
        bool proper = true;
        for (size_t i = 0; i < Y.size() && proper; ++i)
            for (size_t j = i + 1; j < Y.size() && proper; ++j)
                if (g.has_edge(Y[i], Y[j]) && ycolor[i] == ycolor[j])
                    proper = false;
        if (!proper)
            continue;
        std::vector<u64> lists(n2 + 1, full_mask_n(k));
        for (size_t i = 0; i < Y.size(); ++i)
            for (int v = 1; v <= g.n; ++v)
                if (new_of[v] && g.has_edge(Y[i], v))
                    lists[new_of[v]] &= ~(1ULL << (ycolor[i] - 1));
        bool empty_list = false;
        for (int v = 1; v <= n2; ++v)
            if (!lists[v])
                empty_list = true;
        if (empty_list)
            continue;

        // most frequent color list among A, pairs from its holders
        std::vector<int> a2;
        for (int a : dec->A)
            if (new_of[a])
                a2.push_back(new_of[a]);
        std::map<u64, std::vector<int>> by_list;
        for (int a : a2)
            by_list[lists[a]].push_back(a);
        std::vector<int> C;
        size_t best_sz = 0;
        for (const auto &[lst, verts] : by_list)
            if (verts.size() > best_sz) {
                best_sz = verts.size();
                C = verts;
            }
        if (C.size() % 2)
            C.pop_back();
        int pmax = n2 / q;
        int p = std::min<int>(static_cast<int>(C.size() / 2), pmax);
        std::vector<std::pair<int, int>> pairs;
        for (int i = 0; i < p; ++i)
            pairs.emplace_back(C[2 * i], C[2 * i + 1]);

        ColoringInstance inst;
        inst.graph = g2;
        inst.k = k;
        inst.lists.assign(lists.begin(), lists.end());
        inst.preferences = pairs;
        auto families = preference_families(inst);

        std::vector<std::vector<int>> raw;
        for (auto [u, v] : pairs) {
            std::vector<int> fam = {v, u};
            for (int w = 1; w <= n2; ++w)
                if (g2.has_edge(u, w))
                    fam.push_back(w);
            raw.push_back(std::move(fam));
        }
        FamilySystem sys = pad_families(n2, raw, raw.empty() ? 0 : q);
        InfantEncoding enc = InfantEncoding::make(sys, 0);
        out.infants_runs.push_back(
            InfantsAccounting{n2, sys.p, sys.q,
                              static_cast<int>(sys.leftover.size()), 0,
                              enc.domain_size, 0});
        if (partition_solve_infants(n2, families, sys)) {
            out.colorable = true;
            return out;
        }
    }
    out.colorable = false;
    return out;
}

// --------------------------------------------------------------- domatic

namespace {

std::vector<u64> dominating_sets(const Graph &g) {
    if (g.n > 20)
        throw StructureError("dominating set enumeration beyond n=20");
    std::vector<u64> closed(g.n + 1, 0);
    for (int v = 1; v <= g.n; ++v)
        closed[v] = g.adj[v] | (1ULL << (v - 1));
    std::vector<u64> out;
    for (u64 mask = 0; mask <= g.full_mask(); ++mask) {
        bool ok = true;
        for (int v = 1; v <= g.n && ok; ++v)
            if (!(closed[v] & mask))
                ok = false;
        if (ok)
            out.push_back(mask);
        if (g.n == 0)
            break;
    }
    return out;
}

} // namespace

DomaticResult domatic_number(const Graph &g) {
    DomaticResult out;
    if (g.n == 0) {
        out.k = 0;
        out.tier = "trivial";
        return out;
    }
    auto dom = dominating_sets(g);
    int cap = g.n;
    for (int v = 1; v <= g.n; ++v)
        cap = std::min(cap, g.degree(v) + 1);

    // infants system: family = closed neighborhood of an independent (in
    // G^2) center plus one extra unused vertex declared the infant
    std::optional<FamilySystem> sys;
    int delta = g.max_degree();
    if (delta >= 1) {
        int q = delta + 2;
        int pmax = g.n / q;
        if (pmax >= 1) {
            int target = std::max(1, g.n / (delta * delta + 2));
            auto greedy = greedy_independent_in_square(g, std::min(target, pmax));
            int p = std::min<int>(greedy.verts.size(), pmax);
            if (p >= 1) {
                std::vector<char> used(g.n + 1, 0);
                std::vector<std::vector<int>> raw;
                for (int i = 0; i < p; ++i) {
                    int c = greedy.verts[i];
                    used[c] = 1;
                    for (int v = 1; v <= g.n; ++v)
                        if (g.has_edge(c, v))
                            used[v] = 1;
                }
                int next = 1;
                for (int i = 0; i < p; ++i) {
                    int c = greedy.verts[i];
                    while (next <= g.n && used[next])
                        ++next;
                    if (next > g.n)
                        break;
                    std::vector<int> fam = {next, c};
                    used[next] = 1;
                    for (int v = 1; v <= g.n; ++v)
                        if (g.has_edge(c, v))
                            fam.push_back(v);
                    raw.push_back(std::move(fam));
                }
                if (static_cast<int>(raw.size()) == p) {
                    try {
                        sys = pad_families(g.n, raw, q);
                    } catch (const SystemError &) {
                        sys.reset();
                    }
                }
            }
        }
    }

    out.tier = sys ? "infants-max" : "fft2n";
    out.fell_back = !sys;
    out.k = 1; // V itself dominates every closed neighborhood
    for (int k = 2; k <= cap; ++k) {
        bool feasible;
        if (sys) {
            InfantEncoding enc = InfantEncoding::make(*sys, 0);
            out.infants_runs.push_back(InfantsAccounting{
                g.n, sys->p, sys->q, static_cast<int>(sys->leftover.size()), 0,
                enc.domain_size, 0});
            feasible = partition_solve_infants(
                g.n, std::vector<std::vector<u64>>(k, dom), *sys);
        } else {
            PartitionProblem prob;
            prob.n = g.n;
            prob.k = k;
            prob.families.assign(k, dom);
            feasible = partition_solve(prob);
        }
        if (!feasible)
            break;
        out.k = k;
    }
    return out;
}

// ------------------------------------------------------------- matchings

LabeledMultigraph contract_for_matchings(const Graph &g) {
    if (g.n % 2 != 0)
        throw StructureError("contract_for_matchings: odd vertex count");
    const int half = g.n / 2;
    auto pairs = complement_matching(g);
    std::vector<int> relabel(g.n + 1, 0);
    int next_pair = 1;
    std::vector<char> placed(g.n + 1, 0);
    for (auto [a, b] : pairs) {
        relabel[a] = next_pair;
        relabel[b] = next_pair + half;
        placed[a] = placed[b] = 1;
        ++next_pair;
    }
    std::vector<int> loose;
    for (int v = 1; v <= g.n; ++v)
        if (!placed[v])
            loose.push_back(v);
    for (size_t i = 0; i + 1 < loose.size(); i += 2) {
        relabel[loose[i]] = next_pair;
        relabel[loose[i + 1]] = next_pair + half;
        ++next_pair;
    }
    LabeledMultigraph out;
    out.n = half;
    out.label_universe = g.n;
    for (auto [x, y] : g.edges()) {
        int i = relabel[x], j = relabel[y];
        LabeledMultigraph::Edge e;
        e.u = (i % half) + 1;
        e.v = (j % half) + 1;
        if (e.u > e.v)
            std::swap(e.u, e.v);
        e.la = std::min(i, j);
        e.lb = std::max(i, j);
        e.loop = e.u == e.v;
        out.edges.push_back(e);
    }
    std::sort(out.edges.begin(), out.edges.end(),
              [](const LabeledMultigraph::Edge &a,
                 const LabeledMultigraph::Edge &b) {
                  return std::tie(a.u, a.v, a.la, a.lb) <
                         std::tie(b.u, b.v, b.la, b.lb);
              });
    for (size_t i = 0; i < out.edges.size(); ++i)
        out.edges[i].id = static_cast<int>(i);
    return out;
}

namespace {

// Dense coefficient list of the canonical closed-walk polynomial: walks
// anchored at their minimum vertex, never revisiting it mid-walk, first
// edge id below the closing edge id, adjacent labels disjoint.  Exponent
// = degree + stride * (sum of 2^(v-1) per visit).
struct CanonicalWalkPoly {
    u64 stride = 0;
    std::vector<u64> coeffs;
};

CanonicalWalkPoly canonical_walk_poly(const LabeledMultigraph &g) {
    const int n = g.n;
    CanonicalWalkPoly out;
    // the standard encoding at d = 0: exponent = degree + (n^2+1)*mask-sum
    out.stride = StandardEncoding::make(n, 0).stride_x;
    u64 mask_sum_max = n ? static_cast<u64>(n) * (1ULL << (n - 1)) : 0;
    out.coeffs.assign(static_cast<size_t>(out.stride * mask_sum_max + n + 1), 0);
    // positional indices give the fixed edge order the direction rule needs
    std::vector<std::vector<int>> incident(n + 1);
    for (size_t i = 0; i < g.edges.size(); ++i) {
        const auto &e = g.edges[i];
        if (e.loop)
            throw StructureError("canonical_walk_poly: self-loop present");
        incident[e.u].push_back(static_cast<int>(i));
        incident[e.v].push_back(static_cast<int>(i));
    }
    auto other = [&](const LabeledMultigraph::Edge &e, int v) {
        return e.u == v ? e.v : e.u;
    };
    auto disjoint = [&](const LabeledMultigraph::Edge &a,
                        const LabeledMultigraph::Edge &b) {
        return a.la != b.la && a.la != b.lb && a.lb != b.la && a.lb != b.lb;
    };
    // state: (current vertex, last edge id) -> mask-sum -> count
    for (int a = 1; a <= n; ++a) {
        for (int e0 : incident[a]) {
            const auto &first = g.edges[e0];
            int b = other(first, a);
            if (b <= a)
                continue; // mid vertices stay above the anchor
            std::map<std::pair<int, int>, SparseExp> state;
            state[{b, e0}][(i128(1) << (a - 1)) + (i128(1) << (b - 1))] = 1;
            for (int len = 2; len <= n; ++len) {
                std::map<std::pair<int, int>, SparseExp> grown;
                for (const auto &[key, exps] : state) {
                    auto [v, last] = key;
                    for (int f : incident[v]) {
                        const auto &fe = g.edges[f];
                        if (!disjoint(fe, g.edges[last]))
                            continue;
                        int w = other(fe, v);
                        if (w == a) {
                            // closing edge: disjoint from the first edge,
                            // canonical direction by edge id
                            if (f <= e0 || !disjoint(fe, first))
                                continue;
                            for (const auto &[mask, c] : exps) {
                                u64 expn = static_cast<u64>(len) +
                                           out.stride * static_cast<u64>(mask);
                                out.coeffs[expn] =
                                    checked_add(out.coeffs[expn], c);
                            }
                            continue;
                        }
                        if (w < a || len == n)
                            continue;
                        auto &dst = grown[{w, f}];
                        for (const auto &[mask, c] : exps) {
                            u64 &slot = dst[mask + (i128(1) << (w - 1))];
                            slot = checked_add(slot, c);
                        }
                    }
                }
                state = std::move(grown);
                if (state.empty())
                    break;
            }
        }
    }
    return out;
}

std::vector<ModPrime> matching_fields(const CanonicalWalkPoly &poly, int n) {
    BigUint sum(0);
    for (u64 c : poly.coeffs)
        sum += c;
    BigUint bound(2); // twice the magnitude bound for the reconstruction
    for (int t = 0; t < std::max(n, 1); ++t)
        bound = bound * (sum + BigUint(1));
    std::vector<ModPrime> fields;
    BigUint prod(1);
    for (u64 m : {998244353ULL, 167772161ULL, 469762049ULL, 754974721ULL}) {
        fields.push_back(make_mod_prime(m));
        prod = prod * BigUint(m);
        if (bound < prod)
            return fields;
    }
    throw ConfigError("matchings: coefficient bound exceeds CRT capacity");
}

} // namespace

std::vector<BigUint> cycle_cover_counts(const LabeledMultigraph &g) {
    const int n = g.n;
    std::vector<BigUint> per_t(n + 1, BigUint(0));
    if (n == 0)
        return per_t;
    CanonicalWalkPoly poly = canonical_walk_poly(g);
    u64 target = StandardEncoding::make(n, 0).target_exponent(0);
    auto fields = matching_fields(poly, n);
    std::vector<std::vector<u64>> residues(n + 1,
                                           std::vector<u64>(fields.size(), 0));
    for (size_t fi = 0; fi < fields.size(); ++fi) {
        const u64 m = fields[fi].q;
        DensePoly base;
        base.modulus = m;
        base.coeffs.resize(poly.coeffs.size());
        for (size_t i = 0; i < poly.coeffs.size(); ++i)
            base.coeffs[i] = poly.coeffs[i] % m;
        DensePoly power = base;
        for (int t = 1; t <= n; ++t) {
            residues[t][fi] = power.coeff(target);
            if (t < n)
                power = multiply_mod(power, base, m);
        }
    }
    u64 factorial = 1;
    for (int t = 1; t <= n; ++t) {
        factorial *= static_cast<u64>(t);
        BigUint c = crt_reconstruct(residues[t], fields);
        u64 rem = c.divmod_u64(factorial);
        if (rem != 0)
            throw OverflowError("cycle_cover_counts: coefficient not divisible "
                                "by t!; internal consistency failure");
        per_t[t] = std::move(c);
    }
    return per_t;
}

namespace {

void matching_subcases(const LabeledMultigraph &g, int used_loops,
                       std::vector<BigUint> &per_t, int &cases) {
    // find a self-loop to branch on
    int loop_idx = -1;
    for (size_t i = 0; i < g.edges.size(); ++i)
        if (g.edges[i].loop) {
            loop_idx = static_cast<int>(i);
            break;
        }
    if (loop_idx < 0) {
        ++cases;
        if (g.n == 0) {
            per_t[used_loops] += BigUint(1);
            return;
        }
        auto counts = cycle_cover_counts(g);
        for (int t = 1; t <= g.n; ++t)
            per_t[used_loops + t] += counts[t];
        return;
    }
    const auto loop = g.edges[loop_idx];
    // without the loop
    {
        LabeledMultigraph rest = g;
        rest.edges.erase(rest.edges.begin() + loop_idx);
        matching_subcases(rest, used_loops, per_t, cases);
    }
    // with the loop: its vertex is covered, everything touching it goes
    {
        LabeledMultigraph rest;
        rest.label_universe = g.label_universe;
        std::vector<int> relabel(g.n + 1, 0);
        int next = 0;
        for (int v = 1; v <= g.n; ++v)
            if (v != loop.u)
                relabel[v] = ++next;
        rest.n = next;
        for (const auto &e : g.edges) {
            if (e.u == loop.u || e.v == loop.u)
                continue;
            auto e2 = e;
            e2.u = relabel[e.u];
            e2.v = relabel[e.v];
            rest.edges.push_back(e2);
        }
        for (size_t i = 0; i < rest.edges.size(); ++i)
            rest.edges[i].id = static_cast<int>(i);
        matching_subcases(rest, used_loops + 1, per_t, cases);
    }
}

} // namespace

MatchingCount count_perfect_matchings(const Graph &g) {
    MatchingCount out;
    if (g.n % 2 != 0) {
        out.total = BigUint(0);
        return out;
    }
    if (g.n == 0) {
        out.total = BigUint(1);
        out.per_t.assign(1, BigUint(1));
        out.selfloop_cases = 1;
        return out;
    }
    LabeledMultigraph contracted = contract_for_matchings(g);
    out.per_t.assign(contracted.n + 1, BigUint(0));
    int cases = 0;
    matching_subcases(contracted, 0, out.per_t, cases);
    out.selfloop_cases = cases;
    out.total = BigUint(0);
    for (const auto &c : out.per_t)
        out.total += c;
    return out;
}

} // namespace exact
