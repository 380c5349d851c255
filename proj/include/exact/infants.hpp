#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "exact/modpoly.hpp"

namespace exact {

struct SystemError : std::runtime_error {
    explicit SystemError(const std::string &w) : std::runtime_error(w) {}
};

// ------------------------------------------------------------- systems

/// A (p,q)-system of families with infants over [n]: p pairwise disjoint
/// ordered families of q distinct elements each, position 0 the infant.
/// L is everything outside the families.
struct FamilySystem {
    int n = 0;
    int p = 0;
    int q = 0;
    std::vector<std::vector<int>> families;
    std::vector<int> leftover; // ascending

    u64 leftover_mask() const;
    // fam = -1: leftover element, pos = index within L
    struct Slot {
        int fam = -1;
        int pos = -1;
    };
    std::vector<Slot> slots; // indexed 1..n

    void validate() const;
    std::string dump() const; // one family per line, infant first

    /// Does F (mask) contain a relative for every infant it contains?
    bool respects_infants(u64 F) const;
};

/// Append lowest-index unused elements until every family has exactly q
/// members.  Infants stay at position 0.
FamilySystem pad_families(int n, const std::vector<std::vector<int>> &raw,
                          int q);

// ------------------------------------------------------- matrix coding

/// -row[0] + sum_{j>=1} 2^j row[j]
long long rowcode(const std::vector<long long> &row);

struct MatrixStats {
    u64 colweight0 = 0;
    u64 weight = 0;
    u64 rowsum = 0;
    u128 code = 0; // < (2^q-1)^p for row-normalized 0/1 matrices
};

/// Stats of the p x q characteristic matrix of S within the families.
/// Throws SystemError when S holds an infant without any relative.
MatrixStats matrix_stats(u64 S, const FamilySystem &sys);

// ------------------------------------------------------------- encoding

/// Single-variable exponents for monomials over the system, using the
/// stride chain u1, u2=(n+1)^2, u3=(n+1)^3 2^|L|, u4=(n+1)^5 2^|L|,
/// u5=(n+1)^7 2^|L|, u6=(n+1)^9 2^|L| 2^q, z=(n+1)^10 2^|L| 2^q (2^q-1)^p.
/// Exponents are signed 128-bit; prefix sums of per-visit contributions
/// may dip below zero, complete admissible monomials never do.
struct InfantEncoding {
    int n = 0, p = 0, q = 0;
    u64 d = 0;
    int L_size = 0;
    i128 s1 = 0, s2 = 0, s3 = 0, s4 = 0, s5 = 0, s6 = 0, sz = 0;
    u128 domain_size = 0; // exponent bound sz*(d*n+1)

    static InfantEncoding make(const FamilySystem &sys, u64 d);

    /// Per-visit exponent contribution of vertex v (negative entries for
    /// infant visits come from the signed rowcode digit).
    i128 step_delta(int v, const FamilySystem &sys) const;
    i128 z_delta(u64 w) const { return sz * static_cast<i128>(w); }
};

/// Encode a set monomial; F must respect the infant property.
i128 encode_monomial(u64 F, u64 total_degree, u64 z_degree,
                     const FamilySystem &sys, const InfantEncoding &enc);

/// Exponent of the full-cover monomial at z-degree k.
i128 target_exponent_infants(const FamilySystem &sys, const InfantEncoding &enc,
                             u64 k);

// ------------------------------------------------------------- detection

struct SetMonomial {
    u64 mask = 0;
    u64 z_degree = 0;
    u64 coefficient = 1;
};

struct DetectResult64 {
    u64 k = 0;
    u64 coefficient = 0; // exact
};

struct I128Hash {
    size_t operator()(i128 v) const {
        u128 u = static_cast<u128>(v);
        u64 lo = static_cast<u64>(u), hi = static_cast<u64>(u >> 64);
        u64 x = lo ^ (hi * 0x9e3779b97f4a7c15ULL);
        x ^= x >> 30;
        x *= 0xbf58476d1ce4e5b9ULL;
        x ^= x >> 27;
        return static_cast<size_t>(x);
    }
};

using SparseExp = std::unordered_map<i128, u64, I128Hash>;

struct InfantDetectOptions {
    size_t max_terms = 1 << 23; // sparse product size guard
};

/// Smallest k with the full-cover monomial x_1..x_n z^k in the product of
/// the family polynomials, plus its exact coefficient.  Every factor
/// monomial must respect the infant property; a violation is a hard error.
std::optional<DetectResult64>
detect_min_k_infants(const std::vector<std::vector<SetMonomial>> &factors,
                     const FamilySystem &sys, const InfantEncoding &enc,
                     const InfantDetectOptions &opts = {});

struct PartitionProblem; // kronecker.hpp

bool partition_solve_infants(int n,
                             const std::vector<std::vector<u64>> &families,
                             const FamilySystem &sys);

struct ResourceError : std::runtime_error {
    explicit ResourceError(const std::string &w) : std::runtime_error(w) {}
};

} // namespace exact
