#pragma once

#include <optional>
#include <vector>

#include "exact/modpoly.hpp"

namespace exact {

struct EncodingError : std::runtime_error {
    explicit EncodingError(const std::string &w) : std::runtime_error(w) {}
};

// ------------------------------------------------------------ monomials

/// Monomial over x_1..x_n and the weight variable z.  vertex_set uses bit
/// i-1 for element i.
struct MultiMonomial {
    u64 vertex_set = 0;
    u64 total_degree = 0;
    u64 z_degree = 0;
    u64 coefficient = 1;
};

/// Kronecker substitution strides: z gets stride 1, the total-degree
/// variable stride d*n+1 and the vertex mask stride (d*n+1)*(n^2+1).
struct StandardEncoding {
    int n = 0;
    u64 d = 0; // per-factor z-degree bound
    u64 stride_y = 1;
    u64 stride_x = 1;

    static StandardEncoding make(int n, u64 d);

    u64 pack(const MultiMonomial &m) const;
    MultiMonomial unpack(u64 exponent) const; // coefficient not recovered
    u64 target_exponent(u64 k) const;
    u64 full_mask() const { return (n >= 64) ? ~0ULL : ((1ULL << n) - 1); }
};

// ------------------------------------------------------------ detection

struct DetectResult {
    u64 k = 0;
    BigUint coefficient;
};

enum class KSearch {
    LadderScan,        // read every target exponent in one pass
    PrefixBinarySearch // (1+z+...+z^k) device with binary search on k
};

struct DetectOptions {
    KSearch search = KSearch::LadderScan;
    int threads = 1;
};

/// Smallest k with x_1..x_n z^k in the product of the factors (missing
/// factors act as the constant 1), with its exact coefficient.  Factors
/// are packed to DensePoly over a CRT prime set and multiplied with
/// modpoly.
std::optional<DetectResult>
detect_min_k_dense(const std::vector<std::vector<MultiMonomial>> &factors,
                   const StandardEncoding &enc, const DetectOptions &opts = {});

/// Factor of a product polynomial given as an evaluation circuit.
/// eval receives x values indexed 1..n (slot 0 unused) and a z value.
struct StreamFactor {
    u64 z_bound = 0;     // max z-degree of this factor
    u64 max_xdegree = 0; // max total x-degree of a monomial
    u64 max_mask_sum = 0; // max value of sum_steps 2^(v-1) over a monomial
    // set when every monomial of the factor has the same total x-degree;
    // a single such factor needs no degree guard in the substitution
    std::optional<u64> uniform_xdegree;
    std::function<u64(const std::vector<u64> &xs, u64 z, const ModPrime &)> eval;
};

struct StreamOptions {
    BigUint coefficient_bound = BigUint(1); // declared W for CRT sizing
    KSearch search = KSearch::LadderScan;
    int threads = 1;
};

struct StreamStats {
    u64 domain_bound = 0; // exponent bound of the substituted polynomial
    std::vector<u64> moduli;
};

std::optional<DetectResult>
detect_min_k_stream(const std::vector<StreamFactor> &factors,
                    const StandardEncoding &enc, const StreamOptions &opts,
                    StreamStats *stats = nullptr);

// ------------------------------------------------------- partition solve

/// Represent [n] as a disjoint union of k sets, one from each family.
struct PartitionProblem {
    int n = 0;
    int k = 0;
    std::vector<std::vector<u64>> families; // admissible subsets as masks
};

bool partition_solve(const PartitionProblem &problem);

} // namespace exact
