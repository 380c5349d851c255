#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "exact/bigint.hpp"

namespace exact {

using u64 = unsigned long long;
using u128 = unsigned __int128;
using i128 = __int128;

std::string u128_to_string(u128 v);

// ---------------------------------------------------------------- residues

inline u64 add_mod(u64 a, u64 b, u64 m) {
    u64 s = a + b;
    if (s >= m)
        s -= m;
    return s;
}

inline u64 sub_mod(u64 a, u64 b, u64 m) { return a >= b ? a - b : a + m - b; }

inline u64 mul_mod(u64 a, u64 b, u64 m) {
    return static_cast<u64>(static_cast<u128>(a) * b % m);
}

u64 pow_mod(u64 base, u64 exp, u64 m);

// modular inverse via extended Euclid; throws if gcd != 1
u64 inv_mod(u64 a, u64 m);

// ------------------------------------------------------------- primality

/// Deterministic Miller-Rabin, exact for all 64-bit inputs.
bool is_prime(u64 x);

/// Full factorization by trial division, (prime, exponent) pairs in
/// ascending prime order.
std::vector<std::pair<u64, int>> trial_factor(u64 x);

// ------------------------------------------------------------- ModPrime

/// A prime field with a verified primitive root and the factorization of
/// q-1.  This is the evaluation domain for coefficient extraction.
struct ModPrime {
    u64 q = 0;     // prime modulus
    u64 omega = 0; // primitive root of Z_q^*
    std::vector<std::pair<u64, int>> factors; // of q-1

    // omega^(q-1) = 1 and omega^((q-1)/a) != 1 for every prime factor a
    bool root_is_verified() const;
    std::string to_string() const;
};

ModPrime make_mod_prime(u64 q);

struct PrimeSearchConfig {
    int max_doublings = 1 << 10; // window growth cap, engineering choice
};

/// `count` distinct primes >= N, each with factored q-1 and a verified
/// primitive root.  The search window [N, 2N), [N, 4N), ... doubles until
/// enough primes are found.
std::vector<ModPrime> find_primes(u64 N, int count,
                                  const PrimeSearchConfig &cfg = {});

// ------------------------------------------------------------- DensePoly

/// Coefficient list over Z_m.  Length is a capacity; the degree skips
/// trailing zeros.
struct DensePoly {
    u64 modulus = 0;
    std::vector<u64> coeffs;

    long long degree() const {
        for (size_t i = coeffs.size(); i-- > 0;)
            if (coeffs[i])
                return static_cast<long long>(i);
        return -1;
    }
    u64 coeff(u64 e) const { return e < coeffs.size() ? coeffs[e] : 0; }
};

/// p*r with every coefficient reduced mod m, computed exactly through an
/// NTT prime set combined by CRT.  Throws ConfigError when no available
/// prime set can certify the convolution.
DensePoly multiply_mod(const DensePoly &p, const DensePoly &r, u64 m);

/// Exact integer product of polynomials with non-negative coefficients
/// below W.  Throws OverflowError if an input coefficient violates W or
/// the certified bound 2*W^2*(n+1) exceeds the prime set capacity.
std::vector<u64> multiply_exact(const std::vector<u64> &p,
                                const std::vector<u64> &r, u64 W);

// ------------------------------------------------------------ PolyCircuit

/// Abstract evaluator for a univariate polynomial too large to list:
/// deterministic, pure, non-negative integer coefficients.
struct PolyCircuit {
    u64 degree_bound = 0;
    std::function<u64(u64 x, const ModPrime &field)> eval;
};

/// Coefficient of x^m as (q-1)^{-1} * sum_i omega^{-im} P(omega^i), a
/// streaming pass over all q-1 powers of the root.  Memory does not
/// depend on degree_bound.
u64 extract_coefficient(const PolyCircuit &circuit, u64 m,
                        const ModPrime &field);

/// Same sum for several target exponents sharing the P(omega^i)
/// evaluations.  Partitioning across threads cannot change the output.
std::vector<u64> extract_batch(const PolyCircuit &circuit,
                               const std::vector<u64> &targets,
                               const ModPrime &field, int threads = 1);

/// Unique non-negative integer below prod(q_i) matching every residue.
BigUint crt_reconstruct(const std::vector<u64> &residues,
                        const std::vector<ModPrime> &fields);

// ---------------------------------------------------------------- errors

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string &w) : std::runtime_error(w) {}
};
struct OverflowError : std::runtime_error {
    explicit OverflowError(const std::string &w) : std::runtime_error(w) {}
};

} // namespace exact
