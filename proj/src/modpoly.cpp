#include "exact/modpoly.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <stdexcept>
#include <thread>

namespace exact {

std::string u128_to_string(u128 v) {
    if (v == 0)
        return "0";
    std::string s;
    while (v) {
        s.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
        v /= 10;
    }
    std::reverse(s.begin(), s.end());
    return s;
}

u64 pow_mod(u64 base, u64 exp, u64 m) {
    u64 r = 1 % m;
    base %= m;
    while (exp) {
        if (exp & 1)
            r = mul_mod(r, base, m);
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    return r;
}

u64 inv_mod(u64 a, u64 m) {
    long long t = 0, new_t = 1;
    long long r = static_cast<long long>(m), new_r = static_cast<long long>(a % m);
    while (new_r != 0) {
        long long qq = r / new_r;
        t -= qq * new_t;
        std::swap(t, new_t);
        r -= qq * new_r;
        std::swap(r, new_r);
    }
    if (r != 1)
        throw std::domain_error("inv_mod: not invertible");
    if (t < 0)
        t += static_cast<long long>(m);
    return static_cast<u64>(t);
}

bool is_prime(u64 x) {
    if (x < 2)
        return false;
    for (u64 p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL,
                  29ULL, 31ULL, 37ULL}) {
        if (x % p == 0)
            return x == p;
    }
    u64 d = x - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    // base set proven complete for 64-bit inputs
    for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL,
                  29ULL, 31ULL, 37ULL}) {
        u64 v = pow_mod(a, d, x);
        if (v == 1 || v == x - 1)
            continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            v = mul_mod(v, v, x);
            if (v == x - 1) {
                composite = false;
                break;
            }
        }
        if (composite)
            return false;
    }
    return true;
}

std::vector<std::pair<u64, int>> trial_factor(u64 x) {
    if (x < 2)
        throw std::domain_error("trial_factor: x must be >= 2");
    std::vector<std::pair<u64, int>> out;
    auto strip = [&](u64 p) {
        if (x % p)
            return;
        int e = 0;
        while (x % p == 0) {
            x /= p;
            ++e;
        }
        out.emplace_back(p, e);
    };
    strip(2);
    strip(3);
    for (u64 p = 5; p * p <= x; p += 6) {
        strip(p);
        strip(p + 2);
    }
    if (x > 1)
        out.emplace_back(x, 1);
    return out;
}

bool ModPrime::root_is_verified() const {
    if (q < 3 || omega == 0)
        return false;
    u128 prod = 1;
    for (auto [a, e] : factors) {
        for (int i = 0; i < e; ++i)
            prod *= a;
        if (pow_mod(omega, (q - 1) / a, q) == 1)
            return false;
    }
    if (prod != static_cast<u128>(q - 1))
        return false;
    return pow_mod(omega, q - 1, q) == 1;
}

std::string ModPrime::to_string() const {
    std::string s = "q=" + std::to_string(q) + " omega=" + std::to_string(omega) +
                    " q-1=";
    for (size_t i = 0; i < factors.size(); ++i) {
        if (i)
            s += "*";
        s += std::to_string(factors[i].first);
        if (factors[i].second > 1)
            s += "^" + std::to_string(factors[i].second);
    }
    return s;
}

ModPrime make_mod_prime(u64 q) {
    if (!is_prime(q))
        throw ConfigError("make_mod_prime: q is not prime");
    ModPrime f;
    f.q = q;
    f.factors = trial_factor(q - 1);
    for (u64 g = 2; g < q; ++g) {
        bool ok = true;
        for (auto [a, e] : f.factors) {
            (void)e;
            if (pow_mod(g, (q - 1) / a, q) == 1) {
                ok = false;
                break;
            }
        }
        if (ok) {
            f.omega = g;
            break;
        }
    }
    if (f.omega == 0 || !f.root_is_verified())
        throw ConfigError("make_mod_prime: no primitive root found");
    return f;
}

std::vector<ModPrime> find_primes(u64 N, int count, const PrimeSearchConfig &cfg) {
    if (N < 2 || count < 1)
        throw ConfigError("find_primes: need N >= 2 and count >= 1");
    std::vector<ModPrime> out;
    u64 lo = std::max<u64>(N, 3);
    u64 hi = lo;
    for (int round = 0; round <= cfg.max_doublings; ++round) {
        u64 next = hi <= (~0ULL) / 2 ? std::max(hi * 2, lo + 2) : ~0ULL;
        for (u64 x = hi; x < next && static_cast<int>(out.size()) < count; ++x) {
            if (is_prime(x))
                out.push_back(make_mod_prime(x));
        }
        hi = next;
        if (static_cast<int>(out.size()) >= count)
            return out;
    }
    throw ConfigError("find_primes: window cap exhausted");
}

// ---------------------------------------------------------------- NTT

namespace {

// word-sized primes with high 2-adic valuation of q-1
struct NttPrime {
    u64 mod;
    u64 root;
};
constexpr std::array<NttPrime, 4> kNttPrimes = {{
    {998244353ULL, 3ULL},  // 119 * 2^23 + 1
    {167772161ULL, 3ULL},  // 5 * 2^25 + 1
    {469762049ULL, 3ULL},  // 7 * 2^26 + 1
    {754974721ULL, 11ULL}, // 45 * 2^24 + 1
}};

void ntt(std::vector<u64> &a, const NttPrime &pr, bool invert) {
    const u64 mod = pr.mod;
    const size_t n = a.size();
    for (size_t i = 1, j = 0; i < n; ++i) {
        size_t bit = n >> 1;
        for (; j & bit; bit >>= 1)
            j ^= bit;
        j ^= bit;
        if (i < j)
            std::swap(a[i], a[j]);
    }
    for (size_t len = 2; len <= n; len <<= 1) {
        u64 wn = pow_mod(pr.root, (mod - 1) / len, mod);
        if (invert)
            wn = inv_mod(wn, mod);
        for (size_t i = 0; i < n; i += len) {
            u64 w = 1;
            for (size_t j = 0; j < len / 2; ++j) {
                u64 u = a[i + j];
                u64 v = mul_mod(w, a[i + j + len / 2], mod);
                a[i + j] = add_mod(u, v, mod);
                a[i + j + len / 2] = sub_mod(u, v, mod);
                w = mul_mod(w, wn, mod);
            }
        }
    }
    if (invert) {
        u64 inv_n = inv_mod(n % mod, mod);
        for (auto &x : a)
            x = mul_mod(x, inv_n, mod);
    }
}

std::vector<u64> convolve_mod_prime(const std::vector<u64> &p,
                                    const std::vector<u64> &r,
                                    const NttPrime &pr) {
    size_t out_len = p.size() + r.size() - 1;
    size_t sz = 1;
    while (sz < out_len)
        sz <<= 1;
    std::vector<u64> a(sz, 0), b(sz, 0);
    for (size_t i = 0; i < p.size(); ++i)
        a[i] = p[i] % pr.mod;
    for (size_t i = 0; i < r.size(); ++i)
        b[i] = r[i] % pr.mod;
    ntt(a, pr, false);
    ntt(b, pr, false);
    for (size_t i = 0; i < sz; ++i)
        a[i] = mul_mod(a[i], b[i], pr.mod);
    ntt(a, pr, true);
    a.resize(out_len);
    return a;
}

// Exact convolution of non-negative sequences whose true coefficients are
// < bound, via enough NTT primes and CRT into __int128.
std::vector<u128> convolve_exact_u128(const std::vector<u64> &p,
                                      const std::vector<u64> &r, u128 bound) {
    size_t need = 0;
    u128 prod = 1;
    while (need < kNttPrimes.size() && prod <= bound) {
        prod *= kNttPrimes[need].mod;
        ++need;
    }
    if (prod <= bound)
        throw ConfigError("convolution bound exceeds NTT prime set capacity");
    std::vector<std::vector<u64>> res(need);
    for (size_t i = 0; i < need; ++i)
        res[i] = convolve_mod_prime(p, r, kNttPrimes[i]);
    size_t out_len = res[0].size();
    std::vector<u128> out(out_len);
    // Garner lifting over <= 4 primes fits u128
    for (size_t j = 0; j < out_len; ++j) {
        u128 value = 0;
        u128 mprod = 1;
        for (size_t i = 0; i < need; ++i) {
            u64 qi = kNttPrimes[i].mod;
            u64 have = static_cast<u64>(value % qi);
            u64 want = res[i][j] % qi;
            u64 diff = sub_mod(want, have, qi);
            u64 coef = mul_mod(diff, inv_mod(static_cast<u64>(mprod % qi), qi), qi);
            value += mprod * coef;
            mprod *= qi;
        }
        out[j] = value;
    }
    return out;
}

} // namespace

DensePoly multiply_mod(const DensePoly &p, const DensePoly &r, u64 m) {
    if (p.modulus != m || r.modulus != m)
        throw ConfigError("multiply_mod: operand modulus mismatch");
    if (m < 2)
        throw ConfigError("multiply_mod: modulus must be >= 2");
    DensePoly out;
    out.modulus = m;
    if (p.coeffs.empty() || r.coeffs.empty())
        return out;
    for (auto c : p.coeffs)
        if (c >= m)
            throw ConfigError("multiply_mod: coefficient out of range");
    for (auto c : r.coeffs)
        if (c >= m)
            throw ConfigError("multiply_mod: coefficient out of range");
    // single-prime fast path when m itself is an NTT prime
    for (const auto &pr : kNttPrimes) {
        if (pr.mod == m) {
            out.coeffs = convolve_mod_prime(p.coeffs, r.coeffs, pr);
            return out;
        }
    }
    u128 bound = static_cast<u128>(m - 1) * (m - 1) *
                 std::min(p.coeffs.size(), r.coeffs.size());
    auto wide = convolve_exact_u128(p.coeffs, r.coeffs, bound);
    out.coeffs.resize(wide.size());
    for (size_t i = 0; i < wide.size(); ++i)
        out.coeffs[i] = static_cast<u64>(wide[i] % m);
    return out;
}

std::vector<u64> multiply_exact(const std::vector<u64> &p,
                                const std::vector<u64> &r, u64 W) {
    if (p.empty() || r.empty())
        return {};
    for (auto c : p)
        if (c >= W)
            throw OverflowError("multiply_exact: coefficient >= W");
    for (auto c : r)
        if (c >= W)
            throw OverflowError("multiply_exact: coefficient >= W");
    u128 bound =
        static_cast<u128>(W - 1) * (W - 1) * std::min(p.size(), r.size());
    auto wide = convolve_exact_u128(p, r, bound);
    std::vector<u64> out(wide.size());
    for (size_t i = 0; i < wide.size(); ++i) {
        if (wide[i] > bound)
            throw OverflowError("multiply_exact: lifted value exceeds bound");
        if (wide[i] > ~0ULL)
            throw OverflowError("multiply_exact: coefficient exceeds 64 bits");
        out[i] = static_cast<u64>(wide[i]);
    }
    return out;
}

// ------------------------------------------------------------- extraction

std::vector<u64> extract_batch(const PolyCircuit &circuit,
                               const std::vector<u64> &targets,
                               const ModPrime &field, int threads) {
    const u64 q = field.q;
    if (circuit.degree_bound >= q)
        throw ConfigError("extract: field too small for degree bound");
    for (u64 m : targets)
        if (m >= q)
            throw ConfigError("extract: target exponent outside field range");
    if (threads < 1)
        threads = 1;
    const u64 points = q - 1;
    const u64 inv_omega = inv_mod(field.omega, q);

    // chunk partial sums are combined in fixed index order, so the result
    // is identical for every thread count
    const u64 nchunk = std::min<u64>(points, std::max<u64>(1, threads * 4ULL));
    std::vector<std::vector<u64>> partial(nchunk,
                                          std::vector<u64>(targets.size(), 0));
    auto run_chunk = [&](u64 c) {
        u64 begin = points * c / nchunk;
        u64 end = points * (c + 1) / nchunk;
        if (begin >= end)
            return;
        u64 x = pow_mod(field.omega, begin, q); // omega^i
        std::vector<u64> tw(targets.size());    // omega^{-i*m_t}
        for (size_t t = 0; t < targets.size(); ++t)
            tw[t] = pow_mod(inv_omega, mul_mod(begin % (q - 1), targets[t] % (q - 1), q - 1), q);
        std::vector<u64> tstep(targets.size());
        for (size_t t = 0; t < targets.size(); ++t)
            tstep[t] = pow_mod(inv_omega, targets[t] % (q - 1), q);
        auto &acc = partial[c];
        for (u64 i = begin; i < end; ++i) {
            u64 val = circuit.eval(x, field);
            for (size_t t = 0; t < targets.size(); ++t) {
                acc[t] = add_mod(acc[t], mul_mod(tw[t], val, q), q);
                tw[t] = mul_mod(tw[t], tstep[t], q);
            }
            x = mul_mod(x, field.omega, q);
        }
    };
    if (threads == 1) {
        for (u64 c = 0; c < nchunk; ++c)
            run_chunk(c);
    } else {
        std::vector<std::thread> pool;
        std::atomic<u64> next{0};
        for (int t = 0; t < threads; ++t)
            pool.emplace_back([&] {
                for (u64 c = next.fetch_add(1); c < nchunk; c = next.fetch_add(1))
                    run_chunk(c);
            });
        for (auto &th : pool)
            th.join();
    }
    const u64 inv_count = inv_mod((q - 1) % q, q);
    std::vector<u64> out(targets.size(), 0);
    for (u64 c = 0; c < nchunk; ++c)
        for (size_t t = 0; t < targets.size(); ++t)
            out[t] = add_mod(out[t], partial[c][t], q);
    for (auto &v : out)
        v = mul_mod(v, inv_count, q);
    return out;
}

u64 extract_coefficient(const PolyCircuit &circuit, u64 m, const ModPrime &field) {
    return extract_batch(circuit, {m}, field, 1)[0];
}

BigUint crt_reconstruct(const std::vector<u64> &residues,
                        const std::vector<ModPrime> &fields) {
    if (residues.size() != fields.size() || residues.empty())
        throw ConfigError("crt_reconstruct: size mismatch");
    for (size_t i = 0; i < fields.size(); ++i)
        for (size_t j = i + 1; j < fields.size(); ++j)
            if (fields[i].q == fields[j].q)
                throw ConfigError("crt_reconstruct: duplicate prime");
    // Garner: value = x0 + q0*(x1 + q1*(x2 + ...))
    size_t k = fields.size();
    std::vector<u64> digits(k);
    for (size_t i = 0; i < k; ++i) {
        u64 qi = fields[i].q;
        u64 have = 0, mprod = 1 % qi;
        // evaluate current digits mod qi
        for (size_t j = 0; j < i; ++j) {
            have = add_mod(have, mul_mod(digits[j], mprod, qi), qi);
            mprod = mul_mod(mprod, fields[j].q % qi, qi);
        }
        u64 diff = sub_mod(residues[i] % qi, have, qi);
        digits[i] = mul_mod(diff, inv_mod(mprod, qi), qi);
    }
    BigUint value;
    for (size_t i = k; i-- > 0;) {
        value.mul_u64(fields[i].q);
        value += digits[i];
    }
    return value;
}

} // namespace exact
