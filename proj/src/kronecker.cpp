#include "exact/kronecker.hpp"

#include <algorithm>

namespace exact {

namespace {

const std::vector<u64> &detection_moduli() {
    static const std::vector<u64> mods = {998244353ULL, 167772161ULL,
                                          469762049ULL, 754974721ULL};
    return mods;
}

const std::vector<ModPrime> &detection_fields() {
    static const std::vector<ModPrime> fields = [] {
        std::vector<ModPrime> v;
        for (u64 m : detection_moduli())
            v.push_back(make_mod_prime(m));
        return v;
    }();
    return fields;
}

size_t primes_for_bound(const BigUint &bound) {
    BigUint prod(1);
    size_t need = 0;
    while (need < detection_moduli().size() && prod <= bound) {
        prod = prod * BigUint(detection_moduli()[need]);
        ++need;
    }
    if (prod <= bound)
        throw ConfigError("detection coefficient bound exceeds CRT capacity; "
                          "a larger prime set is required");
    return std::max<size_t>(need, 1);
}

} // namespace

StandardEncoding StandardEncoding::make(int n, u64 d) {
    if (n < 1 || n > 30)
        throw EncodingError("StandardEncoding: n out of supported range");
    StandardEncoding e;
    e.n = n;
    e.d = d;
    e.stride_y = d * static_cast<u64>(n) + 1;
    e.stride_x = e.stride_y * (static_cast<u64>(n) * n + 1);
    return e;
}

u64 StandardEncoding::pack(const MultiMonomial &m) const {
    if (m.z_degree >= stride_y)
        throw EncodingError("pack: z_degree exceeds d*n");
    if (m.total_degree > static_cast<u64>(n) * n)
        throw EncodingError("pack: total degree exceeds n^2");
    if (m.vertex_set > full_mask())
        throw EncodingError("pack: vertex set outside [n]");
    return m.z_degree + stride_y * m.total_degree + stride_x * m.vertex_set;
}

MultiMonomial StandardEncoding::unpack(u64 exponent) const {
    MultiMonomial m;
    m.z_degree = exponent % stride_y;
    m.total_degree = (exponent / stride_y) % (static_cast<u64>(n) * n + 1);
    m.vertex_set = exponent / stride_x;
    return m;
}

u64 StandardEncoding::target_exponent(u64 k) const {
    return k + stride_y * static_cast<u64>(n) + stride_x * full_mask();
}

// --------------------------------------------------------------- dense

namespace {

struct DenseProduct {
    std::vector<DensePoly> per_prime; // product residues, same exponents
    std::vector<ModPrime> fields;

    BigUint coefficient(u64 exponent) const {
        std::vector<u64> res(per_prime.size());
        for (size_t i = 0; i < per_prime.size(); ++i)
            res[i] = per_prime[i].coeff(exponent);
        return crt_reconstruct(res, fields);
    }
};

DenseProduct dense_product(const std::vector<std::vector<MultiMonomial>> &factors,
                           const StandardEncoding &enc) {
    BigUint bound(1);
    for (const auto &f : factors) {
        BigUint s(0);
        for (const auto &m : f)
            s += m.coefficient;
        if (s.is_zero())
            s = BigUint(1);
        bound = bound * s;
    }
    size_t nprimes = primes_for_bound(bound);
    DenseProduct out;
    for (size_t i = 0; i < nprimes; ++i)
        out.fields.push_back(detection_fields()[i]);
    for (size_t i = 0; i < nprimes; ++i) {
        u64 mod = out.fields[i].q;
        DensePoly acc;
        acc.modulus = mod;
        acc.coeffs = {1 % mod};
        for (const auto &f : factors) {
            DensePoly packed;
            packed.modulus = mod;
            u64 deg = 0;
            for (const auto &m : f)
                deg = std::max(deg, enc.pack(m));
            packed.coeffs.assign(deg + 1, 0);
            for (const auto &m : f) {
                u64 e = enc.pack(m);
                packed.coeffs[e] = add_mod(packed.coeffs[e], m.coefficient % mod, mod);
            }
            acc = multiply_mod(acc, packed, mod);
        }
        out.per_prime.push_back(std::move(acc));
    }
    return out;
}

// multiply the product by 1 + z + ... + z^k and read the prefix target
BigUint prefix_coefficient(const DenseProduct &prod, const StandardEncoding &enc,
                           u64 k) {
    std::vector<u64> res(prod.per_prime.size());
    u64 target = enc.target_exponent(k);
    for (size_t i = 0; i < prod.per_prime.size(); ++i) {
        const auto &poly = prod.per_prime[i];
        u64 mod = poly.modulus;
        DensePoly device;
        device.modulus = mod;
        device.coeffs.assign(k + 1, 1 % mod);
        DensePoly shifted = multiply_mod(poly, device, mod);
        res[i] = shifted.coeff(target);
    }
    return crt_reconstruct(res, prod.fields);
}

} // namespace

std::optional<DetectResult>
detect_min_k_dense(const std::vector<std::vector<MultiMonomial>> &factors,
                   const StandardEncoding &enc, const DetectOptions &opts) {
    if (static_cast<int>(factors.size()) > enc.n)
        throw EncodingError("detect_min_k_dense: more than n factors");
    for (const auto &f : factors)
        if (f.empty())
            return std::nullopt; // a zero factor kills the product
    DenseProduct prod = dense_product(factors, enc);
    u64 kmax = enc.d * static_cast<u64>(enc.n);
    if (opts.search == KSearch::LadderScan) {
        for (u64 k = 0; k <= kmax; ++k) {
            BigUint c = prod.coefficient(enc.target_exponent(k));
            if (!c.is_zero())
                return DetectResult{k, std::move(c)};
        }
        return std::nullopt;
    }
    // prefix device: coefficient of target(k) in (1+z+...+z^k) * product is
    // the sum of the first k+1 ladder coefficients, monotone in k
    if (prefix_coefficient(prod, enc, kmax).is_zero())
        return std::nullopt;
    u64 lo = 0, hi = kmax;
    while (lo < hi) {
        u64 mid = lo + (hi - lo) / 2;
        if (prefix_coefficient(prod, enc, mid).is_zero())
            lo = mid + 1;
        else
            hi = mid;
    }
    return DetectResult{lo, prod.coefficient(enc.target_exponent(lo))};
}

// --------------------------------------------------------------- stream

namespace {

struct StreamLayout {
    bool use_y = false;
    u64 stride_deg = 0;  // present when use_y
    u64 stride_mask = 0;
    u64 degree_bound = 0;
    u64 target_base = 0; // target exponent at k = 0
};

StreamLayout stream_layout(const std::vector<StreamFactor> &factors,
                           const StandardEncoding &enc) {
    StreamLayout lay;
    u64 zsum = 0, degsum = 0, masksum = 0;
    for (const auto &f : factors) {
        zsum += f.z_bound;
        degsum += f.max_xdegree;
        masksum += f.max_mask_sum;
    }
    u64 n = static_cast<u64>(enc.n);
    if (factors.size() == 1 && factors[0].uniform_xdegree.has_value()) {
        // every monomial of the single factor has the same total degree, so
        // the mask alone separates the target: sum of deg powers of two
        // equal to the full mask forces a permutation of [n]
        lay.use_y = false;
        lay.stride_mask = zsum + 1;
        lay.degree_bound = zsum + lay.stride_mask * masksum;
        lay.target_base = lay.stride_mask * enc.full_mask();
        return lay;
    }
    lay.use_y = true;
    lay.stride_deg = enc.stride_y;
    lay.stride_mask = enc.stride_x;
    if (zsum >= enc.stride_y || degsum > static_cast<u64>(enc.n) * enc.n)
        throw EncodingError("stream: factor degree bounds exceed encoding");
    lay.degree_bound = zsum + lay.stride_deg * degsum + lay.stride_mask * masksum;
    lay.target_base = lay.stride_deg * n + lay.stride_mask * enc.full_mask();
    return lay;
}

PolyCircuit substituted_circuit(const std::vector<StreamFactor> &factors,
                                const StandardEncoding &enc,
                                const StreamLayout &lay) {
    int n = enc.n;
    PolyCircuit c;
    c.degree_bound = lay.degree_bound;
    c.eval = [factors, lay, n](u64 x, const ModPrime &field) -> u64 {
        u64 q = field.q;
        u64 z = x % q;
        u64 xv = pow_mod(x, lay.stride_mask, q);
        u64 yv = lay.use_y ? pow_mod(x, lay.stride_deg, q) : 1;
        std::vector<u64> xs(n + 1, 0);
        u64 sq = xv; // xv^(2^(v-1))
        for (int v = 1; v <= n; ++v) {
            xs[v] = mul_mod(yv, sq, q);
            if (v < n)
                sq = mul_mod(sq, sq, q);
        }
        u64 prod = 1 % q;
        for (const auto &f : factors)
            prod = mul_mod(prod, f.eval(xs, z, field), q);
        return prod;
    };
    return c;
}

} // namespace

std::optional<DetectResult>
detect_min_k_stream(const std::vector<StreamFactor> &factors,
                    const StandardEncoding &enc, const StreamOptions &opts,
                    StreamStats *stats) {
    if (factors.empty() || static_cast<int>(factors.size()) > enc.n)
        throw EncodingError("detect_min_k_stream: bad factor count");
    StreamLayout lay = stream_layout(factors, enc);
    u64 kmax = 0;
    for (const auto &f : factors)
        kmax += f.z_bound;

    // prefix device needs headroom for the extra degree-(k+1) multiplier
    u64 degree_bound = lay.degree_bound +
                       (opts.search == KSearch::PrefixBinarySearch ? kmax : 0);
    std::vector<ModPrime> fields;
    {
        BigUint prod(1);
        u64 from = degree_bound + 2;
        while (prod <= opts.coefficient_bound ||
               fields.size() < 1) {
            auto more = find_primes(from, 1);
            fields.push_back(more[0]);
            prod = prod * BigUint(more[0].q);
            from = more[0].q + 1;
        }
    }
    if (stats) {
        stats->domain_bound = lay.degree_bound;
        stats->moduli.clear();
        for (const auto &f : fields)
            stats->moduli.push_back(f.q);
    }
    PolyCircuit circuit = substituted_circuit(factors, enc, lay);

    auto ladder_coefficients = [&]() {
        std::vector<u64> targets(kmax + 1);
        for (u64 k = 0; k <= kmax; ++k)
            targets[k] = lay.target_base + k;
        std::vector<std::vector<u64>> res;
        for (const auto &f : fields)
            res.push_back(extract_batch(circuit, targets, f, opts.threads));
        return res;
    };

    if (opts.search == KSearch::LadderScan) {
        auto res = ladder_coefficients();
        for (u64 k = 0; k <= kmax; ++k) {
            std::vector<u64> digits(fields.size());
            bool all_zero = true;
            for (size_t i = 0; i < fields.size(); ++i) {
                digits[i] = res[i][k];
                all_zero = all_zero && digits[i] == 0;
            }
            if (!all_zero) {
                BigUint c = crt_reconstruct(digits, fields);
                if (!c.is_zero())
                    return DetectResult{k, std::move(c)};
            }
        }
        return std::nullopt;
    }

    // binary search on k over the prefix polynomial (1+z+...+z^k)*Q'
    auto prefix_value = [&](u64 k) {
        PolyCircuit pc;
        pc.degree_bound = degree_bound;
        pc.eval = [&circuit, k](u64 x, const ModPrime &field) -> u64 {
            u64 q = field.q;
            u64 base = circuit.eval(x, field);
            // (x^{k+1} - 1) / (x - 1), with the pole at x = 1 handled exactly
            u64 dev;
            if (x % q == 1)
                dev = (k + 1) % q;
            else {
                u64 num = sub_mod(pow_mod(x, k + 1, q), 1 % q, q);
                dev = mul_mod(num, inv_mod(sub_mod(x % q, 1 % q, q), q), q);
            }
            return mul_mod(base, dev, q);
        };
        std::vector<u64> digits(fields.size());
        for (size_t i = 0; i < fields.size(); ++i)
            digits[i] = extract_batch(pc, {lay.target_base + k}, fields[i],
                                      opts.threads)[0];
        return crt_reconstruct(digits, fields);
    };
    if (prefix_value(kmax).is_zero())
        return std::nullopt;
    u64 lo = 0, hi = kmax;
    while (lo < hi) {
        u64 mid = lo + (hi - lo) / 2;
        if (prefix_value(mid).is_zero())
            lo = mid + 1;
        else
            hi = mid;
    }
    std::vector<u64> digits(fields.size());
    for (size_t i = 0; i < fields.size(); ++i)
        digits[i] = extract_batch(circuit, {lay.target_base + lo}, fields[i],
                                  opts.threads)[0];
    return DetectResult{lo, crt_reconstruct(digits, fields)};
}

// ------------------------------------------------------------- partition

bool partition_solve(const PartitionProblem &problem) {
    if (problem.k < 1 || problem.k > problem.n)
        throw EncodingError("partition_solve: need 1 <= k <= n");
    if (static_cast<int>(problem.families.size()) != problem.k)
        throw EncodingError("partition_solve: family count != k");
    StandardEncoding enc = StandardEncoding::make(problem.n, 0);
    std::vector<std::vector<MultiMonomial>> factors;
    for (const auto &family : problem.families) {
        std::vector<MultiMonomial> f;
        for (u64 mask : family) {
            if (mask > enc.full_mask())
                throw EncodingError("partition_solve: subset outside [n]");
            MultiMonomial m;
            m.vertex_set = mask;
            m.total_degree = static_cast<u64>(__builtin_popcountll(mask));
            f.push_back(m);
        }
        factors.push_back(std::move(f));
    }
    auto r = detect_min_k_dense(factors, enc);
    return r.has_value() && r->k == 0;
}

} // namespace exact
