#include "exact/infants.hpp"

#include <algorithm>
#include <cmath>

namespace exact {

u64 FamilySystem::leftover_mask() const {
    u64 m = 0;
    for (int v : leftover)
        m |= 1ULL << (v - 1);
    return m;
}

void FamilySystem::validate() const {
    if (n < 0 || p < 0 || q < 0)
        throw SystemError("FamilySystem: negative size");
    if (static_cast<int>(families.size()) != p)
        throw SystemError("FamilySystem: family count != p");
    if (static_cast<long long>(p) * q > n)
        throw SystemError("FamilySystem: p*q > n");
    if (p > 0 && q < 2)
        throw SystemError("FamilySystem: families need an infant and a relative");
    std::vector<char> seen(n + 1, 0);
    for (const auto &fam : families) {
        if (static_cast<int>(fam.size()) != q)
            throw SystemError("FamilySystem: family size != q");
        for (int v : fam) {
            if (v < 1 || v > n)
                throw SystemError("FamilySystem: element outside [n]");
            if (seen[v]++)
                throw SystemError("FamilySystem: families not disjoint");
        }
    }
    for (int v : leftover) {
        if (v < 1 || v > n || seen[v]++)
            throw SystemError("FamilySystem: bad leftover set");
    }
    for (int v = 1; v <= n; ++v)
        if (!seen[v])
            throw SystemError("FamilySystem: element missing from families+L");
}

std::string FamilySystem::dump() const {
    std::string s;
    for (const auto &fam : families) {
        for (size_t j = 0; j < fam.size(); ++j) {
            if (j)
                s += ' ';
            s += std::to_string(fam[j]);
        }
        s += '\n';
    }
    return s;
}

bool FamilySystem::respects_infants(u64 F) const {
    for (const auto &fam : families) {
        if (!(F >> (fam[0] - 1) & 1))
            continue;
        bool relative = false;
        for (size_t j = 1; j < fam.size(); ++j)
            if (F >> (fam[j] - 1) & 1) {
                relative = true;
                break;
            }
        if (!relative)
            return false;
    }
    return true;
}

static void index_slots(FamilySystem &sys) {
    sys.slots.assign(sys.n + 1, {});
    for (int i = 0; i < sys.p; ++i)
        for (int j = 0; j < sys.q; ++j)
            sys.slots[sys.families[i][j]] = {i, j};
    for (size_t j = 0; j < sys.leftover.size(); ++j)
        sys.slots[sys.leftover[j]] = {-1, static_cast<int>(j)};
}

FamilySystem pad_families(int n, const std::vector<std::vector<int>> &raw,
                          int q) {
    FamilySystem sys;
    sys.n = n;
    sys.p = static_cast<int>(raw.size());
    sys.q = q;
    if (static_cast<long long>(sys.p) * q > n)
        throw SystemError("pad_families: p*q > n");
    std::vector<char> used(n + 1, 0);
    for (const auto &fam : raw) {
        if (fam.empty() || static_cast<int>(fam.size()) > q)
            throw SystemError("pad_families: raw family size out of range");
        for (int v : fam) {
            if (v < 1 || v > n || used[v])
                throw SystemError("pad_families: raw families invalid");
            used[v] = 1;
        }
    }
    sys.families = raw;
    int next = 1;
    for (auto &fam : sys.families) {
        while (static_cast<int>(fam.size()) < q) {
            while (next <= n && used[next])
                ++next;
            if (next > n)
                throw SystemError("pad_families: not enough unused elements");
            used[next] = 1;
            fam.push_back(next);
        }
    }
    for (int v = 1; v <= n; ++v)
        if (!used[v])
            sys.leftover.push_back(v);
    sys.validate();
    index_slots(sys);
    return sys;
}

long long rowcode(const std::vector<long long> &row) {
    long long c = row.empty() ? 0 : -row[0];
    for (size_t j = 1; j < row.size(); ++j)
        c += (1LL << j) * row[j];
    return c;
}

MatrixStats matrix_stats(u64 S, const FamilySystem &sys) {
    MatrixStats st;
    u128 base_pow = 1;
    const u128 base = sys.q >= 1 ? (u128(1) << sys.q) - 1 : 1;
    for (int i = 0; i < sys.p; ++i) {
        long long rc = 0;
        bool has_infant = false, has_relative = false;
        for (int j = 0; j < sys.q; ++j) {
            int v = sys.families[i][j];
            if (!(S >> (v - 1) & 1))
                continue;
            ++st.weight;
            if (j == 0) {
                ++st.colweight0;
                has_infant = true;
                rc -= 1;
            } else {
                has_relative = true;
                rc += 1LL << j;
            }
        }
        if (has_infant && !has_relative)
            throw SystemError("matrix_stats: row-normalization violation "
                              "(infant without relative)");
        st.rowsum += static_cast<u64>(rc);
        st.code += base_pow * static_cast<u128>(rc);
        base_pow *= base;
    }
    return st;
}

InfantEncoding InfantEncoding::make(const FamilySystem &sys, u64 d) {
    InfantEncoding e;
    e.n = sys.n;
    e.p = sys.p;
    e.q = sys.p > 0 ? sys.q : 0;
    e.d = d;
    e.L_size = static_cast<int>(sys.leftover.size());
    const i128 np1 = sys.n + 1;
    auto pw = [&](int k) {
        i128 r = 1;
        for (int i = 0; i < k; ++i)
            r *= np1;
        return r;
    };
    const i128 twoL = i128(1) << e.L_size;
    const i128 twoq = i128(1) << e.q;
    i128 codebase = 1; // (2^q - 1)^p
    for (int i = 0; i < e.p; ++i)
        codebase *= twoq - 1;
    e.s1 = 1;
    e.s2 = pw(2);
    e.s3 = pw(3) * twoL;
    e.s4 = pw(5) * twoL;
    e.s5 = pw(7) * twoL;
    e.s6 = pw(9) * twoL * twoq;
    e.sz = pw(10) * twoL * twoq * codebase;
    e.domain_size =
        static_cast<u128>(e.sz) * (d * static_cast<u64>(sys.n) + 1);
    return e;
}

i128 InfantEncoding::step_delta(int v, const FamilySystem &sys) const {
    const auto &slot = sys.slots.at(v);
    if (slot.fam < 0)
        return s1 + s2 * (i128(1) << slot.pos);
    i128 codebase = 1;
    const i128 base = (i128(1) << q) - 1;
    for (int i = 0; i < slot.fam; ++i)
        codebase *= base;
    if (slot.pos == 0) // infant visit: signed rowcode digit -1
        return s3 + s4 - s5 - s6 * codebase;
    i128 bit = i128(1) << slot.pos;
    return s4 + s5 * bit + s6 * codebase * bit;
}

i128 encode_monomial(u64 F, u64 total_degree, u64 z_degree,
                     const FamilySystem &sys, const InfantEncoding &enc) {
    if (total_degree != static_cast<u64>(__builtin_popcountll(F)))
        throw SystemError("encode_monomial: set monomials are multilinear");
    if (!sys.respects_infants(F))
        throw SystemError("encode_monomial: infant property violated");
    i128 e = enc.z_delta(z_degree);
    for (int v = 1; v <= sys.n; ++v)
        if (F >> (v - 1) & 1)
            e += enc.step_delta(v, sys);
    return e;
}

i128 target_exponent_infants(const FamilySystem &sys, const InfantEncoding &enc,
                             u64 k) {
    u64 full = sys.n >= 64 ? ~0ULL : (1ULL << sys.n) - 1;
    return encode_monomial(full, sys.n, k, sys, enc);
}

// ------------------------------------------------------------- detection

namespace {

u64 checked_add(u64 a, u64 b) {
    u64 s;
    if (__builtin_add_overflow(a, b, &s))
        throw OverflowError("infants detection: coefficient overflow");
    return s;
}

u64 checked_mul(u64 a, u64 b) {
    u64 s;
    if (__builtin_mul_overflow(a, b, &s))
        throw OverflowError("infants detection: coefficient overflow");
    return s;
}

SparseExp sparse_mul(const SparseExp &a, const SparseExp &b, size_t cap) {
    if (a.size() > cap / std::max<size_t>(b.size(), 1))
        throw ResourceError("infants detection: sparse product too large");
    SparseExp out;
    out.reserve(a.size());
    for (const auto &[ea, ca] : a)
        for (const auto &[eb, cb] : b) {
            u64 &slot = out[ea + eb];
            slot = checked_add(slot, checked_mul(ca, cb));
        }
    if (out.size() > cap)
        throw ResourceError("infants detection: sparse product too large");
    return out;
}

} // namespace

std::optional<DetectResult64>
detect_min_k_infants(const std::vector<std::vector<SetMonomial>> &factors,
                     const FamilySystem &sys, const InfantEncoding &enc,
                     const InfantDetectOptions &opts) {
    if (factors.empty() || static_cast<int>(factors.size()) > sys.n)
        throw SystemError("detect_min_k_infants: bad factor count");
    std::vector<SparseExp> encoded;
    for (const auto &f : factors) {
        SparseExp e;
        e.reserve(f.size());
        for (const auto &m : f) {
            if (!sys.respects_infants(m.mask))
                throw SystemError(
                    "detect_min_k_infants: factor monomial violates the "
                    "infant property; the system is invalid for this input");
            i128 key = encode_monomial(
                m.mask, static_cast<u64>(__builtin_popcountll(m.mask)),
                m.z_degree, sys, enc);
            u64 &slot = e[key];
            slot = checked_add(slot, m.coefficient);
        }
        if (e.empty())
            return std::nullopt;
        encoded.push_back(std::move(e));
    }
    // balanced halves keep the intermediate sparse products small; the
    // final pairing only touches the target ladder
    std::sort(encoded.begin(), encoded.end(),
              [](const SparseExp &a, const SparseExp &b) {
                  return a.size() < b.size();
              });
    SparseExp left, right;
    double lsz = 0, rsz = 0;
    for (auto &e : encoded) {
        double lg = std::log2(std::max<size_t>(2, e.size()));
        if (lsz <= rsz) {
            left = left.empty() ? std::move(e) : sparse_mul(left, e, opts.max_terms);
            lsz += lg;
        } else {
            right = right.empty() ? std::move(e) : sparse_mul(right, e, opts.max_terms);
            rsz += lg;
        }
    }
    if (right.empty())
        right[0] = 1;
    if (left.size() > right.size())
        std::swap(left, right);
    u64 kmax = enc.d * static_cast<u64>(sys.n);
    for (u64 k = 0; k <= kmax; ++k) {
        i128 target = target_exponent_infants(sys, enc, k);
        u64 total = 0;
        for (const auto &[e, c] : left) {
            auto it = right.find(target - e);
            if (it != right.end())
                total = checked_add(total, checked_mul(c, it->second));
        }
        if (total)
            return DetectResult64{k, total};
    }
    return std::nullopt;
}

bool partition_solve_infants(int n,
                             const std::vector<std::vector<u64>> &families,
                             const FamilySystem &sys) {
    if (sys.n != n)
        throw SystemError("partition_solve_infants: system size mismatch");
    std::vector<std::vector<SetMonomial>> factors;
    for (const auto &family : families) {
        std::vector<SetMonomial> f;
        for (u64 mask : family)
            f.push_back({mask, 0, 1});
        factors.push_back(std::move(f));
    }
    InfantEncoding enc = InfantEncoding::make(sys, 0);
    auto r = detect_min_k_infants(factors, sys, enc);
    return r.has_value() && r->k == 0;
}

} // namespace exact
