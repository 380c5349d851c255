#include "exact/bigint.hpp"

#include <algorithm>
#include <stdexcept>

namespace exact {

BigUint::BigUint(unsigned long long v) {
    while (v) {
        limbs_.push_back(static_cast<uint32_t>(v & 0xffffffffULL));
        v >>= 32;
    }
}

BigUint BigUint::from_u128(unsigned __int128 v) {
    BigUint r;
    while (v) {
        r.limbs_.push_back(static_cast<uint32_t>(v & 0xffffffffULL));
        v >>= 32;
    }
    return r;
}

void BigUint::trim() {
    while (!limbs_.empty() && limbs_.back() == 0)
        limbs_.pop_back();
}

unsigned long long BigUint::to_u64() const {
    if (limbs_.size() > 2)
        throw std::overflow_error("BigUint::to_u64: value exceeds 64 bits");
    unsigned long long v = 0;
    for (size_t i = limbs_.size(); i-- > 0;)
        v = (v << 32) | limbs_[i];
    return v;
}

BigUint &BigUint::operator+=(const BigUint &o) {
    limbs_.resize(std::max(limbs_.size(), o.limbs_.size()), 0);
    uint64_t carry = 0;
    for (size_t i = 0; i < limbs_.size(); ++i) {
        uint64_t s = carry + limbs_[i] + (i < o.limbs_.size() ? o.limbs_[i] : 0);
        limbs_[i] = static_cast<uint32_t>(s);
        carry = s >> 32;
    }
    if (carry)
        limbs_.push_back(static_cast<uint32_t>(carry));
    return *this;
}

BigUint BigUint::operator+(const BigUint &o) const {
    BigUint r = *this;
    r += o;
    return r;
}

BigUint BigUint::operator*(const BigUint &o) const {
    if (is_zero() || o.is_zero())
        return BigUint();
    BigUint r;
    r.limbs_.assign(limbs_.size() + o.limbs_.size(), 0);
    for (size_t i = 0; i < limbs_.size(); ++i) {
        uint64_t carry = 0;
        for (size_t j = 0; j < o.limbs_.size(); ++j) {
            uint64_t cur = r.limbs_[i + j] +
                           static_cast<uint64_t>(limbs_[i]) * o.limbs_[j] + carry;
            r.limbs_[i + j] = static_cast<uint32_t>(cur);
            carry = cur >> 32;
        }
        size_t k = i + o.limbs_.size();
        while (carry) {
            uint64_t cur = r.limbs_[k] + carry;
            r.limbs_[k] = static_cast<uint32_t>(cur);
            carry = cur >> 32;
            ++k;
        }
    }
    r.trim();
    return r;
}

BigUint &BigUint::mul_u64(unsigned long long v) {
    *this = *this * BigUint(v);
    return *this;
}

unsigned long long BigUint::divmod_u64(unsigned long long d) {
    if (d == 0)
        throw std::domain_error("BigUint: division by zero");
    unsigned __int128 rem = 0;
    for (size_t i = limbs_.size(); i-- > 0;) {
        unsigned __int128 cur = (rem << 32) | limbs_[i];
        limbs_[i] = static_cast<uint32_t>(cur / d);
        rem = cur % d;
    }
    trim();
    return static_cast<unsigned long long>(rem);
}

unsigned long long BigUint::mod_u64(unsigned long long d) const {
    BigUint t = *this;
    return t.divmod_u64(d);
}

int BigUint::cmp(const BigUint &o) const {
    if (limbs_.size() != o.limbs_.size())
        return limbs_.size() < o.limbs_.size() ? -1 : 1;
    for (size_t i = limbs_.size(); i-- > 0;)
        if (limbs_[i] != o.limbs_[i])
            return limbs_[i] < o.limbs_[i] ? -1 : 1;
    return 0;
}

size_t BigUint::bit_length() const {
    if (limbs_.empty())
        return 0;
    uint32_t top = limbs_.back();
    size_t bits = 0;
    while (top) {
        ++bits;
        top >>= 1;
    }
    return bits + 32 * (limbs_.size() - 1);
}

std::string BigUint::to_string() const {
    if (is_zero())
        return "0";
    BigUint t = *this;
    std::string out;
    while (!t.is_zero()) {
        unsigned long long chunk = t.divmod_u64(1000000000ULL);
        for (int k = 0; k < 9; ++k) {
            out.push_back(static_cast<char>('0' + chunk % 10));
            chunk /= 10;
        }
    }
    while (out.size() > 1 && out.back() == '0')
        out.pop_back();
    std::reverse(out.begin(), out.end());
    return out;
}

} // namespace exact
