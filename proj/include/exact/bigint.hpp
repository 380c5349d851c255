#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace exact {

// Non-negative arbitrary-precision integer, base 2^32 limbs.
// Only the handful of operations the solvers need: CRT lifting,
// factorial division, comparison and decimal printing.
class BigUint {
  public:
    BigUint() = default;
    BigUint(unsigned long long v);

    static BigUint from_u128(unsigned __int128 v);

    bool is_zero() const { return limbs_.empty(); }
    bool fits_u64() const { return limbs_.size() <= 2; }
    unsigned long long to_u64() const; // throws if it does not fit

    BigUint &operator+=(const BigUint &o);
    BigUint &operator+=(unsigned long long v) { return *this += BigUint(v); }
    BigUint operator+(const BigUint &o) const;
    BigUint operator*(const BigUint &o) const;
    BigUint &mul_u64(unsigned long long v);

    // quotient in-place, remainder returned
    unsigned long long divmod_u64(unsigned long long d);
    unsigned long long mod_u64(unsigned long long d) const;

    int cmp(const BigUint &o) const;
    bool operator==(const BigUint &o) const { return cmp(o) == 0; }
    bool operator!=(const BigUint &o) const { return cmp(o) != 0; }
    bool operator<(const BigUint &o) const { return cmp(o) < 0; }
    bool operator<=(const BigUint &o) const { return cmp(o) <= 0; }
    bool operator>(const BigUint &o) const { return cmp(o) > 0; }

    // number of significant bits (0 for zero)
    size_t bit_length() const;

    std::string to_string() const;

  private:
    void trim();
    std::vector<uint32_t> limbs_; // little-endian, no trailing zeros
};

} // namespace exact
