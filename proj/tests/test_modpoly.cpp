#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "exact/modpoly.hpp"
#include "exact/oracle.hpp"

using namespace exact;

TEST_CASE("multiply_mod identities") {
    DensePoly a{97, {1, 1}}; // 1 + x
    DensePoly b{97, {1, 1}};
    auto c = multiply_mod(a, b, 97);
    CHECK(c.coeffs == std::vector<u64>{1, 2, 1});

    DensePoly p{101, {3}};
    DensePoly r{101, {5}};
    CHECK(multiply_mod(p, r, 101).coeffs == std::vector<u64>{15});
}

TEST_CASE("multiply_mod rejects mismatched moduli") {
    DensePoly a{97, {1}};
    DensePoly b{101, {1}};
    CHECK_THROWS_AS(multiply_mod(a, b, 97), ConfigError);
}

TEST_CASE("multiply_mod matches schoolbook on random degree-100 inputs") {
    std::mt19937_64 rng(7);
    const u64 m = 1000003;
    for (int it = 0; it < 20; ++it) {
        DensePoly a{m, {}}, b{m, {}};
        for (int i = 0; i <= 100; ++i) {
            a.coeffs.push_back(rng() % m);
            b.coeffs.push_back(rng() % m);
        }
        auto prod = multiply_mod(a, b, m);
        auto ref = oracle::schoolbook_multiply(a.coeffs, b.coeffs);
        REQUIRE(prod.coeffs.size() == ref.size());
        for (size_t i = 0; i < ref.size(); ++i)
            CHECK(prod.coeffs[i] == static_cast<u64>(ref[i] % m));
    }
}

TEST_CASE("multiply_exact binomial and convolution counts") {
    // (1+x)^4 via two squarings
    auto sq = multiply_exact({1, 1}, {1, 1}, 16);
    auto quad = multiply_exact(sq, sq, 16);
    CHECK(quad == std::vector<u64>{1, 4, 6, 4, 1});

    std::vector<u64> ones(10, 1);
    auto conv = multiply_exact(ones, ones, 2);
    CHECK(conv[9] == 10);
}

TEST_CASE("multiply_exact random vs schoolbook") {
    std::mt19937_64 rng(11);
    for (int it = 0; it < 50; ++it) {
        size_t da = 1 + rng() % 200, db = 1 + rng() % 200;
        std::vector<u64> a(da), b(db);
        for (auto &x : a)
            x = rng() % (1 << 20);
        for (auto &x : b)
            x = rng() % (1 << 20);
        auto got = multiply_exact(a, b, 1 << 20);
        auto ref = oracle::schoolbook_multiply(a, b);
        REQUIRE(got.size() == ref.size());
        for (size_t i = 0; i < got.size(); ++i)
            CHECK(static_cast<u128>(got[i]) == ref[i]);
    }
}

TEST_CASE("multiply_exact coefficient bound is enforced") {
    CHECK_THROWS_AS(multiply_exact({5}, {1}, 5), OverflowError);
}

TEST_CASE("find_primes returns verified roots") {
    auto primes = find_primes(10, 2);
    REQUIRE(primes.size() == 2);
    for (const auto &f : primes) {
        CHECK(f.q >= 10);
        CHECK(is_prime(f.q));
        CHECK(f.root_is_verified());
    }
    CHECK(primes[0].q != primes[1].q);

    auto one = find_primes(2, 1);
    CHECK(one[0].q >= 2);

    auto big = find_primes(1000000, 3);
    u128 prod = 1;
    for (const auto &f : big)
        prod *= f.q;
    CHECK(prod > static_cast<u128>(1000000000000000000ULL));
}

TEST_CASE("is_prime and trial_factor basics") {
    CHECK(is_prime(97));
    CHECK_FALSE(is_prime(96));
    auto f96 = trial_factor(96);
    REQUIRE(f96.size() == 2);
    CHECK(f96[0] == std::pair<u64, int>{2, 5});
    CHECK(f96[1] == std::pair<u64, int>{3, 1});

    std::mt19937_64 rng(3);
    for (int it = 0; it < 5; ++it) {
        u64 a = 0, b = 0;
        while (!is_prime(a))
            a = (rng() % (1 << 20)) + (1 << 19);
        while (!is_prime(b))
            b = (rng() % (1 << 20)) + (1 << 19);
        auto fs = trial_factor(a * b);
        u64 back = 1;
        for (auto [p, e] : fs)
            for (int i = 0; i < e; ++i)
                back *= p;
        CHECK(back == a * b);
        for (auto [p, e] : fs) {
            (void)e;
            CHECK(is_prime(p));
        }
    }
}

TEST_CASE("extract_coefficient on binomial and sparse circuits") {
    auto field = find_primes(20, 1)[0]; // q > 8 suffices for degree 8
    PolyCircuit c;
    c.degree_bound = 8;
    c.eval = [](u64 x, const ModPrime &f) {
        // (1+x)^8
        u64 b = add_mod(1, x % f.q, f.q);
        return pow_mod(b, 8, f.q);
    };
    CHECK(extract_coefficient(c, 2, field) == 28 % field.q);

    PolyCircuit mono;
    mono.degree_bound = 5;
    mono.eval = [](u64 x, const ModPrime &f) { return pow_mod(x, 5, f.q); };
    CHECK(extract_coefficient(mono, 5, field) == 1);
    CHECK(extract_coefficient(mono, 3, field) == 0);
}

TEST_CASE("extract_coefficient field too small") {
    auto field = find_primes(5, 1)[0];
    PolyCircuit c;
    c.degree_bound = field.q;
    c.eval = [](u64, const ModPrime &) { return 0ULL; };
    CHECK_THROWS_AS(extract_coefficient(c, 0, field), ConfigError);
}

TEST_CASE("streaming extraction equals dense lookup on random polynomials") {
    std::mt19937_64 rng(23);
    auto field = find_primes(600, 1)[0];
    for (int it = 0; it < 10; ++it) {
        size_t deg = 50 + rng() % 200;
        std::vector<u64> coeffs(deg + 1, 0);
        for (int t = 0; t < 30; ++t)
            coeffs[rng() % (deg + 1)] = rng() % 1000;
        PolyCircuit horner;
        horner.degree_bound = deg;
        horner.eval = [&coeffs](u64 x, const ModPrime &f) {
            u64 acc = 0;
            for (size_t i = coeffs.size(); i-- > 0;)
                acc = add_mod(mul_mod(acc, x % f.q, f.q), coeffs[i] % f.q, f.q);
            return acc;
        };
        for (int probe = 0; probe < 5; ++probe) {
            u64 m = rng() % (deg + 1);
            CHECK(extract_coefficient(horner, m, field) == coeffs[m] % field.q);
        }
    }
}

TEST_CASE("extraction is thread-count invariant") {
    auto field = find_primes(300, 1)[0];
    PolyCircuit c;
    c.degree_bound = 64;
    c.eval = [](u64 x, const ModPrime &f) {
        u64 b = add_mod(2, x % f.q, f.q);
        return pow_mod(b, 64, f.q);
    };
    std::vector<u64> targets = {0, 1, 31, 64};
    auto a = extract_batch(c, targets, field, 1);
    auto b = extract_batch(c, targets, field, 2);
    auto d = extract_batch(c, targets, field, 7);
    CHECK(a == b);
    CHECK(a == d);
}

TEST_CASE("crt_reconstruct basics and 150-bit round trip") {
    auto f3 = make_mod_prime(3), f5 = make_mod_prime(5);
    CHECK(crt_reconstruct({1, 1}, {f3, f5}).to_u64() == 1);
    CHECK(crt_reconstruct({2, 3}, {f3, f5}).to_u64() == 8);

    // five ~31-bit primes cover 150 bits
    auto fields = find_primes(1ULL << 30, 5);
    std::mt19937_64 rng(99);
    for (int it = 0; it < 10; ++it) {
        BigUint value(0);
        for (int limb = 0; limb < 3; ++limb) {
            value.mul_u64(1ULL << 50);
            value += rng() & ((1ULL << 50) - 1);
        }
        std::vector<u64> residues;
        for (const auto &f : fields)
            residues.push_back(value.mod_u64(f.q));
        CHECK(crt_reconstruct(residues, fields) == value);
    }
}

TEST_CASE("extraction over two primes CRT-reconstructs exact coefficients") {
    // product 401*409 exceeds twice the recovered value
    auto fields = find_primes(400, 2);
    PolyCircuit c;
    c.degree_bound = 64;
    c.eval = [](u64 x, const ModPrime &f) {
        u64 b = add_mod(1, x % f.q, f.q);
        return pow_mod(b, 64, f.q);
    };
    std::vector<u64> residues;
    for (const auto &f : fields)
        residues.push_back(extract_coefficient(c, 3, f));
    BigUint got = crt_reconstruct(residues, fields);
    CHECK(got.to_u64() == 41664); // C(64,3)
}

TEST_CASE("ModPrime serializes as decimal text") {
    auto f = make_mod_prime(97);
    CHECK(f.to_string() == "q=97 omega=5 q-1=2^5*3");
}

TEST_CASE("BigUint string and division behavior") {
    BigUint v(123456789012345678ULL);
    v.mul_u64(1000000007ULL);
    CHECK(v.to_string() == "123456789876543201086419746");
    CHECK(v.mod_u64(1000000007ULL) == 0);
}
