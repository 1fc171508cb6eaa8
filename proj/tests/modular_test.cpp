#include <gtest/gtest.h>

#include <random>

#include "oracle.hpp"
#include "projheight/modular.hpp"

using namespace projheight;

TEST(ModReduce, Examples) {
    EXPECT_EQ(mod_reduce(25, PrimeModulus(11)).value(), 3);
    EXPECT_EQ(mod_reduce(-1, PrimeModulus(7)).value(), 6);
    EXPECT_EQ(mod_reduce(0, PrimeModulus(5)).value(), 0);
}

TEST(ModReduce, RangeAndCongruence) {
    std::mt19937_64 rng(20261019);
    std::uniform_int_distribution<std::int64_t> any(-(std::int64_t{1} << 40), std::int64_t{1} << 40);
    for (std::int64_t prime : {3, 5, 7, 101, 997, 2147483647}) {
        const PrimeModulus p(prime);
        for (int t = 0; t < 500; ++t) {
            const auto x = any(rng);
            const auto r = mod_reduce(x, p).value();
            EXPECT_GE(r, 0);
            EXPECT_LT(r, prime);
            EXPECT_EQ((x - r) % prime, 0);
        }
    }
}

TEST(ModInverse, Examples) {
    // expected values come from scanning k = 1..p-1
    EXPECT_EQ(oracle::inverse_by_scan(2, 11), 6);
    EXPECT_EQ(oracle::inverse_by_scan(3, 7), 5);
    EXPECT_EQ(mod_inverse(Residue(1, PrimeModulus(13)), PrimeModulus(13)).value(), 1);
    EXPECT_EQ(mod_inverse(Residue(2, PrimeModulus(11)), PrimeModulus(11)).value(), 6);
    EXPECT_EQ(mod_inverse(Residue(3, PrimeModulus(7)), PrimeModulus(7)).value(), 5);
}

TEST(ModInverse, ZeroHasNoInverse) {
    const PrimeModulus p(7);
    EXPECT_THROW(mod_inverse(Residue(0, p), p), InputError);
    EXPECT_THROW(mod_inverse(Residue(14, p), p), InputError);
}

TEST(ModInverse, AgreesWithScanForSmallPrimes) {
    for (auto prime : primes_between(2, 200)) {
        const PrimeModulus p(prime);
        for (std::int64_t a = 1; a < prime; ++a) {
            const auto inv = mod_inverse(Residue(a, p), p);
            EXPECT_EQ(inv.value(), oracle::inverse_by_scan(a, prime));
            EXPECT_EQ((Residue(a, p) * inv).value(), 1);
        }
    }
}

TEST(ModInverse, LargestModulusDoesNotOverflow) {
    const PrimeModulus p(kMaxModulus);
    const Residue a(kMaxModulus - 1, p);
    EXPECT_EQ((a * mod_inverse(a, p)).value(), 1);
    EXPECT_EQ((a * a).value(), 1);
}

TEST(IsPrime, Examples) {
    EXPECT_TRUE(is_prime(29));
    EXPECT_FALSE(is_prime(91));
    EXPECT_THROW(is_prime(1), InputError);
    EXPECT_THROW(is_prime(-7), InputError);
}

TEST(IsPrime, AgreesWithTrialDivision) {
    for (std::int64_t n = 2; n < 20000; ++n) EXPECT_EQ(is_prime(n), oracle::is_prime_by_trial(n)) << n;
    // strong pseudoprimes to small bases
    EXPECT_FALSE(is_prime(3215031751));
    EXPECT_FALSE(is_prime(4759123141));
    EXPECT_TRUE(is_prime(4294967291));
}

TEST(PrimesBetween, MatchesIsPrime) {
    const auto ps = primes_between(1, 1000);
    EXPECT_EQ(ps.size(), 168u);
    for (auto q : ps) EXPECT_TRUE(is_prime(q));
    EXPECT_TRUE(primes_between(24, 28).empty());
    EXPECT_TRUE(primes_between(10, 2).empty());
}

TEST(PrimeModulus, RejectsCompositeAndOutOfRange) {
    EXPECT_THROW(PrimeModulus(4), InputError);
    EXPECT_THROW(PrimeModulus(1), InputError);
    EXPECT_THROW(PrimeModulus(0), InputError);
    EXPECT_THROW(PrimeModulus(std::int64_t{1} << 31), InputError);
    EXPECT_NO_THROW(PrimeModulus(2));
    EXPECT_THROW(require_odd(PrimeModulus(2)), InputError);
    EXPECT_NO_THROW(require_odd(PrimeModulus(3)));
}

TEST(Canonicalize, Examples) {
    const auto a = canonicalize({0, 3}, PrimeModulus(5));
    EXPECT_EQ(std::vector<std::int64_t>(a.coords().begin(), a.coords().end()), (std::vector<std::int64_t>{0, 1}));
    const auto b = canonicalize({3, 0}, PrimeModulus(11));
    EXPECT_EQ(std::vector<std::int64_t>(b.coords().begin(), b.coords().end()), (std::vector<std::int64_t>{1, 0}));
    // inverse of 2 mod 7 is 4: (2,4) -> (8,16) = (1,2)
    const auto c = canonicalize({2, 4}, PrimeModulus(7));
    EXPECT_EQ(std::vector<std::int64_t>(c.coords().begin(), c.coords().end()), (std::vector<std::int64_t>{1, 2}));
}

TEST(Canonicalize, RejectsZeroVector) {
    EXPECT_THROW(canonicalize({0, 0}, PrimeModulus(5)), InputError);
    EXPECT_THROW(canonicalize({5, -10, 15}, PrimeModulus(5)), InputError);
    EXPECT_THROW(canonicalize(std::span<const std::int64_t>{}, PrimeModulus(5)), InputError);
}

TEST(Canonicalize, ConstantOnClassesAndIdempotent) {
    std::mt19937_64 rng(7);
    for (std::int64_t prime : {3, 5, 13, 31, 97}) {
        const PrimeModulus p(prime);
        std::uniform_int_distribution<std::int64_t> coord(-3 * prime, 3 * prime);
        std::uniform_int_distribution<std::int64_t> scalar(1, prime - 1);
        std::uniform_int_distribution<std::size_t> dim(1, 5);
        for (int t = 0; t < 300; ++t) {
            std::vector<std::int64_t> raw(dim(rng));
            for (auto& x : raw) x = coord(rng);
            if (std::all_of(raw.begin(), raw.end(), [&](auto x) { return x % prime == 0; })) raw[0] = 1;
            const auto base = canonicalize(raw, p);
            const auto c = scalar(rng);
            std::vector<std::int64_t> scaled(raw);
            for (auto& x : scaled) x *= c;
            EXPECT_EQ(canonicalize(scaled, p), base);
            EXPECT_EQ(canonicalize(base.coords(), p), base);
            const auto lead = std::find_if(base.coords().begin(), base.coords().end(), [](auto x) { return x != 0; });
            EXPECT_EQ(*lead, 1);
            EXPECT_EQ(d_star(base), d_star(canonicalize(scaled, p)));
        }
    }
}

TEST(DStar, Examples) {
    EXPECT_EQ(d_star(canonicalize({1, 0}, PrimeModulus(7))), 1u);
    EXPECT_EQ(d_star(canonicalize({1, 2, 3}, PrimeModulus(7))), 3u);
    EXPECT_EQ(d_star(canonicalize({0, 1, 0}, PrimeModulus(7))), 1u);
    EXPECT_EQ(d_star(canonicalize({7, 1, 14}, PrimeModulus(7))), 1u);
}
