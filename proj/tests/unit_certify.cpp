#include <doctest.h>

#include "oracles.hpp"
#include "wagstaff/certify.hpp"

using namespace wagstaff;

TEST_CASE("is_probable_prime agrees with sieve") {
    const auto sieve = oracle::prime_sieve(30000);
    for (std::uint64_t n = 0; n <= 30000; ++n)
        CHECK(is_probable_prime(n) == sieve[n]);
}

TEST_CASE("2047 is caught by the Lucas half") {
    // 2047 = 23 * 89 is a strong base-2 pseudoprime; BPSW must reject it
    CHECK_FALSE(is_probable_prime(2047));
}

TEST_CASE("strong base-2 pseudoprimes all rejected") {
    // first strong pseudoprimes to base 2
    for (long n : {2047, 3277, 4033, 4681, 8321, 15841, 29341, 42799, 49141, 52633})
        CHECK_FALSE(is_probable_prime(n));
}

TEST_CASE("large primes pass") {
    CHECK(is_probable_prime(from_decimal("170141183460469231731687303715884105727")));  // 2^127-1
    CHECK(is_probable_prime(from_decimal("2932031007403")));                             // W_43
    CHECK(is_probable_prime(from_decimal("898237917469201791510221841391178612887")) ==
          false);  // 130-bit composite with no small factor
}

TEST_CASE("prove_prime small leaf") {
    const BudgetSpec budget;
    ProofPtr pf = prove_prime(2, budget);
    REQUIRE(pf);
    CHECK(pf->kind == PrimalityProof::Kind::SmallDeterministic);
    CHECK(pf->method == "mr-det-12");
    CHECK(verify_proof(2, *pf));
    pf = prove_prime(18446744073709551557ul, budget);  // largest u64 prime
    CHECK(pf->kind == PrimalityProof::Kind::SmallDeterministic);
    CHECK(verify_proof(18446744073709551557ul, *pf));
}

TEST_CASE("prove_prime rejects composites") {
    const BudgetSpec budget;
    CHECK_THROWS_AS(prove_prime(1, budget), Error);
    CHECK_THROWS_AS(prove_prime(2047, budget), CompositeDetected);
    CHECK_THROWS_AS(prove_prime(from_decimal("340282366920938463463374607431768211457"),
                                budget),
                    CompositeDetected);  // F7 = 2^128 + 1, composite
}

TEST_CASE("prove_prime recursive n-1 proof above 2^64") {
    const BudgetSpec budget;
    // 2^89 - 1 is a Mersenne prime; 2^89 - 2 = 2 * (2^88 - 1) factors easily
    const BigInt m89 = pow_ui(2, 89) - 1;
    ProofPtr pf = prove_prime(m89, budget);
    REQUIRE(pf);
    CHECK(pf->kind == PrimalityProof::Kind::NMinusOne);
    CHECK(pf->f * pf->r == m89 - 1);
    CHECK(gcd(pf->f, pf->r) == 1);
    std::string reason;
    CHECK(verify_proof(m89, *pf, &reason));
    CHECK(reason.empty());

    // every entry carries its own sub-proof
    for (const auto& en : pf->entries) {
        REQUIRE(en.proof);
        CHECK(verify_proof(en.q, *en.proof));
    }
}

TEST_CASE("verify_proof rejects tampering") {
    const BudgetSpec budget;
    const BigInt m89 = pow_ui(2, 89) - 1;
    ProofPtr pf = prove_prime(m89, budget);
    REQUIRE(pf);

    std::string reason;
    PrimalityProof bad = *pf;
    bad.f += 1;
    CHECK_FALSE(verify_proof(m89, bad, &reason));
    CHECK(!reason.empty());

    bad = *pf;
    REQUIRE(!bad.entries.empty());
    bad.entries[0].witness = 1;
    CHECK_FALSE(verify_proof(m89, bad, &reason));

    bad = *pf;
    bad.method = "mr-det-12";
    bad.kind = PrimalityProof::Kind::SmallDeterministic;
    CHECK_FALSE(verify_proof(m89, bad, &reason));  // too big for a leaf

    // leaf for a composite must fail
    PrimalityProof leaf;
    leaf.kind = PrimalityProof::Kind::SmallDeterministic;
    leaf.n = 2047;
    leaf.method = "mr-det-12";
    CHECK_FALSE(verify_proof(2047, leaf, &reason));

    // proof for the wrong n must fail
    CHECK_FALSE(verify_proof(m89 + 2, *pf, &reason));
}
