#include "wagstaff/certify.hpp"

#include <algorithm>

#include "wagstaff/bls.hpp"
#include "wagstaff/factor.hpp"

namespace wagstaff {

namespace {

const BigInt kSmallThreshold = pow_ui(BigInt(2), 64);

bool strong_probable_prime_base2(const BigInt& n) {
    // n odd >= 3
    BigInt d = n - 1;
    unsigned long s = valuation(d, 2);
    d >>= s;
    BigInt x = mod_pow(2, d, n);
    if (x == 1 || x == n - 1) return true;
    for (unsigned long i = 1; i < s; ++i) {
        x = x * x % n;
        if (x == n - 1) return true;
    }
    return false;
}

// Strong Lucas test with Selfridge's method A parameters.
bool strong_lucas_selfridge(const BigInt& n) {
    // pick D = 5, -7, 9, -11, ... with (D/n) = -1
    BigInt D = 5;
    while (true) {
        int j = jacobi(D, n);
        if (j == 0) return abs(D) != n;  // proper factor found -> composite
        if (j == -1) break;
        D = D > 0 ? BigInt(-(D + 2)) : BigInt(-(D - 2));
        if (abs(D) > 1000 && is_perfect_square(n)) return false;
    }
    const BigInt Q = (1 - D) / 4;  // P = 1

    BigInt d = n + 1;
    unsigned long s = valuation(d, 2);
    d >>= s;

    auto halve = [&n](BigInt v) {
        if (mpz_odd_p(v.get_mpz_t())) v += n;
        return BigInt(v >> 1);
    };

    // binary chain over bits of d, most significant first
    BigInt U = 1, V = 1, Qk = Q % n;  // state for prefix "1" (P = 1)
    if (Qk < 0) Qk += n;
    long bits = static_cast<long>(bit_length(d));
    for (long i = bits - 2; i >= 0; --i) {
        // double: U2k = U*V, V2k = V^2 - 2 Q^k
        U = U * V % n;
        V = (V * V - 2 * Qk) % n;
        if (V < 0) V += n;
        Qk = Qk * Qk % n;
        if (mpz_tstbit(d.get_mpz_t(), static_cast<mp_bitcnt_t>(i))) {
            // increment: U' = (U + V)/2, V' = (D U + V)/2, Q^k *= Q
            BigInt u2 = halve((U + V) % n);
            BigInt v2 = (D * U + V) % n;
            if (v2 < 0) v2 += n;
            U = u2;
            V = halve(v2);
            Qk = Qk * Q % n;
            if (Qk < 0) Qk += n;
        }
    }

    if (U == 0 || V == 0) return true;
    for (unsigned long r = 1; r < s; ++r) {
        V = (V * V - 2 * Qk) % n;
        if (V < 0) V += n;
        if (V == 0) return true;
        Qk = Qk * Qk % n;
    }
    return false;
}

}  // namespace

bool is_probable_prime(const BigInt& n) {
    if (n < 2) return false;
    for (unsigned long p : {2ul, 3ul, 5ul, 7ul, 11ul, 13ul, 17ul, 19ul, 23ul,
                            29ul, 31ul, 37ul}) {
        if (mpz_divisible_ui_p(n.get_mpz_t(), p)) return n == p;
    }
    if (n < kSmallThreshold) return is_prime_u64(n.get_ui());
    if (is_perfect_square(n)) return false;
    return strong_probable_prime_base2(n) && strong_lucas_selfridge(n);
}

ProofPtr prove_prime(const BigInt& n, const BudgetSpec& budget,
                     const SourceSet& sources) {
    if (n < 2) throw Error("prove_prime: n must be >= 2");

    if (n < kSmallThreshold) {
        std::uint64_t v = mpz_get_ui(n.get_mpz_t());
        if (!is_prime_u64(v)) {
            // surface a concrete strong-test witness
            for (unsigned long a : {2ul, 3ul, 5ul, 7ul, 11ul, 13ul, 17ul, 19ul,
                                    23ul, 29ul, 31ul, 37ul}) {
                if (n == a) break;
                if (mpz_divisible_ui_p(n.get_mpz_t(), a))
                    throw CompositeDetected("prove_prime: small divisor", n, a,
                                            "divisor");
                if (mod_pow(a, n - 1, n) != 1)
                    throw CompositeDetected("prove_prime: Fermat failure", n, a,
                                            "fermat");
            }
            throw CompositeDetected("prove_prime: deterministic strong test", n,
                                    0, "mr");
        }
        auto proof = std::make_shared<PrimalityProof>();
        proof->kind = PrimalityProof::Kind::SmallDeterministic;
        proof->n = n;
        proof->method = "mr-det-12";
        return proof;
    }

    if (!is_probable_prime(n)) {
        for (unsigned long a : {2ul, 3ul, 5ul, 7ul, 11ul, 13ul}) {
            if (mod_pow(a, n - 1, n) != 1)
                throw CompositeDetected("prove_prime: Fermat failure", n, a,
                                        "fermat");
        }
        throw CompositeDetected("prove_prime: BPSW rejection", n, 0, "bpsw");
    }

    // Recursion: factor n-1 far enough that the certified part clears a
    // BLS threshold. Sub-primes are certified inside factor_fully.
    SourceSet sub = sources;
    sub.table = nullptr;  // tables are keyed by cyclotomic index, not by n
    Factorization fac = factor_fully(n - 1, 1, budget, sub);

    std::vector<CertifiedPrime> primes;
    primes.reserve(fac.factors.size());
    for (const auto& fe : fac.factors)
        primes.push_back({fe.prime, fe.provenance, fe.proof});

    Decomposition dec;
    try {
        dec = assemble_factored_part(n, primes);
    } catch (const InsufficientFactoredPart&) {
        throw CertificationIncomplete(
            "prove_prime: n-1 resists factoring within budget for n = " +
                to_decimal(n),
            n);
    }

    for (auto& entry : dec.entries)
        entry.witness = find_witness(n, entry.q, (n - 1) / entry.q);

    if (dec.form == Form::CubeForm) {
        dec.discriminant = discriminant_check(n, dec.f, dec.r);
        const auto& rec = *dec.discriminant;
        if (rec.s != 0 && rec.is_square)
            throw CompositeDetected("prove_prime: discriminant square", n,
                                    discriminant_divisor(dec.f, rec),
                                    "discriminant");
    }

    auto proof = std::make_shared<PrimalityProof>();
    proof->kind = PrimalityProof::Kind::NMinusOne;
    proof->n = n;
    proof->f = dec.f;
    proof->r = dec.r;
    proof->form = dec.form;
    proof->discriminant = dec.discriminant;
    for (const auto& entry : dec.entries)
        proof->entries.push_back({entry.q, entry.e, entry.witness, entry.proof});
    return proof;
}

namespace {

bool fail(std::string* reason, const std::string& why) {
    if (reason) *reason = why;
    return false;
}

}  // namespace

bool verify_proof(const BigInt& n, const PrimalityProof& proof,
                  std::string* reason) {
    if (proof.n != n)
        return fail(reason, "proof is for " + to_decimal(proof.n) + ", not " +
                                to_decimal(n));
    if (n < 2) return fail(reason, "n < 2");

    if (proof.kind == PrimalityProof::Kind::SmallDeterministic) {
        if (proof.method != "mr-det-12")
            return fail(reason, "unknown leaf method \"" + proof.method + "\"");
        if (n >= kSmallThreshold)
            return fail(reason, "leaf out of deterministic range: " + to_decimal(n));
        if (!is_prime_u64(mpz_get_ui(n.get_mpz_t())))
            return fail(reason, "leaf fails the deterministic strong test: " +
                                    to_decimal(n));
        return true;
    }

    if (proof.entries.empty()) return fail(reason, "no factored part");
    BigInt f = 1;
    for (const auto& entry : proof.entries) {
        if (entry.q < 2 || entry.e < 1)
            return fail(reason, "bad entry for q = " + to_decimal(entry.q));
        if (!entry.proof)
            return fail(reason, "missing sub-proof for q = " + to_decimal(entry.q));
        std::string sub;
        if (!verify_proof(entry.q, *entry.proof, &sub))
            return fail(reason, "sub-proof for q = " + to_decimal(entry.q) +
                                    " rejected: " + sub);
        f *= pow_ui(entry.q, entry.e);
    }
    if (f != proof.f)
        return fail(reason, "stored F does not match its own entries");
    if (proof.f * proof.r != n - 1)
        return fail(reason, "F*R != n-1");
    if (gcd(proof.f, proof.r) != 1) return fail(reason, "gcd(F, R) != 1");

    if (proof.form == Form::SqrtForm) {
        if (proof.f * proof.f <= n) return fail(reason, "F^2 <= n for sqrt form");
        if (proof.discriminant)
            return fail(reason, "discriminant record on a sqrt-form node");
    } else {
        if (proof.f * proof.f * proof.f <= n)
            return fail(reason, "F^3 <= n for cube form");
        if (!proof.discriminant)
            return fail(reason, "cube form without discriminant record");
        const auto& rec = *proof.discriminant;
        BigInt s, r;
        mpz_fdiv_qr(s.get_mpz_t(), r.get_mpz_t(), proof.r.get_mpz_t(),
                    BigInt(2 * proof.f).get_mpz_t());
        if (s != rec.s || r != rec.r) return fail(reason, "discriminant (s, r) mismatch");
        BigInt delta = r * r - 8 * s;
        if (delta != rec.delta) return fail(reason, "discriminant delta mismatch");
        if (is_perfect_square(delta) != rec.is_square)
            return fail(reason, "discriminant square flag mismatch");
        if (rec.s != 0 && rec.is_square)
            return fail(reason, "discriminant rejects: delta is a perfect square");
    }

    for (const auto& entry : proof.entries) {
        if (entry.witness < 2)
            return fail(reason, "witness missing for q = " + to_decimal(entry.q));
        if (mod_pow(entry.witness, n - 1, n) != 1)
            return fail(reason, "a^(n-1) != 1 for q = " + to_decimal(entry.q));
        BigInt u = mod_pow(entry.witness, (n - 1) / entry.q, n);
        if (gcd(u - 1, n) != 1)
            return fail(reason, "gcd(a^((n-1)/q) - 1, n) != 1 for q = " +
                                    to_decimal(entry.q));
    }
    return true;
}

}  // namespace wagstaff
