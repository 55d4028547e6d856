#include "wagstaff/quadring.hpp"

namespace wagstaff {

QuadResidue quad_make(BigInt x, BigInt y, BigInt d, BigInt n) {
    if (n < 2) throw InvalidModulus("quad_make: modulus must be >= 2");
    if (d < 1) throw Error("quad_make: ring parameter d must be >= 1");
    QuadResidue r{std::move(x), std::move(y), std::move(d), std::move(n)};
    mpz_fdiv_r(r.x.get_mpz_t(), r.x.get_mpz_t(), r.n.get_mpz_t());
    mpz_fdiv_r(r.y.get_mpz_t(), r.y.get_mpz_t(), r.n.get_mpz_t());
    return r;
}

QuadResidue quad_mul(const QuadResidue& a, const QuadResidue& b) {
    if (a.d != b.d || a.n != b.n)
        throw RingMismatch("quad_mul: operands live in different rings");
    QuadResidue r{0, 0, a.d, a.n};
    r.x = (a.x * b.x + a.d * a.y % a.n * b.y) % a.n;
    r.y = (a.x * b.y + a.y * b.x) % a.n;
    return r;
}

QuadResidue quad_pow(const QuadResidue& base, const BigInt& k) {
    if (k < 0) throw InvalidExponent("quad_pow: negative exponent");
    QuadResidue result{1, 0, base.d, base.n};
    QuadResidue sq = base;
    BigInt e = k;
    while (e > 0) {
        if (mpz_odd_p(e.get_mpz_t())) result = quad_mul(result, sq);
        e >>= 1;
        if (e > 0) sq = quad_mul(sq, sq);
    }
    return result;
}

PellPair pell(unsigned long n) {
    // X_{k+1} = 2 X_k + X_{k-1} for both coordinates
    BigInt u0 = 0, u1 = 1, v0 = 2, v1 = 2;
    if (n == 0) return {u0, v0};
    for (unsigned long k = 1; k < n; ++k) {
        BigInt u2 = 2 * u1 + u0, v2 = 2 * v1 + v0;
        u0 = std::move(u1); u1 = std::move(u2);
        v0 = std::move(v1); v1 = std::move(v2);
    }
    return {u1, v1};
}

ChuaResult chua_check(const BigInt& a, const BigInt& Q) {
    if (a < 2) throw Error("chua_check: a must be >= 2");
    if (Q < 3 || mpz_even_p(Q.get_mpz_t()))
        throw InvalidModulus("chua_check: Q must be odd and >= 3");
    const BigInt D0 = a * a - 1;
    int eps = jacobi(D0, Q);
    if (eps == 0)
        throw NotCoprime("chua_check: gcd(a^2-1, Q) > 1", gcd(D0, Q));
    int del = jacobi(2 * (a + 1), Q);
    if (del == 0)
        throw NotCoprime("chua_check: gcd(2(a+1), Q) > 1", gcd(2 * (a + 1), Q));
    // a = 3 has a^2 - 1 = 8 = 2^2 * 2: fold the square so both entry points
    // agree on the canonical ring Z[sqrt(2)], omega_3 = 3 + 2*sqrt(2)
    QuadResidue omega = (a == 3) ? quad_make(3, 2, 2, Q)
                                 : quad_make(a, 1, D0, Q);
    BigInt e = (Q - eps) / 2;
    QuadResidue v = quad_pow(omega, e);
    BigInt want = del == 1 ? BigInt(1) : Q - 1;
    bool holds = (v.y == 0 && v.x == want);
    return {eps, del, holds, v};
}

ChuaResult condition_two(unsigned long p) {
    BigInt N = wagstaff_number(p);  // InvalidExponent for bad p
    QuadResidue omega = quad_make(3, 2, 2, N);
    QuadResidue v = quad_pow(omega, (N + 1) / 2);
    bool holds = (v.y == 0 && v.x == N - 1);
    return {-1, -1, holds, v};
}

}  // namespace wagstaff
