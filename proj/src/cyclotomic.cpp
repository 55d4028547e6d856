#include "wagstaff/cyclotomic.hpp"

#include <algorithm>

#include "wagstaff/bigmath.hpp"

namespace wagstaff {

std::map<std::uint64_t, unsigned> factor_u64(std::uint64_t n) {
    if (n == 0) throw Error("factor_u64: zero has no factorization");
    std::map<std::uint64_t, unsigned> out;
    for (std::uint64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
        while (n % p == 0) { ++out[p]; n /= p; }
    }
    if (n > 1) ++out[n];
    return out;
}

std::vector<std::uint64_t> divisors(std::uint64_t n) {
    auto fac = factor_u64(n);
    std::vector<std::uint64_t> out{1};
    for (auto [p, e] : fac) {
        std::size_t base = out.size();
        std::uint64_t pk = 1;
        for (unsigned k = 1; k <= e; ++k) {
            pk *= p;
            for (std::size_t i = 0; i < base; ++i) out.push_back(out[i] * pk);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

int mobius(std::uint64_t n) {
    if (n == 0) throw Error("mobius: undefined at 0");
    int sign = 1;
    for (auto [p, e] : factor_u64(n)) {
        (void)p;
        if (e > 1) return 0;
        sign = -sign;
    }
    return n == 1 ? 1 : sign;
}

std::uint64_t euler_phi(std::uint64_t n) {
    if (n == 0) throw Error("euler_phi: undefined at 0");
    std::uint64_t out = n;
    for (auto [p, e] : factor_u64(n)) {
        (void)e;
        out -= out / p;
    }
    return out;
}

BigInt phi_at_2(std::uint64_t d) {
    if (d == 0) throw Error("phi_at_2: index must be >= 1");
    BigInt num = 1, den = 1;
    for (std::uint64_t e : divisors(d)) {
        int mu = mobius(e);
        if (mu == 0) continue;
        BigInt t = pow_ui(2, d / e) - 1;
        if (mu == 1) num *= t; else den *= t;
    }
    BigInt q, r;
    mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    if (r != 0) throw InternalError("phi_at_2: Mobius product not exact");
    return q;
}

WagstaffSplit wagstaff_n_minus_one(unsigned long p) {
    WagstaffSplit split;
    split.p = p;
    split.n = wagstaff_number(p);  // validates p
    BigInt prod = 2;
    for (std::uint64_t d : divisors(p - 1)) {
        if (d == 2) continue;      // Phi_2(2) = 3, cancelled by W_p = (2^p+1)/3
        CyclotomicTerm t{d, phi_at_2(d)};
        prod *= t.value;
        split.terms.push_back(std::move(t));
    }
    // Two independent identities guard the decomposition:
    //   prod_{d | p-1} Phi_d(2) = 2^{p-1} - 1
    //   N - 1 = 2 * (2^{p-1} - 1) / 3
    if (prod != split.n - 1)
        throw InternalError("wagstaff_n_minus_one: product mismatch");
    if (3 * (split.n - 1) != 2 * (pow_ui(2, p - 1) - 1))
        throw InternalError("wagstaff_n_minus_one: Mersenne identity mismatch");
    return split;
}

}  // namespace wagstaff
