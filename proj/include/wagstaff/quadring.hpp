#pragma once
#include "wagstaff/bigmath.hpp"

namespace wagstaff {

// x + y*sqrt(d) in Z[sqrt(d)]/(n)
struct QuadResidue {
    BigInt x, y;
    BigInt d, n;
    bool operator==(const QuadResidue&) const = default;
};

QuadResidue quad_make(BigInt x, BigInt y, BigInt d, BigInt n);
QuadResidue quad_mul(const QuadResidue& a, const QuadResidue& b);
QuadResidue quad_pow(const QuadResidue& base, const BigInt& k);

// alpha^n = V_n/2 + U_n*sqrt(2) for alpha = 1 + sqrt(2); V_n is always even
struct PellPair {
    BigInt U, V;
};
PellPair pell(unsigned long n);

struct ChuaResult {
    int epsilon;      // (a^2-1 / Q)
    int delta;        // (2(a+1) / Q)
    bool holds;       // omega_a^((Q-eps)/2) == delta in Z[sqrt(a^2-1)]/(Q)
    QuadResidue value;
};

// Theorem check for odd Q >= 3 and a >= 2.  Q need not be prime: a failed
// check on composite Q is exactly how the congruence is used as a filter.
ChuaResult chua_check(const BigInt& a, const BigInt& Q);

// a = 3 specialization against W_p = (2^p+1)/3, where epsilon = delta = -1
// is forced (W_p = 3 mod 8).  Works in Z[sqrt(2)] with omega_3 = 3 + 2*sqrt(2).
ChuaResult condition_two(unsigned long p);

}  // namespace wagstaff
