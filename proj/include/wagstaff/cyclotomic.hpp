#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "wagstaff/errors.hpp"

namespace wagstaff {

// Small-number utilities driving the index arithmetic. All exact.
std::map<std::uint64_t, unsigned> factor_u64(std::uint64_t n);
std::vector<std::uint64_t> divisors(std::uint64_t n);        // sorted ascending
int mobius(std::uint64_t n);                                 // mu(n)
std::uint64_t euler_phi(std::uint64_t n);

// Value of the d-th cyclotomic polynomial at x = 2, d >= 1.
// Computed as the Mobius product prod_{e | d} (2^{d/e} - 1)^{mu(e)};
// every division in the descent is checked exact.
BigInt phi_at_2(std::uint64_t d);

struct CyclotomicTerm {
    std::uint64_t d;     // divisor of p-1
    BigInt value;        // Phi_d(2)
};

// Multiplicative split of N-1 for N = (2^p + 1)/3:
//   N - 1 = 2 * prod_{d | p-1, d != 2} Phi_d(2)
// (Phi_2(2) = 3 is cancelled by the division by 3).
struct WagstaffSplit {
    unsigned long p;
    BigInt n;                          // W_p
    std::vector<CyclotomicTerm> terms; // ascending d, d != 2
};

WagstaffSplit wagstaff_n_minus_one(unsigned long p);

}  // namespace wagstaff
