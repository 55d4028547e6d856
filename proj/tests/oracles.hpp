#pragma once

// Independent reference implementations for cross-checking the library.
// Everything here is deliberately naive: correctness over speed.

#include <cstdint>
#include <map>
#include <vector>

#include "wagstaff/types.hpp"

namespace oracle {

// Bit table, index i <-> integer i, up to and including n.
std::vector<bool> prime_sieve(std::uint64_t n);

std::vector<std::uint64_t> primes_up_to(std::uint64_t n);

// Plain trial division.
std::map<std::uint64_t, unsigned> brute_factor(std::uint64_t n);

// Schoolbook arithmetic in Z[sqrt(2)]/(Q), kept free of any library code.
struct Quad {
    wagstaff::BigInt a, b;  // a + b*sqrt(2)
};

Quad quad_mul_ref(const Quad& x, const Quad& y, const wagstaff::BigInt& q);
Quad quad_pow_ref(Quad x, wagstaff::BigInt e, const wagstaff::BigInt& q);

}  // namespace oracle
