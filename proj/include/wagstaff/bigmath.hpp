#pragma once
#include <cstdint>
#include <string>

#include "wagstaff/errors.hpp"

namespace wagstaff {

// b^e mod m; m >= 2, e >= 0
BigInt mod_pow(const BigInt& base, const BigInt& exp, const BigInt& mod);

// Jacobi symbol (a/n); n odd, n >= 3
int jacobi(const BigInt& a, const BigInt& n);

// exact square test (sqrt + confirmation); negative z is never a square
bool is_perfect_square(const BigInt& z);
bool is_perfect_square(const BigInt& z, BigInt& root);

// largest e with q^e | n; n != 0, q >= 2
unsigned long valuation(const BigInt& n, const BigInt& q);

// exact decimal digit count of |n| (digits10(0) == 1)
std::size_t digits10(const BigInt& n);

// bits in |n|; bit_length(0) == 0, bit_length(1) == 1
std::size_t bit_length(const BigInt& n);

// floor(log2 n) for n >= 1
long floor_log2(const BigInt& n);

// strict canonical decimal: optional '-', no leading zeros, no "-0"
BigInt from_decimal(const std::string& s);
std::string to_decimal(const BigInt& n);

BigInt gcd(const BigInt& a, const BigInt& b);
BigInt pow_ui(const BigInt& b, unsigned long e);

// (2^p + 1)/3 for prime p >= 5 (p = 3 gives W = 3 and is rejected)
BigInt wagstaff_number(unsigned long p);

// deterministic strong test, valid for the full uint64 range
bool is_prime_u64(std::uint64_t n);

}  // namespace wagstaff
