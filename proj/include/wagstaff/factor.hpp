#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wagstaff/certify.hpp"
#include "wagstaff/types.hpp"

namespace wagstaff {

struct FactorEntry {
    BigInt prime;
    unsigned long exponent = 1;
    Provenance provenance = Provenance::TrialDivCyclotomic;
    ProofPtr proof;  // set for every entry: primes are certified before listing
};

struct Factorization {
    BigInt n;
    std::vector<FactorEntry> factors;   // ascending by prime
    BigInt residual = 1;                // composite-or-unknown remainder
    bool complete() const { return residual == 1; }
};

// Divide out every prime q <= bound with q = 1 (mod d), plus the intrinsic
// candidate (largest prime factor of d), probed first. bound is a value
// bound on q. Partial results are the norm; entries are uncertified here
// (factor_fully certifies).
Factorization trial_division_progression(const BigInt& n, unsigned long d,
                                         const BigInt& bound);

// Brent-cycle rho with batched gcd; seed schedule c = 1, 2, 3, ... and
// x0 = 2 for reproducibility. budget counts f-evaluations across seeds.
std::optional<BigInt> pollard_rho(const BigInt& n, unsigned long budget);

// Stage-1 p-1 with bases 2 and 3, block gcd every 64 prime powers, and
// single-step isolation when a block collapses to gcd == n.
std::optional<BigInt> pollard_p_minus_1(const BigInt& n, unsigned long b1);

// Text table, one line per d: "d: p1[^e1] p2[^e2] ...", '#' comments.
// Entries are claims; re-verification happens downstream.
FactorTable load_factor_table(const std::string& path);

// Merge every *.txt table in a directory, files in sorted name order;
// a later file replaces earlier claims for the same divisor index.
FactorTable load_factor_table_dir(const std::string& dir);

// Pipeline: table lookup -> external db (if enabled) -> progression trial
// division -> p-1 -> rho, recursing on cofactors. Every listed prime is
// certified (prove_prime) before being labeled; claims that fail
// certification stay in the residual. Exact product invariant always holds.
Factorization factor_fully(const BigInt& n, unsigned long d,
                           const BudgetSpec& budget, const SourceSet& sources);

}  // namespace wagstaff
