#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "wagstaff/certificate.hpp"
#include "wagstaff/certify.hpp"
#include "wagstaff/factor.hpp"
#include "wagstaff/types.hpp"

namespace wagstaff {

struct CertifiedPrime {
    BigInt q;
    Provenance provenance = Provenance::TrialDivCyclotomic;
    ProofPtr proof;
};

struct DecompositionEntry {
    BigInt q;
    unsigned long e = 1;        // v_q(N-1), full valuation
    BigInt witness;             // 0 until find_witness fills it
    Provenance provenance = Provenance::TrialDivCyclotomic;
    ProofPtr proof;
};

struct Decomposition {
    BigInt n, f, r;             // n-1 = f*r, gcd(f, r) = 1
    std::vector<DecompositionEntry> entries;  // ascending q
    long margin_bits = 0;       // floor(log2 F^3) - floor(log2 N)
    Form form = Form::SqrtForm;
    std::optional<DiscriminantRecord> discriminant;
};

// Build F = prod q^{v_q(N-1)} over the given certified primes; full
// valuations make gcd(F, R) = 1 structural. Witnesses left unset.
// F^3 <= N -> InsufficientFactoredPart.
Decomposition assemble_factored_part(const BigInt& n,
                                     const std::vector<CertifiedPrime>& certified);

// Smallest prime a with a^{N-1} = 1 (mod N) and gcd(a^{(N-1)/q} - 1, N) = 1.
// Candidates are the first 100 primes. Fermat failure -> CompositeDetected;
// 1 < gcd < N -> FactorFound; cap exhausted -> WitnessSearchExhausted.
BigInt find_witness(const BigInt& n, const BigInt& q, const BigInt& cofactor_exp);
BigInt find_witness(const BigInt& n, const BigInt& q);

// s = floor(R / 2F), r = R mod 2F, delta = r^2 - 8s, exact square test.
// Vacuous (NotApplicable) when F^2 > N.
DiscriminantRecord discriminant_check(const BigInt& n, const BigInt& f,
                                      const BigInt& r);

// When the record rejects (s >= 1 and delta = t^2), the decomposition is
// constructive: N = (aF+1)(bF+1) with a = (r - t)/2. Returns that divisor.
BigInt discriminant_divisor(const BigInt& f, const DiscriminantRecord& rec);

// Full orchestration for W_p: composite prescreen, cyclotomic split,
// per-d factoring, per-divisor completeness gate (a divisor contributes to
// F only when Phi_d(2) is completely factored), certification, witnesses,
// discriminant, Condition (II) as a recorded auxiliary check, sealing.
BlsCertificate prove_wagstaff(unsigned long p, const SourceSet& sources,
                              const BudgetSpec& budget, unsigned threads = 1);

struct ScanRow {
    unsigned long p = 0;
    bool probable_only = false;         // PRP entry (not proved)
    std::string pm1_factorization;      // e.g. "2^3 . 33377" with middle dots
    unsigned long tau = 0;              // number of divisors of p-1
    unsigned long n_digits = 0;         // digits10(W_p)
    long covered_bits = 0;              // sum over coverable Phi_d(2)
    long needed_bits = 0;               // cube-threshold requirement
    bool feasible = false;
    unsigned long blocking_d = 0;       // smallest uncoverable d (0 if feasible)
    unsigned long blocking_phi = 0;     // phi(blocking_d)
};

struct ScanOptions {
    unsigned long assumed_phi_bits = 1400;  // coverable Phi_d(2) size model
    const FactorTable* table = nullptr;     // table-complete d are coverable
};

// Feasibility model for the BLS ceiling table: a divisor counts as
// coverable when a loaded table completes it or phi(d) is within the
// assumed desk/table reach. Verdict: coverable bits meet the cube third.
std::vector<ScanRow> feasibility_scan(const std::vector<unsigned long>& p_list,
                                      const ScanOptions& options = {});

}  // namespace wagstaff
