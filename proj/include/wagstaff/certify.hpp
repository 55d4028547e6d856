#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "wagstaff/bigmath.hpp"
#include "wagstaff/types.hpp"

namespace wagstaff {

// Recursive, self-contained primality proof. Leaves are deterministic
// strong tests below 2^64; interior nodes are N-1 (Pocklington/BLS) data
// whose per-prime sub-proofs recurse until every path bottoms out.
struct PrimalityProof {
    enum class Kind { SmallDeterministic, NMinusOne };

    struct Entry {
        BigInt q;
        unsigned long e = 1;
        BigInt witness;
        std::shared_ptr<const PrimalityProof> proof;
    };

    Kind kind = Kind::SmallDeterministic;
    BigInt n;
    std::string method;                 // leaves: "mr-det-12"

    // NMinusOne only: n-1 = f * r, f = prod q^e, gcd(f, r) = 1
    BigInt f, r;
    std::vector<Entry> entries;
    Form form = Form::SqrtForm;
    std::optional<DiscriminantRecord> discriminant;  // CubeForm only
};

using ProofPtr = std::shared_ptr<const PrimalityProof>;

// BPSW screen: strong base-2 test plus a strong Lucas (Selfridge) test.
// 2047 passes the base-2 half and must be rejected by the Lucas half.
bool is_probable_prime(const BigInt& n);

// Unconditional certification. n < 2^64 gets a SmallDeterministic leaf;
// larger n gets a recursive N-1 proof built by factoring n-1 within budget.
// Composite n -> CompositeDetected; budget exhausted -> CertificationIncomplete.
ProofPtr prove_prime(const BigInt& n, const BudgetSpec& budget,
                     const SourceSet& sources = {});

// Full replay of every node: structure, thresholds, gcds, witnesses,
// discriminants, leaf determinism. Never throws on bad data; reports.
bool verify_proof(const BigInt& n, const PrimalityProof& proof,
                  std::string* reason = nullptr);

}  // namespace wagstaff
