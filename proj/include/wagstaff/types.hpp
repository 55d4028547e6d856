#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "wagstaff/errors.hpp"

namespace wagstaff {

// Audit label: where a factor's literal value first entered the pipeline.
// Never evidentiary -- every prime is certified regardless of label.
enum class Provenance {
    Algebraic,             // the prime 2 from N-1 = 2(2^{p-1}-1)/3
    TableLookup,           // local factor-table literal
    ExternalDb,            // factordb claim (re-verified)
    TrialDivCyclotomic,    // trial division along r = 1 (mod d)
    DirectRho,             // Pollard rho (Brent)
    DirectPminus1,         // Pollard p-1
    CyclotomicPrime,       // Phi_d(2) itself prime
    ResidualPrimeCertified // cofactor left prime after removing factors
};

std::string to_string(Provenance p);
Provenance provenance_from_string(const std::string& s);

enum class Form { SqrtForm, CubeForm };  // F^2 > N  /  F^3 > N

std::string to_string(Form f);
Form form_from_string(const std::string& s);

// R = 2*F*s + r with 0 <= r < 2F; delta = r^2 - 8s.
// Acceptance: s == 0 or delta not a perfect square.
struct DiscriminantRecord {
    BigInt s;
    BigInt r;
    BigInt delta;
    bool is_square = false;
    bool operator==(const DiscriminantRecord&) const = default;
};

struct BudgetSpec {
    unsigned long trial_candidates = 1'000'000;  // progression candidates per n
    unsigned long rho_iterations = 20'000'000;   // f-evaluations per composite
    unsigned long pminus1_b1 = 100'000;          // stage-1 smoothness bound
};

// d -> claimed (prime, exponent) list; claims, not facts, until re-verified
using FactorTable = std::map<unsigned long, std::vector<std::pair<BigInt, unsigned long>>>;

class FactorDbClient;

struct SourceSet {
    const FactorTable* table = nullptr;
    FactorDbClient* db = nullptr;      // nullptr = network disabled
    std::ostream* log = nullptr;       // optional run log sink
};

}  // namespace wagstaff
