#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wagstaff/certify.hpp"
#include "wagstaff/types.hpp"

namespace wagstaff {

struct CertFactor {
    BigInt prime;
    unsigned long exponent = 1;
    Provenance provenance = Provenance::TrialDivCyclotomic;
};

// Per-divisor record: Phi_d(2), how far it factored, what is left.
struct CertCyclotomicTerm {
    unsigned long d = 1;
    unsigned long bits = 0;             // bit length of Phi_d(2)
    bool complete = false;
    std::vector<CertFactor> factors;
    BigInt residual = 1;
};

struct CertEntry {
    BigInt q;
    unsigned long e = 1;                // v_q(N-1)
    BigInt witness;
    Provenance provenance = Provenance::TrialDivCyclotomic;
    ProofPtr proof;
};

struct ChuaRecord {
    int epsilon = -1;
    int delta = -1;
    bool holds = false;
};

struct BlsCertificate {
    std::string format_version = "1";
    unsigned long exponent = 0;         // p
    unsigned long n_digits = 0;         // digits10(W_p)
    std::vector<CertCyclotomicTerm> cyclotomic;  // ascending d, every d | p-1
    std::vector<CertEntry> entries;     // ascending q; F = prod q^e
    BigInt f, r;                        // N-1 = f * r
    Form form = Form::SqrtForm;
    std::optional<DiscriminantRecord> discriminant;  // CubeForm only
    long margin_bits = 0;               // floor(log2 F^3) - floor(log2 N)
    ChuaRecord chua;
    std::string digest;                 // sha-256 hex of the digestless view
};

// Canonical bytes: UTF-8 JSON, keys sorted by code point, separators
// "," and ":", every integer a decimal string. include_digest = false
// yields the view the digest is computed over.
std::string canonical_bytes(const BlsCertificate& cert, bool include_digest = true);

// SHA-256 (lowercase hex) over canonical_bytes(cert, false).
std::string digest(const BlsCertificate& cert);

// File = canonical serialization including digest, plus trailing newline.
void write_certificate(const BlsCertificate& cert, const std::string& path);

// Strict schema: exact key sets, decimal-string grammar, enum labels,
// discriminant presence tied to form. Violations -> SchemaError with the
// offending field path. Semantic checks belong to the verifier.
BlsCertificate read_certificate(const std::string& path);
BlsCertificate parse_certificate(const std::string& text);

}  // namespace wagstaff
