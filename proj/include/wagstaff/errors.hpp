#pragma once
#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace wagstaff {

using BigInt = mpz_class;

struct Error : std::runtime_error {
    explicit Error(const std::string& m) : std::runtime_error(m) {}
};

struct InvalidModulus : Error { using Error::Error; };
struct InvalidExponent : Error { using Error::Error; };
struct UndefinedValuation : Error { using Error::Error; };
struct RingMismatch : Error { using Error::Error; };
struct InternalError : Error { using Error::Error; };
struct NotApplicable : Error { using Error::Error; };
struct WitnessSearchExhausted : Error { using Error::Error; };
struct DbUnavailable : Error { using Error::Error; };
// malformed response body; derives from DbUnavailable so callers that
// degrade to local-only factoring handle both with one catch
struct DbParseError : DbUnavailable { using DbUnavailable::DbUnavailable; };

// gcd with the modulus surfaced as a found factor
struct NotCoprime : Error {
    BigInt factor;
    NotCoprime(const std::string& m, BigInt g) : Error(m), factor(std::move(g)) {}
};

struct CompositeDetected : Error {
    BigInt n;
    BigInt witness;    // failing base, or a divisor when kind says so
    std::string kind;  // "fermat" | "mr" | "bpsw" | "divisor" | "discriminant"
    CompositeDetected(const std::string& m, BigInt n_, BigInt w, std::string k)
        : Error(m), n(std::move(n_)), witness(std::move(w)), kind(std::move(k)) {}
};

struct FactorFound : Error {
    BigInt factor;
    FactorFound(const std::string& m, BigInt f) : Error(m), factor(std::move(f)) {}
};

struct CertificationIncomplete : Error {
    BigInt n;
    CertificationIncomplete(const std::string& m, BigInt n_) : Error(m), n(std::move(n_)) {}
};

struct InsufficientFactoredPart : Error {
    long missing_bits;
    std::vector<unsigned long> blocking;  // divisors d whose residual blocks the proof
    InsufficientFactoredPart(const std::string& m, long bits, std::vector<unsigned long> b)
        : Error(m), missing_bits(bits), blocking(std::move(b)) {}
};

struct TableFormatError : Error {
    std::string file;
    int line;
    TableFormatError(const std::string& m, std::string f, int l)
        : Error(m), file(std::move(f)), line(l) {}
};

struct SchemaError : Error {
    std::string field_path;
    SchemaError(const std::string& m, std::string fp) : Error(m), field_path(std::move(fp)) {}
};

}  // namespace wagstaff
