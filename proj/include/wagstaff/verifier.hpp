#pragma once

#include <string>
#include <vector>

#include "wagstaff/certificate.hpp"

namespace wagstaff {

struct StepResult {
    int step = 0;
    std::string name;
    bool pass = false;
    std::string reason;    // empty on pass
    double seconds = 0.0;
};

struct VerificationReport {
    std::vector<StepResult> steps;  // always 9 entries, in order
    bool pass = false;
};

// Untrusted-input replay. Every claim in the certificate is recomputed:
//   1 recompute N from p (and the digit count)
//   2 replay every embedded primality proof
//   3 recompute e = v_q(N-1) per entry
//   4 rebuild F; check F*R = N-1 and gcd(F, R) = 1
//   5 exact threshold for the claimed form; recompute margin
//   6 replay both witness congruences per q
//   7 recompute the discriminant record (CubeForm; vacuous otherwise)
//   8 replay Condition (II) in Z[sqrt(2)]/(N)
//   9 recompute the digest
// No factoring, no witness search, no throwing on bad data.
VerificationReport verify_certificate(const BlsCertificate& cert);

}  // namespace wagstaff
