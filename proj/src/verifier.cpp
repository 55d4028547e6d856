#include "wagstaff/verifier.hpp"

#include <chrono>
#include <functional>
#include <optional>

#include "wagstaff/quadring.hpp"

namespace wagstaff {

namespace {

using Clock = std::chrono::steady_clock;

// Every step runs, even after earlier failures; a step that cannot run
// for lack of a prerequisite fails with that as its reason. Nothing throws.
struct Runner {
    VerificationReport report;

    void step(int num, const std::string& name,
              const std::function<bool(std::string&)>& body) {
        StepResult sr;
        sr.step = num;
        sr.name = name;
        const auto t0 = Clock::now();
        try {
            std::string why;
            sr.pass = body(why);
            if (!sr.pass) sr.reason = why.empty() ? "failed" : why;
        } catch (const std::exception& e) {
            sr.pass = false;
            sr.reason = e.what();
        }
        sr.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
        report.steps.push_back(std::move(sr));
    }
};

}  // namespace

VerificationReport verify_certificate(const BlsCertificate& cert) {
    Runner run;

    // N is recomputed once; later steps treat absence as their own failure
    std::optional<BigInt> n_opt;
    try {
        n_opt = wagstaff_number(cert.exponent);
    } catch (const Error&) {
    }
    const std::string no_n = "prerequisite failed: N unavailable (bad exponent)";

    run.step(1, "recompute-n", [&](std::string& why) {
        if (!n_opt) {
            why = "exponent " + std::to_string(cert.exponent) +
                  " is not an odd prime >= 5";
            return false;
        }
        if (digits10(*n_opt) != cert.n_digits) {
            why = "n_digits claims " + std::to_string(cert.n_digits) + ", W_p has " +
                  std::to_string(digits10(*n_opt));
            return false;
        }
        return true;
    });

    run.step(2, "proof-replay", [&](std::string& why) {
        if (cert.entries.empty()) {
            why = "no decomposition entries";
            return false;
        }
        for (const auto& entry : cert.entries) {
            std::string sub;
            if (!entry.proof || !verify_proof(entry.q, *entry.proof, &sub)) {
                why = "proof for q = " + to_decimal(entry.q) + " rejected: " + sub;
                return false;
            }
        }
        return true;
    });

    run.step(3, "valuations", [&](std::string& why) {
        if (!n_opt) {
            why = no_n;
            return false;
        }
        const BigInt nm1 = *n_opt - 1;
        for (const auto& entry : cert.entries) {
            unsigned long e = valuation(nm1, entry.q);
            if (e != entry.e) {
                why = "v_q(N-1) = " + std::to_string(e) + " for q = " +
                      to_decimal(entry.q) + ", certificate claims " +
                      std::to_string(entry.e);
                return false;
            }
        }
        return true;
    });

    run.step(4, "rebuild-f", [&](std::string& why) {
        if (!n_opt) {
            why = no_n;
            return false;
        }
        BigInt f = 1;
        for (const auto& entry : cert.entries) f *= pow_ui(entry.q, entry.e);
        if (f != cert.f) {
            why = "recorded F does not equal prod q^e";
            return false;
        }
        if (cert.f * cert.r != *n_opt - 1) {
            why = "F*R != N-1";
            return false;
        }
        if (gcd(cert.f, cert.r) != 1) {
            why = "gcd(F, R) != 1";
            return false;
        }
        return true;
    });

    run.step(5, "threshold", [&](std::string& why) {
        if (!n_opt) {
            why = no_n;
            return false;
        }
        const BigInt f3 = cert.f * cert.f * cert.f;
        if (cert.form == Form::SqrtForm) {
            if (cert.f * cert.f <= *n_opt) {
                why = "F^2 <= N for the claimed sqrt form";
                return false;
            }
        } else if (f3 <= *n_opt) {
            why = "F^3 <= N for the claimed cube form";
            return false;
        }
        const long margin = floor_log2(f3) - floor_log2(*n_opt);
        if (margin != cert.margin_bits) {
            why = "margin recomputes to " + std::to_string(margin) +
                  ", certificate claims " + std::to_string(cert.margin_bits);
            return false;
        }
        return true;
    });

    run.step(6, "witnesses", [&](std::string& why) {
        if (!n_opt) {
            why = no_n;
            return false;
        }
        const BigInt& n = *n_opt;
        for (const auto& entry : cert.entries) {
            if (entry.witness < 2) {
                why = "witness < 2 for q = " + to_decimal(entry.q);
                return false;
            }
            if (!mpz_divisible_p(BigInt(n - 1).get_mpz_t(), entry.q.get_mpz_t())) {
                why = "q = " + to_decimal(entry.q) + " does not divide N-1";
                return false;
            }
            const BigInt x = mod_pow(entry.witness, (n - 1) / entry.q, n);
            if (mod_pow(x, entry.q, n) != 1) {
                why = "a^(N-1) != 1 for q = " + to_decimal(entry.q);
                return false;
            }
            if (gcd(x - 1, n) != 1) {
                why = "gcd(a^((N-1)/q) - 1, N) != 1 for q = " + to_decimal(entry.q);
                return false;
            }
        }
        return true;
    });

    run.step(7, "discriminant", [&](std::string& why) {
        if (cert.form == Form::SqrtForm) return true;  // vacuous by schema
        if (!cert.discriminant) {
            why = "cube form without discriminant record";
            return false;
        }
        const auto& rec = *cert.discriminant;
        BigInt s, r;
        const BigInt two_f = 2 * cert.f;
        mpz_fdiv_qr(s.get_mpz_t(), r.get_mpz_t(), cert.r.get_mpz_t(),
                    two_f.get_mpz_t());
        if (s != rec.s || r != rec.r) {
            why = "(s, r) decomposition mismatch";
            return false;
        }
        const BigInt delta = r * r - 8 * s;
        if (delta != rec.delta) {
            why = "delta mismatch";
            return false;
        }
        if (is_perfect_square(delta) != rec.is_square) {
            why = "is_square flag does not match a fresh square test";
            return false;
        }
        if (rec.s != 0 && rec.is_square) {
            why = "discriminant rejects: delta is a perfect square";
            return false;
        }
        return true;
    });

    run.step(8, "condition-two", [&](std::string& why) {
        if (!cert.chua.holds) {
            why = "certificate records a failing Condition (II)";
            return false;
        }
        ChuaResult fresh;
        try {
            fresh = condition_two(cert.exponent);
        } catch (const Error& e) {
            why = std::string("replay impossible: ") + e.what();
            return false;
        }
        if (fresh.epsilon != cert.chua.epsilon || fresh.delta != cert.chua.delta ||
            fresh.holds != cert.chua.holds) {
            why = "replayed Condition (II) disagrees with the stored record";
            return false;
        }
        return true;
    });

    run.step(9, "digest", [&](std::string& why) {
        const std::string fresh = digest(cert);
        if (fresh != cert.digest) {
            why = "digest recomputes to " + fresh;
            return false;
        }
        return true;
    });

    run.report.pass = true;
    for (const auto& sr : run.report.steps) run.report.pass &= sr.pass;
    return run.report;
}

}  // namespace wagstaff
