#include "wagstaff/bls.hpp"

#include <algorithm>
#include <future>
#include <semaphore>
#include <set>
#include <sstream>

#include "wagstaff/cyclotomic.hpp"
#include "wagstaff/known.hpp"
#include "wagstaff/quadring.hpp"

namespace wagstaff {

Decomposition assemble_factored_part(const BigInt& n,
                                     const std::vector<CertifiedPrime>& certified) {
    if (n < 3 || mpz_even_p(n.get_mpz_t()))
        throw Error("assemble_factored_part: n must be odd and >= 3");

    // one entry per distinct prime, ascending; full valuations of n-1
    std::vector<CertifiedPrime> primes = certified;
    std::sort(primes.begin(), primes.end(),
              [](const CertifiedPrime& a, const CertifiedPrime& b) { return a.q < b.q; });
    primes.erase(std::unique(primes.begin(), primes.end(),
                             [](const CertifiedPrime& a, const CertifiedPrime& b) {
                                 return a.q == b.q;
                             }),
                 primes.end());

    Decomposition dec;
    dec.n = n;
    dec.f = 1;
    const BigInt nm1 = n - 1;
    for (const auto& cp : primes) {
        if (!cp.proof)
            throw Error("assemble_factored_part: uncertified prime " +
                        to_decimal(cp.q));
        unsigned long e = valuation(nm1, cp.q);
        if (e == 0)
            throw Error("assemble_factored_part: " + to_decimal(cp.q) +
                        " does not divide n-1");
        dec.entries.push_back({cp.q, e, 0, cp.provenance, cp.proof});
        dec.f *= pow_ui(cp.q, e);
    }
    if (dec.f < 2) {
        throw InsufficientFactoredPart("assemble_factored_part: empty factored part",
                                       static_cast<long>(bit_length(n) / 3 + 1), {});
    }
    dec.r = nm1 / dec.f;
    // full valuations make this structural; treat failure as an internal bug
    if (dec.f * dec.r != nm1 || gcd(dec.f, dec.r) != 1)
        throw InternalError("assemble_factored_part: F*R decomposition broken");

    const BigInt f2 = dec.f * dec.f;
    const BigInt f3 = f2 * dec.f;
    if (f2 > n) {
        dec.form = Form::SqrtForm;
    } else if (f3 > n) {
        dec.form = Form::CubeForm;
    } else {
        // sufficient-bits diagnostic: with b = bit_length(F) >= needed, F^3 > N
        // holds regardless of the hidden constant factors
        long needed = static_cast<long>(bit_length(n) + 2) / 3 + 1;
        long missing = std::max(1l, needed - static_cast<long>(bit_length(dec.f)));
        throw InsufficientFactoredPart(
            "assemble_factored_part: F^3 <= N, about " + std::to_string(missing) +
                " bits short",
            missing, {});
    }
    dec.margin_bits = floor_log2(f3) - floor_log2(n);
    return dec;
}

BigInt find_witness(const BigInt& n, const BigInt& q, const BigInt& cofactor_exp) {
    if (n < 3) throw Error("find_witness: n must be >= 3");
    int tried = 0;
    for (unsigned long a = 2; tried < 100; a = (a == 2 ? 3 : a + 2)) {
        if (!is_prime_u64(a)) continue;
        ++tried;
        if (n == a) continue;  // a = 0 (mod n) says nothing
        const BigInt base = a;
        const BigInt x = mod_pow(base, cofactor_exp, n);
        if (mod_pow(x, q, n) != 1)
            throw CompositeDetected("find_witness: Fermat failure at a = " +
                                        std::to_string(a),
                                    n, base, "fermat");
        const BigInt g = gcd(x - 1, n);
        if (g == 1) return base;
        if (g != n)
            throw FactorFound("find_witness: gcd split at a = " + std::to_string(a),
                              g);
        // g == n: this base collapses; try the next one
    }
    throw WitnessSearchExhausted("find_witness: first 100 primes exhausted for q = " +
                                 to_decimal(q));
}

BigInt find_witness(const BigInt& n, const BigInt& q) {
    if (q < 2 || !mpz_divisible_p(BigInt(n - 1).get_mpz_t(), q.get_mpz_t()))
        throw Error("find_witness: q must divide n-1");
    return find_witness(n, q, (n - 1) / q);
}

DiscriminantRecord discriminant_check(const BigInt& n, const BigInt& f,
                                      const BigInt& r) {
    if (f * f > n)
        throw NotApplicable("discriminant_check: F^2 > N, the check is vacuous");
    if (f * r != n - 1) throw Error("discriminant_check: F*R != N-1");

    DiscriminantRecord rec;
    const BigInt two_f = 2 * f;
    mpz_fdiv_qr(rec.s.get_mpz_t(), rec.r.get_mpz_t(), r.get_mpz_t(),
                two_f.get_mpz_t());
    rec.delta = rec.r * rec.r - 8 * rec.s;
    rec.is_square = is_perfect_square(rec.delta);
    return rec;
}

BigInt discriminant_divisor(const BigInt& f, const DiscriminantRecord& rec) {
    if (rec.s == 0 || !rec.is_square)
        throw NotApplicable("discriminant_divisor: record does not reject");
    BigInt t;
    if (!is_perfect_square(rec.delta, t))
        throw InternalError("discriminant_divisor: is_square flag is stale");
    // delta = r^2 - 8s forces t = r (mod 2), so the division is exact and
    // N = (aF+1)(bF+1) with a = (r-t)/2, b = (r+t)/2
    if ((rec.r - t) % 2 != 0)
        throw InternalError("discriminant_divisor: parity violation");
    const BigInt a = (rec.r - t) / 2;
    return a * f + 1;
}

namespace {

std::string insufficiency_report(unsigned long p, long missing,
                                 const WagstaffSplit& split,
                                 const std::vector<Factorization>& facs,
                                 const std::vector<unsigned long>& blocking) {
    std::ostringstream msg;
    msg << "W_" << p << ": certified factored part misses the cube threshold by ~"
        << missing << " bits; unfactored residuals:";
    for (std::size_t i = 0; i < split.terms.size(); ++i) {
        if (facs[i].complete()) continue;
        msg << " Phi_" << split.terms[i].d << "(2) [" << bit_length(facs[i].residual)
            << " of " << bit_length(split.terms[i].value) << " bits]";
    }
    (void)blocking;
    return msg.str();
}

}  // namespace

BlsCertificate prove_wagstaff(unsigned long p, const SourceSet& sources,
                              const BudgetSpec& budget, unsigned threads) {
    const BigInt n = wagstaff_number(p);  // validates p >= 5 prime

    // Composite prescreen. Every W_p passes base 2 (it is a strong base-2
    // pseudoprime structurally), so hunt odd Fermat witnesses for the report.
    if (!is_probable_prime(n)) {
        for (unsigned long a : {3ul, 5ul, 7ul, 11ul, 13ul, 17ul}) {
            if (mod_pow(a, n - 1, n) != 1)
                throw CompositeDetected("prove_wagstaff: W_" + std::to_string(p) +
                                            " fails Fermat at a = " + std::to_string(a),
                                        n, a, "fermat");
        }
        throw CompositeDetected("prove_wagstaff: W_" + std::to_string(p) +
                                    " rejected by the BPSW screen",
                                n, 0, "bpsw");
    }

    const WagstaffSplit split = wagstaff_n_minus_one(p);

    // factor every Phi_d(2); terms are independent, so they may fan out
    std::vector<Factorization> facs(split.terms.size());
    if (threads <= 1 || split.terms.size() <= 1) {
        for (std::size_t i = 0; i < split.terms.size(); ++i)
            facs[i] = factor_fully(split.terms[i].value, split.terms[i].d, budget,
                                   sources);
    } else {
        std::counting_semaphore<> slots(threads);
        std::vector<std::string> logs(split.terms.size());
        std::vector<std::future<void>> jobs;
        jobs.reserve(split.terms.size());
        for (std::size_t i = 0; i < split.terms.size(); ++i) {
            jobs.push_back(std::async(std::launch::async, [&, i] {
                slots.acquire();
                std::ostringstream local;
                SourceSet per = sources;
                per.log = sources.log ? &local : nullptr;
                facs[i] = factor_fully(split.terms[i].value, split.terms[i].d,
                                       budget, per);
                logs[i] = local.str();
                slots.release();
            }));
        }
        for (auto& j : jobs) j.get();
        if (sources.log)
            for (const auto& s : logs) *sources.log << s;
    }

    // a divisor contributes to F only when Phi_d(2) factored completely;
    // partial factorizations are recorded but add nothing to the proof
    std::vector<unsigned long> blocking;
    std::vector<CertifiedPrime> certified;
    certified.push_back({2, Provenance::Algebraic, prove_prime(2, budget)});
    std::set<BigInt> seen{2};
    for (std::size_t i = 0; i < split.terms.size(); ++i) {
        if (!facs[i].complete()) {
            blocking.push_back(split.terms[i].d);
            continue;
        }
        for (const auto& fe : facs[i].factors) {
            if (seen.insert(fe.prime).second)
                certified.push_back({fe.prime, fe.provenance, fe.proof});
        }
    }

    Decomposition dec;
    try {
        dec = assemble_factored_part(n, certified);
    } catch (const InsufficientFactoredPart& e) {
        throw InsufficientFactoredPart(
            insufficiency_report(p, e.missing_bits, split, facs, blocking),
            e.missing_bits, blocking);
    }

    for (auto& entry : dec.entries)
        entry.witness = find_witness(n, entry.q, (n - 1) / entry.q);

    if (dec.form == Form::CubeForm) {
        dec.discriminant = discriminant_check(n, dec.f, dec.r);
        const auto& rec = *dec.discriminant;
        if (rec.s != 0 && rec.is_square)
            throw CompositeDetected("prove_wagstaff: discriminant is a square",
                                    n, discriminant_divisor(dec.f, rec),
                                    "discriminant");
    }

    // auxiliary cross-check, recorded but never part of the primality
    // argument; failing on a BLS-certified prime means broken arithmetic
    const ChuaResult chua = condition_two(p);
    if (!chua.holds)
        throw InternalError(
            "prove_wagstaff: Condition (II) failed on certified prime W_" +
            std::to_string(p));

    BlsCertificate cert;
    cert.exponent = p;
    cert.n_digits = static_cast<unsigned long>(digits10(n));
    for (std::size_t i = 0; i < split.terms.size(); ++i) {
        CertCyclotomicTerm term;
        term.d = split.terms[i].d;
        term.bits = static_cast<unsigned long>(bit_length(split.terms[i].value));
        term.complete = facs[i].complete();
        for (const auto& fe : facs[i].factors)
            term.factors.push_back({fe.prime, fe.exponent, fe.provenance});
        term.residual = facs[i].residual;
        cert.cyclotomic.push_back(std::move(term));
    }
    for (const auto& entry : dec.entries)
        cert.entries.push_back(
            {entry.q, entry.e, entry.witness, entry.provenance, entry.proof});
    cert.f = dec.f;
    cert.r = dec.r;
    cert.form = dec.form;
    cert.discriminant = dec.discriminant;
    cert.margin_bits = dec.margin_bits;
    cert.chua = ChuaRecord{chua.epsilon, chua.delta, chua.holds};
    cert.digest = digest(cert);
    return cert;
}

std::vector<ScanRow> feasibility_scan(const std::vector<unsigned long>& p_list,
                                      const ScanOptions& options) {
    std::vector<ScanRow> rows;
    rows.reserve(p_list.size());
    for (unsigned long p : p_list) {
        ScanRow row;
        row.p = p;
        row.probable_only = is_probable_exponent(p);
        row.n_digits = static_cast<unsigned long>(digits10(wagstaff_number(p)));

        unsigned long tau = 1;
        std::ostringstream fs;
        bool first = true;
        for (auto [q, e] : factor_u64(p - 1)) {
            if (!first) fs << " · ";
            fs << q;
            if (e > 1) fs << '^' << e;
            tau *= e + 1;
            first = false;
        }
        row.pm1_factorization = fs.str();
        row.tau = tau;
        row.needed_bits = static_cast<long>((p - 1 + 2) / 3);  // ceil((p-1)/3)

        long covered = 0;
        unsigned long first_uncovered = 0;
        for (std::uint64_t d : divisors(p - 1)) {
            const unsigned long phi = euler_phi(d);
            bool coverable = phi <= options.assumed_phi_bits;
            if (!coverable && options.table) {
                auto it = options.table->find(d);
                if (it != options.table->end()) {
                    BigInt prod = 1;
                    for (const auto& [q, e] : it->second) prod *= pow_ui(q, e);
                    coverable = prod == phi_at_2(d);
                }
            }
            if (coverable)
                covered += static_cast<long>(phi);
            else if (first_uncovered == 0)
                first_uncovered = d;
        }
        row.covered_bits = covered;
        row.feasible = covered >= row.needed_bits;
        if (!row.feasible) {
            row.blocking_d = first_uncovered;
            row.blocking_phi = first_uncovered ? euler_phi(first_uncovered) : 0;
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace wagstaff
