#include "wagstaff/factor.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <utility>

#include "wagstaff/cyclotomic.hpp"
#include "wagstaff/factordb.hpp"

namespace wagstaff {

namespace {

void log_line(const SourceSet& sources, const std::string& line) {
    if (sources.log) *sources.log << line << '\n';
}

unsigned long largest_prime_factor(unsigned long d) {
    unsigned long best = 1;
    for (auto [p, e] : factor_u64(d)) {
        (void)e;
        best = std::max(best, static_cast<unsigned long>(p));
    }
    return best;
}

// divide all copies of q out of rem; record (q, e) when e > 0
bool divide_out(BigInt& rem, const BigInt& q, Factorization& out, Provenance prov) {
    unsigned long e = 0;
    while (mpz_divisible_p(rem.get_mpz_t(), q.get_mpz_t())) {
        mpz_divexact(rem.get_mpz_t(), rem.get_mpz_t(), q.get_mpz_t());
        ++e;
    }
    if (e == 0) return false;
    out.factors.push_back({q, e, prov, nullptr});
    return true;
}

}  // namespace

Factorization trial_division_progression(const BigInt& n, unsigned long d,
                                         const BigInt& bound) {
    if (n < 1) throw Error("trial_division_progression: n must be >= 1");
    if (d < 1) throw Error("trial_division_progression: d must be >= 1");
    Factorization out;
    out.n = n;
    BigInt rem = n;

    if (d == 1) {
        // plain trial division: 2, 3, then 6k +- 1
        for (unsigned long q : {2ul, 3ul})
            if (q <= bound) divide_out(rem, q, out, Provenance::TrialDivCyclotomic);
        for (BigInt q = 5; q <= bound && q * q <= rem; q += 6) {
            divide_out(rem, q, out, Provenance::TrialDivCyclotomic);
            divide_out(rem, BigInt(q + 2), out, Provenance::TrialDivCyclotomic);
        }
    } else {
        // the intrinsic candidate first: the largest prime factor of d is the
        // only prime that can divide Phi_d(2) without being = 1 (mod d)
        BigInt intrinsic = largest_prime_factor(d);
        if (intrinsic > 1 && intrinsic <= bound)
            divide_out(rem, intrinsic, out, Provenance::TrialDivCyclotomic);
        // progression q = k*d + 1; composite candidates never divide, since
        // all their prime factors are earlier candidates (or the intrinsic)
        const bool skip_even = (d % 2 != 0);
        for (BigInt q = BigInt(d) + 1; q <= bound; q += d) {
            if (skip_even && mpz_even_p(q.get_mpz_t())) continue;
            if (q * q > rem) break;
            divide_out(rem, q, out, Provenance::TrialDivCyclotomic);
        }
    }

    // a prime remainder inside the bound still belongs to the progression
    if (rem > 1 && rem <= bound && (d == 1 || rem % d == 1) && is_probable_prime(rem))
        divide_out(rem, BigInt(rem), out, Provenance::TrialDivCyclotomic);

    out.residual = rem;
    std::sort(out.factors.begin(), out.factors.end(),
              [](const FactorEntry& a, const FactorEntry& b) { return a.prime < b.prime; });
    return out;
}

std::optional<BigInt> pollard_p_minus_1(const BigInt& n, unsigned long b1) {
    if (n < 5 || mpz_even_p(n.get_mpz_t()))
        throw Error("pollard_p_minus_1: n must be odd and >= 5");

    // prime powers p^k <= b1, ascending by p
    std::vector<unsigned long> steps;
    for (unsigned long p = 2; p <= b1; p = (p == 2 ? 3 : p + 2)) {
        if (!is_prime_u64(p)) continue;
        unsigned long pk = p;
        while (pk <= b1 / p) pk *= p;
        steps.push_back(pk);
    }

    for (unsigned long base : {2ul, 3ul}) {
        BigInt a = base;
        bool dead = false;  // a = 1 (mod n): nothing more from this base
        for (std::size_t i = 0; i < steps.size() && !dead;) {
            const std::size_t end = std::min(i + 64, steps.size());
            const BigInt checkpoint = a;
            BigInt block = 1;
            for (std::size_t j = i; j < end; ++j) {
                a = mod_pow(a, steps[j], n);
                block = block * (a - 1) % n;
            }
            BigInt g = gcd(block, n);
            if (g > 1 && g < n) return g;
            if (g == n) {
                // several primes collapsed inside one block: replay it one
                // step at a time from the checkpoint
                a = checkpoint;
                for (std::size_t j = i; j < end; ++j) {
                    a = mod_pow(a, steps[j], n);
                    BigInt gs = gcd(a - 1, n);
                    if (gs > 1 && gs < n) return gs;
                    if (gs == n) { dead = true; break; }
                }
            }
            i = end;
        }
    }
    return std::nullopt;
}

std::optional<BigInt> pollard_rho(const BigInt& n, unsigned long budget) {
    if (n < 4) throw Error("pollard_rho: n must be >= 4");
    if (mpz_even_p(n.get_mpz_t())) return BigInt(2);

    // Brent cycle detection, gcd over batches of 64 differences,
    // deterministic seed schedule c = 1, 2, 3, ... with x0 = 2
    const unsigned long m = 64;
    unsigned long used = 0;
    for (unsigned long c = 1; used < budget; ++c) {
        BigInt y = 2, q = 1, g = 1, x = 0, ys = 0;
        unsigned long r = 1;
        while (g == 1 && used < budget) {
            x = y;
            for (unsigned long i = 0; i < r && used < budget; ++i) {
                y = (y * y + c) % n;
                ++used;
            }
            unsigned long k = 0;
            while (k < r && g == 1 && used < budget) {
                ys = y;
                const unsigned long lim = std::min(m, r - k);
                for (unsigned long i = 0; i < lim; ++i) {
                    y = (y * y + c) % n;
                    BigInt diff = x - y;
                    if (diff < 0) diff = -diff;
                    q = q * diff % n;
                    ++used;
                }
                g = gcd(q, n);
                k += lim;
            }
            r *= 2;
        }
        if (g == n) {
            // the batch overshot: single-step from the last saved position
            g = 1;
            while (g == 1) {
                ys = (ys * ys + c) % n;
                BigInt diff = x - ys;
                if (diff < 0) diff = -diff;
                g = gcd(diff, n);
            }
        }
        if (g > 1 && g < n) return g;
        // g == 1 (budget ran out) or g == n (cycle with no split): next seed
    }
    return std::nullopt;
}

FactorTable load_factor_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw TableFormatError("cannot open factor table", path, 0);
    FactorTable table;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        auto last = line.find_last_not_of(" \t\r");
        line = line.substr(first, last - first + 1);
        auto colon = line.find(':');
        if (colon == std::string::npos)
            throw TableFormatError("missing ':'", path, lineno);
        unsigned long d = 0;
        try {
            BigInt dv = from_decimal(line.substr(0, colon));
            if (dv < 1 || !dv.fits_ulong_p()) throw Error("range");
            d = dv.get_ui();
        } catch (const Error&) {
            throw TableFormatError("bad divisor index", path, lineno);
        }
        std::vector<std::pair<BigInt, unsigned long>> entries;
        std::istringstream rest(line.substr(colon + 1));
        std::string tok;
        while (rest >> tok) {
            auto caret = tok.find('^');
            unsigned long exp = 1;
            try {
                if (caret != std::string::npos) {
                    BigInt ev = from_decimal(tok.substr(caret + 1));
                    if (ev < 1 || !ev.fits_ulong_p()) throw Error("range");
                    exp = ev.get_ui();
                }
                BigInt pv = from_decimal(tok.substr(0, caret));
                if (pv < 2) throw Error("range");
                entries.push_back({pv, exp});
            } catch (const Error&) {
                throw TableFormatError("bad factor token \"" + tok + "\"", path,
                                       lineno);
            }
        }
        if (entries.empty())
            throw TableFormatError("no factor entries", path, lineno);
        if (table.count(d))
            throw TableFormatError("duplicate divisor index", path, lineno);
        table[d] = std::move(entries);
    }
    return table;
}

FactorTable load_factor_table_dir(const std::string& dir) {
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".txt")
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    FactorTable merged;
    for (const auto& f : files)
        for (auto& [d, claims] : load_factor_table(f.string()))
            merged[d] = std::move(claims);
    return merged;
}

namespace {

// certify q, divide all its copies out of rem, and list it. Claims that
// cannot be certified (budget) or that are exposed as composite are left
// alone: the caller keeps working on rem.
bool admit_prime(const BigInt& q, Provenance prov, const BudgetSpec& budget,
                 const SourceSet& sources, Factorization& out, BigInt& rem) {
    if (!mpz_divisible_p(rem.get_mpz_t(), q.get_mpz_t())) return false;
    ProofPtr proof;
    try {
        proof = prove_prime(q, budget, sources);
    } catch (const CompositeDetected&) {
        return false;
    } catch (const CertificationIncomplete&) {
        log_line(sources, "certification incomplete for " + to_decimal(q) +
                              "; left in residual");
        return false;
    }
    unsigned long e = 0;
    while (mpz_divisible_p(rem.get_mpz_t(), q.get_mpz_t())) {
        mpz_divexact(rem.get_mpz_t(), rem.get_mpz_t(), q.get_mpz_t());
        ++e;
    }
    out.factors.push_back({q, e, prov, proof});
    return true;
}

}  // namespace

Factorization factor_fully(const BigInt& n, unsigned long d,
                           const BudgetSpec& budget, const SourceSet& sources) {
    if (n < 1) throw Error("factor_fully: n must be >= 1");
    Factorization out;
    out.n = n;
    out.residual = 1;
    if (n == 1) return out;

    const BigInt original = n;
    BigInt rem = n;
    BigInt residual = 1;

    // prime on arrival: for d >= 2 this is the "Phi_d(2) itself prime" case
    if (is_probable_prime(rem)) {
        Provenance prov = d >= 2 ? Provenance::CyclotomicPrime
                                 : Provenance::ResidualPrimeCertified;
        const BigInt q = rem;  // admit_prime mutates rem; don't alias q to it
        if (!admit_prime(q, prov, budget, sources, out, rem)) residual = rem;
        out.residual = residual;
        return out;
    }

    // 1. local table: claims keyed by the cyclotomic index
    if (sources.table) {
        auto it = sources.table->find(d);
        if (it != sources.table->end()) {
            for (const auto& [p, e] : it->second) {
                (void)e;  // exponent claims are advisory; powers re-derived
                if (!mpz_divisible_p(rem.get_mpz_t(), p.get_mpz_t())) {
                    if (mpz_divisible_p(original.get_mpz_t(), p.get_mpz_t()))
                        continue;  // already divided out by an earlier claim
                    log_line(sources, "table claim " + to_decimal(p) +
                                          " does not divide Phi_" +
                                          std::to_string(d) + "(2); discarded");
                    continue;
                }
                if (!is_probable_prime(p)) {
                    log_line(sources, "table claim " + to_decimal(p) +
                                          " is composite; discarded");
                    continue;
                }
                admit_prime(p, Provenance::TableLookup, budget, sources, out, rem);
            }
        }
    }

    // 2. external db claims (discovery aid only, never trusted)
    if (sources.db && rem > 1 && !is_probable_prime(rem)) {
        try {
            DbResponse resp = sources.db->lookup(rem);
            for (const auto& [p, e] : resp.claims) {
                (void)e;
                // p == rem is fine: earlier claims may have shrunk rem to the
                // final listed prime, and admit_prime re-certifies anyway
                if (p < 2 || p > rem) continue;
                if (!mpz_divisible_p(rem.get_mpz_t(), p.get_mpz_t())) {
                    log_line(sources, "factordb claim " + to_decimal(p) +
                                          " does not divide; discarded");
                    continue;
                }
                if (!is_probable_prime(p)) continue;  // local methods will split it
                admit_prime(p, Provenance::ExternalDb, budget, sources, out, rem);
            }
        } catch (const DbUnavailable& e) {
            log_line(sources, std::string("factordb unavailable: ") + e.what());
        }
    }

    // 3. progression trial division on what is left
    if (rem > 1 && !is_probable_prime(rem)) {
        BigInt bound = d == 1 ? BigInt(budget.trial_candidates)
                              : BigInt(d) * budget.trial_candidates + 1;
        Factorization trial = trial_division_progression(rem, d, bound);
        for (const auto& fe : trial.factors)
            admit_prime(fe.prime, Provenance::TrialDivCyclotomic, budget, sources,
                        out, rem);
    }

    // 4/5. p-1 then rho on the remaining composites, recursing on cofactors.
    // Each pending value carries the provenance its prime factors will get:
    // parts isolated by a split method take that method's label, the
    // untouched remainder stays a residual prime.
    std::vector<std::pair<BigInt, Provenance>> pending;
    if (rem > 1) pending.push_back({rem, Provenance::ResidualPrimeCertified});
    while (!pending.empty()) {
        auto [m, prov] = pending.back();
        pending.pop_back();
        if (m == 1) continue;
        if (is_probable_prime(m)) {
            BigInt scratch = m;
            if (!admit_prime(m, prov, budget, sources, out, scratch)) residual *= m;
            continue;
        }
        std::optional<BigInt> g;
        Provenance split_prov = Provenance::DirectPminus1;
        g = pollard_p_minus_1(m, budget.pminus1_b1);
        if (g) {
            log_line(sources, "p-1 split " + to_decimal(m) + " -> " + to_decimal(*g));
        } else {
            g = pollard_rho(m, budget.rho_iterations);
            if (g) {
                split_prov = Provenance::DirectRho;
                log_line(sources,
                         "rho split " + to_decimal(m) + " -> " + to_decimal(*g));
            }
        }
        if (!g) {
            residual *= m;
            continue;
        }
        pending.push_back({*g, split_prov});
        pending.push_back({m / *g, split_prov});
    }
    out.residual = residual;

    // merge duplicate primes: a claim source and a local method can both
    // contribute copies of the same prime along different cofactor paths
    std::map<BigInt, FactorEntry> merged;
    for (auto& fe : out.factors) {
        auto [it, fresh] = merged.try_emplace(fe.prime, fe);
        if (!fresh) it->second.exponent += fe.exponent;
    }
    out.factors.clear();
    BigInt check = out.residual;
    for (auto& [p, fe] : merged) {
        out.factors.push_back(fe);
        check *= pow_ui(p, fe.exponent);
    }
    if (check != original)
        throw InternalError("factor_fully: product invariant violated for n = " +
                            to_decimal(original));
    return out;
}

}  // namespace wagstaff
