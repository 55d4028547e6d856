// Acceptance harness: one line per criterion, nonzero exit on any failure.
// Runs the CLI as a subprocess for end-to-end criteria and links the library
// directly for the sweep/property criteria.

#include <array>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "oracles.hpp"
#include "wagstaff/bigmath.hpp"
#include "wagstaff/bls.hpp"
#include "wagstaff/certificate.hpp"
#include "wagstaff/certify.hpp"
#include "wagstaff/cyclotomic.hpp"
#include "wagstaff/errors.hpp"
#include "wagstaff/known.hpp"
#include "wagstaff/quadring.hpp"
#include "wagstaff/verifier.hpp"

namespace fs = std::filesystem;
using namespace wagstaff;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct RunResult {
    int exit_code = -1;
    std::string output;
};

RunResult run(const std::string& cmd) {
    RunResult r;
    FILE* pipe = popen((cmd + " 2>&1").c_str(), "r");
    if (!pipe) return r;
    std::array<char, 4096> buf;
    while (std::size_t n = fread(buf.data(), 1, buf.size(), pipe))
        r.output.append(buf.data(), n);
    int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

bool contains(const std::string& hay, const std::string& needle) {
    return hay.find(needle) != std::string::npos;
}

// summary-row field: "... | M 46 | ..." -> "46"
std::string field_after(const std::string& text, const std::string& tag) {
    std::size_t at = text.find(tag);
    if (at == std::string::npos) return "";
    at += tag.size();
    std::size_t end = text.find_first_of(" |\n", at);
    return text.substr(at, end - at);
}

int g_failures = 0;

void report(int num, bool pass, const std::string& what,
            const std::string& detail = "") {
    std::cout << "criterion " << num << ": " << (pass ? "pass" : "FAIL") << " - "
              << what;
    if (!pass && !detail.empty()) std::cout << " [" << detail << "]";
    std::cout << std::endl;
    if (!pass) ++g_failures;
}

void info(const std::string& text) { std::cout << "info: " << text << std::endl; }

std::string g_cli;
fs::path g_fixtures;
fs::path g_tmp;

std::string cert_path(unsigned long p, const std::string& suffix = "") {
    return (g_tmp / ("w" + std::to_string(p) + suffix + ".cert.json")).string();
}

std::string prove_cmd(unsigned long p, const std::string& out,
                      const std::string& extra = "") {
    return g_cli + " prove --p " + std::to_string(p) + " --out " + out +
           (extra.empty() ? "" : " " + extra);
}

// ---- criterion 1: desk-scale end-to-end proofs -----------------------------

void criterion_1() {
    const std::vector<unsigned long> desk = {5,  7,  11, 13, 17, 19, 23,
                                             31, 43, 61, 79, 101, 127};
    std::string detail;
    const auto t0 = Clock::now();
    bool ok = true;
    for (unsigned long p : desk) {
        RunResult r = run(prove_cmd(p, cert_path(p)));
        if (r.exit_code != 0) {
            ok = false;
            detail = "prove --p " + std::to_string(p) + " exited " +
                     std::to_string(r.exit_code);
            break;
        }
    }
    const double prove_secs = seconds_since(t0);
    if (ok && prove_secs >= 60.0) {
        ok = false;
        detail = "proofs took " + std::to_string(prove_secs) + " s";
    }
    if (ok) {
        for (unsigned long p : desk) {
            RunResult v = run(g_cli + " verify " + cert_path(p));
            if (v.exit_code != 0 || !contains(v.output, "VERIFIED")) {
                ok = false;
                detail = "verify failed for p = " + std::to_string(p);
                break;
            }
        }
    }
    report(1, ok,
           "13 desk-scale proofs succeed and verify (" +
               std::to_string(prove_secs).substr(0, 5) + " s total)",
           detail);

    // stretch, non-gating
    for (unsigned long p : {167ul, 191ul, 199ul, 313ul, 347ul}) {
        const auto s0 = Clock::now();
        RunResult r = run(prove_cmd(p, cert_path(p)));
        std::ostringstream line;
        line << "stretch prove --p " << p << ": exit " << r.exit_code << " in "
             << std::to_string(seconds_since(s0)).substr(0, 5) << " s";
        info(line.str());
    }
}

// ---- criterion 2: composite detection with a recorded witness --------------

void criterion_2() {
    const std::vector<unsigned long> composite_wagstaff = {
        29, 37, 41, 47, 53, 59, 67, 71, 73, 83, 89, 97, 103, 107, 109, 113};
    bool ok = true;
    std::string detail;
    for (unsigned long p : composite_wagstaff) {
        RunResult r = run(g_cli + " prove --p " + std::to_string(p) + " --out " +
                          cert_path(p, "_composite"));
        if (r.exit_code != 1 || !contains(r.output, "composite") ||
            !contains(r.output, "witness")) {
            ok = false;
            detail = "p = " + std::to_string(p) + " exit " +
                     std::to_string(r.exit_code) + ": " + r.output;
            break;
        }
        // the printed witness must actually break Fermat
        const std::string w = field_after(r.output, "witness ");
        const BigInt a = from_decimal(w.substr(0, w.find(')')));
        const BigInt n = wagstaff_number(p);
        if (mod_pow(a, n - 1, n) == 1) {
            ok = false;
            detail = "witness for p = " + std::to_string(p) + " does not fail Fermat";
            break;
        }
    }
    report(2, ok, "every prime p <= 127 with composite W_p exits 1 with a Fermat witness",
           detail);
}

// ---- criterion 3: Condition (II) for proved exponents ----------------------

void criterion_3() {
    bool ok = true;
    std::string detail;
    for (unsigned long p : kProvedExponents) {
        if (p > 1709) continue;
        const auto t0 = Clock::now();
        ChuaResult r = condition_two(p);
        const double secs = seconds_since(t0);
        if (!r.holds || r.epsilon != -1 || r.delta != -1) {
            ok = false;
            detail = "condition (II) fails for proved p = " + std::to_string(p);
            break;
        }
        if (secs >= 5.0) {
            ok = false;
            detail = "p = " + std::to_string(p) + " took " + std::to_string(secs) + " s";
            break;
        }
    }
    report(3, ok, "condition (II) holds for every proved p <= 1709, each under 5 s",
           detail);

    const auto t0 = Clock::now();
    ChuaResult stretch = condition_two(2617);
    info("stretch condition (II) p = 2617: holds=" +
         std::string(stretch.holds ? "true" : "false") + " in " +
         std::to_string(seconds_since(t0)).substr(0, 5) + " s");
}

// ---- criterion 4: smoothness table reproduction ----------------------------

void criterion_4() {
    RunResult r = run(g_cli + " scan --known");
    bool ok = r.exit_code == 0;
    std::string detail = ok ? "" : "scan --known exited " + std::to_string(r.exit_code);

    // expected p-1 strings; the composite "1703" and "58619" entries in the
    // source table are printed as their true factorizations here
    const std::vector<std::pair<unsigned long, std::string>> expected = {
        {3539, "2 · 29 · 61"},
        {5807, "2 · 2903"},
        {10501, "2^2 · 3 · 5^3 · 7"},
        {10691, "2 · 5 · 1069"},
        {11279, "2 · 5639"},
        {12391, "2 · 3 · 5 · 7 · 59"},
        {14479, "2 · 3 · 19 · 127"},
        {42737, "2^4 · 2671"},
        {83339, "2 · 41669"},
        {95369, "2^3 · 7 · 13 · 131"},
        {117239, "2 · 11 · 73^2"},
        {127031, "2 · 5 · 12703"},
        {138937, "2^3 · 3 · 7 · 827"},
        {141079, "2 · 3 · 7 · 3359"},
        {267017, "2^3 · 33377"},
    };

    // parse TSV rows: p \t status \t digits \t tau \t p-1 \t ...
    std::map<unsigned long, std::vector<std::string>> rows;
    {
        std::istringstream in(r.output);
        std::string line;
        std::getline(in, line);  // header
        while (std::getline(in, line)) {
            std::vector<std::string> cols;
            std::istringstream ls(line);
            std::string c;
            while (std::getline(ls, c, '\t')) cols.push_back(c);
            if (cols.size() >= 5) rows[std::stoul(cols[0])] = cols;
        }
    }

    if (ok)
        for (const auto& [p, want] : expected) {
            auto it = rows.find(p);
            if (it == rows.end() || it->second[4] != want) {
                ok = false;
                detail = "p = " + std::to_string(p) + " p-1 column: got '" +
                         (it == rows.end() ? "<missing>" : it->second[4]) +
                         "', want '" + want + "'";
                break;
            }
        }

    // the two corrected rows must still be honest factorizations
    if (ok) {
        auto check_true = [&](unsigned long p) {
            auto fac = oracle::brute_factor(p - 1);
            BigInt prod = 1;
            for (auto [q, e] : fac)
                for (unsigned i = 0; i < e; ++i) prod *= q;
            return prod == p - 1;
        };
        if (!check_true(95369) || !check_true(117239)) {
            ok = false;
            detail = "oracle recheck of corrected rows failed";
        }
    }

    // Table-1 pins for the three full-scale targets
    const std::vector<std::tuple<unsigned long, std::string, std::string>> pins = {
        {2617, "16", "788"}, {10501, "48", "3161"}, {12391, "32", "3730"}};
    if (ok)
        for (const auto& [p, tau, digits] : pins) {
            const auto& cols = rows[p];
            if (cols.size() < 5 || cols[3] != tau || cols[2] != digits) {
                ok = false;
                detail = "tau/digits mismatch for p = " + std::to_string(p);
                break;
            }
        }

    report(4, ok, "scan --known reproduces all 15 p-1 rows, tau and digit pins",
           detail);
}

// ---- criterion 5: full-scale margin, conditional on fixture tables ---------

void criterion_5() {
    const fs::path table = g_fixtures / "tables" / "p2617.txt";
    if (!fs::exists(table)) {
        report(5, true,
               "p = 2617 fixture table absent; full-scale margin not asserted "
               "(documented boundary)");
        return;
    }
    const std::string out = cert_path(2617);
    RunResult r = run(prove_cmd(
        2617, out,
        "--tables " + (g_fixtures / "tables").string() +
            " --factordb on --factordb-cache " + (g_fixtures / "factordb").string() +
            " --factordb-url http://127.0.0.1:9 --threads 8"));
    bool ok = r.exit_code == 0;
    std::string detail = ok ? "" : "prove exited " + std::to_string(r.exit_code) +
                                       ": " + r.output;
    if (ok && (field_after(r.output, "| M ") != "46" ||
               field_after(r.output, "primes in F ") != "22")) {
        ok = false;
        detail = "summary row: " + r.output;
    }
    if (ok) {
        RunResult v = run(g_cli + " verify " + out);
        if (v.exit_code != 0) {
            ok = false;
            detail = "verify exited " + std::to_string(v.exit_code);
        }
    }
    report(5, ok, "fixture-backed p = 2617 proof reproduces M = 46 with 22 primes in F",
           detail);
}

// ---- criterion 6: cyclotomic product identity -------------------------------

void criterion_6() {
    bool ok = true;
    std::string detail;
    for (std::uint64_t n = 1; n <= 400; ++n) {
        BigInt prod = 1;
        for (auto d : divisors(n)) prod *= phi_at_2(d);
        if (prod != pow_ui(2, n) - 1) {
            ok = false;
            detail = "identity fails at n = " + std::to_string(n);
            break;
        }
    }
    report(6, ok, "prod_{d|n} Phi_d(2) = 2^n - 1 for all n <= 400", detail);
}

// ---- criterion 7: exhaustive small-N BLS sweep ------------------------------

void criterion_7() {
    const std::uint64_t limit = 100000;
    const auto sieve = oracle::prime_sieve(limit);

    // smallest-prime-factor table for fast factorization of N-1
    std::vector<std::uint32_t> spf(limit + 1, 0);
    for (std::uint64_t i = 2; i <= limit; ++i)
        if (!spf[i])
            for (std::uint64_t j = i; j <= limit; j += i)
                if (!spf[j]) spf[j] = static_cast<std::uint32_t>(i);

    std::uint64_t cases = 0, disagreements = 0;
    std::string first_bad;

    for (std::uint64_t n = 3; n <= limit; n += 2) {
        // N-1 = prod q^e
        std::vector<std::pair<std::uint64_t, std::uint64_t>> pp;  // (q, q^e)
        for (std::uint64_t m = n - 1; m > 1;) {
            std::uint64_t q = spf[m], qe = 1;
            while (m % q == 0) {
                m /= q;
                qe *= q;
            }
            pp.emplace_back(q, qe);
        }

        // witness outcome per distinct q: 0 = composite signal, else witness found
        std::vector<BigInt> wit(pp.size());
        std::vector<bool> wit_ok(pp.size());
        bool composite_signal = false;
        for (std::size_t i = 0; i < pp.size(); ++i) {
            try {
                wit[i] = find_witness(n, pp[i].first, (n - 1) / pp[i].first);
                wit_ok[i] = true;
            } catch (const Error&) {
                wit_ok[i] = false;  // fermat failure, factor found, or exhausted
                composite_signal = true;
            }
        }
        (void)composite_signal;

        // every subset of full prime powers
        const std::size_t subsets = std::size_t{1} << pp.size();
        for (std::size_t mask = 1; mask < subsets; ++mask) {
            std::uint64_t f = 1;
            for (std::size_t i = 0; i < pp.size(); ++i)
                if (mask & (std::size_t{1} << i)) f *= pp[i].second;
            const BigInt F = f;
            if (F * F * F <= n) continue;  // below the cube threshold
            ++cases;

            bool verdict_prime = true;
            for (std::size_t i = 0; i < pp.size() && verdict_prime; ++i)
                if ((mask & (std::size_t{1} << i)) && !wit_ok[i]) verdict_prime = false;

            if (verdict_prime && F * F <= n) {
                // cube-only range: the discriminant decides
                DiscriminantRecord rec = discriminant_check(n, F, (n - 1) / F);
                if (rec.s >= 1 && rec.is_square) verdict_prime = false;
            }

            if (verdict_prime != sieve[n]) {
                ++disagreements;
                if (first_bad.empty())
                    first_bad = "N = " + std::to_string(n) + ", F = " + std::to_string(f);
            }
        }
    }

    report(7, disagreements == 0,
           "BLS sweep over odd N in [3, 10^5]: " + std::to_string(cases) +
               " (N, F) cases, zero disagreements with the sieve",
           first_bad + " (" + std::to_string(disagreements) + " disagreements)");
}

// ---- criterion 8: Chua congruence sweep and base-3 uniqueness ---------------

void criterion_8() {
    const auto sieve = oracle::prime_sieve(10000);
    bool ok = true;
    std::string detail;
    for (std::uint64_t q = 3; q <= 10000 && ok; q += 2) {
        if (!sieve[q]) continue;
        for (std::uint64_t a = 2; a <= 50; ++a) {
            if (gcd(BigInt(a) * a - 1, q) != 1) continue;
            if (!chua_check(a, q).holds) {
                ok = false;
                detail = "congruence fails at Q = " + std::to_string(q) +
                         ", a = " + std::to_string(a);
                break;
            }
        }
    }

    // uniqueness: a = 3 is the only a <= 10^6 with a^2 - 1 a power of two
    if (ok) {
        std::uint64_t hits = 0, witness_a = 0;
        for (std::uint64_t a = 2; a <= 1000000; ++a) {
            const std::uint64_t x = a * a - 1;
            if ((x & (x - 1)) == 0) {
                ++hits;
                witness_a = a;
            }
        }
        if (hits != 1 || witness_a != 3) {
            ok = false;
            detail = "power-of-two scan found " + std::to_string(hits) + " hits";
        }
    }
    report(8, ok, "chua_check holds for all primes Q <= 10^4, a in [2,50]; a = 3 unique",
           detail);
}

// ---- criterion 9: verifier mutation classes ---------------------------------

void criterion_9() {
    bool ok = true;
    std::string detail;

    const std::string sqrt_path = cert_path(127);  // from criterion 1
    const std::string cube_path = cert_path(347);  // from criterion 1 stretch
    BlsCertificate sqrt_cert, cube_cert;
    try {
        sqrt_cert = read_certificate(sqrt_path);
        cube_cert = read_certificate(cube_path);
    } catch (const Error& e) {
        report(9, false, "verifier mutation classes", e.what());
        return;
    }
    if (cube_cert.form != Form::CubeForm) {
        report(9, false, "verifier mutation classes", "p = 347 cert not cube form");
        return;
    }

    struct Mutation {
        int step;  // step expected to fail
        const char* label;
        bool use_cube;
        void (*apply)(BlsCertificate&);
    };
    const Mutation mutations[] = {
        {1, "n_digits", false, [](BlsCertificate& c) { c.n_digits += 1; }},
        {2, "embedded proof", false,
         [](BlsCertificate& c) {
             auto broken = std::make_shared<PrimalityProof>(*c.entries[0].proof);
             broken->n = 4;
             c.entries[0].proof = broken;
         }},
        {3, "valuation", false, [](BlsCertificate& c) { c.entries[1].e += 1; }},
        {4, "cofactor", false, [](BlsCertificate& c) { c.r += 2; }},
        {5, "margin", false, [](BlsCertificate& c) { c.margin_bits += 1; }},
        {6, "witness", false, [](BlsCertificate& c) { c.entries[0].witness = 4; }},
        {7, "discriminant", true,
         [](BlsCertificate& c) { c.discriminant->is_square = !c.discriminant->is_square; }},
        {8, "chua record", false, [](BlsCertificate& c) { c.chua.holds = false; }},
        {9, "digest", false,
         [](BlsCertificate& c) { c.digest[0] = c.digest[0] == '0' ? '1' : '0'; }},
    };

    auto first_failing_step = [](const std::string& out) {
        std::istringstream in(out);
        std::string line;
        while (std::getline(in, line))
            if (line.rfind("step ", 0) == 0 && contains(line, "FAIL"))
                return std::stoi(line.substr(5));
        return -1;
    };

    for (const Mutation& m : mutations) {
        BlsCertificate cert = m.use_cube ? cube_cert : sqrt_cert;
        m.apply(cert);
        if (m.step != 9) cert.digest = digest(cert);  // reseal so only the target trips
        const std::string path = (g_tmp / ("mut" + std::to_string(m.step) + ".json")).string();
        write_certificate(cert, path);
        RunResult r = run(g_cli + " verify " + path);
        if (r.exit_code != 1 || !contains(r.output, "REJECTED") ||
            first_failing_step(r.output) != m.step) {
            ok = false;
            detail = std::string("mutation '") + m.label + "' (step " +
                     std::to_string(m.step) + "): exit " + std::to_string(r.exit_code) +
                     ", first failing step " +
                     std::to_string(first_failing_step(r.output));
            break;
        }
    }

    // and the unmutated certificates still pass
    if (ok)
        for (const std::string& p : {sqrt_path, cube_path})
            if (run(g_cli + " verify " + p).exit_code != 0) {
                ok = false;
                detail = "pristine certificate rejected: " + p;
            }

    report(9, ok, "all 9 mutation classes rejected at their step; pristine certs pass",
           detail);
}

// ---- criterion 10: determinism ----------------------------------------------

void criterion_10() {
    const std::string a = cert_path(127, "_det_a"), b = cert_path(127, "_det_b");
    run(prove_cmd(127, a));
    run(prove_cmd(127, b));
    auto slurp = [](const std::string& p) {
        std::ifstream in(p, std::ios::binary);
        return std::string((std::istreambuf_iterator<char>(in)),
                           std::istreambuf_iterator<char>());
    };
    const std::string bytes_a = slurp(a), bytes_b = slurp(b);
    bool ok = !bytes_a.empty() && bytes_a == bytes_b;
    std::string detail = ok ? "" : "independent runs differ";

    if (ok) {
        RunResult da = run(g_cli + " digest " + a);
        RunResult db = run(g_cli + " digest " + b);
        if (da.exit_code != 0 || da.output != db.output) {
            ok = false;
            detail = "digest subcommand disagrees";
        }
    }

    // single-field mutations all change the digest
    if (ok) {
        const BlsCertificate base = read_certificate(a);
        std::vector<std::pair<const char*, BlsCertificate>> variants;
        BlsCertificate v = base;
        v.exponent = 131;
        variants.emplace_back("exponent", v);
        v = base;
        v.n_digits += 1;
        variants.emplace_back("n_digits", v);
        v = base;
        v.f += 1;
        variants.emplace_back("f", v);
        v = base;
        v.r += 1;
        variants.emplace_back("r", v);
        v = base;
        v.margin_bits -= 1;
        variants.emplace_back("margin_bits", v);
        v = base;
        v.chua.delta = 1;
        variants.emplace_back("chua.delta", v);
        v = base;
        v.entries[0].witness += 1;
        variants.emplace_back("entry witness", v);
        v = base;
        v.cyclotomic[0].bits += 1;
        variants.emplace_back("cyclotomic bits", v);
        for (const auto& [label, mutated] : variants)
            if (digest(mutated) == base.digest) {
                ok = false;
                detail = std::string("digest unchanged by field: ") + label;
                break;
            }
    }
    report(10, ok, "prove --p 127 twice: byte-identical; digest moves with any field",
           detail);
}

// ---- criterion 11: BPSW regression -------------------------------------------

void criterion_11() {
    report(11, !is_probable_prime(2047),
           "is_probable_prime(2047) = false (strong base-2 pseudoprime)");
}

}  // namespace

int main(int argc, char** argv) {
    for (int i = 1; i + 1 < argc; i += 2) {
        const std::string flag = argv[i];
        if (flag == "--cli") g_cli = argv[i + 1];
        if (flag == "--fixtures") g_fixtures = argv[i + 1];
    }
    if (g_cli.empty()) {
        std::cerr << "usage: acceptance --cli <wagstaff-bls> --fixtures <dir>\n";
        return 2;
    }
    g_tmp = fs::temp_directory_path() / "wagstaff-acceptance";
    fs::remove_all(g_tmp);
    fs::create_directories(g_tmp);

    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    criterion_11();

    std::cout << (g_failures == 0 ? "ACCEPTANCE PASS" : "ACCEPTANCE FAIL: " +
                                        std::to_string(g_failures) + " criteria")
              << std::endl;
    return g_failures == 0 ? 0 : 1;
}
