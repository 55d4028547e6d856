#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wagstaff/bls.hpp"
#include "wagstaff/cyclotomic.hpp"
#include "wagstaff/factordb.hpp"
#include "wagstaff/known.hpp"
#include "wagstaff/quadring.hpp"
#include "wagstaff/verifier.hpp"

namespace {

using namespace wagstaff;
namespace fs = std::filesystem;

unsigned long tau_u64(unsigned long n) {
    unsigned long tau = 1;
    for (auto [p, e] : factor_u64(n)) {
        (void)p;
        tau *= e + 1;
    }
    return tau;
}

struct CommonOpts {
    std::string tables_dir;
    std::string factordb = "off";
    std::string factordb_url = "http://factordb.com";
    std::string factordb_cache = ".factordb-cache";
    BudgetSpec budget;
    unsigned threads = 1;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--tables", o.tables_dir,
                    "directory of factor-table files (*.txt)");
    cmd->add_option("--factordb", o.factordb, "external db lookups: on/off")
        ->check(CLI::IsMember({"on", "off"}));
    cmd->add_option("--factordb-url", o.factordb_url, "external db base url")
        ->envname("WAGSTAFF_FACTORDB_URL");
    cmd->add_option("--factordb-cache", o.factordb_cache,
                    "external db response cache directory")
        ->envname("WAGSTAFF_FACTORDB_CACHE");
    cmd->add_option("--trial-candidates", o.budget.trial_candidates,
                    "progression candidates per trial-division pass");
    cmd->add_option("--rho-iterations", o.budget.rho_iterations,
                    "rho f-evaluations per composite");
    cmd->add_option("--pminus1-b1", o.budget.pminus1_b1,
                    "p-1 stage-1 smoothness bound");
    cmd->add_option("--threads", o.threads, "concurrent factor jobs");
}

struct ResolvedSources {
    FactorTable table;
    bool have_table = false;
    std::unique_ptr<FactorDbClient> db;

    // built at the call site: a SourceSet holds raw pointers into this
    // object, so it must not outlive it (or survive a move of it)
    SourceSet set(std::ostream* log) const {
        SourceSet s;
        if (have_table) s.table = &table;
        s.db = db.get();
        s.log = log;
        return s;
    }
};

ResolvedSources resolve_sources(const CommonOpts& o) {
    ResolvedSources r;
    if (!o.tables_dir.empty()) {
        r.table = load_factor_table_dir(o.tables_dir);
        r.have_table = true;
    }
    if (o.factordb == "on")
        r.db = std::make_unique<FactorDbClient>(o.factordb_url, o.factordb_cache,
                                                /*network_enabled=*/true);
    return r;
}

int cmd_prove(unsigned long p, const CommonOpts& opts, std::string out_path) {
    if (out_path.empty()) out_path = "w" + std::to_string(p) + ".cert.json";
    const std::string log_path = out_path + ".log";
    std::ofstream log(log_path);
    if (!log) {
        std::cerr << "cannot open run log " << log_path << "\n";
        return 3;
    }

    const auto t0 = std::chrono::steady_clock::now();
    auto seconds = [&t0] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    };

    BlsCertificate cert;
    try {
        const ResolvedSources sources = resolve_sources(opts);
        log << "prove W_" << p << " budget: trial=" << opts.budget.trial_candidates
            << " rho=" << opts.budget.rho_iterations
            << " pminus1_b1=" << opts.budget.pminus1_b1
            << " threads=" << opts.threads << "\n";
        cert = prove_wagstaff(p, sources.set(&log), opts.budget, opts.threads);
    } catch (const CompositeDetected& e) {
        std::cout << "W_" << p << " is composite (" << e.kind
                  << ", witness " << to_decimal(e.witness) << ")\n";
        log << "composite: kind=" << e.kind << " witness=" << to_decimal(e.witness)
            << "\n";
        return 1;
    } catch (const InsufficientFactoredPart& e) {
        std::cout << e.what() << "\n";
        if (!e.blocking.empty()) {
            std::cout << "blocking divisors:";
            for (unsigned long d : e.blocking) std::cout << " " << d;
            std::cout << "\n";
        }
        log << "insufficient factored part: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }

    try {
        write_certificate(cert, out_path);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }

    const double secs = seconds();
    std::ostringstream row;
    row << "p " << p << " | digits " << cert.n_digits << " | tau(p-1) "
        << tau_u64(p - 1) << " | primes in F " << cert.entries.size()
        << " | M " << cert.margin_bits << " | " << std::fixed
        << std::setprecision(2) << secs << " s";
    std::cout << row.str() << "\n";
    std::cout << "certificate: " << out_path << "\n";
    log << row.str() << "\n";
    log << "form " << to_string(cert.form) << ", chua holds "
        << (cert.chua.holds ? "true" : "false") << ", digest " << cert.digest
        << "\n";
    return 0;
}

int cmd_verify(const std::string& path) {
    BlsCertificate cert;
    try {
        cert = read_certificate(path);
    } catch (const SchemaError& e) {
        std::cerr << "schema error at " << e.field_path << ": " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    const VerificationReport report = verify_certificate(cert);
    for (const auto& s : report.steps) {
        std::cout << "step " << s.step << " " << s.name << ": "
                  << (s.pass ? "ok" : "FAIL") << " (" << std::fixed
                  << std::setprecision(3) << s.seconds << " s)";
        if (!s.pass) std::cout << " -- " << s.reason;
        std::cout << "\n";
    }
    std::cout << (report.pass ? "VERIFIED" : "REJECTED") << " W_" << cert.exponent
              << "\n";
    return report.pass ? 0 : 1;
}

int cmd_scan(bool known, std::vector<unsigned long> p_list,
             const CommonOpts& opts, unsigned long assumed_phi_bits) {
    if (known) {
        p_list.assign(kProvedExponents.begin(), kProvedExponents.end());
        p_list.insert(p_list.end(), kProbableExponents.begin(),
                      kProbableExponents.end());
        std::sort(p_list.begin(), p_list.end());
    }
    if (p_list.empty()) {
        std::cerr << "scan: give --known or --p-list\n";
        return 3;
    }
    const ResolvedSources sources = resolve_sources(opts);
    ScanOptions so;
    so.assumed_phi_bits = assumed_phi_bits;
    so.table = sources.set(nullptr).table;

    std::vector<ScanRow> rows;
    try {
        rows = feasibility_scan(p_list, so);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    std::cout << "p\tstatus\tdigits\ttau\tp-1\tcovered\tneeded\tverdict\n";
    for (const auto& row : rows) {
        std::cout << row.p << '\t' << (row.probable_only ? "prp" : "proved")
                  << '\t' << row.n_digits << '\t' << row.tau << '\t'
                  << row.pm1_factorization << '\t' << row.covered_bits << '\t'
                  << row.needed_bits << '\t';
        if (row.feasible)
            std::cout << "feasible";
        else
            std::cout << "blocked by d=" << row.blocking_d << " (phi "
                      << row.blocking_phi << ")";
        std::cout << "\n";
    }
    return 0;
}

int cmd_chua(unsigned long p, const BigInt& Q, const BigInt& a) {
    ChuaResult res;
    std::string label;
    try {
        if (p != 0) {
            res = condition_two(p);
            label = "W_" + std::to_string(p);
        } else {
            res = chua_check(a, Q);
            label = "Q=" + to_decimal(Q) + " a=" + to_decimal(a);
        }
    } catch (const NotCoprime& e) {
        std::cout << "not coprime: gcd factor " << to_decimal(e.factor) << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    std::cout << label << ": epsilon=" << res.epsilon << " delta=" << res.delta
              << " holds=" << (res.holds ? "true" : "false") << "\n";
    return res.holds ? 0 : 1;
}

int cmd_factor_phi(unsigned long d, const CommonOpts& opts) {
    const ResolvedSources sources = resolve_sources(opts);
    BigInt value;
    Factorization fac;
    try {
        value = phi_at_2(d);
        fac = factor_fully(value, d, opts.budget, sources.set(nullptr));
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    std::cout << "Phi_" << d << "(2) = " << to_decimal(value) << " = ";
    if (fac.factors.empty() && fac.residual == 1) {
        std::cout << "1, empty\n";
        return 0;
    }
    // group consecutive factors sharing a provenance label
    for (std::size_t i = 0; i < fac.factors.size(); ++i) {
        if (i) std::cout << " · ";
        std::cout << to_decimal(fac.factors[i].prime);
        if (fac.factors[i].exponent > 1) std::cout << "^" << fac.factors[i].exponent;
        const bool run_ends =
            i + 1 == fac.factors.size() ||
            fac.factors[i + 1].provenance != fac.factors[i].provenance;
        if (run_ends) std::cout << " (" << to_string(fac.factors[i].provenance) << ")";
    }
    if (fac.residual != 1)
        std::cout << " · " << to_decimal(fac.residual) << " (unfactored, "
                  << bit_length(fac.residual) << " bits)";
    std::cout << "\n";
    return fac.complete() ? 0 : 1;
}

int cmd_digest(const std::string& path) {
    try {
        const BlsCertificate cert = read_certificate(path);
        std::cout << digest(cert) << "\n";
    } catch (const SchemaError& e) {
        std::cerr << "schema error at " << e.field_path << ": " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"BLS N-1 certificates for Wagstaff numbers (2^p+1)/3"};
    app.require_subcommand(1);

    // prove
    auto* prove = app.add_subcommand("prove", "prove W_p and write a certificate");
    unsigned long prove_p = 0;
    std::string prove_out;
    CommonOpts prove_opts;
    prove->add_option("--p", prove_p, "Wagstaff exponent (odd prime >= 5)")
        ->required();
    prove->add_option("--out", prove_out, "certificate path (default w<p>.cert.json)");
    add_common(prove, prove_opts);

    // verify
    auto* verify = app.add_subcommand("verify", "replay a certificate");
    std::string verify_path;
    verify->add_option("cert", verify_path, "certificate file")->required();

    // scan
    auto* scan = app.add_subcommand("scan", "p-1 smoothness / feasibility table");
    bool scan_known = false;
    std::vector<unsigned long> scan_list;
    unsigned long scan_phi_bits = 1400;
    CommonOpts scan_opts;
    scan->add_flag("--known", scan_known, "all 36 known exponents");
    scan->add_option("--p-list", scan_list, "explicit exponents");
    scan->add_option("--assumed-phi-bits", scan_phi_bits,
                     "largest phi(d) treated as factorable");
    add_common(scan, scan_opts);

    // chua
    auto* chua = app.add_subcommand("chua", "quadratic-ring congruence check");
    unsigned long chua_p = 0;
    std::string chua_q, chua_a = "3";
    auto* chua_p_opt = chua->add_option("--p", chua_p, "check W_p with a = 3");
    auto* chua_q_opt = chua->add_option("--Q", chua_q, "odd modulus Q >= 3");
    chua->add_option("--a", chua_a, "base a >= 2 (default 3)");
    chua_p_opt->excludes(chua_q_opt);

    // factor-phi
    auto* fphi = app.add_subcommand("factor-phi", "factor Phi_d(2)");
    unsigned long fphi_d = 0;
    CommonOpts fphi_opts;
    fphi->add_option("--d", fphi_d, "cyclotomic index")->required();
    add_common(fphi, fphi_opts);

    // digest
    auto* dig = app.add_subcommand("digest", "recompute a certificate digest");
    std::string digest_path;
    dig->add_option("cert", digest_path, "certificate file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 3;  // usage problems -> 3 (help stays 0)
    }

    try {
        if (prove->parsed()) return cmd_prove(prove_p, prove_opts, prove_out);
        if (verify->parsed()) return cmd_verify(verify_path);
        if (scan->parsed())
            return cmd_scan(scan_known, scan_list, scan_opts, scan_phi_bits);
        if (chua->parsed()) {
            if (chua_p == 0 && chua_q.empty()) {
                std::cerr << "chua: give --p or --Q\n";
                return 3;
            }
            return cmd_chua(chua_p, chua_q.empty() ? BigInt(0) : from_decimal(chua_q),
                            from_decimal(chua_a));
        }
        if (fphi->parsed()) return cmd_factor_phi(fphi_d, fphi_opts);
        if (dig->parsed()) return cmd_digest(digest_path);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 3;
}
