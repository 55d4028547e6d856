// Python bindings. Big integers cross the boundary as decimal strings; the
// package __init__ accepts Python ints and converts.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <string>
#include <vector>

#include "wagstaff/bigmath.hpp"
#include "wagstaff/bls.hpp"
#include "wagstaff/certificate.hpp"
#include "wagstaff/certify.hpp"
#include "wagstaff/cyclotomic.hpp"
#include "wagstaff/errors.hpp"
#include "wagstaff/factor.hpp"
#include "wagstaff/factordb.hpp"
#include "wagstaff/known.hpp"
#include "wagstaff/quadring.hpp"
#include "wagstaff/verifier.hpp"

namespace py = pybind11;
using namespace wagstaff;

namespace {

py::dict chua_dict(const ChuaResult& r) {
    py::dict d;
    d["epsilon"] = r.epsilon;
    d["delta"] = r.delta;
    d["holds"] = r.holds;
    d["value"] = py::make_tuple(to_decimal(r.value.x), to_decimal(r.value.y));
    return d;
}

py::dict cert_summary(const BlsCertificate& cert) {
    py::dict d;
    d["exponent"] = cert.exponent;
    d["n_digits"] = cert.n_digits;
    d["tau"] = cert.cyclotomic.size() + 1;  // divisors of p-1, d = 2 algebraic
    d["primes_in_f"] = cert.entries.size();
    d["f"] = to_decimal(cert.f);
    d["r"] = to_decimal(cert.r);
    d["form"] = to_string(cert.form);
    d["margin_bits"] = cert.margin_bits;
    d["chua_holds"] = cert.chua.holds;
    d["digest"] = cert.digest;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "BLS N-1 primality certificates for Wagstaff numbers (2^p+1)/3";

    auto base = py::register_exception<Error>(m, "WagstaffError", PyExc_RuntimeError);
    py::register_exception<CompositeDetected>(m, "CompositeError", base);
    py::register_exception<InsufficientFactoredPart>(m, "IncompleteFactoredPartError",
                                                     base);
    py::register_exception<SchemaError>(m, "CertificateSchemaError", base);
    py::register_exception<NotCoprime>(m, "NotCoprimeError", base);

    // number-theory kernels (decimal-string big integers)
    m.def("wagstaff_number",
          [](unsigned long p) { return to_decimal(wagstaff_number(p)); },
          py::arg("p"), "W_p = (2^p + 1) / 3 as a decimal string");
    m.def("digits10",
          [](const std::string& n) { return digits10(from_decimal(n)); },
          py::arg("n"));
    m.def("bit_length",
          [](const std::string& n) { return bit_length(from_decimal(n)); },
          py::arg("n"));
    m.def("mod_pow",
          [](const std::string& b, const std::string& e, const std::string& mod) {
              return to_decimal(mod_pow(from_decimal(b), from_decimal(e),
                                        from_decimal(mod)));
          },
          py::arg("base"), py::arg("exp"), py::arg("mod"));
    m.def("jacobi",
          [](const std::string& a, const std::string& n) {
              return jacobi(from_decimal(a), from_decimal(n));
          },
          py::arg("a"), py::arg("n"));
    m.def("is_probable_prime",
          [](const std::string& n) { return is_probable_prime(from_decimal(n)); },
          py::arg("n"), "strong base-2 Miller-Rabin + strong Lucas (BPSW)");

    // cyclotomic structure
    m.def("phi_at_2", [](unsigned long d) { return to_decimal(phi_at_2(d)); },
          py::arg("d"), "Phi_d(2), the d-th cyclotomic polynomial at 2");
    m.def("divisors", [](std::uint64_t n) { return divisors(n); }, py::arg("n"));
    m.def("mobius", [](std::uint64_t n) { return mobius(n); }, py::arg("n"));
    m.def("euler_phi", [](std::uint64_t n) { return euler_phi(n); }, py::arg("n"));

    // quadratic-ring checks
    m.def("pell",
          [](unsigned long n) {
              PellPair pp = pell(n);
              return py::make_tuple(to_decimal(pp.U), to_decimal(pp.V));
          },
          py::arg("n"), "(U_n, V_n) with (1+sqrt 2)^n = V_n/2 + U_n sqrt 2");
    m.def("chua_check",
          [](const std::string& a, const std::string& Q) {
              return chua_dict(chua_check(from_decimal(a), from_decimal(Q)));
          },
          py::arg("a"), py::arg("Q"),
          "omega_a^((Q-eps)/2) == delta in Z[sqrt(a^2-1)]/(Q)");
    m.def("condition_two",
          [](unsigned long p) { return chua_dict(condition_two(p)); }, py::arg("p"),
          "the a = 3 congruence against W_p");

    // proving and verifying
    m.def(
        "prove_to_file",
        [](unsigned long p, const std::string& out_path,
           const std::string& tables_dir, const std::string& factordb_cache,
           unsigned threads) {
            BudgetSpec budget;
            FactorTable table;
            std::unique_ptr<FactorDbClient> db;
            SourceSet sources;
            if (!tables_dir.empty()) {
                table = load_factor_table_dir(tables_dir);
                sources.table = &table;
            }
            if (!factordb_cache.empty()) {
                db = std::make_unique<FactorDbClient>("http://127.0.0.1:9",
                                                      factordb_cache, false);
                sources.db = db.get();
            }
            BlsCertificate cert = prove_wagstaff(p, sources, budget, threads);
            write_certificate(cert, out_path);
            py::dict d = cert_summary(cert);
            d["path"] = out_path;
            return d;
        },
        py::arg("p"), py::arg("out_path"), py::arg("tables_dir") = "",
        py::arg("factordb_cache") = "", py::arg("threads") = 1,
        "prove W_p and write the sealed certificate; raises CompositeError / "
        "IncompleteFactoredPartError");
    m.def(
        "verify_file",
        [](const std::string& path) {
            BlsCertificate cert = read_certificate(path);
            VerificationReport report = verify_certificate(cert);
            py::dict d;
            d["pass"] = report.pass;
            d["exponent"] = cert.exponent;
            py::list steps;
            for (const StepResult& s : report.steps) {
                py::dict sd;
                sd["step"] = s.step;
                sd["name"] = s.name;
                sd["pass"] = s.pass;
                sd["reason"] = s.reason;
                steps.append(sd);
            }
            d["steps"] = steps;
            return d;
        },
        py::arg("path"), "independent 9-step replay of a certificate file");
    m.def(
        "certificate_summary",
        [](const std::string& path) { return cert_summary(read_certificate(path)); },
        py::arg("path"));

    // feasibility model
    m.def(
        "feasibility_scan",
        [](const std::vector<unsigned long>& ps, unsigned long assumed_phi_bits) {
            ScanOptions opt;
            opt.assumed_phi_bits = assumed_phi_bits;
            py::list rows;
            for (const ScanRow& r : feasibility_scan(ps, opt)) {
                py::dict d;
                d["p"] = r.p;
                d["probable_only"] = r.probable_only;
                d["pm1_factorization"] = r.pm1_factorization;
                d["tau"] = r.tau;
                d["n_digits"] = r.n_digits;
                d["covered_bits"] = r.covered_bits;
                d["needed_bits"] = r.needed_bits;
                d["feasible"] = r.feasible;
                d["blocking_d"] = r.blocking_d;
                d["blocking_phi"] = r.blocking_phi;
                rows.append(d);
            }
            return rows;
        },
        py::arg("p_list"), py::arg("assumed_phi_bits") = 1400);

    // direct factoring of one cyclotomic value
    m.def(
        "factor_phi",
        [](unsigned long d) {
            const BudgetSpec budget;
            SourceSet sources;
            Factorization f = factor_fully(phi_at_2(d), d, budget, sources);
            py::dict out;
            out["value"] = to_decimal(f.n);
            out["complete"] = f.complete();
            py::list factors;
            for (const auto& fe : f.factors)
                factors.append(py::make_tuple(to_decimal(fe.prime), fe.exponent,
                                              to_string(fe.provenance)));
            out["factors"] = factors;
            out["residual"] = to_decimal(f.residual);
            return out;
        },
        py::arg("d"), "factor Phi_d(2) with the local pipeline at default budgets");

    py::tuple proved(kProvedExponents.size());
    for (std::size_t i = 0; i < kProvedExponents.size(); ++i)
        proved[i] = kProvedExponents[i];
    m.attr("PROVED_EXPONENTS") = proved;
    py::tuple probable(kProbableExponents.size());
    for (std::size_t i = 0; i < kProbableExponents.size(); ++i)
        probable[i] = kProbableExponents[i];
    m.attr("PROBABLE_EXPONENTS") = probable;
}
