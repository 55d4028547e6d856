#include "wagstaff/certificate.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>
#include <openssl/evp.h>

namespace wagstaff {

using nlohmann::json;  // object keys live in a sorted map: canonical order

std::string to_string(Provenance p) {
    switch (p) {
        case Provenance::Algebraic: return "algebraic";
        case Provenance::TableLookup: return "table_lookup";
        case Provenance::ExternalDb: return "external_db";
        case Provenance::TrialDivCyclotomic: return "trial_div_cyclotomic";
        case Provenance::DirectRho: return "direct_rho";
        case Provenance::DirectPminus1: return "direct_pminus1";
        case Provenance::CyclotomicPrime: return "cyclotomic_prime";
        case Provenance::ResidualPrimeCertified: return "residual_prime_certified";
    }
    throw InternalError("to_string: bad Provenance value");
}

Provenance provenance_from_string(const std::string& s) {
    for (Provenance p : {Provenance::Algebraic, Provenance::TableLookup,
                         Provenance::ExternalDb, Provenance::TrialDivCyclotomic,
                         Provenance::DirectRho, Provenance::DirectPminus1,
                         Provenance::CyclotomicPrime,
                         Provenance::ResidualPrimeCertified}) {
        if (to_string(p) == s) return p;
    }
    throw Error("unknown provenance label \"" + s + "\"");
}

std::string to_string(Form f) {
    return f == Form::SqrtForm ? "sqrt" : "cube";
}

Form form_from_string(const std::string& s) {
    if (s == "sqrt") return Form::SqrtForm;
    if (s == "cube") return Form::CubeForm;
    throw Error("unknown form tag \"" + s + "\"");
}

namespace {

// ---- serialization ---------------------------------------------------

std::string dec(const BigInt& v) { return to_decimal(v); }
std::string dec(unsigned long v) { return to_decimal(BigInt(v)); }
std::string dec(long v) { return to_decimal(BigInt(v)); }
std::string dec(int v) { return to_decimal(BigInt(v)); }

json discriminant_json(const DiscriminantRecord& rec) {
    json j;
    j["s"] = dec(rec.s);
    j["r"] = dec(rec.r);
    j["delta"] = dec(rec.delta);
    j["is_square"] = rec.is_square;
    return j;
}

json proof_json(const PrimalityProof& proof) {
    json j;
    j["n"] = dec(proof.n);
    if (proof.kind == PrimalityProof::Kind::SmallDeterministic) {
        j["kind"] = "small";
        j["method"] = proof.method;
        return j;
    }
    j["kind"] = "n-1";
    j["f"] = dec(proof.f);
    j["r"] = dec(proof.r);
    j["form"] = to_string(proof.form);
    json entries = json::array();
    for (const auto& entry : proof.entries) {
        if (!entry.proof)
            throw SchemaError("proof entry without sub-proof",
                              "entries.q=" + dec(entry.q) + ".proof");
        json e;
        e["q"] = dec(entry.q);
        e["e"] = dec(entry.e);
        e["witness"] = dec(entry.witness);
        e["proof"] = proof_json(*entry.proof);
        entries.push_back(std::move(e));
    }
    j["entries"] = std::move(entries);
    if (proof.form == Form::CubeForm) {
        if (!proof.discriminant)
            throw SchemaError("cube-form proof without discriminant",
                              "proof.discriminant");
        j["discriminant"] = discriminant_json(*proof.discriminant);
    }
    return j;
}

json certificate_json(const BlsCertificate& cert, bool include_digest) {
    json j;
    j["format_version"] = cert.format_version;
    j["exponent"] = dec(cert.exponent);
    j["n_digits"] = dec(cert.n_digits);

    json cyc = json::array();
    for (const auto& term : cert.cyclotomic) {
        json t;
        t["d"] = dec(term.d);
        t["bits"] = dec(term.bits);
        t["complete"] = term.complete;
        json fs = json::array();
        for (const auto& f : term.factors) {
            json fj;
            fj["prime"] = dec(f.prime);
            fj["exponent"] = dec(f.exponent);
            fj["provenance"] = to_string(f.provenance);
            fs.push_back(std::move(fj));
        }
        t["factors"] = std::move(fs);
        t["residual"] = dec(term.residual);
        cyc.push_back(std::move(t));
    }
    j["cyclotomic"] = std::move(cyc);

    json entries = json::array();
    for (const auto& entry : cert.entries) {
        if (!entry.proof)
            throw SchemaError("certificate entry without proof",
                              "entries.q=" + dec(entry.q) + ".proof");
        json e;
        e["q"] = dec(entry.q);
        e["e"] = dec(entry.e);
        e["witness"] = dec(entry.witness);
        e["provenance"] = to_string(entry.provenance);
        e["proof"] = proof_json(*entry.proof);
        entries.push_back(std::move(e));
    }
    j["entries"] = std::move(entries);

    j["f"] = dec(cert.f);
    j["r"] = dec(cert.r);
    j["form"] = to_string(cert.form);
    j["margin_bits"] = dec(cert.margin_bits);
    if (cert.form == Form::CubeForm) {
        if (!cert.discriminant)
            throw SchemaError("cube-form certificate without discriminant",
                              "discriminant");
        j["discriminant"] = discriminant_json(*cert.discriminant);
    } else if (cert.discriminant) {
        throw SchemaError("discriminant record on a sqrt-form certificate",
                          "discriminant");
    }

    json chua;
    chua["epsilon"] = dec(cert.chua.epsilon);
    chua["delta"] = dec(cert.chua.delta);
    chua["holds"] = cert.chua.holds;
    j["chua"] = std::move(chua);

    if (include_digest) j["digest"] = cert.digest;
    return j;
}

// ---- strict parsing --------------------------------------------------

void require_keys(const json& o, const std::set<std::string>& keys,
                  const std::string& path) {
    if (!o.is_object()) throw SchemaError("expected an object", path);
    for (const auto& k : keys)
        if (!o.contains(k)) throw SchemaError("missing field", path + "." + k);
    for (const auto& [k, v] : o.items()) {
        (void)v;
        if (!keys.count(k)) throw SchemaError("unknown field", path + "." + k);
    }
}

std::string string_field(const json& o, const std::string& key,
                         const std::string& path) {
    if (!o.is_object() || !o.contains(key))
        throw SchemaError("missing field", path + "." + key);
    const json& v = o.at(key);
    if (!v.is_string()) throw SchemaError("expected a string", path + "." + key);
    return v.get<std::string>();
}

bool bool_field(const json& o, const std::string& key, const std::string& path) {
    if (!o.is_object() || !o.contains(key))
        throw SchemaError("missing field", path + "." + key);
    const json& v = o.at(key);
    if (!v.is_boolean()) throw SchemaError("expected a bool", path + "." + key);
    return v.get<bool>();
}

BigInt int_field(const json& o, const std::string& key, const std::string& path) {
    std::string s = string_field(o, key, path);
    try {
        return from_decimal(s);
    } catch (const Error&) {
        throw SchemaError("not a canonical decimal string", path + "." + key);
    }
}

unsigned long ulong_field(const json& o, const std::string& key,
                          const std::string& path) {
    BigInt v = int_field(o, key, path);
    if (v < 0 || !v.fits_ulong_p())
        throw SchemaError("out of unsigned range", path + "." + key);
    return v.get_ui();
}

long slong_field(const json& o, const std::string& key, const std::string& path) {
    BigInt v = int_field(o, key, path);
    if (!v.fits_slong_p()) throw SchemaError("out of range", path + "." + key);
    return v.get_si();
}

Provenance provenance_field(const json& o, const std::string& key,
                            const std::string& path) {
    try {
        return provenance_from_string(string_field(o, key, path));
    } catch (const SchemaError&) {
        throw;
    } catch (const Error&) {
        throw SchemaError("unknown provenance label", path + "." + key);
    }
}

Form form_from_string_checked(const json& o, const std::string& path);

DiscriminantRecord parse_discriminant(const json& o, const std::string& path) {
    require_keys(o, {"delta", "is_square", "r", "s"}, path);
    DiscriminantRecord rec;
    rec.s = int_field(o, "s", path);
    rec.r = int_field(o, "r", path);
    rec.delta = int_field(o, "delta", path);
    rec.is_square = bool_field(o, "is_square", path);
    if (rec.s < 0 || rec.r < 0)
        throw SchemaError("negative decomposition value", path);
    return rec;
}

ProofPtr parse_proof(const json& o, const std::string& path) {
    if (!o.is_object()) throw SchemaError("expected an object", path);
    if (!o.contains("kind")) throw SchemaError("missing field", path + ".kind");
    std::string kind = string_field(o, "kind", path);

    auto proof = std::make_shared<PrimalityProof>();
    if (kind == "small") {
        require_keys(o, {"kind", "method", "n"}, path);
        proof->kind = PrimalityProof::Kind::SmallDeterministic;
        proof->n = int_field(o, "n", path);
        proof->method = string_field(o, "method", path);
        return proof;
    }
    if (kind != "n-1") throw SchemaError("unknown proof kind", path + ".kind");

    std::set<std::string> keys{"entries", "f", "form", "kind", "n", "r"};
    Form form = form_from_string_checked(o, path);
    if (form == Form::CubeForm) keys.insert("discriminant");
    require_keys(o, keys, path);

    proof->kind = PrimalityProof::Kind::NMinusOne;
    proof->n = int_field(o, "n", path);
    proof->f = int_field(o, "f", path);
    proof->r = int_field(o, "r", path);
    proof->form = form;
    if (form == Form::CubeForm)
        proof->discriminant = parse_discriminant(o.at("discriminant"),
                                                 path + ".discriminant");

    const json& entries = o.at("entries");
    if (!entries.is_array()) throw SchemaError("expected an array", path + ".entries");
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const std::string epath = path + ".entries[" + std::to_string(i) + "]";
        const json& e = entries.at(i);
        require_keys(e, {"e", "proof", "q", "witness"}, epath);
        PrimalityProof::Entry entry;
        entry.q = int_field(e, "q", epath);
        entry.e = ulong_field(e, "e", epath);
        entry.witness = int_field(e, "witness", epath);
        entry.proof = parse_proof(e.at("proof"), epath + ".proof");
        proof->entries.push_back(std::move(entry));
    }
    return proof;
}

Form form_from_string_checked(const json& o, const std::string& path) {
    try {
        return form_from_string(string_field(o, "form", path));
    } catch (const SchemaError&) {
        throw;
    } catch (const Error&) {
        throw SchemaError("unknown form tag", path + ".form");
    }
}

BlsCertificate parse_certificate_json(const json& j) {
    const std::string path = "certificate";
    if (!j.is_object()) throw SchemaError("expected an object", path);
    if (!j.contains("form")) throw SchemaError("missing field", path + ".form");
    Form form = form_from_string_checked(j, path);

    std::set<std::string> keys{"chua",   "cyclotomic",     "digest",     "entries",
                               "exponent", "f",            "form",
                               "format_version", "margin_bits", "n_digits", "r"};
    if (form == Form::CubeForm) keys.insert("discriminant");
    require_keys(j, keys, path);

    BlsCertificate cert;
    cert.format_version = string_field(j, "format_version", path);
    if (cert.format_version != "1")
        throw SchemaError("unsupported format_version", path + ".format_version");
    cert.exponent = ulong_field(j, "exponent", path);
    cert.n_digits = ulong_field(j, "n_digits", path);
    cert.form = form;
    cert.f = int_field(j, "f", path);
    cert.r = int_field(j, "r", path);
    cert.margin_bits = slong_field(j, "margin_bits", path);
    cert.digest = string_field(j, "digest", path);
    if (cert.digest.size() != 64 ||
        cert.digest.find_first_not_of("0123456789abcdef") != std::string::npos)
        throw SchemaError("digest is not 64 lowercase hex chars", path + ".digest");
    if (cert.f < 1 || cert.r < 1)
        throw SchemaError("nonpositive decomposition value", path + ".f");

    const json& cyc = j.at("cyclotomic");
    if (!cyc.is_array()) throw SchemaError("expected an array", path + ".cyclotomic");
    for (std::size_t i = 0; i < cyc.size(); ++i) {
        const std::string tpath = path + ".cyclotomic[" + std::to_string(i) + "]";
        const json& t = cyc.at(i);
        require_keys(t, {"bits", "complete", "d", "factors", "residual"}, tpath);
        CertCyclotomicTerm term;
        term.d = ulong_field(t, "d", tpath);
        term.bits = ulong_field(t, "bits", tpath);
        term.complete = bool_field(t, "complete", tpath);
        term.residual = int_field(t, "residual", tpath);
        if (term.residual < 1)
            throw SchemaError("nonpositive residual", tpath + ".residual");
        const json& fs = t.at("factors");
        if (!fs.is_array()) throw SchemaError("expected an array", tpath + ".factors");
        for (std::size_t k = 0; k < fs.size(); ++k) {
            const std::string fpath = tpath + ".factors[" + std::to_string(k) + "]";
            const json& f = fs.at(k);
            require_keys(f, {"exponent", "prime", "provenance"}, fpath);
            CertFactor cf;
            cf.prime = int_field(f, "prime", fpath);
            cf.exponent = ulong_field(f, "exponent", fpath);
            cf.provenance = provenance_field(f, "provenance", fpath);
            if (cf.prime < 2 || cf.exponent < 1)
                throw SchemaError("bad factor", fpath);
            term.factors.push_back(std::move(cf));
        }
        cert.cyclotomic.push_back(std::move(term));
    }

    const json& entries = j.at("entries");
    if (!entries.is_array()) throw SchemaError("expected an array", path + ".entries");
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const std::string epath = path + ".entries[" + std::to_string(i) + "]";
        const json& e = entries.at(i);
        require_keys(e, {"e", "proof", "provenance", "q", "witness"}, epath);
        CertEntry entry;
        entry.q = int_field(e, "q", epath);
        entry.e = ulong_field(e, "e", epath);
        entry.witness = int_field(e, "witness", epath);
        entry.provenance = provenance_field(e, "provenance", epath);
        entry.proof = parse_proof(e.at("proof"), epath + ".proof");
        if (entry.q < 2 || entry.e < 1) throw SchemaError("bad entry", epath);
        cert.entries.push_back(std::move(entry));
    }

    if (form == Form::CubeForm)
        cert.discriminant = parse_discriminant(j.at("discriminant"),
                                               path + ".discriminant");

    const json& chua = j.at("chua");
    require_keys(chua, {"delta", "epsilon", "holds"}, path + ".chua");
    BigInt eps = int_field(chua, "epsilon", path + ".chua");
    BigInt del = int_field(chua, "delta", path + ".chua");
    if ((eps != 1 && eps != -1) || (del != 1 && del != -1))
        throw SchemaError("symbol must be 1 or -1", path + ".chua.epsilon");
    cert.chua.epsilon = static_cast<int>(eps.get_si());
    cert.chua.delta = static_cast<int>(del.get_si());
    cert.chua.holds = bool_field(chua, "holds", path + ".chua");

    return cert;
}

}  // namespace

std::string canonical_bytes(const BlsCertificate& cert, bool include_digest) {
    return certificate_json(cert, include_digest).dump();
}

std::string digest(const BlsCertificate& cert) {
    const std::string bytes = canonical_bytes(cert, false);
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
        throw InternalError("digest: EVP_Digest failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[md[i] >> 4]);
        out.push_back(hex[md[i] & 0xf]);
    }
    return out;
}

void write_certificate(const BlsCertificate& cert, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("write_certificate: cannot open " + path);
    out << canonical_bytes(cert, true) << '\n';
    if (!out) throw Error("write_certificate: write failed for " + path);
}

BlsCertificate parse_certificate(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw SchemaError(std::string("malformed JSON: ") + e.what(), "certificate");
    }
    return parse_certificate_json(j);
}

BlsCertificate read_certificate(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("read_certificate: cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_certificate(buf.str());
}

}  // namespace wagstaff
