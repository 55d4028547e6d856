#include "wagstaff/factordb.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include <httplib.h>
#include <json.hpp>
#include <openssl/evp.h>

namespace wagstaff {

using nlohmann::json;

std::string to_string(DbStatus s) {
    switch (s) {
        case DbStatus::FullyFactored: return "FF";
        case DbStatus::CompositeFactorsKnown: return "CF";
        case DbStatus::Prime: return "P";
        case DbStatus::ProbablePrime: return "PRP";
        case DbStatus::CompositeNoFactors: return "C";
        case DbStatus::Unknown: return "U";
    }
    throw InternalError("to_string: bad DbStatus value");
}

namespace {

std::string sha256_hex(const std::string& bytes) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
        throw InternalError("sha256_hex: EVP_Digest failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[md[i] >> 4]);
        out.push_back(hex[md[i] & 0xf]);
    }
    return out;
}

DbStatus status_from_string(const std::string& s) {
    if (s == "FF") return DbStatus::FullyFactored;
    if (s == "CF") return DbStatus::CompositeFactorsKnown;
    if (s == "P") return DbStatus::Prime;
    if (s == "PRP" || s == "Prp") return DbStatus::ProbablePrime;
    if (s == "C") return DbStatus::CompositeNoFactors;
    return DbStatus::Unknown;
}

}  // namespace

FactorDbClient::FactorDbClient(std::string base_url, std::string cache_dir,
                               bool network_enabled)
    : base_url_(std::move(base_url)),
      cache_dir_(std::move(cache_dir)),
      network_enabled_(network_enabled) {}

std::string FactorDbClient::cache_path(const BigInt& n) const {
    std::string name = to_decimal(n);
    if (name.size() > 200) name = sha256_hex(name);
    if (cache_dir_.empty()) return name + ".txt";
    return cache_dir_ + "/" + name + ".txt";
}

DbResponse FactorDbClient::parse_body(const BigInt& n, const std::string& body) const {
    json j;
    try {
        j = json::parse(body);
    } catch (const json::exception& e) {
        throw DbParseError(std::string("factordb: malformed body: ") + e.what());
    }
    if (!j.is_object() || !j.contains("status") || !j["status"].is_string())
        throw DbParseError("factordb: response has no status");

    DbResponse resp;
    resp.n = n;
    resp.status = status_from_string(j["status"].get<std::string>());

    if (j.contains("factors")) {
        const json& fs = j["factors"];
        if (!fs.is_array()) throw DbParseError("factordb: factors is not an array");
        for (const json& f : fs) {
            if (!f.is_array() || f.size() != 2)
                throw DbParseError("factordb: bad factor element");
            std::string prime_text;
            if (f[0].is_string())
                prime_text = f[0].get<std::string>();
            else if (f[0].is_number_unsigned())
                prime_text = std::to_string(f[0].get<unsigned long long>());
            else
                throw DbParseError("factordb: bad factor value");
            if (!f[1].is_number_unsigned())
                throw DbParseError("factordb: bad factor exponent");
            try {
                resp.claims.push_back(
                    {from_decimal(prime_text), f[1].get<unsigned long>()});
            } catch (const Error&) {
                throw DbParseError("factordb: factor is not canonical decimal");
            }
        }
    }
    return resp;
}

DbResponse FactorDbClient::lookup(const BigInt& n) {
    std::lock_guard<std::mutex> lock(mu_);

    const std::string path = cache_path(n);
    {
        std::ifstream in(path, std::ios::binary);
        if (in) {
            std::string header;
            std::getline(in, header);
            std::ostringstream rest;
            rest << in.rdbuf();
            DbResponse resp = parse_body(n, rest.str());
            resp.from_cache = true;
            return resp;
        }
    }

    if (!network_enabled_)
        throw DbUnavailable("factordb: network disabled and no cached response for " +
                            to_decimal(n));

    // >= 1 second between live queries
    const auto now = std::chrono::steady_clock::now();
    if (last_query_.time_since_epoch().count() != 0) {
        const auto wait = last_query_ + std::chrono::seconds(1) - now;
        if (wait.count() > 0) std::this_thread::sleep_for(wait);
    }
    last_query_ = std::chrono::steady_clock::now();

    httplib::Client cli(base_url_);
    cli.set_connection_timeout(10, 0);
    cli.set_read_timeout(30, 0);
    auto res = cli.Get("/api?query=" + to_decimal(n));
    if (!res)
        throw DbUnavailable("factordb: transport failure: " +
                            httplib::to_string(res.error()));
    if (res->status != 200)
        throw DbUnavailable("factordb: HTTP " + std::to_string(res->status));

    DbResponse resp = parse_body(n, res->body);  // DbParseError on bad body

    if (!cache_dir_.empty()) {
        std::error_code ec;
        std::filesystem::create_directories(cache_dir_, ec);
        std::ofstream out(path, std::ios::binary);
        if (out) out << "factordb 1 " << to_decimal(n) << '\n' << res->body;
    }
    return resp;
}

}  // namespace wagstaff
