#pragma once

#include <chrono>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "wagstaff/bigmath.hpp"

namespace wagstaff {

enum class DbStatus {
    FullyFactored,          // FF
    CompositeFactorsKnown,  // CF
    Prime,                  // P
    ProbablePrime,          // PRP / Prp
    CompositeNoFactors,     // C
    Unknown                 // U
};

std::string to_string(DbStatus s);

struct DbResponse {
    BigInt n;
    DbStatus status = DbStatus::Unknown;
    std::vector<std::pair<BigInt, unsigned long>> claims;  // never trusted
    bool from_cache = false;
};

// Discovery aid only. Claims reach a Factorization solely through exact
// divisibility plus certification. Cache: one file per queried n under
// cache_dir, raw response body after a one-line metadata header, so fixture
// caches can be committed for hermetic tests. Live queries are rate limited
// to >= 1 per second; any transport or parse problem -> DbUnavailable.
class FactorDbClient {
public:
    FactorDbClient(std::string base_url, std::string cache_dir,
                   bool network_enabled);

    DbResponse lookup(const BigInt& n);

    const std::string& base_url() const { return base_url_; }
    const std::string& cache_dir() const { return cache_dir_; }

    // cache filename for n: decimal up to 200 chars, sha-256 hex beyond
    std::string cache_path(const BigInt& n) const;

private:
    std::string base_url_;
    std::string cache_dir_;
    bool network_enabled_;
    std::mutex mu_;  // lookups from concurrent factor jobs serialize here
    std::chrono::steady_clock::time_point last_query_{};

    DbResponse parse_body(const BigInt& n, const std::string& body) const;
};

}  // namespace wagstaff
