#include "wagstaff/bigmath.hpp"

namespace wagstaff {

BigInt mod_pow(const BigInt& base, const BigInt& exp, const BigInt& mod) {
    if (mod < 2) throw InvalidModulus("mod_pow: modulus must be >= 2");
    if (exp < 0) throw InvalidExponent("mod_pow: negative exponent");
    BigInt r;
    mpz_powm(r.get_mpz_t(), base.get_mpz_t(), exp.get_mpz_t(), mod.get_mpz_t());
    return r;
}

int jacobi(const BigInt& a, const BigInt& n) {
    if (n < 3 || mpz_even_p(n.get_mpz_t()))
        throw InvalidModulus("jacobi: n must be odd and >= 3");
    return mpz_jacobi(a.get_mpz_t(), n.get_mpz_t());
}

bool is_perfect_square(const BigInt& z, BigInt& root) {
    if (z < 0) return false;
    BigInt rem;
    mpz_sqrtrem(root.get_mpz_t(), rem.get_mpz_t(), z.get_mpz_t());
    return rem == 0 && root * root == z;
}

bool is_perfect_square(const BigInt& z) {
    BigInt root;
    return is_perfect_square(z, root);
}

unsigned long valuation(const BigInt& n, const BigInt& q) {
    if (n == 0) throw UndefinedValuation("valuation: undefined for n = 0");
    if (q < 2) throw InvalidExponent("valuation: q must be >= 2");
    BigInt a = abs(n), out;
    return mpz_remove(out.get_mpz_t(), a.get_mpz_t(), q.get_mpz_t());
}

std::size_t digits10(const BigInt& n) {
    BigInt a = abs(n);
    if (a == 0) return 1;
    std::size_t k = mpz_sizeinbase(a.get_mpz_t(), 10);  // exact or one too many
    if (k > 1) {
        BigInt t;
        mpz_ui_pow_ui(t.get_mpz_t(), 10, k - 1);
        if (a < t) --k;
    }
    return k;
}

std::size_t bit_length(const BigInt& n) {
    if (n == 0) return 0;
    BigInt a = abs(n);
    return mpz_sizeinbase(a.get_mpz_t(), 2);  // exact in base 2
}

long floor_log2(const BigInt& n) {
    if (n < 1) throw InvalidExponent("floor_log2: n must be >= 1");
    return static_cast<long>(bit_length(n)) - 1;
}

BigInt from_decimal(const std::string& s) {
    std::size_t i = 0;
    bool neg = false;
    if (i < s.size() && s[i] == '-') { neg = true; ++i; }
    if (i >= s.size()) throw Error("from_decimal: empty digit string");
    if (s[i] == '0' && s.size() > i + 1)
        throw Error("from_decimal: leading zero in \"" + s + "\"");
    for (std::size_t j = i; j < s.size(); ++j)
        if (s[j] < '0' || s[j] > '9')
            throw Error("from_decimal: non-digit in \"" + s + "\"");
    if (neg && s.compare(i, std::string::npos, "0") == 0)
        throw Error("from_decimal: negative zero");
    return BigInt(s, 10);
}

std::string to_decimal(const BigInt& n) {
    return n.get_str(10);
}

BigInt gcd(const BigInt& a, const BigInt& b) {
    BigInt g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

BigInt pow_ui(const BigInt& b, unsigned long e) {
    BigInt r;
    mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
    return r;
}

BigInt wagstaff_number(unsigned long p) {
    if (p < 5 || !is_prime_u64(p))
        throw InvalidExponent("wagstaff_number: p must be a prime >= 5");
    BigInt n = pow_ui(BigInt(2), p) + 1;
    BigInt w, r;
    mpz_fdiv_qr_ui(w.get_mpz_t(), r.get_mpz_t(), n.get_mpz_t(), 3);
    if (r != 0) throw InternalError("wagstaff_number: 3 does not divide 2^p + 1");
    return w;
}

namespace {

std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

std::uint64_t powmod_u64(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod_u64(r, a, m);
        a = mulmod_u64(a, a, m);
        e >>= 1;
    }
    return r;
}

}  // namespace

bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0) return n == p;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    // strong test with the first 12 primes: deterministic well past 2^64
    for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        std::uint64_t x = powmod_u64(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod_u64(x, x, n);
            if (x == n - 1) { composite = false; break; }
        }
        if (composite) return false;
    }
    return true;
}

}  // namespace wagstaff
