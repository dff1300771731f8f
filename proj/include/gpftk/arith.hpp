#pragma once

#include "gpftk/integer.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <numeric>
#include <vector>

namespace gpftk::arith {

struct FactorConfig {
    // Seed for the rho stage; fixed default keeps scans reproducible.
    std::uint64_t seed = 0x9e3779b97f4a7c15ULL;
    // Total rho iterations allowed per factorize() call before giving up
    // with effort_error.
    std::uint64_t max_rho_iterations = 1ULL << 27;
};

struct PrimePower {
    Int prime;
    unsigned exponent;

    friend bool operator==(const PrimePower& a, const PrimePower& b) {
        return a.prime == b.prime && a.exponent == b.exponent;
    }
};

struct Factorization {
    Int value;                        // the original (signed) input
    int sign;                         // +1 or -1
    std::vector<PrimePower> factors;  // primes strictly increasing
    bool certified;                   // false if any prime is only probable

    Int reconstruct() const {
        Int acc = sign;
        for (const auto& f : factors) acc *= pow_int(f.prime, f.exponent);
        return acc;
    }
};

namespace detail {

inline const std::vector<std::uint32_t>& small_primes() {
    static const std::vector<std::uint32_t> primes = [] {
        constexpr std::uint32_t bound = 1'000'000;
        std::vector<bool> composite(bound + 1, false);
        std::vector<std::uint32_t> out;
        out.reserve(80000);
        for (std::uint32_t i = 2; i <= bound; ++i) {
            if (composite[i]) continue;
            out.push_back(i);
            for (std::uint64_t j = std::uint64_t(i) * i; j <= bound; j += i)
                composite[static_cast<std::uint32_t>(j)] = true;
        }
        return out;
    }();
    return primes;
}

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

inline std::uint64_t powmod_u64(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
    std::uint64_t result = 1 % m;
    base %= m;
    while (exp) {
        if (exp & 1) result = mulmod_u64(result, base, m);
        base = mulmod_u64(base, base, m);
        exp >>= 1;
    }
    return result;
}

// Deterministic Miller-Rabin for 64-bit inputs.
inline bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % p == 0) return n == p;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    for (std::uint64_t a : {2ULL, 325ULL, 9375ULL, 28178ULL, 450775ULL, 9780504ULL, 1795265022ULL}) {
        std::uint64_t x = powmod_u64(a % n, d, n);
        if (x == 0 || x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod_u64(x, x, n);
            if (x == n - 1) { witness = false; break; }
        }
        if (witness) return false;
    }
    return true;
}

// Brent's cycle-finding variant of Pollard rho on 64-bit integers.
// n must be composite, odd and not a prime power obstacle; returns a
// nontrivial factor.  budget counts iterations across the whole factorize
// call and throws effort_error when exhausted.
inline std::uint64_t rho_brent_u64(std::uint64_t n, std::uint64_t seed, std::uint64_t& budget) {
    if (n % 2 == 0) return 2;
    std::uint64_t rng = seed ^ n;
    for (;;) {
        std::uint64_t y = splitmix64(rng) % (n - 2) + 1;
        std::uint64_t c = splitmix64(rng) % (n - 1) + 1;
        std::uint64_t m = 128, g = 1, r = 1, q = 1, x = 0, ys = 0;
        while (g == 1) {
            x = y;
            for (std::uint64_t i = 0; i < r; ++i) y = (mulmod_u64(y, y, n) + c) % n;
            for (std::uint64_t k = 0; k < r && g == 1; k += m) {
                ys = y;
                std::uint64_t lim = std::min(m, r - k);
                if (budget < lim) throw effort_error("factoring effort cap exceeded");
                budget -= lim;
                for (std::uint64_t i = 0; i < lim; ++i) {
                    y = (mulmod_u64(y, y, n) + c) % n;
                    q = mulmod_u64(q, x > y ? x - y : y - x, n);
                }
                g = std::gcd(q, n);
            }
            r <<= 1;
        }
        if (g == n) {
            g = 1;
            while (g == 1) {
                if (budget == 0) throw effort_error("factoring effort cap exceeded");
                --budget;
                ys = (mulmod_u64(ys, ys, n) + c) % n;
                g = std::gcd(x > ys ? x - ys : ys - x, n);
            }
        }
        if (g != n) return g;
        // rare: retry with fresh parameters
    }
}

inline void factor_u64(std::uint64_t n, std::uint64_t seed, std::uint64_t& budget,
                       std::vector<std::pair<Int, unsigned>>& out) {
    if (n == 1) return;
    if (is_prime_u64(n)) {
        out.emplace_back(Int(n), 1u);
        return;
    }
    std::uint64_t d = rho_brent_u64(n, seed, budget);
    factor_u64(d, seed, budget, out);
    factor_u64(n / d, seed, budget, out);
}

// Strong pseudoprime test to base a for odd n > 2 (cpp_int path).
inline bool strong_probable_prime(const Int& n, const Int& a, const Int& d, int s) {
    Int x = boost::multiprecision::powm(a, d, n);
    if (x == 1 || x == n - 1) return true;
    for (int i = 1; i < s; ++i) {
        x = (x * x) % n;
        if (x == n - 1) return true;
    }
    return false;
}

// Inputs below this bound are proven prime by the 12 fixed bases.
inline const Int& deterministic_mr_bound() {
    static const Int bound("3317044064679887385961981");
    return bound;
}

}  // namespace detail

struct PrimalityResult {
    bool is_prime;
    bool certified;  // true when the verdict is deterministic
};

inline PrimalityResult test_primality(const Int& n_in, const FactorConfig& cfg = {}) {
    Int n = abs_int(n_in);
    if (n < 2) return {false, true};
    if (fits_u64(n)) return {detail::is_prime_u64(to_u64(n)), true};

    for (std::uint32_t p : {2u, 3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u, 29u, 31u, 37u})
        if (n % p == 0) return {false, true};

    Int d = n - 1;
    int s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    for (std::uint32_t a : {2u, 3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u, 29u, 31u, 37u})
        if (!detail::strong_probable_prime(n, Int(a), d, s)) return {false, true};
    if (n < detail::deterministic_mr_bound()) return {true, true};

    // Beyond the deterministic range: push the error below 2^-128 with 64
    // further rounds on bases derived from the seed and the input.
    std::uint64_t rng = cfg.seed ^ to_u64(n & 0xffffffffffffffffULL);
    for (int round = 0; round < 64; ++round) {
        Int a = 2 + mod_nonneg(Int(detail::splitmix64(rng)), n - 3);
        if (!detail::strong_probable_prime(n, a, d, s)) return {false, true};
    }
    return {true, false};
}

inline bool is_prime(const Int& n, const FactorConfig& cfg = {}) {
    return test_primality(n, cfg).is_prime;
}

namespace detail {

inline Int rho_brent_big(const Int& n, std::uint64_t seed, std::uint64_t& budget) {
    std::uint64_t rng = seed ^ to_u64(n & 0xffffffffffffffffULL);
    for (;;) {
        Int y = 1 + mod_nonneg(Int(splitmix64(rng)), n - 2);
        Int c = 1 + mod_nonneg(Int(splitmix64(rng)), n - 1);
        Int g = 1, q = 1, x = 0, ys = 0;
        std::uint64_t r = 1, m = 64;
        while (g == 1) {
            x = y;
            for (std::uint64_t i = 0; i < r; ++i) y = (y * y + c) % n;
            for (std::uint64_t k = 0; k < r && g == 1; k += m) {
                ys = y;
                std::uint64_t lim = std::min(m, r - k);
                if (budget < lim) throw effort_error("factoring effort cap exceeded");
                budget -= lim;
                for (std::uint64_t i = 0; i < lim; ++i) {
                    y = (y * y + c) % n;
                    q = (q * abs_int(x - y)) % n;
                }
                g = boost::multiprecision::gcd(q, n);
            }
            r <<= 1;
        }
        if (g == n) {
            g = 1;
            while (g == 1) {
                if (budget == 0) throw effort_error("factoring effort cap exceeded");
                --budget;
                ys = (ys * ys + c) % n;
                g = boost::multiprecision::gcd(abs_int(x - ys), n);
            }
        }
        if (g != n) return g;
    }
}

inline void factor_big(const Int& n, const FactorConfig& cfg, std::uint64_t& budget,
                       bool& certified, std::vector<std::pair<Int, unsigned>>& out) {
    if (n == 1) return;
    if (fits_u64(n)) {
        factor_u64(to_u64(n), cfg.seed, budget, out);
        return;
    }
    PrimalityResult pr = test_primality(n, cfg);
    if (pr.is_prime) {
        certified = certified && pr.certified;
        out.emplace_back(n, 1u);
        return;
    }
    Int d = rho_brent_big(n, cfg.seed, budget);
    factor_big(d, cfg, budget, certified, out);
    factor_big(exact_div(n, d), cfg, budget, certified, out);
}

}  // namespace detail

// Complete factorization of m != 0: trial division by the primes below 1e6,
// then Brent rho with primality testing on the cofactors.  Deterministic for
// a fixed (m, seed).
inline Factorization factorize(const Int& m, const FactorConfig& cfg = {}) {
    if (m == 0) throw domain_error("factorize: argument is zero");
    Factorization out;
    out.value = m;
    out.sign = m < 0 ? -1 : 1;
    out.certified = true;

    Int n = abs_int(m);
    std::vector<std::pair<Int, unsigned>> found;

    if (fits_u64(n)) {
        std::uint64_t v = to_u64(n);
        std::uint64_t budget = cfg.max_rho_iterations;
        for (std::uint32_t p : detail::small_primes()) {
            if (std::uint64_t(p) * p > v) break;
            if (v % p == 0) {
                unsigned e = 0;
                while (v % p == 0) { v /= p; ++e; }
                found.emplace_back(Int(p), e);
            }
        }
        if (v > 1) detail::factor_u64(v, cfg.seed, budget, found);
    } else {
        for (std::uint32_t p : detail::small_primes()) {
            if (fits_u64(n) && std::uint64_t(p) * p > to_u64(n)) break;
            if (n % p == 0) {
                unsigned e = 0;
                do { n /= p; ++e; } while (n % p == 0);
                found.emplace_back(Int(p), e);
            }
        }
        std::uint64_t budget = cfg.max_rho_iterations;
        detail::factor_big(n, cfg, budget, out.certified, found);
    }

    std::sort(found.begin(), found.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto& [p, e] : found) {
        if (!out.factors.empty() && out.factors.back().prime == p)
            out.factors.back().exponent += e;
        else
            out.factors.push_back({p, e});
    }
    return out;
}

// P(m): the greatest prime factor of |m|, with P(+-1) = 1.
inline Int greatest_prime_factor(const Int& m, const FactorConfig& cfg = {}) {
    if (m == 0) throw domain_error("greatest_prime_factor: argument is zero");
    Factorization f = factorize(m, cfg);
    if (f.factors.empty()) return 1;
    return f.factors.back().prime;
}

// rad(m): the largest positive squarefree divisor of |m|, with rad(+-1) = 1.
inline Int radical(const Int& m, const FactorConfig& cfg = {}) {
    if (m == 0) throw domain_error("radical: argument is zero");
    Factorization f = factorize(m, cfg);
    Int acc = 1;
    for (const auto& pp : f.factors) acc *= pp.prime;
    return acc;
}

// nu_p(m): exponent of the prime p in m != 0.
inline unsigned valuation(const Int& p, const Int& m, const FactorConfig& cfg = {}) {
    if (m == 0) throw domain_error("valuation: argument is zero");
    if (p < 2 || !is_prime(p, cfg)) throw domain_error("valuation: p is not prime");
    return valuation_unchecked(p, m);
}

// prod_{p | m} nu_p(m), the empty product being 1.
inline Int valuation_product(const Int& m, const FactorConfig& cfg = {}) {
    if (m == 0) throw domain_error("valuation_product: argument is zero");
    Factorization f = factorize(m, cfg);
    Int acc = 1;
    for (const auto& pp : f.factors) acc *= pp.exponent;
    return acc;
}

// Product of all primes <= x; 1 when x < 2.  Bounded to keep the result
// materializable; callers wanting asymptotic comparisons should work with
// partial products instead.
inline Int primorial(double x) {
    if (!(x >= 0)) throw domain_error("primorial: argument must be >= 0");
    if (x < 2) return 1;
    if (x > 1e7) throw effort_error("primorial: bound above 1e7 not supported");
    auto bound = static_cast<std::uint64_t>(x);

    std::vector<std::uint64_t> primes;
    if (bound < 1'000'000) {
        for (std::uint32_t p : detail::small_primes()) {
            if (p > bound) break;
            primes.push_back(p);
        }
    } else {
        std::vector<bool> composite(bound + 1, false);
        for (std::uint64_t i = 2; i <= bound; ++i) {
            if (composite[i]) continue;
            primes.push_back(i);
            for (std::uint64_t j = i * i; j <= bound; j += i) composite[j] = true;
        }
    }

    // balanced product tree
    std::vector<Int> level;
    level.reserve(primes.size());
    for (std::uint64_t p : primes) level.emplace_back(p);
    if (level.empty()) return 1;
    while (level.size() > 1) {
        std::vector<Int> next;
        next.reserve((level.size() + 1) / 2);
        for (std::size_t i = 0; i + 1 < level.size(); i += 2)
            next.push_back(level[i] * level[i + 1]);
        if (level.size() % 2) next.push_back(level.back());
        level.swap(next);
    }
    return level.front();
}

}  // namespace gpftk::arith
