#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace gpftk {

using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Error taxonomy shared by every module.  The CLI maps these to exit codes:
// usage_error -> 1, domain_error -> 2, effort_error / internal_error -> 3.
struct domain_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct usage_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct effort_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct internal_error : std::logic_error {
    using std::logic_error::logic_error;
};

inline int sign_of(const Int& x) { return x < 0 ? -1 : (x > 0 ? 1 : 0); }

inline Int abs_int(const Int& x) { return x < 0 ? Int(-x) : x; }

// Number of bits of |x|; 0 for x = 0.
inline unsigned bit_length(const Int& x) {
    if (x == 0) return 0;
    return boost::multiprecision::msb(abs_int(x)) + 1;
}

inline bool fits_u64(const Int& x) { return x >= 0 && bit_length(x) <= 64; }

inline std::uint64_t to_u64(const Int& x) { return x.convert_to<std::uint64_t>(); }

// Natural log of |x| for x != 0.  Unbounded integers can exceed the double
// range, so take the top 64 bits as a mantissa and add bit_length * log 2.
// Relative error is far below 1e-12.
inline double log_abs(const Int& x) {
    if (x == 0) throw domain_error("log_abs: argument is zero");
    Int a = abs_int(x);
    unsigned bl = bit_length(a);
    if (bl <= 62) return std::log(static_cast<double>(to_u64(a)));
    unsigned shift = bl - 62;
    std::uint64_t top = to_u64(a >> shift);
    return std::log(static_cast<double>(top)) + static_cast<double>(shift) * M_LN2;
}

inline Int pow_int(const Int& base, unsigned exp) {
    return boost::multiprecision::pow(base, exp);
}

// Quotient a/b, checked to be exact.
inline Int exact_div(const Int& a, const Int& b) {
    Int q, r;
    boost::multiprecision::divide_qr(a, b, q, r);
    if (r != 0) throw internal_error("exact_div: remainder is nonzero");
    return q;
}

inline bool divides(const Int& d, const Int& a) {
    if (d == 0) return a == 0;
    return a % d == 0;
}

// Nonnegative residue of a mod m (m > 0).
inline Int mod_nonneg(const Int& a, const Int& m) {
    Int r = a % m;
    if (r < 0) r += m;
    return r;
}

// p-adic valuation of x != 0 for any p >= 2 (no primality check here).
inline unsigned valuation_unchecked(const Int& p, Int x) {
    if (x == 0) throw domain_error("valuation: argument is zero");
    unsigned v = 0;
    Int q, r;
    for (;;) {
        boost::multiprecision::divide_qr(x, p, q, r);
        if (r != 0) return v;
        x = q;
        ++v;
    }
}

}  // namespace gpftk
