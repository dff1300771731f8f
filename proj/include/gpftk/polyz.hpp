#pragma once

#include "gpftk/arith.hpp"
#include "gpftk/integer.hpp"

#include <algorithm>
#include <initializer_list>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace gpftk::poly {

// Dense univariate polynomial over Z, coefficients in ascending degree
// order.  The zero polynomial is the empty coefficient vector; otherwise the
// leading coefficient is nonzero.
class IntPoly {
public:
    IntPoly() = default;

    IntPoly(std::initializer_list<Int> ascending) : c_(ascending) { normalize(); }

    explicit IntPoly(std::vector<Int> ascending) : c_(std::move(ascending)) { normalize(); }

    static IntPoly constant(Int v) {
        IntPoly p;
        if (v != 0) p.c_.push_back(std::move(v));
        return p;
    }

    static IntPoly variable() { return IntPoly{0, 1}; }

    int degree() const { return static_cast<int>(c_.size()) - 1; }

    bool is_zero() const { return c_.empty(); }

    bool is_constant() const { return c_.size() <= 1; }

    const Int& leading() const {
        if (is_zero()) throw domain_error("IntPoly: zero polynomial has no leading coefficient");
        return c_.back();
    }

    Int coeff(std::size_t i) const { return i < c_.size() ? c_[i] : Int(0); }

    const std::vector<Int>& coeffs() const { return c_; }

    Int eval(const Int& x) const {
        Int acc = 0;
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
        return acc;
    }

    IntPoly derivative() const {
        if (c_.size() <= 1) return {};
        std::vector<Int> d(c_.size() - 1);
        for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * static_cast<unsigned>(i);
        return IntPoly(std::move(d));
    }

    // gcd of all coefficients (positive), 0 for the zero polynomial.
    Int content() const {
        Int g = 0;
        for (const auto& c : c_) g = boost::multiprecision::gcd(g, c);
        return g;
    }

    // content removed and leading coefficient made positive.
    IntPoly primitive_part() const {
        if (is_zero()) return {};
        Int g = content();
        if (c_.back() < 0) g = -g;
        std::vector<Int> out(c_.size());
        for (std::size_t i = 0; i < c_.size(); ++i) out[i] = exact_div(c_[i], g);
        return IntPoly(std::move(out));
    }

    IntPoly shifted_up(unsigned k) const {  // multiply by t^k
        if (is_zero()) return {};
        std::vector<Int> out(c_.size() + k);
        std::copy(c_.begin(), c_.end(), out.begin() + k);
        return IntPoly(std::move(out));
    }

    friend IntPoly operator+(const IntPoly& a, const IntPoly& b) {
        std::vector<Int> out(std::max(a.c_.size(), b.c_.size()));
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.coeff(i) + b.coeff(i);
        return IntPoly(std::move(out));
    }

    friend IntPoly operator-(const IntPoly& a, const IntPoly& b) {
        std::vector<Int> out(std::max(a.c_.size(), b.c_.size()));
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.coeff(i) - b.coeff(i);
        return IntPoly(std::move(out));
    }

    IntPoly operator-() const {
        std::vector<Int> out(c_.size());
        for (std::size_t i = 0; i < c_.size(); ++i) out[i] = -c_[i];
        return IntPoly(std::move(out));
    }

    friend IntPoly operator*(const IntPoly& a, const IntPoly& b) {
        if (a.is_zero() || b.is_zero()) return {};
        std::vector<Int> out(a.c_.size() + b.c_.size() - 1, Int(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            for (std::size_t j = 0; j < b.c_.size(); ++j) out[i + j] += a.c_[i] * b.c_[j];
        return IntPoly(std::move(out));
    }

    friend IntPoly operator*(const IntPoly& a, const Int& s) {
        std::vector<Int> out(a.c_.size());
        for (std::size_t i = 0; i < a.c_.size(); ++i) out[i] = a.c_[i] * s;
        return IntPoly(std::move(out));
    }

    friend IntPoly operator*(const Int& s, const IntPoly& a) { return a * s; }

    IntPoly pow_u(unsigned e) const {
        IntPoly acc = IntPoly::constant(1);
        for (unsigned i = 0; i < e; ++i) acc = acc * *this;
        return acc;
    }

    friend bool operator==(const IntPoly& a, const IntPoly& b) { return a.c_ == b.c_; }

    std::string to_string(const std::string& var = "t") const {
        if (is_zero()) return "0";
        std::ostringstream os;
        bool first = true;
        for (int i = degree(); i >= 0; --i) {
            const Int& c = c_[static_cast<std::size_t>(i)];
            if (c == 0) continue;
            if (!first) os << (c < 0 ? " - " : " + ");
            else if (c < 0) os << "-";
            first = false;
            Int a = abs_int(c);
            if (a != 1 || i == 0) os << a;
            if (i > 0) {
                if (a != 1) os << "*";
                os << var;
                if (i > 1) os << "^" << i;
            }
        }
        return os.str();
    }

private:
    void normalize() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }

    std::vector<Int> c_;
};

inline Int eval(const IntPoly& f, const Int& n) { return f.eval(n); }

namespace detail {

// Pseudo-remainder of a by b (b nonzero): lc(b)^(deg a - deg b + 1) * a mod b.
inline IntPoly prem(IntPoly a, const IntPoly& b) {
    const Int& lb = b.leading();
    int db = b.degree();
    while (!a.is_zero() && a.degree() >= db) {
        int shift = a.degree() - db;
        Int la = a.leading();
        a = a * lb - b.shifted_up(static_cast<unsigned>(shift)) * la;
    }
    return a;
}

}  // namespace detail

// Primitive integer representative of gcd(f, g) over Q, with positive
// leading coefficient.  Degree 0 (the constant 1) means coprime.
inline IntPoly gcd_over_Q(const IntPoly& f, const IntPoly& g) {
    if (f.is_zero() && g.is_zero())
        throw domain_error("gcd_over_Q: both polynomials are zero");
    if (f.is_zero()) return g.primitive_part();
    if (g.is_zero()) return f.primitive_part();
    IntPoly a = f.primitive_part();
    IntPoly b = g.primitive_part();
    if (a.degree() < b.degree()) std::swap(a, b);
    while (!b.is_zero()) {
        IntPoly r = detail::prem(a, b);
        a = std::move(b);
        b = r.primitive_part();
    }
    return a;
}

// Exact resultant via Bareiss fraction-free elimination on the Sylvester
// matrix.  Conventions: Res(f, c) = c^(deg f) for constant c, and Res of two
// constants is 1 (empty matrix).
inline Int resultant(const IntPoly& f, const IntPoly& g) {
    if (f.is_zero() || g.is_zero()) throw domain_error("resultant: zero polynomial");
    const int m = f.degree(), n = g.degree();
    if (m == 0 && n == 0) return 1;
    if (m == 0) return pow_int(f.leading(), static_cast<unsigned>(n));
    if (n == 0) return pow_int(g.leading(), static_cast<unsigned>(m));

    const int N = m + n;
    std::vector<std::vector<Int>> a(static_cast<std::size_t>(N), std::vector<Int>(static_cast<std::size_t>(N), Int(0)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= m; ++j) a[i][i + j] = f.coeff(static_cast<std::size_t>(m - j));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j <= n; ++j) a[n + i][i + j] = g.coeff(static_cast<std::size_t>(n - j));

    int sign = 1;
    Int prev = 1;
    for (int k = 0; k < N - 1; ++k) {
        int pivot = -1;
        for (int i = k; i < N; ++i)
            if (a[i][k] != 0) { pivot = i; break; }
        if (pivot < 0) return 0;
        if (pivot != k) {
            std::swap(a[pivot], a[k]);
            sign = -sign;
        }
        for (int i = k + 1; i < N; ++i) {
            for (int j = k + 1; j < N; ++j)
                a[i][j] = exact_div(a[k][k] * a[i][j] - a[i][k] * a[k][j], prev);
            a[i][k] = 0;
        }
        prev = a[k][k];
    }
    return sign * a[N - 1][N - 1];
}

// Number of distinct complex roots: deg f - deg gcd(f, f').
inline int distinct_root_count(const IntPoly& f) {
    if (f.is_zero()) throw domain_error("distinct_root_count: zero polynomial");
    if (f.is_constant()) return 0;
    return f.degree() - gcd_over_Q(f, f.derivative()).degree();
}

namespace detail {

inline void enumerate_divisors(const std::vector<arith::PrimePower>& pps, std::size_t idx,
                               const Int& acc, const Int& bound, std::vector<Int>& out) {
    if (acc > bound) return;
    if (idx == pps.size()) {
        out.push_back(acc);
        return;
    }
    Int cur = acc;
    for (unsigned e = 0; e <= pps[idx].exponent; ++e) {
        enumerate_divisors(pps, idx + 1, cur, bound, out);
        if (e < pps[idx].exponent) {
            cur *= pps[idx].prime;
            if (cur > bound) break;
        }
    }
}

}  // namespace detail

// All integer zeros of f, sorted increasing.  Candidates are the divisors of
// the trailing nonzero coefficient (after stripping powers of t), bounded by
// the Cauchy root bound, each verified by evaluation.
inline std::vector<Int> integer_roots(const IntPoly& f, const arith::FactorConfig& cfg = {}) {
    if (f.is_zero()) throw domain_error("integer_roots: zero polynomial");
    std::set<Int> roots;

    std::vector<Int> c = f.coeffs();
    std::size_t low = 0;
    while (low < c.size() && c[low] == 0) ++low;
    if (low > 0) roots.insert(0);
    std::vector<Int> rest(c.begin() + static_cast<std::ptrdiff_t>(low), c.end());
    IntPoly h{std::move(rest)};

    if (h.degree() >= 1) {
        // Cauchy bound: every root has |r| <= 1 + max |c_i| / |lead|
        Int mx = 0;
        for (const auto& ci : h.coeffs()) mx = std::max(mx, abs_int(ci));
        Int bound = 1 + mx / abs_int(h.leading());

        arith::Factorization fac = arith::factorize(h.coeff(0), cfg);
        std::vector<Int> divs;
        detail::enumerate_divisors(fac.factors, 0, Int(1), bound, divs);
        for (const Int& d : divs) {
            if (h.eval(d) == 0) roots.insert(d);
            if (h.eval(-d) == 0) roots.insert(-d);
        }
    }
    return {roots.begin(), roots.end()};
}

// D = -16 (4 A^3 + 27 B^2), the discriminant of y^2 = x^3 + A x + B.
inline IntPoly discriminant_poly(const IntPoly& A, const IntPoly& B) {
    return (A.pow_u(3) * Int(4) + B.pow_u(2) * Int(27)) * Int(-16);
}

}  // namespace gpftk::poly
