#pragma once

#include "gpftk/arith.hpp"
#include "gpftk/integer.hpp"

#include <algorithm>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace gpftk::ell {

// Integral long Weierstrass model y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6.
struct WeierstrassModel {
    Int a1, a2, a3, a4, a6;

    static WeierstrassModel short_form(Int A, Int B) {
        return {0, 0, 0, std::move(A), std::move(B)};
    }

    friend bool operator==(const WeierstrassModel&, const WeierstrassModel&) = default;

    std::string str() const {
        std::ostringstream os;
        os << "[" << a1 << "," << a2 << "," << a3 << "," << a4 << "," << a6 << "]";
        return os.str();
    }
};

struct CurveInvariants {
    Int b2, b4, b6, b8, c4, c6, delta;
};

inline CurveInvariants invariants(const WeierstrassModel& E) {
    CurveInvariants v;
    v.b2 = E.a1 * E.a1 + 4 * E.a2;
    v.b4 = 2 * E.a4 + E.a1 * E.a3;
    v.b6 = E.a3 * E.a3 + 4 * E.a6;
    v.b8 = E.a1 * E.a1 * E.a6 + 4 * E.a2 * E.a6 - E.a1 * E.a3 * E.a4 + E.a2 * E.a3 * E.a3 -
           E.a4 * E.a4;
    v.c4 = v.b2 * v.b2 - 24 * v.b4;
    v.c6 = -v.b2 * v.b2 * v.b2 + 36 * v.b2 * v.b4 - 216 * v.b6;
    v.delta = -v.b2 * v.b2 * v.b8 - 8 * v.b4 * v.b4 * v.b4 - 27 * v.b6 * v.b6 +
              9 * v.b2 * v.b4 * v.b6;
    return v;
}

// Coordinate change x = u^2 x' + r, y = u^3 y' + s u^2 x' + t.
struct Transformation {
    Int u = 1, r = 0, s = 0, t = 0;
};

// The model in the new coordinates; throws internal_error if the scaled
// coefficients are not integral.
inline WeierstrassModel apply(const WeierstrassModel& E, const Transformation& T) {
    const Int& u = T.u;
    const Int& r = T.r;
    const Int& s = T.s;
    const Int& t = T.t;
    Int u2 = u * u, u3 = u2 * u, u4 = u2 * u2, u6 = u3 * u3;
    WeierstrassModel out;
    out.a1 = exact_div(E.a1 + 2 * s, u);
    out.a2 = exact_div(E.a2 - s * E.a1 + 3 * r - s * s, u2);
    out.a3 = exact_div(E.a3 + r * E.a1 + 2 * t, u3);
    out.a4 = exact_div(E.a4 - s * E.a3 + 2 * r * E.a2 - (t + r * s) * E.a1 + 3 * r * r - 2 * s * t,
                       u4);
    out.a6 = exact_div(E.a6 + r * E.a4 + r * r * E.a2 + r * r * r - t * E.a3 - t * t - r * t * E.a1,
                       u6);
    return out;
}

// Inverse of apply: reconstructs E from E' = apply(E, T).
inline WeierstrassModel unapply(const WeierstrassModel& Ep, const Transformation& T) {
    const Int& u = T.u;
    const Int& r = T.r;
    const Int& s = T.s;
    const Int& t = T.t;
    Int u2 = u * u, u3 = u2 * u, u4 = u2 * u2, u6 = u3 * u3;
    WeierstrassModel E;
    E.a1 = u * Ep.a1 - 2 * s;
    E.a2 = u2 * Ep.a2 + s * E.a1 + s * s - 3 * r;
    E.a3 = u3 * Ep.a3 - r * E.a1 - 2 * t;
    E.a4 = u4 * Ep.a4 + s * E.a3 - 2 * r * E.a2 + (t + r * s) * E.a1 - 3 * r * r + 2 * s * t;
    E.a6 = u6 * Ep.a6 - r * E.a4 - r * r * E.a2 - r * r * r + t * E.a3 + t * t + r * t * E.a1;
    return E;
}

struct KodairaSymbol {
    enum class Type { I0, In, II, III, IV, I0star, Instar, IVstar, IIIstar, IIstar };
    Type type = Type::I0;
    int n = 0;  // index for In / In*

    friend bool operator==(const KodairaSymbol&, const KodairaSymbol&) = default;

    std::string str() const {
        switch (type) {
            case Type::I0: return "I0";
            case Type::In: return "I" + std::to_string(n);
            case Type::II: return "II";
            case Type::III: return "III";
            case Type::IV: return "IV";
            case Type::I0star: return "I0*";
            case Type::Instar: return "I" + std::to_string(n) + "*";
            case Type::IVstar: return "IV*";
            case Type::IIIstar: return "III*";
            case Type::IIstar: return "II*";
        }
        return "?";
    }

    static KodairaSymbol parse(const std::string& s) {
        if (s == "II") return {Type::II};
        if (s == "III") return {Type::III};
        if (s == "IV") return {Type::IV};
        if (s == "II*") return {Type::IIstar};
        if (s == "III*") return {Type::IIIstar};
        if (s == "IV*") return {Type::IVstar};
        if (s.size() >= 2 && s.front() == 'I') {
            bool star = s.back() == '*';
            std::string num = s.substr(1, s.size() - 1 - (star ? 1 : 0));
            if (!num.empty() && num.find_first_not_of("0123456789") == std::string::npos) {
                int n = std::stoi(num);
                if (star) return n == 0 ? KodairaSymbol{Type::I0star} : KodairaSymbol{Type::Instar, n};
                return n == 0 ? KodairaSymbol{Type::I0} : KodairaSymbol{Type::In, n};
            }
        }
        throw usage_error("unknown Kodaira symbol '" + s + "'");
    }
};

enum class ReductionKind { good, multiplicative, additive };

inline std::string to_string(ReductionKind k) {
    switch (k) {
        case ReductionKind::good: return "good";
        case ReductionKind::multiplicative: return "multiplicative";
        case ReductionKind::additive: return "additive";
    }
    return "?";
}

struct LocalReductionData {
    Int p;
    ReductionKind kind = ReductionKind::good;
    KodairaSymbol kodaira;
    int v_delta_min = 0;  // nu_p of the minimal discriminant
    int f_p = 0;          // conductor exponent
    int tamagawa = 1;     // recorded as metadata only
};

namespace detail {

inline Int balanced_mod(const Int& a, const Int& m) {
    Int r = mod_nonneg(a, m);
    if (2 * r > m) r -= m;
    return r;
}

inline Int invmod(const Int& a, const Int& m) {
    Int old_r = mod_nonneg(a, m), r = m;
    Int old_s = 1, s = 0;
    while (r != 0) {
        Int q = old_r / r;
        Int tmp = old_r - q * r;
        old_r = r;
        r = tmp;
        tmp = old_s - q * s;
        old_s = s;
        s = tmp;
    }
    if (old_r != 1) throw internal_error("invmod: arguments not coprime");
    return mod_nonneg(old_s, m);
}

inline int vp(const Int& p, const Int& x) {  // valuation, with v(0) treated by callers
    return static_cast<int>(valuation_unchecked(p, x));
}

// true iff a is a square mod the odd prime p (0 counts as a square)
inline bool is_square_modp(const Int& a, const Int& p) {
    Int r = mod_nonneg(a, p);
    if (r == 0) return true;
    return boost::multiprecision::powm(r, (p - 1) / 2, p) == 1;
}

// quadratic A X^2 + B X + C over F_p, A != 0 mod p
inline bool quad_distinct_roots(const Int& A, const Int& B, const Int& C, const Int& p) {
    return mod_nonneg(B * B - 4 * A * C, p) != 0;
}

inline bool quad_has_root(const Int& A, const Int& B, const Int& C, const Int& p) {
    if (p == 2) {
        return mod_nonneg(C, 2) == 0 || mod_nonneg(A + B + C, 2) == 0;
    }
    return is_square_modp(B * B - 4 * A * C, p);
}

// double root of A X^2 + B X + C mod p, assuming the discriminant vanishes
inline Int quad_double_root(const Int& A, const Int& B, const Int& C, const Int& p) {
    if (p == 2) return mod_nonneg(C * A, 2);  // X^2 = C/A with B even; sqrt is identity
    return mod_nonneg(-B * invmod(2 * A, p), p);
}

struct CubicStructure {
    int distinct;   // number of distinct roots over the algebraic closure: 1, 2 or 3
    Int mult_root;  // the multiple root (rational) when distinct < 3
};

// structure of T^3 + b T^2 + c T + d over F_p
inline CubicStructure cubic_structure(const Int& b, const Int& c, const Int& d, const Int& p) {
    Int disc = 18 * b * c * d - 4 * b * b * b * d + b * b * c * c - 4 * c * c * c - 27 * d * d;
    if (mod_nonneg(disc, p) != 0) return {3, 0};

    Int root = -1;
    if (p <= 3) {
        for (Int r = 0; r < p; ++r) {
            Int val = ((r + b) * r + c) * r + d;
            if (mod_nonneg(val, p) != 0) continue;
            Int e1 = mod_nonneg(b + r, p);
            Int e0 = mod_nonneg(c + r * e1, p);
            if (mod_nonneg(r * r + e1 * r + e0, p) == 0) {
                root = r;
                break;
            }
        }
        if (root < 0) throw internal_error("cubic_structure: multiple root not found");
    } else {
        Int s = mod_nonneg(b * b - 3 * c, p);
        if (s == 0)
            root = mod_nonneg(-b * invmod(Int(3), p), p);
        else
            root = mod_nonneg((b * c - 9 * d) * invmod(2 * s, p), p);
    }
    // triple iff the remaining root -b - 2*root coincides with root
    bool triple = mod_nonneg(b + 3 * root, p) == 0 &&
                  mod_nonneg(c - 3 * root * root, p) == 0 &&
                  mod_nonneg(d + root * root * root, p) == 0;
    return {triple ? 1 : 2, root};
}

// number of roots in F_p of a squarefree cubic T^3 + b T^2 + c T + d
inline int cubic_rational_roots(const Int& b, const Int& c, const Int& d, const Int& p) {
    if (p < 64) {
        int count = 0;
        for (Int r = 0; r < p; ++r)
            if (mod_nonneg(((r + b) * r + c) * r + d, p) == 0) ++count;
        return count;
    }
    // deg gcd(T^p - T, P) via T^p mod P computed by square and multiply
    using Fp3 = std::array<Int, 3>;  // residues mod P, ascending coefficients
    const Int B = mod_nonneg(b, p), C = mod_nonneg(c, p), D = mod_nonneg(d, p);
    auto mulmod = [&](const Fp3& x, const Fp3& y) {
        Int prod[5] = {};
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) prod[i + j] += x[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(j)];
        for (int k = 4; k >= 3; --k) {
            Int q = prod[k];
            if (q == 0) continue;
            prod[k - 1] -= q * B;
            prod[k - 2] -= q * C;
            prod[k - 3] -= q * D;
            prod[k] = 0;
        }
        Fp3 out;
        for (int i = 0; i < 3; ++i) out[static_cast<std::size_t>(i)] = mod_nonneg(prod[i], p);
        return out;
    };
    Fp3 result = {1, 0, 0};
    Fp3 base = {0, 1, 0};  // T
    for (int bit = static_cast<int>(boost::multiprecision::msb(p)); bit >= 0; --bit) {
        result = mulmod(result, result);
        if (boost::multiprecision::bit_test(p, static_cast<unsigned>(bit))) result = mulmod(result, base);
    }
    // result = T^p mod P; now gcd(result - T, P) over F_p
    std::vector<Int> g1 = {mod_nonneg(result[0], p), mod_nonneg(result[1] - 1, p), result[2]};
    std::vector<Int> g2 = {D, C, B, 1};
    auto deg = [&](const std::vector<Int>& f) {
        for (int i = static_cast<int>(f.size()) - 1; i >= 0; --i)
            if (mod_nonneg(f[static_cast<std::size_t>(i)], p) != 0) return i;
        return -1;
    };
    auto normalize = [&](std::vector<Int> f) {
        int dg = deg(f);
        f.resize(static_cast<std::size_t>(dg + 1));
        for (auto& x : f) x = mod_nonneg(x, p);
        return f;
    };
    std::vector<Int> A = normalize(g2), Bv = normalize(g1);
    while (!Bv.empty()) {
        // A mod Bv
        Int lead_inv = invmod(Bv.back(), p);
        while (static_cast<int>(A.size()) >= static_cast<int>(Bv.size()) && !A.empty()) {
            Int f = mod_nonneg(A.back() * lead_inv, p);
            std::size_t off = A.size() - Bv.size();
            for (std::size_t i = 0; i < Bv.size(); ++i)
                A[off + i] = mod_nonneg(A[off + i] - f * Bv[i], p);
            A = normalize(A);
            if (A.empty()) break;
        }
        std::swap(A, Bv);
    }
    return static_cast<int>(A.empty() ? 0 : A.size() - 1);
}

// translation (r, t) moving the singular point of the reduction mod p to the
// origin; only called when p | delta
inline std::pair<Int, Int> singular_point_translation(const WeierstrassModel& E,
                                                      const CurveInvariants& iv, const Int& p) {
    if (p <= 3) {
        for (Int x = 0; x < p; ++x) {
            for (Int y = 0; y < p; ++y) {
                Int F = y * y + E.a1 * x * y + E.a3 * y - x * x * x - E.a2 * x * x - E.a4 * x - E.a6;
                Int Fx = E.a1 * y - 3 * x * x - 2 * E.a2 * x - E.a4;
                Int Fy = 2 * y + E.a1 * x + E.a3;
                if (mod_nonneg(F, p) == 0 && mod_nonneg(Fx, p) == 0 && mod_nonneg(Fy, p) == 0)
                    return {x, y};
            }
        }
        throw internal_error("singular point not found mod " + p.str());
    }
    Int r;
    if (mod_nonneg(iv.c4, p) != 0)
        r = mod_nonneg(-(iv.c6 + iv.b2 * iv.c4) * invmod(12 * iv.c4, p), p);
    else
        r = mod_nonneg(-iv.b2 * invmod(Int(12), p), p);
    Int t = mod_nonneg(-(E.a1 * r + E.a3) * invmod(Int(2), p), p);
    return {balanced_mod(r, p), balanced_mod(t, p)};
}

}  // namespace detail

// Tate's algorithm at p, run uniformly at every prime on the input model
// (non-minimal models are rescaled in the step-11 loop).  Returns the
// reduction kind, Kodaira symbol, nu_p of the minimal discriminant and the
// conductor exponent.
inline LocalReductionData tate_local(const WeierstrassModel& E0, const Int& p,
                                     const arith::FactorConfig& cfg = {}) {
    using namespace detail;
    if (!arith::is_prime(p, cfg)) throw domain_error("tate_local: p is not prime");
    if (invariants(E0).delta == 0) throw domain_error("tate_local: singular model");

    WeierstrassModel E = E0;
    LocalReductionData out;
    out.p = p;

    for (int restart = 0; restart < 64; ++restart) {
        CurveInvariants iv = invariants(E);
        if (mod_nonneg(iv.delta, p) != 0) {
            out.kind = ReductionKind::good;
            out.kodaira = {KodairaSymbol::Type::I0};
            out.v_delta_min = 0;
            out.f_p = 0;
            out.tamagawa = 1;
            return out;
        }
        const int n = vp(p, iv.delta);

        auto [r0, t0] = singular_point_translation(E, iv, p);
        E = apply(E, {1, r0, 0, t0});
        iv = invariants(E);
        if (mod_nonneg(E.a3, p) != 0 || mod_nonneg(E.a4, p) != 0 || mod_nonneg(E.a6, p) != 0)
            throw internal_error("tate_local: singular point translation failed");

        if (mod_nonneg(iv.c4, p) != 0) {
            // multiplicative; tangent directions from T^2 + a1 T - a2
            bool split = quad_has_root(Int(1), E.a1, -E.a2, p);
            out.kind = ReductionKind::multiplicative;
            out.kodaira = {KodairaSymbol::Type::In, n};
            out.v_delta_min = n;
            out.f_p = 1;
            out.tamagawa = split ? n : (n % 2 == 0 ? 2 : 1);
            return out;
        }

        out.kind = ReductionKind::additive;
        out.v_delta_min = n;

        if (E.a6 != 0 && vp(p, E.a6) < 2) {
            out.kodaira = {KodairaSymbol::Type::II};
            out.f_p = n;
            out.tamagawa = 1;
            return out;
        }
        if (iv.b8 != 0 && vp(p, iv.b8) < 3) {
            out.kodaira = {KodairaSymbol::Type::III};
            out.f_p = n - 1;
            out.tamagawa = 2;
            return out;
        }
        if (iv.b6 != 0 && vp(p, iv.b6) < 3) {
            out.kodaira = {KodairaSymbol::Type::IV};
            out.f_p = n - 2;
            out.tamagawa =
                quad_has_root(Int(1), exact_div(E.a3, p), -exact_div(E.a6, p * p), p) ? 3 : 1;
            return out;
        }

        // normalize to v(a1) >= 1, v(a2) >= 1, v(a3) >= 2, v(a4) >= 2, v(a6) >= 3
        {
            Int s, t;
            if (p == 2) {
                s = mod_nonneg(E.a2, 2);
                t = 2 * mod_nonneg(exact_div(E.a6, Int(4)), 2);
            } else {
                s = balanced_mod(-E.a1 * invmod(Int(2), p), p);
                t = balanced_mod(-E.a3 * invmod(Int(2), p * p), p * p);
            }
            E = apply(E, {1, 0, s, t});
        }
        for (const auto& [coeff, need] : {std::pair<const Int&, int>{E.a1, 1},
                                          {E.a2, 1},
                                          {E.a3, 2},
                                          {E.a4, 2},
                                          {E.a6, 3}}) {
            if (coeff != 0 && vp(p, coeff) < need)
                throw internal_error("tate_local: normalization failed");
        }

        const Int p2 = p * p, p3 = p2 * p;
        CubicStructure cs = cubic_structure(mod_nonneg(exact_div(E.a2, p), p),
                                            mod_nonneg(exact_div(E.a4, p2), p),
                                            mod_nonneg(exact_div(E.a6, p3), p), p);
        if (cs.distinct == 3) {
            out.kodaira = {KodairaSymbol::Type::I0star};
            out.f_p = n - 4;
            out.tamagawa = 1 + cubic_rational_roots(mod_nonneg(exact_div(E.a2, p), p),
                                                    mod_nonneg(exact_div(E.a4, p2), p),
                                                    mod_nonneg(exact_div(E.a6, p3), p), p);
            return out;
        }

        if (cs.distinct == 2) {
            // I_m* chain: translate the double root to T = 0, then walk the
            // alternating quadratics in Y and X
            E = apply(E, {1, p * balanced_mod(cs.mult_root, p), 0, 0});
            int m = 1;
            Int py = p2;  // current p-power dividing a3
            Int px = p2;  // a4 is divisible by p * px
            for (int guard = 0; guard <= n + 2; ++guard) {
                Int B = mod_nonneg(exact_div(E.a3, py), p);
                Int C = mod_nonneg(-exact_div(E.a6, py * py), p);
                if (quad_distinct_roots(Int(1), B, C, p)) {
                    out.kodaira = {KodairaSymbol::Type::Instar, m};
                    out.f_p = n - m - 4;
                    out.tamagawa = quad_has_root(Int(1), B, C, p) ? 4 : 2;
                    return out;
                }
                E = apply(E, {1, 0, 0, py * balanced_mod(quad_double_root(Int(1), B, C, p), p)});
                ++m;

                Int A2 = mod_nonneg(exact_div(E.a2, p), p);
                Int B4 = mod_nonneg(exact_div(E.a4, p * px), p);
                Int C6 = mod_nonneg(exact_div(E.a6, px * px * p), p);
                if (quad_distinct_roots(A2, B4, C6, p)) {
                    out.kodaira = {KodairaSymbol::Type::Instar, m};
                    out.f_p = n - m - 4;
                    out.tamagawa = quad_has_root(A2, B4, C6, p) ? 4 : 2;
                    return out;
                }
                E = apply(E, {1, px * balanced_mod(quad_double_root(A2, B4, C6, p), p), 0, 0});
                ++m;
                px *= p;
                py *= p;
            }
            throw internal_error("tate_local: I_m* chain failed to terminate");
        }

        // triple root: types IV*, III*, II* or a non-minimal model
        E = apply(E, {1, p * balanced_mod(cs.mult_root, p), 0, 0});
        {
            Int B = mod_nonneg(exact_div(E.a3, p2), p);
            Int C = mod_nonneg(-exact_div(E.a6, p2 * p2), p);
            if (quad_distinct_roots(Int(1), B, C, p)) {
                out.kodaira = {KodairaSymbol::Type::IVstar};
                out.f_p = n - 6;
                out.tamagawa = quad_has_root(Int(1), B, C, p) ? 3 : 1;
                return out;
            }
            E = apply(E, {1, 0, 0, p2 * balanced_mod(quad_double_root(Int(1), B, C, p), p)});
        }
        if (E.a4 != 0 && vp(p, E.a4) < 4) {
            out.kodaira = {KodairaSymbol::Type::IIIstar};
            out.f_p = n - 7;
            out.tamagawa = 2;
            return out;
        }
        if (E.a6 != 0 && vp(p, E.a6) < 6) {
            out.kodaira = {KodairaSymbol::Type::IIstar};
            out.f_p = n - 8;
            out.tamagawa = 1;
            return out;
        }
        // step 11: the model was not minimal at p
        E = {exact_div(E.a1, p), exact_div(E.a2, p2), exact_div(E.a3, p3),
             exact_div(E.a4, p2 * p2), exact_div(E.a6, p3 * p3)};
    }
    throw internal_error("tate_local: rescale loop failed to terminate");
}

namespace detail {

inline bool kraus_ok(const Int& c4, const Int& c6, const Int& p) {
    if (p == 3) return c6 == 0 || valuation_unchecked(3, c6) != 2;
    if (p == 2) {
        if (mod_nonneg(c6, 4) == 3) return true;
        bool c4_ok = c4 == 0 || valuation_unchecked(2, c4) >= 4;
        Int r = mod_nonneg(c6, 32);
        return c4_ok && (r == 0 || r == 8);
    }
    return true;
}

// Integral model with invariants (c4, c6) via the standard reduced-form
// recipe; (c4, c6) must satisfy the Kraus conditions.
inline WeierstrassModel curve_from_c4c6(const Int& c4, const Int& c6) {
    Int b2 = mod_nonneg(-c6, 12);
    if (b2 > 6) b2 -= 12;
    Int b4 = exact_div(b2 * b2 - c4, 24);
    Int b6 = exact_div(-b2 * b2 * b2 + 36 * b2 * b4 - c6, 216);
    WeierstrassModel E;
    E.a1 = mod_nonneg(b2, 2);
    E.a2 = exact_div(b2 - E.a1, 4);
    E.a3 = mod_nonneg(b6, 2);
    E.a4 = exact_div(b4 - E.a1 * E.a3, 2);
    E.a6 = exact_div(b6 - E.a3, 4);
    CurveInvariants iv = invariants(E);
    if (iv.c4 != c4 || iv.c6 != c6) throw internal_error("curve_from_c4c6: reconstruction failed");
    return E;
}

}  // namespace detail

struct MinimalModelResult {
    WeierstrassModel model;
    Transformation trans;  // E -> model
};

// Global minimal model by the Laska-Kraus-Connell method: scale (c4, c6)
// down by the largest u consistent with the Kraus conditions, rebuild the
// reduced model, and solve for the connecting transformation.
inline MinimalModelResult minimal_model(const WeierstrassModel& E, const arith::FactorConfig& cfg = {}) {
    CurveInvariants iv = invariants(E);
    if (iv.delta == 0) throw domain_error("minimal_model: singular model");

    arith::Factorization fac = arith::factorize(iv.delta, cfg);
    Int u = 1;
    for (const auto& pp : fac.factors) {
        if (pp.exponent < 12) continue;
        const Int& p = pp.prime;
        unsigned d = pp.exponent / 12;
        if (iv.c4 != 0) d = std::min(d, valuation_unchecked(p, iv.c4) / 4);
        if (iv.c6 != 0) d = std::min(d, valuation_unchecked(p, iv.c6) / 6);
        if (p <= 3) {
            while (d > 0 && !detail::kraus_ok(exact_div(iv.c4, pow_int(p, 4 * d)),
                                              exact_div(iv.c6, pow_int(p, 6 * d)), p))
                --d;
        }
        u *= pow_int(p, d);
    }

    WeierstrassModel Em = detail::curve_from_c4c6(exact_div(iv.c4, u * u * u * u),
                                                  exact_div(iv.c6, pow_int(u, 6)));
    Transformation T;
    T.u = u;
    T.s = exact_div(u * Em.a1 - E.a1, 2);
    T.r = exact_div(u * u * Em.a2 - E.a2 + T.s * E.a1 + T.s * T.s, 3);
    T.t = exact_div(u * u * u * Em.a3 - E.a3 - T.r * E.a1, 2);
    if (!(apply(E, T) == Em)) throw internal_error("minimal_model: transformation check failed");
    return {Em, T};
}

struct GlobalInvariants {
    Int delta_min;
    Int conductor;
    std::vector<LocalReductionData> locals;  // bad primes, increasing
};

// Minimal discriminant and conductor N = prod p^{f_p}, with the per-prime
// reduction data of every bad prime.
inline GlobalInvariants conductor(const WeierstrassModel& E, const arith::FactorConfig& cfg = {}) {
    CurveInvariants iv = invariants(E);
    if (iv.delta == 0) throw domain_error("conductor: singular model");
    arith::Factorization fac = arith::factorize(iv.delta, cfg);

    GlobalInvariants g;
    g.delta_min = iv.delta < 0 ? -1 : 1;
    g.conductor = 1;
    for (const auto& pp : fac.factors) {
        LocalReductionData ld = tate_local(E, pp.prime, cfg);
        if ((static_cast<int>(pp.exponent) - ld.v_delta_min) % 12 != 0)
            throw internal_error("conductor: discriminant valuation drop not divisible by 12");
        g.delta_min *= pow_int(pp.prime, static_cast<unsigned>(ld.v_delta_min));
        g.conductor *= pow_int(pp.prime, static_cast<unsigned>(ld.f_p));
        if (ld.f_p > 0) g.locals.push_back(std::move(ld));
    }
    return g;
}

// log |delta_min| / log N, the empirical Szpiro exponent.
inline double szpiro_ratio(const GlobalInvariants& g) {
    if (abs_int(g.delta_min) == 1) return 0.0;
    if (g.conductor < 2) throw domain_error("szpiro_ratio: conductor below 2");
    return log_abs(g.delta_min) / log_abs(g.conductor);
}

inline double szpiro_ratio(const WeierstrassModel& E, const arith::FactorConfig& cfg = {}) {
    return szpiro_ratio(conductor(E, cfg));
}

// log max(|A|^3, B^2, 1), the naive height proxy for fibers.
inline double naive_height(const Int& Aval, const Int& Bval) {
    if (Aval == 0 && Bval == 0) throw domain_error("naive_height: both values are zero");
    Int acube = abs_int(Aval) * abs_int(Aval) * abs_int(Aval);
    Int bsquare = Bval * Bval;
    Int m = std::max(std::max(acube, bsquare), Int(1));
    return log_abs(m);
}

// true iff every bad prime outside S is multiplicative
inline bool is_semistable_outside(const WeierstrassModel& E, const std::set<Int>& S,
                                  const arith::FactorConfig& cfg = {}) {
    GlobalInvariants g = conductor(E, cfg);
    for (const auto& ld : g.locals)
        if (ld.kind == ReductionKind::additive && !S.contains(ld.p)) return false;
    return true;
}

// prod of nu_p(delta_min) over bad primes outside S (empty product = 1)
inline Int valuation_product_outside(const WeierstrassModel& E, const std::set<Int>& S,
                                     const arith::FactorConfig& cfg = {}) {
    GlobalInvariants g = conductor(E, cfg);
    Int acc = 1;
    for (const auto& ld : g.locals)
        if (!S.contains(ld.p)) acc *= ld.v_delta_min;
    return acc;
}

// Oracle fixture rows: a1,a2,a3,a4,a6,delta_min,conductor,p:kodaira:f:v,...
struct CurveFixture {
    WeierstrassModel model;
    Int delta_min;
    Int conductor;
    struct Local {
        Int p;
        std::string kodaira;
        int f;
        int v;
    };
    std::vector<Local> locals;
};

inline std::optional<CurveFixture> parse_fixture_line(const std::string& line) {
    if (line.empty() || line[0] == '#') return std::nullopt;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) fields.push_back(tok);
    if (fields.size() < 7) throw usage_error("fixture line has too few fields: " + line);
    CurveFixture fx;
    fx.model = {Int(fields[0]), Int(fields[1]), Int(fields[2]), Int(fields[3]), Int(fields[4])};
    fx.delta_min = Int(fields[5]);
    fx.conductor = Int(fields[6]);
    for (std::size_t i = 7; i < fields.size(); ++i) {
        std::stringstream ls(fields[i]);
        std::string p, kod, f, v;
        if (!std::getline(ls, p, ':') || !std::getline(ls, kod, ':') ||
            !std::getline(ls, f, ':') || !std::getline(ls, v, ':'))
            throw usage_error("bad fixture local '" + fields[i] + "'");
        fx.locals.push_back({Int(p), kod, std::stoi(f), std::stoi(v)});
    }
    return fx;
}

}  // namespace gpftk::ell
