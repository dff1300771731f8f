#pragma once

#include "gpftk/arith.hpp"
#include "gpftk/ellcurve.hpp"
#include "gpftk/integer.hpp"
#include "gpftk/polyz.hpp"

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

namespace gpftk::families {

// Validated elliptic surface y^2 = x^3 + A(t) x + B(t): A, B coprime over Q,
// not both constant, D = -16(4A^3 + 27B^2) nonzero.  Sigma is the set of
// integer zeros of D (the fibers that are not elliptic curves).
struct SurfaceSpec {
    poly::IntPoly A, B, D;
    Int rho;                 // resultant of A and B
    std::vector<Int> sigma;  // sorted

    bool in_sigma(const Int& n) const {
        return std::binary_search(sigma.begin(), sigma.end(), n);
    }
};

inline SurfaceSpec make_surface(const poly::IntPoly& A, const poly::IntPoly& B,
                                const arith::FactorConfig& cfg = {}) {
    if (A.is_constant() && B.is_constant())
        throw domain_error("surface rejected: A and B must not both be constant");
    poly::IntPoly g = poly::gcd_over_Q(A, B);
    if (g.degree() != 0)
        throw domain_error("surface rejected: A and B are not coprime over Q, gcd is " +
                           g.to_string());
    SurfaceSpec s;
    s.A = A;
    s.B = B;
    s.D = poly::discriminant_poly(A, B);
    if (s.D.is_zero()) throw domain_error("surface rejected: discriminant polynomial is zero");
    s.rho = poly::resultant(A, B);
    if (s.rho == 0) throw internal_error("make_surface: coprime A, B with zero resultant");
    if (poly::distinct_root_count(s.D) < 2)
        throw domain_error(
            "surface rejected: discriminant polynomial needs at least two distinct complex zeros");
    s.sigma = poly::integer_roots(s.D, cfg);
    return s;
}

// The fiber E_n; n in Sigma is rejected with the vanishing witness.
inline ell::WeierstrassModel fiber(const SurfaceSpec& s, const Int& n) {
    if (s.in_sigma(n))
        throw domain_error("bad fiber at n = " + n.str() + ": D(n) = 0, not an elliptic curve");
    return ell::WeierstrassModel::short_form(s.A.eval(n), s.B.eval(n));
}

// Quadratic f = a x^2 + b x + c with two distinct complex roots (delta != 0).
struct QuadraticGPF {
    Int a, b, c;

    Int delta() const { return b * b - 4 * a * c; }

    static QuadraticGPF make(Int a, Int b, Int c) {
        if (a == 0) throw domain_error("quadratic family: leading coefficient must be nonzero");
        QuadraticGPF f{std::move(a), std::move(b), std::move(c)};
        if (f.delta() == 0)
            throw domain_error(
                "quadratic family: discriminant b^2 - 4ac is zero; the hypothesis of two "
                "complex roots is read as two distinct complex roots");
        return f;
    }

    poly::IntPoly as_poly() const { return poly::IntPoly{c, b, a}; }
};

// Cubic f = (ax + b)^3 + c with a, c nonzero.
struct CubicGPF {
    Int a, b, c;

    static CubicGPF make(Int a, Int b, Int c) {
        if (a == 0) throw domain_error("cubic family: a must be nonzero");
        if (c == 0) throw domain_error("cubic family: c must be nonzero");
        return {std::move(a), std::move(b), std::move(c)};
    }

    poly::IntPoly as_poly() const {
        poly::IntPoly lin{b, a};
        return lin.pow_u(3) + poly::IntPoly::constant(c);
    }
};

// y^2 = x^3 - 3 delta x - 2 delta (2an + b)
inline ell::WeierstrassModel quadratic_curve(const QuadraticGPF& f, const Int& n) {
    Int d = f.delta();
    return ell::WeierstrassModel::short_form(-3 * d, -2 * d * (2 * f.a * n + f.b));
}

// y^2 = x^3 + 3c(an + b) x + 2c^2
inline ell::WeierstrassModel cubic_curve(const CubicGPF& f, const Int& n) {
    return ell::WeierstrassModel::short_form(3 * f.c * (f.a * n + f.b), 2 * f.c * f.c);
}

// The surfaces behind the two families, as validated SurfaceSpecs.
inline SurfaceSpec surface_of(const QuadraticGPF& f, const arith::FactorConfig& cfg = {}) {
    Int d = f.delta();
    poly::IntPoly A = poly::IntPoly::constant(-3 * d);
    poly::IntPoly B{-2 * d * f.b, -4 * d * f.a};
    return make_surface(A, B, cfg);
}

inline SurfaceSpec surface_of(const CubicGPF& f, const arith::FactorConfig& cfg = {}) {
    poly::IntPoly A{3 * f.c * f.b, 3 * f.c * f.a};
    poly::IntPoly B = poly::IntPoly::constant(2 * f.c * f.c);
    return make_surface(A, B, cfg);
}

struct IdentityCheck {
    bool ok;
    poly::IntPoly lhs;  // discriminant of the family surface
    poly::IntPoly rhs;  // the closed form
};

// D(t) = -6912 delta^2 a f(t) for the quadratic family.
inline IdentityCheck verify_quadratic_identity(const QuadraticGPF& f) {
    Int d = f.delta();
    poly::IntPoly A = poly::IntPoly::constant(-3 * d);
    poly::IntPoly B{-2 * d * f.b, -4 * d * f.a};
    poly::IntPoly lhs = poly::discriminant_poly(A, B);
    poly::IntPoly rhs = f.as_poly() * (Int(-6912) * d * d * f.a);
    return {lhs == rhs, std::move(lhs), std::move(rhs)};
}

// D(t) = -1728 c^3 f(t) for the cubic family.
inline IdentityCheck verify_cubic_identity(const CubicGPF& f) {
    poly::IntPoly A{3 * f.c * f.b, 3 * f.c * f.a};
    poly::IntPoly B = poly::IntPoly::constant(2 * f.c * f.c);
    poly::IntPoly lhs = poly::discriminant_poly(A, B);
    poly::IntPoly rhs = f.as_poly() * (Int(-1728) * f.c * f.c * f.c);
    return {lhs == rhs, std::move(lhs), std::move(rhs)};
}

struct QuasiminimalityReport {
    Rational ratio;    // D(n) / delta_min, exact
    bool rad_divides;  // rad(D(n)) | rho * N
    Int d_n;
    Int delta_min;
    Int conductor;
};

inline QuasiminimalityReport quasiminimality_report(const SurfaceSpec& s, const Int& n,
                                                    const arith::FactorConfig& cfg = {}) {
    ell::WeierstrassModel E = fiber(s, n);
    ell::GlobalInvariants g = ell::conductor(E, cfg);
    QuasiminimalityReport rep;
    rep.d_n = s.D.eval(n);
    rep.delta_min = g.delta_min;
    rep.conductor = g.conductor;
    rep.ratio = Rational(rep.d_n) / Rational(g.delta_min);
    rep.rad_divides = divides(arith::radical(rep.d_n, cfg), s.rho * g.conductor);
    return rep;
}

}  // namespace gpftk::families
