"""Reference implementation of Tate's algorithm over Q, used only to generate
pinned test fixtures.

Deliberately written in a different style from the C++ library: singular
points and polynomial roots mod p are found by exhaustive residue search
(fine for the small bad primes of the fixture curves), and the per-prime
minimality loop is the only source of the minimal discriminant.  Anchored
against published curve data (Cremona / LMFDB) in gen_fixtures.py before
anything is written.
"""

from fractions import Fraction


def valuation(p, m):
    assert m != 0
    v = 0
    while m % p == 0:
        m //= p
        v += 1
    return v


class Curve:
    def __init__(self, a1, a2, a3, a4, a6):
        self.a = [a1, a2, a3, a4, a6]

    def b_invariants(self):
        a1, a2, a3, a4, a6 = self.a
        b2 = a1 * a1 + 4 * a2
        b4 = 2 * a4 + a1 * a3
        b6 = a3 * a3 + 4 * a6
        b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
        return b2, b4, b6, b8

    def c_invariants(self):
        b2, b4, b6, _ = self.b_invariants()
        c4 = b2 * b2 - 24 * b4
        c6 = -b2 ** 3 + 36 * b2 * b4 - 216 * b6
        return c4, c6

    def discriminant(self):
        b2, b4, b6, b8 = self.b_invariants()
        return -b2 * b2 * b8 - 8 * b4 ** 3 - 27 * b6 * b6 + 9 * b2 * b4 * b6

    def translated(self, r=0, s=0, t=0):
        # x -> x + r, y -> y + s*x + t (u = 1)
        a1, a2, a3, a4, a6 = self.a
        n1 = a1 + 2 * s
        n2 = a2 - s * a1 + 3 * r - s * s
        n3 = a3 + r * a1 + 2 * t
        n4 = a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t
        n6 = a6 + r * a4 + r * r * a2 + r ** 3 - t * a3 - t * t - r * t * a1
        return Curve(n1, n2, n3, n4, n6)

    def rescaled_down(self, p):
        # (a1,..,a6) -> (a1/p, a2/p^2, a3/p^3, a4/p^4, a6/p^6); must be exact
        a1, a2, a3, a4, a6 = self.a
        for ai, k in zip(self.a, (1, 2, 3, 4, 6)):
            assert ai % p ** k == 0
        return Curve(a1 // p, a2 // p ** 2, a3 // p ** 3, a4 // p ** 4, a6 // p ** 6)


def singular_point_mod_p(curve, p):
    """Exhaustive search for the singular point of the reduced curve."""
    a1, a2, a3, a4, a6 = [x % p for x in curve.a]
    for x in range(p):
        for y in range(p):
            f = (y * y + a1 * x * y + a3 * y - x ** 3 - a2 * x * x - a4 * x - a6) % p
            fx = (a1 * y - 3 * x * x - 2 * a2 * x - a4) % p
            fy = (2 * y + a1 * x + a3) % p
            if f == 0 and fx == 0 and fy == 0:
                return x, y
    raise AssertionError("no singular point found")


def poly_roots_mod_p(coeffs, p):
    """Roots in F_p of sum(coeffs[i] * T^i), by exhaustive search."""
    roots = []
    for t in range(p):
        acc = 0
        for c in reversed(coeffs):
            acc = (acc * t + c) % p
        if acc == 0:
            roots.append(t)
    return roots


def cubic_root_structure(b, c, d, p):
    """For T^3 + b T^2 + c T + d over F_p: number of distinct roots in the
    algebraic closure (3, 2 or 1) plus the multiple root when there is one.
    Found by factoring out rational roots exhaustively; any multiple root of
    a cubic is rational."""
    disc = (18 * b * c * d - 4 * b ** 3 * d + b * b * c * c - 4 * c ** 3 - 27 * d * d) % p
    if disc != 0:
        return 3, None
    for r in range(p):
        if (r ** 3 + b * r * r + c * r + d) % p != 0:
            continue
        # deflate and see whether r is at least a double root
        e1 = (b + r) % p
        e0 = (c + r * e1) % p
        if (r * r + e1 * r + e0) % p == 0:
            # r is a multiple root; triple iff the deflated quadratic is (T-r)^2
            if (e1 + 2 * r) % p == 0 and (e0 - r * r) % p == 0:
                return 1, r
            return 2, r
    raise AssertionError("vanishing discriminant but no multiple root")


def quad_roots(b, c, p):
    """Roots in F_p of Y^2 + b Y + c."""
    return poly_roots_mod_p([c, b, 1], p)


def quad_distinct(b, c, p):
    return (b * b - 4 * c) % p != 0


def tate(curve, p):
    """Returns (kodaira, f, v_min, c, u_exponent) at p.

    kodaira is a string such as 'I0', 'I5', 'II', 'I2*', 'IV*'.
    v_min is the valuation of the minimal discriminant, u_exponent the number
    of times the model was rescaled by p.
    """
    E = Curve(*curve.a)
    u_exp = 0
    for _round in range(64):
        delta = E.discriminant()
        assert delta != 0
        n = valuation(p, delta)
        if n == 0:
            return "I0", 0, 0, 1, u_exp

        x0, y0 = singular_point_mod_p(E, p)
        E = E.translated(r=x0, t=y0)
        a1, a2, a3, a4, a6 = E.a
        assert a3 % p == 0 and a4 % p == 0 and a6 % p == 0

        c4, _ = E.c_invariants()
        if c4 % p != 0:
            # multiplicative: tangent directions from T^2 + a1 T - a2
            split = len(quad_roots(a1 % p, (-a2) % p, p)) > 0
            c = n if split else (2 if n % 2 == 0 else 1)
            return "I%d" % n, 1, n, c, u_exp

        if a6 != 0 and valuation(p, a6) < 2:
            return "II", n, n, 1, u_exp
        b8 = E.b_invariants()[3]
        if b8 != 0 and valuation(p, b8) < 3:
            return "III", n - 1, n, 2, u_exp
        b6 = E.b_invariants()[2]
        if b6 != 0 and valuation(p, b6) < 3:
            roots = quad_roots((a3 // p) % p, (-(a6 // p ** 2)) % p, p)
            c = 3 if len(roots) > 0 else 1
            return "IV", n - 2, n, c, u_exp

        # normalize so that p|a1, p|a2, p^2|a3, p^2|a4, p^3|a6
        for s in range(p):
            if (a1 + 2 * s) % p == 0 and (a2 - s * a1 - s * s) % p == 0:
                break
        E = E.translated(s=s)
        a1, a2, a3, a4, a6 = E.a
        for t0 in range(p ** 2):
            if (a3 + 2 * t0) % p ** 2 == 0 and (a6 - t0 * a3 - t0 * t0) % p ** 3 == 0:
                break
        E = E.translated(t=t0)
        a1, a2, a3, a4, a6 = E.a
        assert a1 % p == 0 and a2 % p == 0
        assert a3 % p ** 2 == 0 and a4 % p ** 2 == 0 and a6 % p ** 3 == 0

        nd, mult_root = cubic_root_structure(
            (a2 // p) % p, (a4 // p ** 2) % p, (a6 // p ** 3) % p, p)
        if nd == 3:
            nroots = len(poly_roots_mod_p(
                [(a6 // p ** 3) % p, (a4 // p ** 2) % p, (a2 // p) % p, 1], p))
            return "I0*", n - 4, n, 1 + nroots, u_exp

        if nd == 2:
            # I_m* subprocedure
            E = E.translated(r=p * mult_root)
            a1, a2, a3, a4, a6 = E.a
            m = 1
            kx, ky = 2, 2  # current valuations forced on a4 (kx+1) and a3 (ky)
            while True:
                b = (a3 // p ** ky) % p
                cc = (-(a6 // p ** (2 * ky))) % p
                if quad_distinct(b, cc, p):
                    c = 4 if len(quad_roots(b, cc, p)) > 0 else 2
                    return "I%d*" % m, n - m - 4, n, c, u_exp
                yroot = quad_roots(b, cc, p)[0]
                E = E.translated(t=p ** ky * yroot)
                a1, a2, a3, a4, a6 = E.a
                m += 1
                aa = (a2 // p) % p
                bb = (a4 // p ** (kx + 1)) % p
                cc = (a6 // p ** (2 * kx + 1)) % p
                if (bb * bb - 4 * aa * cc) % p != 0:
                    roots = poly_roots_mod_p([cc, bb, aa], p)
                    c = 4 if len(roots) > 0 else 2
                    return "I%d*" % m, n - m - 4, n, c, u_exp
                xroot = poly_roots_mod_p([cc, bb, aa], p)[0]
                E = E.translated(r=p ** kx * xroot)
                a1, a2, a3, a4, a6 = E.a
                m += 1
                kx += 1
                ky += 1

        # triple root
        E = E.translated(r=p * mult_root)
        a1, a2, a3, a4, a6 = E.a
        b = (a3 // p ** 2) % p
        cc = (-(a6 // p ** 4)) % p
        if quad_distinct(b, cc, p):
            c = 3 if len(quad_roots(b, cc, p)) > 0 else 1
            return "IV*", n - 6, n, c, u_exp
        yroot = quad_roots(b, cc, p)[0]
        E = E.translated(t=p ** 2 * yroot)
        a1, a2, a3, a4, a6 = E.a
        if a4 % p ** 4 != 0:
            return "III*", n - 7, n, 2, u_exp
        if a6 % p ** 6 != 0:
            return "II*", n - 8, n, 1, u_exp
        E = E.rescaled_down(p)
        u_exp += 1
    raise AssertionError("tate loop failed to terminate")


def prime_factors(m):
    m = abs(m)
    out = []
    d = 2
    while d * d <= m:
        if m % d == 0:
            out.append(d)
            while m % d == 0:
                m //= d
        d += 1
    if m > 1:
        out.append(m)
    return out


def global_data(curve):
    """(delta_min, conductor, locals) with locals a list of
    (p, kodaira, f, v_min) over bad primes in increasing order."""
    delta = curve.discriminant()
    locals_ = []
    delta_min = -1 if delta < 0 else 1
    conductor = 1
    for p in prime_factors(delta):
        kod, f, v, _c, u_exp = tate(curve, p)
        assert valuation(p, delta) == v + 12 * u_exp
        if f > 0:
            locals_.append((p, kod, f, v))
        conductor *= p ** f
        delta_min *= p ** v
    return delta_min, conductor, locals_
