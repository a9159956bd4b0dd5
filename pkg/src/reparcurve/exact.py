"""Exact-rational mirror of the reparametrization pipeline.

Everything here runs over arbitrary-precision rationals and serves as ground
truth for the floating-point modules: exact gcds, tracing index, the
classical symbolic reparametrization, exact resultants and implicitization.
The heavy polynomial arithmetic is delegated to sympy over QQ; the public
surface speaks plain ``Fraction`` coefficient lists.

Canonical normalization used throughout ("primitive form"): numerator and
denominator are jointly scaled so all coefficients are integers with overall
content 1 and the denominator's leading coefficient is positive.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import sympy as sp

from .numpoly import BiPoly, PlaneParametrization, Poly, RationalFunction

T, S, X, X1, X2 = sp.symbols("t s x x1 x2")


def _to_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, sp.Rational):
        return Fraction(int(value.p), int(value.q))
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


@dataclass(frozen=True)
class RatPoly:
    """Univariate polynomial with exact rational coefficients, ascending."""

    coeffs: tuple

    @classmethod
    def from_list(cls, values) -> "RatPoly":
        fracs = [_to_fraction(v) for v in values]
        while fracs and fracs[-1] == 0:
            fracs.pop()
        return cls(tuple(fracs))

    @classmethod
    def from_sympy(cls, expr, var=T) -> "RatPoly":
        poly = sp.Poly(expr, var, domain="QQ")
        fracs = [Fraction(0)] * (poly.degree() + 1 if poly.degree() >= 0 else 0)
        for (k,), c in poly.terms():
            fracs[k] = _to_fraction(c)
        return cls.from_list(fracs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def to_sympy(self, var=T):
        return sum((sp.Rational(c.numerator, c.denominator) * var**k for k, c in enumerate(self.coeffs)), sp.Integer(0))

    def to_poly(self) -> Poly:
        return Poly([float(c) for c in self.coeffs]) if self.coeffs else Poly([])

    def __call__(self, value):
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * value + c
        return acc

    def primitive_normalized(self) -> "RatPoly":
        """Integer coefficients with content 1 and positive leading coefficient."""
        if self.is_zero:
            return self
        denom_lcm = math.lcm(*(c.denominator for c in self.coeffs))
        ints = [c * denom_lcm for c in self.coeffs]
        content = math.gcd(*(abs(int(v)) for v in ints))
        ints = [Fraction(int(v), content) for v in ints]
        if ints[-1] < 0:
            ints = [-v for v in ints]
        return RatPoly(tuple(ints))

    def __mul__(self, other: "RatPoly") -> "RatPoly":
        if self.is_zero or other.is_zero:
            return RatPoly(())
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return RatPoly(tuple(out))

    def __sub__(self, other: "RatPoly") -> "RatPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        out = [Fraction(0)] * n
        for i, a in enumerate(self.coeffs):
            out[i] += a
        for i, b in enumerate(other.coeffs):
            out[i] -= b
        return RatPoly.from_list(out)


@dataclass(frozen=True)
class RatBiPoly:
    """Bivariate exact polynomial; ``coeffs[i][j]`` multiplies ``t^i s^j``."""

    coeffs: tuple

    @classmethod
    def from_rows(cls, rows) -> "RatBiPoly":
        mat = [[_to_fraction(v) for v in row] for row in rows]
        while mat and all(v == 0 for v in mat[-1]):
            mat.pop()
        if mat:
            width = max(len(r) for r in mat)
            mat = [r + [Fraction(0)] * (width - len(r)) for r in mat]
            while width and all(row[width - 1] == 0 for row in mat):
                width -= 1
            mat = [r[:width] for r in mat]
            if width == 0:
                mat = []
        return cls(tuple(tuple(r) for r in mat))

    @classmethod
    def from_sympy(cls, expr, var0=T, var1=S) -> "RatBiPoly":
        poly = sp.Poly(expr, var0, var1, domain="QQ")
        if poly.is_zero:
            return cls(())
        d0 = poly.degree(var0)
        d1 = poly.degree(var1)
        rows = [[Fraction(0)] * (d1 + 1) for _ in range(d0 + 1)]
        for (i, j), c in poly.terms():
            rows[i][j] = _to_fraction(c)
        return cls.from_rows(rows)

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def deg_t(self) -> int:
        return len(self.coeffs) - 1

    @property
    def deg_s(self) -> int:
        return len(self.coeffs[0]) - 1 if self.coeffs else -1

    def slice_s(self, j: int) -> RatPoly:
        """Coefficient of the j-th power of the second variable."""
        if self.is_zero or j > self.deg_s:
            return RatPoly(())
        return RatPoly.from_list([row[j] for row in self.coeffs])

    def to_sympy(self, var0=T, var1=S):
        acc = sp.Integer(0)
        for i, row in enumerate(self.coeffs):
            for j, c in enumerate(row):
                if c:
                    acc += sp.Rational(c.numerator, c.denominator) * var0**i * var1**j
        return acc

    def to_bipoly(self) -> BiPoly:
        if self.is_zero:
            return BiPoly([[0.0]])
        return BiPoly([[float(c) for c in row] for row in self.coeffs])

    def primitive_normalized(self) -> "RatBiPoly":
        """Integer content-1 form; graded-lex (t-major) leading coefficient positive."""
        if self.is_zero:
            return self
        flat = [c for row in self.coeffs for c in row]
        denom_lcm = math.lcm(*(c.denominator for c in flat))
        ints = [[c * denom_lcm for c in row] for row in self.coeffs]
        content = math.gcd(*(abs(int(c)) for row in ints for c in row))
        ints = [[Fraction(int(c), content) for c in row] for row in ints]
        lead = None
        for i, row in enumerate(ints):
            for j, c in enumerate(row):
                if c == 0:
                    continue
                key = (i + j, i)
                if lead is None or key > lead[0]:
                    lead = (key, c)
        if lead[1] < 0:
            ints = [[-c for c in row] for row in ints]
        return RatBiPoly(tuple(tuple(row) for row in ints))

    def proportional_to(self, other: "RatBiPoly") -> bool:
        return self.primitive_normalized() == other.primitive_normalized()


class ExactRationalFunction(NamedTuple):
    num: RatPoly
    den: RatPoly

    @classmethod
    def from_coeffs(cls, num, den) -> "ExactRationalFunction":
        return _normalize_fraction(RatPoly.from_list(num), RatPoly.from_list(den))

    @classmethod
    def from_sympy(cls, expr, var=T) -> "ExactRationalFunction":
        num, den = sp.fraction(sp.cancel(sp.together(expr)))
        return _normalize_fraction(RatPoly.from_sympy(num, var), RatPoly.from_sympy(den, var))

    @property
    def degree(self) -> int:
        return max(self.num.degree, self.den.degree)

    @property
    def is_constant(self) -> bool:
        return self.num.degree <= 0 and self.den.degree <= 0

    def to_sympy(self, var=T):
        return self.num.to_sympy(var) / self.den.to_sympy(var)

    def to_rational_function(self) -> RationalFunction:
        return RationalFunction(self.num.to_poly(), self.den.to_poly())

    def __call__(self, value):
        return self.num(value) / self.den(value)


def _normalize_fraction(num: RatPoly, den: RatPoly) -> ExactRationalFunction:
    if den.is_zero:
        raise ValueError("zero denominator")
    if num.is_zero:
        return ExactRationalFunction(RatPoly(()), RatPoly((Fraction(1),)))
    flat = list(num.coeffs) + list(den.coeffs)
    denom_lcm = math.lcm(*(c.denominator for c in flat))
    scaled = [c * denom_lcm for c in flat]
    content = math.gcd(*(abs(int(c)) for c in scaled if c != 0))
    factor = Fraction(denom_lcm, content)
    if den.coeffs[-1] * factor < 0:
        factor = -factor
    return ExactRationalFunction(
        RatPoly(tuple(c * factor for c in num.coeffs)),
        RatPoly(tuple(c * factor for c in den.coeffs)),
    )


class ExactParametrization(NamedTuple):
    x: ExactRationalFunction
    y: ExactRationalFunction

    @property
    def components(self):
        return (self.x, self.y)

    @property
    def degree(self) -> int:
        return max(self.x.degree, self.y.degree)

    def to_plane_parametrization(self) -> PlaneParametrization:
        return PlaneParametrization(
            self.x.to_rational_function(), self.y.to_rational_function()
        )

    def __call__(self, value):
        return self.x(value), self.y(value)


def exact_gcd(f: RatPoly, g: RatPoly) -> RatPoly:
    """Exact gcd, returned in primitive positive-leading form."""
    if f.is_zero and g.is_zero:
        raise ValueError("gcd of two zero polynomials is undefined")
    if f.is_zero:
        return g.primitive_normalized()
    if g.is_zero:
        return f.primitive_normalized()
    d = sp.gcd(f.to_sympy(T), g.to_sympy(T))
    return RatPoly.from_sympy(d, T).primitive_normalized()


def exact_cross_difference(f: ExactRationalFunction, g: ExactRationalFunction) -> RatBiPoly:
    """f_num(t) g_den(s) - g_num(s) f_den(t) over exact rationals."""
    rows_a = len(f.num.coeffs)
    rows_b = len(f.den.coeffs)
    rows = max(rows_a, rows_b)
    cols = max(len(g.den.coeffs), len(g.num.coeffs))
    mat = [[Fraction(0)] * cols for _ in range(rows)]
    for i, a in enumerate(f.num.coeffs):
        for j, b in enumerate(g.den.coeffs):
            mat[i][j] += a * b
    for i, a in enumerate(f.den.coeffs):
        for j, b in enumerate(g.num.coeffs):
            mat[i][j] -= a * b
    return RatBiPoly.from_rows(mat)


def cross_gcd(P: ExactParametrization) -> RatBiPoly:
    """Exact bivariate gcd S(t, s) of the two cross-difference polynomials."""
    h1 = exact_cross_difference(P.x, P.x)
    h2 = exact_cross_difference(P.y, P.y)
    if h1.is_zero and h2.is_zero:
        raise ValueError("both components are constant")
    if h1.is_zero or h2.is_zero:
        s = (h2 if h1.is_zero else h1).to_sympy(T, S)
    else:
        s = sp.gcd(h1.to_sympy(T, S), h2.to_sympy(T, S))
    return RatBiPoly.from_sympy(s, T, S).primitive_normalized()


def tracing_index(P: ExactParametrization) -> int:
    """Number of parameter values per generic curve point: deg_t of the cross gcd."""
    return cross_gcd(P).deg_t


class ExactReparamResult(NamedTuple):
    Q: ExactParametrization
    R: ExactRationalFunction
    pair: tuple | None
    s_slices: tuple


def exact_reparametrize(P: ExactParametrization) -> ExactReparamResult:
    """Classical symbolic proper reparametrization over exact rationals.

    Returns Q with tracing index 1 and R with P = Q(R) as exact identities.
    The coefficient pair (C_i, C_j) defining R is the first admissible one in
    a descending (i, then j) scan; the admissibility screen is that the
    product C_i C_j is nonconstant and gcd(C_i, C_j) = 1.
    """
    s_bi = cross_gcd(P)
    slices = tuple(s_bi.slice_s(j) for j in range(s_bi.deg_s + 1))
    if s_bi.deg_t == 1:
        identity = ExactRationalFunction.from_coeffs([0, 1], [1])
        return ExactReparamResult(P, identity, None, slices)

    pair = None
    for i in range(len(slices) - 1, -1, -1):
        for j in range(len(slices) - 1, -1, -1):
            if i == j:
                continue
            ci, cj = slices[i], slices[j]
            if ci.is_zero or cj.is_zero:
                continue
            if ci.degree == 0 and cj.degree == 0:
                continue
            if exact_gcd(ci, cj).degree != 0:
                continue
            pair = (i, j)
            break
        if pair:
            break
    if pair is None:
        raise ValueError("no admissible coefficient pair in the cross gcd")

    ci, cj = slices[pair[0]], slices[pair[1]]
    R = _normalize_fraction(ci, cj)
    ell = R.degree
    components = []
    for k in range(2):
        comp = P.components[k]
        g_k = X * comp.den.to_sympy(T) - comp.num.to_sympy(T)
        b = S * cj.to_sympy(T) - ci.to_sympy(T)
        l_k = sp.resultant(g_k, b, T)
        l_poly = sp.Poly(l_k, X)
        lead = l_poly.coeff_monomial(X**ell)
        sub = l_poly.coeff_monomial(X ** (ell - 1))
        root = sp.cancel((-sub / ell) / lead)
        components.append(ExactRationalFunction.from_sympy(root, S))
    Q = ExactParametrization(components[0], components[1])

    for k in range(2):
        lhs = P.components[k].to_sympy(T)
        rhs = Q.components[k].to_sympy(S).subs(S, R.to_sympy(T))
        if sp.cancel(lhs - rhs) != 0:
            raise ValueError("reparametrization identity failed; input may be degenerate")
    return ExactReparamResult(Q, R, pair, slices)


def compose(Q: ExactParametrization, R: ExactRationalFunction) -> ExactParametrization:
    """Exact composition Q(R(t)), each component reduced."""
    r_expr = R.to_sympy(T)
    comps = []
    for comp in Q.components:
        expr = comp.to_sympy(S).subs(S, r_expr)
        comps.append(ExactRationalFunction.from_sympy(expr, T))
    return ExactParametrization(comps[0], comps[1])


def exact_parametric_resultant(G: RatBiPoly, B: RatBiPoly) -> RatBiPoly:
    """res_t of G(t, x) and B(t, s) as an exact polynomial in (s, x)."""
    res = sp.resultant(G.to_sympy(T, X), B.to_sympy(T, S), T)
    return RatBiPoly.from_sympy(res, S, X)


def exact_implicitize(P: ExactParametrization) -> RatBiPoly:
    """res_t of the two moving lines; a power of the implicit equation."""
    g1 = X1 * P.x.den.to_sympy(T) - P.x.num.to_sympy(T)
    g2 = X2 * P.y.den.to_sympy(T) - P.y.num.to_sympy(T)
    res = sp.resultant(g1, g2, T)
    if res == 0:
        raise ValueError("degenerate parametrization: moving lines share a factor")
    return RatBiPoly.from_sympy(res, X1, X2).primitive_normalized()
