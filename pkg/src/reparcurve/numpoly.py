"""Dense univariate/bivariate polynomials over complex floats.

Coefficients are stored ascending by degree (``coeffs[k]`` multiplies the
k-th power).  Construction trims trailing coefficients whose magnitude does
not exceed ``trim_tol``; the default tolerance is ``10 * machine-eps * |p|_inf``
so trimming only removes float-level noise, never tolerance-level structure.
Tolerance-level decisions (approximate equality, gcd degrees) are made by the
dedicated operations, not by trimming.

The zero polynomial is the empty coefficient list and has degree ``-inf``.

All values are immutable after construction and every operation is pure, so
the types are safe to share between threads.
"""

from __future__ import annotations

import math
import numbers

import numpy as np
from numpy.polynomial import polynomial as npp

TRIM_REL = 10.0 * float(np.finfo(float).eps)

NEG_INF = float("-inf")


def _as_complex_array(coeffs):
    arr = np.atleast_1d(np.asarray(coeffs, dtype=complex))
    if arr.ndim != 1:
        raise ValueError("univariate coefficients must be one-dimensional")
    return arr


def default_trim_tol(arr) -> float:
    mags = np.abs(np.asarray(arr, dtype=complex))
    return TRIM_REL * float(mags.max()) if mags.size else 0.0


class Poly:
    """Dense univariate polynomial with complex float coefficients."""

    __slots__ = ("coeffs", "trim_tol")

    def __init__(self, coeffs, trim_tol: float | None = None):
        arr = _as_complex_array(coeffs)
        tol = default_trim_tol(arr) if trim_tol is None else float(trim_tol)
        keep = np.nonzero(np.abs(arr) > tol)[0]
        arr = arr[: keep[-1] + 1].copy() if keep.size else np.zeros(0, dtype=complex)
        arr.setflags(write=False)
        object.__setattr__(self, "coeffs", arr)
        object.__setattr__(self, "trim_tol", tol)

    def __setattr__(self, name, value):  # pragma: no cover - guard only
        raise AttributeError("Poly is immutable")

    # -- basic queries -------------------------------------------------
    @property
    def degree(self):
        return self.coeffs.size - 1 if self.coeffs.size else NEG_INF

    @property
    def is_zero(self) -> bool:
        return self.coeffs.size == 0

    @property
    def is_real(self) -> bool:
        return bool(np.all(np.abs(self.coeffs.imag) == 0.0)) if self.coeffs.size else True

    def norm_inf(self) -> float:
        return float(np.abs(self.coeffs).max()) if self.coeffs.size else 0.0

    def norm_2(self) -> float:
        return float(np.linalg.norm(self.coeffs)) if self.coeffs.size else 0.0

    def leading(self) -> complex:
        if self.is_zero:
            raise ValueError("zero polynomial has no leading coefficient")
        return complex(self.coeffs[-1])

    def coeff(self, k: int) -> complex:
        return complex(self.coeffs[k]) if 0 <= k < self.coeffs.size else 0.0 + 0.0j

    def padded(self, length: int):
        out = np.zeros(length, dtype=complex)
        out[: self.coeffs.size] = self.coeffs
        return out

    # -- arithmetic ----------------------------------------------------
    def __add__(self, other: "Poly") -> "Poly":
        n = max(self.coeffs.size, other.coeffs.size, 1)
        return Poly(self.padded(n) + other.padded(n))

    def __sub__(self, other: "Poly") -> "Poly":
        n = max(self.coeffs.size, other.coeffs.size, 1)
        return Poly(self.padded(n) - other.padded(n))

    def __neg__(self) -> "Poly":
        return self.scale(-1.0)

    def __mul__(self, other):
        if isinstance(other, numbers.Number):
            return self.scale(other)
        if self.is_zero or other.is_zero:
            return Poly([])
        return Poly(np.convolve(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def scale(self, c) -> "Poly":
        if self.is_zero:
            return self
        return Poly(self.coeffs * complex(c), trim_tol=self.trim_tol * abs(complex(c)))

    def monic(self) -> "Poly":
        return self.scale(1.0 / self.leading())

    def power(self, n: int) -> "Poly":
        out = Poly([1.0])
        for _ in range(n):
            out = out * self
        return out

    def deriv(self) -> "Poly":
        if self.coeffs.size <= 1:
            return Poly([])
        return Poly(self.coeffs[1:] * np.arange(1, self.coeffs.size))

    def __call__(self, t):
        if self.is_zero:
            t = np.asarray(t)
            return np.zeros(t.shape, dtype=complex) if t.ndim else 0.0 + 0.0j
        return npp.polyval(t, self.coeffs)

    def pivot_normalized(self) -> "Poly":
        return self.scale(1.0 / pivot(self))

    def real_coeffs(self):
        return self.coeffs.real.copy()

    def equals_exact(self, other: "Poly") -> bool:
        return self.coeffs.size == other.coeffs.size and bool(
            np.all(self.coeffs == other.coeffs)
        )

    def __repr__(self):
        if self.is_zero:
            return "Poly(0)"
        return f"Poly(deg={self.coeffs.size - 1}, coeffs={np.array2string(self.coeffs, precision=6)})"


class BiPoly:
    """Dense bivariate polynomial; ``coeffs[i, j]`` multiplies ``t^i s^j``.

    The axes are generic: resultant code reuses the type with axis 0 read as
    ``s`` and axis 1 as ``x``.  Trimming removes all-but-noise outer rows and
    columns, so ``deg_t``/``deg_s`` reflect the trimmed support.
    """

    __slots__ = ("coeffs", "trim_tol")

    def __init__(self, coeffs, trim_tol: float | None = None):
        arr = np.atleast_2d(np.asarray(coeffs, dtype=complex))
        if arr.ndim != 2:
            raise ValueError("bivariate coefficients must be two-dimensional")
        tol = default_trim_tol(arr) if trim_tol is None else float(trim_tol)
        mask = np.abs(arr) > tol
        if mask.any():
            rows = np.nonzero(mask.any(axis=1))[0]
            cols = np.nonzero(mask.any(axis=0))[0]
            arr = arr[: rows[-1] + 1, : cols[-1] + 1].copy()
        else:
            arr = np.zeros((0, 0), dtype=complex)
        arr.setflags(write=False)
        object.__setattr__(self, "coeffs", arr)
        object.__setattr__(self, "trim_tol", tol)

    def __setattr__(self, name, value):  # pragma: no cover - guard only
        raise AttributeError("BiPoly is immutable")

    @property
    def deg_t(self):
        return self.coeffs.shape[0] - 1 if self.coeffs.size else NEG_INF

    @property
    def deg_s(self):
        return self.coeffs.shape[1] - 1 if self.coeffs.size else NEG_INF

    @property
    def is_zero(self) -> bool:
        return self.coeffs.size == 0

    def norm_inf(self) -> float:
        return float(np.abs(self.coeffs).max()) if self.coeffs.size else 0.0

    def padded(self, shape):
        out = np.zeros(shape, dtype=complex)
        if self.coeffs.size:
            out[: self.coeffs.shape[0], : self.coeffs.shape[1]] = self.coeffs
        return out

    def __add__(self, other: "BiPoly") -> "BiPoly":
        shape = (
            max(self.coeffs.shape[0], other.coeffs.shape[0], 1),
            max(self.coeffs.shape[1], other.coeffs.shape[1], 1),
        )
        return BiPoly(self.padded(shape) + other.padded(shape))

    def __sub__(self, other: "BiPoly") -> "BiPoly":
        shape = (
            max(self.coeffs.shape[0], other.coeffs.shape[0], 1),
            max(self.coeffs.shape[1], other.coeffs.shape[1], 1),
        )
        return BiPoly(self.padded(shape) - other.padded(shape))

    def __mul__(self, other):
        if isinstance(other, numbers.Number):
            return self.scale(other)
        if self.is_zero or other.is_zero:
            return BiPoly([[0.0]])
        a, b = self.coeffs, other.coeffs
        out = np.zeros((a.shape[0] + b.shape[0] - 1, a.shape[1] + b.shape[1] - 1), dtype=complex)
        for i in range(a.shape[0]):
            for j in range(a.shape[1]):
                if a[i, j] != 0:
                    out[i : i + b.shape[0], j : j + b.shape[1]] += a[i, j] * b
        return BiPoly(out)

    __rmul__ = __mul__

    def scale(self, c) -> "BiPoly":
        if self.is_zero:
            return self
        return BiPoly(self.coeffs * complex(c), trim_tol=self.trim_tol * abs(complex(c)))

    def power(self, n: int) -> "BiPoly":
        out = BiPoly([[1.0]])
        for _ in range(n):
            out = out * self
        return out

    def transpose(self) -> "BiPoly":
        return BiPoly(self.coeffs.T, trim_tol=self.trim_tol)

    def slice_axis0(self, i: int) -> Poly:
        """Coefficient of the i-th power of the axis-0 variable, as a Poly in axis 1."""
        if self.is_zero or i >= self.coeffs.shape[0]:
            return Poly([])
        return Poly(self.coeffs[i, :])

    def slice_axis1(self, j: int) -> Poly:
        """Coefficient of the j-th power of the axis-1 variable, as a Poly in axis 0."""
        if self.is_zero or j >= self.coeffs.shape[1]:
            return Poly([])
        return Poly(self.coeffs[:, j])

    def deriv_axis1(self, order: int = 1) -> "BiPoly":
        arr = self.coeffs
        for _ in range(order):
            if arr.shape[1] <= 1:
                return BiPoly([[0.0]])
            arr = arr[:, 1:] * np.arange(1, arr.shape[1])
        return BiPoly(arr)

    def eval(self, t, s):
        if self.is_zero:
            return np.zeros(np.broadcast(np.asarray(t), np.asarray(s)).shape, dtype=complex)
        return npp.polyval2d(t, s, self.coeffs)

    def specialize_axis1(self, s0) -> Poly:
        """Substitute a number for the axis-1 variable, returning a Poly in axis 0."""
        if self.is_zero:
            return Poly([])
        powers = np.asarray(s0, dtype=complex) ** np.arange(self.coeffs.shape[1])
        return Poly(self.coeffs @ powers)

    def specialize_axis0(self, t0) -> Poly:
        if self.is_zero:
            return Poly([])
        powers = np.asarray(t0, dtype=complex) ** np.arange(self.coeffs.shape[0])
        return Poly(powers @ self.coeffs)

    def substitute_diagonal(self) -> Poly:
        """Substitute the axis-0 variable for the axis-1 variable (s -> t)."""
        if self.is_zero:
            return Poly([])
        n = self.coeffs.shape[0] + self.coeffs.shape[1] - 1
        out = np.zeros(n, dtype=complex)
        for j in range(self.coeffs.shape[1]):
            out[j : j + self.coeffs.shape[0]] += self.coeffs[:, j]
        return Poly(out)

    def substitute_axis1_rational(self, num: Poly, den: Poly) -> Poly:
        """Numerator of A(t, num(t)/den(t)) after clearing den^deg_s."""
        if self.is_zero:
            return Poly([])
        j_max = self.coeffs.shape[1] - 1
        acc = Poly([])
        for j in range(j_max + 1):
            term = self.slice_axis1(j) * num.power(j) * den.power(j_max - j)
            acc = acc + term
        return acc

    def substitute_rationals(self, frac0, frac1) -> Poly:
        """Numerator of A(r0(t), r1(t)) with rationals per axis, denominators cleared."""
        if self.is_zero:
            return Poly([])
        n0, d0 = frac0
        n1, d1 = frac1
        a_max = self.coeffs.shape[0] - 1
        b_max = self.coeffs.shape[1] - 1
        pow0n = [Poly([1.0])]
        pow0d = [Poly([1.0])]
        pow1n = [Poly([1.0])]
        pow1d = [Poly([1.0])]
        for _ in range(max(a_max, b_max)):
            pow0n.append(pow0n[-1] * n0)
            pow0d.append(pow0d[-1] * d0)
            pow1n.append(pow1n[-1] * n1)
            pow1d.append(pow1d[-1] * d1)
        acc = Poly([])
        for a in range(a_max + 1):
            for b in range(b_max + 1):
                c = self.coeffs[a, b]
                if c == 0:
                    continue
                term = pow0n[a] * pow0d[a_max - a] * pow1n[b] * pow1d[b_max - b]
                acc = acc + term.scale(c)
        return acc

    def pivot_normalized(self) -> "BiPoly":
        return self.scale(1.0 / pivot(self))

    def __repr__(self):
        if self.is_zero:
            return "BiPoly(0)"
        return f"BiPoly(deg_t={self.coeffs.shape[0] - 1}, deg_s={self.coeffs.shape[1] - 1})"


def pivot(p) -> complex:
    """Signed coefficient of largest magnitude (ties -> lowest flat index).

    Dividing by the pivot rescales to unit infinity norm and makes the pivot
    entry exactly 1, which also cancels an overall sign/phase.  This is the
    canonical normalization used by every "equal up to a constant" comparison.
    """
    arr = p.coeffs
    if arr.size == 0:
        raise ValueError("zero polynomial cannot be normalized")
    idx = int(np.argmax(np.abs(arr.ravel())))
    return complex(arr.ravel()[idx])


def norm_inf(p) -> float:
    """Largest coefficient magnitude; 0 for the zero polynomial."""
    return p.norm_inf()


def aligned_gap(a, b) -> float:
    """Infinity-norm distance after unit normalization and phase alignment.

    Both inputs are divided by their pivots; the remaining unit-phase
    ambiguity (for instance the corner tie of an antisymmetric matrix) is
    resolved by aligning b's pivot entry as it appears in a.  Returns inf
    when the trimmed degrees disagree.
    """
    if a.is_zero or b.is_zero:
        raise ValueError("aligned_gap is undefined for the zero polynomial")
    an = a.pivot_normalized()
    bn = b.pivot_normalized()
    if isinstance(a, Poly):
        if an.degree != bn.degree:
            return float("inf")
    else:
        if an.deg_t != bn.deg_t or an.deg_s != bn.deg_s:
            return float("inf")
    aflat = an.coeffs.ravel()
    bflat = bn.coeffs.ravel()
    jb = int(np.argmax(np.abs(bflat)))
    phase = aflat[jb] / abs(aflat[jb]) if abs(aflat[jb]) > 0.5 else 1.0
    return float(np.abs(aflat - phase * bflat).max())


def approx_eq(a, b, eps: float) -> bool:
    """Coefficient-wise closeness after rescaling both sides to unit norm.

    True iff the trimmed degrees agree in every variable and the normalized,
    phase-aligned coefficient arrays differ by at most ``eps`` in infinity
    norm.  Raises on zero input (the normalization is undefined there).
    """
    if isinstance(a, Poly) != isinstance(b, Poly):
        raise TypeError("cannot compare univariate with bivariate polynomial")
    return aligned_gap(a, b) <= eps


def approx_zero_along(a: BiPoly, r: "RationalFunction", eps: float) -> bool:
    """Whether A(t, r(t)) is negligible relative to A at tolerance eps.

    Substitutes the axis-1 variable, clears denominators by den^deg_s and
    compares the resulting numerator norm against ``eps * |A|_inf``.
    """
    if a.is_zero:
        raise ValueError("approx_zero_along is undefined for the zero polynomial")
    num = a.substitute_axis1_rational(r.num, r.den)
    return num.norm_inf() <= eps * a.norm_inf()


def cross_difference(p: "RationalFunction", q: "RationalFunction") -> BiPoly:
    """p_num(t) q_den(s) - q_num(s) p_den(t), the fiber-coupling polynomial.

    Antisymmetric under (t, s) swap when p and q coincide; formed
    syntactically from the stored coefficients so the antisymmetry is exact.
    """
    a = np.outer(p.num.padded(p.num.coeffs.size or 1), q.den.padded(q.den.coeffs.size or 1))
    b = np.outer(p.den.padded(p.den.coeffs.size or 1), q.num.padded(q.num.coeffs.size or 1))
    shape = (max(a.shape[0], b.shape[0]), max(a.shape[1], b.shape[1]))
    out = np.zeros(shape, dtype=complex)
    out[: a.shape[0], : a.shape[1]] += a
    out[: b.shape[0], : b.shape[1]] -= b
    return BiPoly(out)


def moving_line(fraction: "RationalFunction") -> BiPoly:
    """x * den(t) - num(t) as a BiPoly with axis 0 = t, axis 1 = x (degree 1)."""
    num, den = fraction.num, fraction.den
    rows = max(num.coeffs.size, den.coeffs.size, 1)
    out = np.zeros((rows, 2), dtype=complex)
    out[: num.coeffs.size, 0] = -num.coeffs
    out[: den.coeffs.size, 1] = den.coeffs
    return BiPoly(out)


def num_cross_difference_R(r: "RationalFunction") -> BiPoly:
    """M(t)N(s) - M(s)N(t) for r = M/N; the numerator of R(t) - R(s)."""
    m, n = r.num, r.den
    if m.is_zero:
        raise ValueError("constant rational function has no cross difference")
    out = np.outer(m.padded(m.coeffs.size), n.padded(n.coeffs.size or 1))
    outT = np.outer(n.padded(n.coeffs.size or 1), m.padded(m.coeffs.size))
    shape = (max(out.shape[0], outT.shape[0]), max(out.shape[1], outT.shape[1]))
    acc = np.zeros(shape, dtype=complex)
    acc[: out.shape[0], : out.shape[1]] += out
    acc[: outT.shape[0], : outT.shape[1]] -= outT
    result = BiPoly(acc)
    if result.is_zero or result.norm_inf() <= 1e3 * TRIM_REL * m.norm_inf() * max(n.norm_inf(), 1.0):
        raise ValueError("rational function is constant at working precision")
    return result


class RationalFunction:
    """Fraction of two Polys; the denominator is never the zero polynomial."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly):
        if den.is_zero:
            raise ValueError("zero denominator")
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):  # pragma: no cover - guard only
        raise AttributeError("RationalFunction is immutable")

    @classmethod
    def from_coeffs(cls, num_coeffs, den_coeffs) -> "RationalFunction":
        return cls(Poly(num_coeffs), Poly(den_coeffs))

    @classmethod
    def identity(cls) -> "RationalFunction":
        return cls(Poly([0.0, 1.0]), Poly([1.0]))

    @property
    def degree(self):
        return max(self.num.degree, self.den.degree)

    @property
    def is_constant(self) -> bool:
        return self.num.degree <= 0 and self.den.degree <= 0

    @property
    def is_real(self) -> bool:
        return self.num.is_real and self.den.is_real

    def __call__(self, t):
        return self.num(t) / self.den(t)

    def scale(self, c) -> "RationalFunction":
        """Scale the value of the fraction by c (numerator only)."""
        return RationalFunction(self.num.scale(c), self.den)

    def monic_den(self) -> "RationalFunction":
        lc = self.den.leading()
        return RationalFunction(self.num.scale(1.0 / lc), self.den.scale(1.0 / lc))

    def reduced(self, eps: float) -> "RationalFunction":
        """Remove the approximate gcd of numerator and denominator at eps.

        Idempotent: a second pass finds a degree-0 gcd and returns the
        identical coefficients (including the monic-denominator scaling).
        """
        from . import approxgcd  # local import; approxgcd builds on this module

        return approxgcd.reduce_fraction(self, eps)

    def equals_exact(self, other: "RationalFunction") -> bool:
        return self.num.equals_exact(other.num) and self.den.equals_exact(other.den)

    def __repr__(self):
        return f"RationalFunction({self.num!r}, {self.den!r})"


class PlaneParametrization:
    """Pair of rational functions (x(t), y(t)) tracing a plane curve."""

    __slots__ = ("x", "y")

    def __init__(self, x: RationalFunction, y: RationalFunction):
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    def __setattr__(self, name, value):  # pragma: no cover - guard only
        raise AttributeError("PlaneParametrization is immutable")

    @property
    def components(self):
        return (self.x, self.y)

    @property
    def degree(self):
        return max(self.x.degree, self.y.degree)

    @property
    def is_real(self) -> bool:
        return self.x.is_real and self.y.is_real

    def __call__(self, t):
        return self.x(t), self.y(t)

    def coefficient_norm(self) -> float:
        """Max infinity norm over the four defining polynomials."""
        return max(
            self.x.num.norm_inf(),
            self.x.den.norm_inf(),
            self.y.num.norm_inf(),
            self.y.den.norm_inf(),
        )

    def component_is_constant(self, eps: float, which: int) -> bool:
        """Tolerance-level constancy test for a component via its cross difference."""
        f = self.components[which]
        h = cross_difference(f, f)
        scale = max(f.num.norm_inf() * f.den.norm_inf(), 1e-300)
        return h.is_zero or h.norm_inf() <= eps * scale

    def assert_nondegenerate(self, eps: float) -> None:
        for k in range(2):
            if self.component_is_constant(eps, k):
                raise ValueError(f"component {k} is constant at tolerance {eps}")

    def __repr__(self):
        return f"PlaneParametrization(x={self.x!r}, y={self.y!r})"


def sampling_distance(p: PlaneParametrization, q: PlaneParametrization, ts) -> float:
    """Max over the sample points of the componentwise distance |p(t) - q(t)|."""
    ts = np.asarray(ts, dtype=complex)
    px, py = p(ts)
    qx, qy = q(ts)
    return float(max(np.abs(px - qx).max(), np.abs(py - qy).max()))
