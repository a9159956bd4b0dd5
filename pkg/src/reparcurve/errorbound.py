"""Closeness certificates between the input curve and the reparametrized one.

On an interval where all four denominators stay away from zero, the
pointwise gap between P(t) and Q(R(t)) is bounded by

    2 / M^2 * eps * C * |p| * |q|

with M a lower bound for the denominator magnitudes on the interval, d the
larger endpoint magnitude, and C the three-case amplification constant

    d > 1:  d^(deg P + 1) / (d - 1)^(1/ell)
    d < 1:  1 / (1 - d)^(1/ell)
    d = 1:  (ell * deg P)^(1/ell)

The offset-region distance is 4*sqrt(2)/M^2 * eps * C * |p| * |q|, i.e.
2*sqrt(2) times the pointwise bound.  M is the raw minimum over a dense
grid (the certified values in the regression suite are grid minima).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import PoleInIntervalError
from .numpoly import PlaneParametrization, Poly, RationalFunction

DEFAULT_GRID = 4096
POLE_FLOOR = 1e-9


@dataclass(frozen=True)
class IntervalSpec:
    """Real interval (d1, d2) with the grid density used for minimization."""

    d1: float
    d2: float
    grid_n: int = DEFAULT_GRID

    def __post_init__(self):
        if not self.d1 < self.d2:
            raise ValueError("interval endpoints must satisfy d1 < d2")
        if self.grid_n < 2:
            raise ValueError("grid_n must be at least 2")

    @property
    def d(self) -> float:
        return max(abs(self.d1), abs(self.d2))

    def grid(self) -> np.ndarray:
        return np.linspace(self.d1, self.d2, self.grid_n)


@dataclass(frozen=True)
class ErrorBoundReport:
    interval: IntervalSpec
    d: float
    M: float
    C: float
    norm_p: float
    norm_q: float
    point_bound: float
    offset_bound: float
    empirical_max: float
    eps_used: float
    ell: int
    deg_p: int


def _denominator_minimum(P, Q, R, interval: IntervalSpec) -> float:
    ts = interval.grid()
    r_values = R(ts)
    mags = [
        np.abs(P.x.den(ts)),
        np.abs(P.y.den(ts)),
        np.abs(Q.x.den(r_values)),
        np.abs(Q.y.den(r_values)),
    ]
    return float(np.min([m.min() for m in mags]))


def bound_constants(
    P: PlaneParametrization,
    Q: PlaneParametrization,
    R: RationalFunction,
    interval: IntervalSpec,
):
    """(d, M, C) for the pointwise bound on the given interval.

    M is the grid minimum of the four denominator magnitudes (the composed
    ones for Q); an interval passing within POLE_FLOOR of a root is rejected.
    """
    d = interval.d
    m_min = _denominator_minimum(P, Q, R, interval)
    if m_min < POLE_FLOOR:
        raise PoleInIntervalError(
            f"interval ({interval.d1}, {interval.d2}) touches a denominator root",
            minimum=m_min,
        )
    ell = int(R.degree)
    deg_p = int(P.degree)
    if d > 1.0:
        c = d ** (deg_p + 1) / (d - 1.0) ** (1.0 / ell)
    elif d < 1.0:
        c = 1.0 / (1.0 - d) ** (1.0 / ell)
    else:
        c = (ell * deg_p) ** (1.0 / ell)
    return d, m_min, c


def corollary_bounds(d: float, deg_p: int) -> float:
    """Closed-form upper bound for C when d > 1; errors otherwise."""
    if d >= 2.0:
        return d ** (deg_p + 1)
    if d > 1.0:
        return 2.0 ** (deg_p + 1)
    raise ValueError("the simplified bound applies only for d > 1")


def empirical_max_deviation(
    P: PlaneParametrization,
    Q: PlaneParametrization,
    R: RationalFunction,
    interval: IntervalSpec,
    n: int = 1000,
) -> float:
    """Max over a grid of the componentwise gap |p_i(t) - q_i(R(t))|."""
    ts = np.linspace(interval.d1, interval.d2, n)
    r_values = R(ts)
    gap_x = np.abs(P.x(ts) - Q.x(r_values))
    gap_y = np.abs(P.y(ts) - Q.y(r_values))
    return float(max(gap_x.max(), gap_y.max()))


def error_bound_report(
    P: PlaneParametrization,
    Q: PlaneParametrization,
    R: RationalFunction,
    interval: IntervalSpec,
    eps_used: float,
    n_empirical: int = 1000,
) -> ErrorBoundReport:
    """Assemble the full closeness certificate for one interval."""
    d, m_min, c = bound_constants(P, Q, R, interval)
    norm_p = P.coefficient_norm()
    norm_q = Q.coefficient_norm()
    point_bound = 2.0 / m_min**2 * eps_used * c * norm_p * norm_q
    offset_bound = 2.0 * math.sqrt(2.0) * point_bound
    empirical = empirical_max_deviation(P, Q, R, interval, n=n_empirical)
    return ErrorBoundReport(
        interval=interval,
        d=d,
        M=m_min,
        C=c,
        norm_p=norm_p,
        norm_q=norm_q,
        point_bound=point_bound,
        offset_bound=offset_bound,
        empirical_max=empirical,
        eps_used=eps_used,
        ell=int(R.degree),
        deg_p=int(P.degree),
    )


def pole_free_subintervals(
    P: PlaneParametrization,
    Q: PlaneParametrization,
    R: RationalFunction,
    d1: float,
    d2: float,
    guard_rel: float = 1e-3,
    grid_n: int = DEFAULT_GRID,
):
    """Split (d1, d2) at the real denominator roots, with a guard band.

    Considers the roots of both input denominators, of R's denominator and
    of the composed denominators q_den(R(t)) cleared of R's poles.  The
    guard band is ``guard_rel`` times the requested span on each side.
    Returns the kept subintervals as IntervalSpec values, widest first.
    """
    span = d2 - d1
    cut_polys = [P.x.den, P.y.den, R.den]
    for q_comp in (Q.x, Q.y):
        cut_polys.append(_composed_denominator(q_comp.den, R))
    cuts = []
    for poly in cut_polys:
        if poly.degree < 1:
            continue
        for root in np.roots(poly.coeffs[::-1]):
            if abs(root.imag) < 1e-7 * max(1.0, abs(root.real)) and d1 < root.real < d2:
                cuts.append(float(root.real))
    guard = guard_rel * span
    points = sorted({d1, d2, *cuts})
    out = []
    for lo, hi in zip(points[:-1], points[1:]):
        lo_g = lo + (guard if lo in cuts or lo != d1 else 0.0)
        hi_g = hi - (guard if hi in cuts or hi != d2 else 0.0)
        if hi_g - lo_g > guard:
            out.append(IntervalSpec(lo_g, hi_g, grid_n))
    return sorted(out, key=lambda iv: iv.d2 - iv.d1, reverse=True)


def _composed_denominator(q_den: Poly, R: RationalFunction) -> Poly:
    """q_den(R(t)) with R's denominator cleared: sum q_j M^j N^(deg-j)."""
    if q_den.degree < 1:
        return Poly([1.0])
    deg = int(q_den.degree)
    acc = Poly([])
    for j in range(deg + 1):
        term = R.num.power(j) * R.den.power(deg - j)
        acc = acc + term.scale(q_den.coeff(j))
    return acc
