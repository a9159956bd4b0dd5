"""Numeric resultants by Sylvester determinants and evaluation-interpolation.

Resultants in ``t`` whose coefficients are polynomials in other variables
are recovered by evaluating both inputs on a Chebyshev grid, taking the
univariate resultant at each node, and fitting the coefficient matrix by
least squares.  The target degrees are known a priori by the callers, the
grid is oversampled 1.5x, and nodes where a leading coefficient collapses
(a degree drop) are discarded and replaced.
"""

from __future__ import annotations

import math

import numpy as np

from . import linalg
from .approxgcd import sylvester_matrix
from .errors import InterpolationDegreeError
from .numpoly import BiPoly, PlaneParametrization, Poly, moving_line

GRID_OVERSAMPLE = 1.5
FIT_REL_TOL = 1e-8
GRID_SPAN = 2.0


def resultant_uni(f: Poly, g: Poly) -> complex:
    """Determinant of the Sylvester matrix of f and g."""
    if f.is_zero or g.is_zero:
        raise ValueError("resultant requires nonzero polynomials")
    if f.degree == 0:
        return complex(f.coeffs[0]) ** int(g.degree)
    if g.degree == 0:
        return complex(g.coeffs[0]) ** int(f.degree)
    return linalg.det(sylvester_matrix(f, g))


def chebyshev_nodes(count: int, span: float = GRID_SPAN) -> np.ndarray:
    k = np.arange(count)
    return span * np.cos((2.0 * k + 1.0) * np.pi / (2.0 * count))


def _specialized(poly_in_t_and_v: BiPoly, value) -> Poly:
    """Substitute a number for the second variable; None if the t-degree drops."""
    spec = poly_in_t_and_v.specialize_axis1(value)
    if spec.degree != poly_in_t_and_v.deg_t:
        return None
    return spec


def parametric_resultant_t(
    G: BiPoly, B: BiPoly, deg_x: int, deg_s: int, seed: int = 0xC0FFEE
) -> BiPoly:
    """res_t of G(t, x) and B(t, s) as a BiPoly with axis 0 = s, axis 1 = x.

    ``deg_x`` and ``deg_s`` are the caller's degree bounds for the result.
    Raises InterpolationDegreeError when the grid values cannot be explained
    at those degrees, which signals a degenerate leading-coefficient case.
    """
    if G.is_zero or B.is_zero:
        raise ValueError("parametric resultant requires nonzero inputs")
    n_s = math.ceil(GRID_OVERSAMPLE * (deg_s + 1))
    n_x = math.ceil(GRID_OVERSAMPLE * (deg_x + 1))
    s_nodes = list(chebyshev_nodes(n_s))
    x_nodes = list(chebyshev_nodes(n_x))

    rng = np.random.default_rng(seed)
    b_polys = {}
    tries = 0
    idx = 0
    while idx < len(s_nodes):
        spec = _specialized(B, s_nodes[idx])
        if spec is None:
            tries += 1
            if tries > 4 * n_s:
                raise InterpolationDegreeError("could not keep the t-degree of B on the grid")
            s_nodes[idx] = complex(rng.uniform(-GRID_SPAN, GRID_SPAN))
            continue
        b_polys[idx] = spec
        idx += 1
    g_polys = {}
    tries = 0
    idx = 0
    while idx < len(x_nodes):
        spec = _specialized(G, x_nodes[idx])
        if spec is None:
            tries += 1
            if tries > 4 * n_x:
                raise InterpolationDegreeError("could not keep the t-degree of G on the grid")
            x_nodes[idx] = complex(rng.uniform(-GRID_SPAN, GRID_SPAN))
            continue
        g_polys[idx] = spec
        idx += 1

    values = np.zeros((n_s, n_x), dtype=complex)
    for a in range(n_s):
        for b in range(n_x):
            values[a, b] = resultant_uni(g_polys[b], b_polys[a])

    s_arr = np.asarray(s_nodes, dtype=complex)
    x_arr = np.asarray(x_nodes, dtype=complex)
    vand_s = s_arr[:, None] ** np.arange(deg_s + 1)
    vand_x = x_arr[:, None] ** np.arange(deg_x + 1)
    a_mat = np.einsum("aj,bk->abjk", vand_s, vand_x).reshape(n_s * n_x, -1)
    rhs = values.reshape(-1)
    sol = linalg.lstsq(a_mat, rhs)
    scale = float(np.linalg.norm(rhs))
    if scale > 0.0 and sol.residual > FIT_REL_TOL * scale:
        raise InterpolationDegreeError(
            "interpolation degree mismatch: the stated degree bounds do not fit",
            residual=sol.residual / scale,
        )
    return BiPoly(sol.x.reshape(deg_s + 1, deg_x + 1))


def implicitize(P: PlaneParametrization) -> BiPoly:
    """Implicit-equation resultant of the two moving lines, unit infinity norm.

    Result axes: axis 0 = x (first coordinate), axis 1 = y (second coordinate).
    For a tracing index above 1 this is a power of the implicit equation.
    """
    gx = moving_line(P.x)
    gy = moving_line(P.y)
    deg_p1 = int(P.x.degree)
    deg_p2 = int(P.y.degree)
    res = parametric_resultant_t(gy, gx, deg_x=deg_p1, deg_s=deg_p2)
    # axes come out as (s = x-coordinate, x = y-coordinate), the wanted order
    return res.pivot_normalized()


def leading_form(f: BiPoly) -> BiPoly:
    """Homogeneous component of top total degree (trim-tolerance support)."""
    if f.is_zero:
        raise ValueError("leading form of the zero polynomial is undefined")
    arr = f.coeffs
    mask = np.abs(arr) > f.trim_tol
    total = -1
    for i in range(arr.shape[0]):
        for j in range(arr.shape[1]):
            if mask[i, j]:
                total = max(total, i + j)
    out = np.zeros_like(arr)
    for i in range(arr.shape[0]):
        for j in range(arr.shape[1]):
            if mask[i, j] and i + j == total:
                out[i, j] = arr[i, j]
    return BiPoly(out, trim_tol=f.trim_tol)
