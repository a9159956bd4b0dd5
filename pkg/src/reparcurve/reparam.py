"""Full reparametrization pipeline: S -> R -> L_k -> Q-tilde -> Q -> certificate.

Given a parametrization P that retraces its curve approximately, the stages
are: recover the bivariate gcd S of the cross differences, pick a coefficient
pair of S defining the inner map R, resolve the two parametric resultants
L_k, read the new components off their top x-coefficients, simplify, and
certify the tolerance at which P is explained by Q(R).

Scaling convention: every "equal up to a constant" comparison first divides
both sides by their signed max-magnitude coefficient (see numpoly.pivot), so
residuals are relative and phases cancel.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .approxgcd import BivariateGcdResult, approx_improper_index, egcd_uni
from .errors import (
    InterpolationDegreeError,
    InputContractError,
    NoAdmissiblePairError,
    NotMoebiusLikeError,
)
from .numpoly import (
    BiPoly,
    PlaneParametrization,
    Poly,
    RationalFunction,
    aligned_gap,
    cross_difference,
    moving_line,
    pivot,
)
from .resultants import parametric_resultant_t


@dataclass(frozen=True)
class ReparamReport:
    """Everything the pipeline produced, plus per-stage diagnostics."""

    ell: int
    S: BiPoly
    R: RationalFunction
    Qtilde: PlaneParametrization
    Q: PlaneParametrization
    eps_bar: float
    pair_choice: tuple | None
    eps: float
    message: str
    diagnostics: dict = field(default_factory=dict)

    @property
    def certified_at_request(self) -> bool:
        return self.eps_bar <= self.eps


def build_R(S: BiPoly, eps: float):
    """Choose the coefficient pair (C_i, C_j) of S whose ratio reproduces S.

    Scans ordered pairs ascending, keeps those with C_i C_j nonconstant and
    an approximate gcd of degree 0, and requires the normalized cross
    difference M(t)N(s) - M(s)N(t) to be within eps of S in infinity norm.
    Pairs below eps are equivalent answers up to noise, so among them the one
    built from the most significant slices wins (then scan order); when none
    reaches eps the smallest-residual pair is reported in the error.
    """
    ell = int(S.deg_t)
    if ell < 2:
        raise ValueError("build_R expects a gcd with t-degree at least 2")
    m = int(S.deg_s)
    slices = [S.slice_axis1(j) for j in range(m + 1)]
    s_norm = S.norm_inf()

    passing = []
    smallest = None
    admissible = 0
    # The coprime screen runs at eps/10: it only needs to reject clear-cut
    # shared factors, while the residual test makes the real decision at eps.
    guard = 0.1 * eps
    for i in range(m + 1):
        for j in range(m + 1):
            if i == j:
                continue
            ci, cj = slices[i], slices[j]
            if ci.is_zero or cj.is_zero:
                continue
            if ci.degree == 0 and cj.degree == 0:
                continue
            if egcd_uni(ci, cj, guard).degree != 0:
                continue
            admissible += 1
            diff = _cross_difference_bipoly(ci, cj)
            if diff.is_zero:
                continue
            residual = aligned_gap(S, diff)
            if smallest is None or residual < smallest[0]:
                smallest = (residual, (i, j))
            if residual <= eps:
                significance = min(ci.norm_inf(), cj.norm_inf()) / s_norm
                passing.append((-significance, (i, j), residual, RationalFunction(ci, cj)))
    if admissible == 0:
        raise NoAdmissiblePairError("no coefficient pair is nonconstant and coprime")
    if not passing:
        raise NotMoebiusLikeError(
            "no coefficient ratio reproduces the bivariate gcd at this tolerance",
            residual=None if smallest is None else smallest[0],
        )
    passing.sort(key=lambda item: (item[0], item[1]))
    _, pair, _, candidate = passing[0]
    return candidate, pair


def _cross_difference_bipoly(m_poly: Poly, n_poly: Poly) -> BiPoly:
    a = np.outer(m_poly.padded(m_poly.coeffs.size or 1), n_poly.padded(n_poly.coeffs.size or 1))
    shape = (max(a.shape[0], a.shape[1]),) * 2
    acc = np.zeros(shape, dtype=complex)
    acc[: a.shape[0], : a.shape[1]] += a
    acc[: a.shape[1], : a.shape[0]] -= a.T
    return BiPoly(acc)


def compute_L(P: PlaneParametrization, R: RationalFunction):
    """The two parametric resultants L_k(s, x), top x-slice scaled to unit norm."""
    ell = int(R.degree)
    out = []
    for comp in P.components:
        g = moving_line(comp)
        b = moving_line(R)  # reads as s * C_j(t) - C_i(t) with axis 1 = s
        l_k = parametric_resultant_t(g, b, deg_x=ell, deg_s=int(comp.degree))
        top = l_k.slice_axis1(ell)
        if top.is_zero:
            raise InterpolationDegreeError("degenerate leading coefficient in L")
        out.append(l_k.scale(1.0 / pivot(top)))
    return out[0], out[1]


def extract_Qtilde(L1: BiPoly, L2: BiPoly, ell: int) -> PlaneParametrization:
    """Unsimplified components -coeff(L, x^(ell-1)) / (ell * coeff(L, x^ell))."""
    comps = []
    for l_k in (L1, L2):
        if int(l_k.deg_s) != ell:
            raise InterpolationDegreeError(
                f"expected x-degree {ell} in L, found {l_k.deg_s}"
            )
        lead = l_k.slice_axis1(ell)
        sub = l_k.slice_axis1(ell - 1)
        if lead.is_zero or lead.norm_inf() <= 1e-9 * l_k.norm_inf():
            raise InterpolationDegreeError("degenerate leading coefficient in L")
        comps.append(RationalFunction(sub.scale(-1.0 / ell), lead))
    return PlaneParametrization(comps[0], comps[1])


def extract_Qtilde_derivative(L1: BiPoly, L2: BiPoly, ell: int) -> PlaneParametrization:
    """Same components, read as the root of the (ell-1)-th x-derivative of L."""
    comps = []
    for l_k in (L1, L2):
        d = l_k.deriv_axis1(ell - 1)
        if int(d.deg_s) != 1:
            raise InterpolationDegreeError("derivative of L is not linear in x")
        comps.append(RationalFunction(d.slice_axis1(0).scale(-1.0), d.slice_axis1(1)))
    return PlaneParametrization(comps[0], comps[1])


def simplify_Q(
    Qtilde: PlaneParametrization, eps: float, ell: int | None = None
) -> PlaneParametrization:
    """Remove the approximate gcd of each component, monic denominators.

    When the inner-map degree ``ell`` is known, the removed factor is pinned
    to the structural degree deg - deg/ell per component; at loose tolerances
    an unconstrained maximal gcd can eat genuine structure.  Without ``ell``
    the plain reduction is used.
    """
    from .approxgcd import reduce_fraction

    comps = []
    for comp in Qtilde.components:
        target = None
        if ell is not None and ell > 1:
            deg = int(comp.degree)
            if deg % ell == 0:
                target = deg - deg // ell
        comps.append(reduce_fraction(comp, eps, target_degree=target))
    return PlaneParametrization(comps[0], comps[1])


def certify(
    P: PlaneParametrization,
    Q: PlaneParametrization,
    R: RationalFunction,
    L1: BiPoly,
    L2: BiPoly,
    eps: float,
):
    """Smallest tolerance at which the resultant identity explains P by Q(R).

    Aligns L_k and the expanded power (x q_den(s) - q_num(s))^ell on a common
    scale, forms the defect W_k = (L_k - power) / eps^ell and tests
    |num(W_k(R, p_k))| <= |H_k|^ell where H_k is the cross difference of p_k
    and q_k.  Returns eps when both components pass, otherwise the smallest
    tolerance that would make the test pass.  Never raises.
    """
    ell = int(R.degree)
    # The cleared numerator carries R.den^(deg_s W); rescale M, N jointly
    # (value-preserving) so that factor stays at unit scale.
    r_pivot = pivot(R.num) if R.num.norm_inf() >= R.den.norm_inf() else pivot(R.den)
    r_num = R.num.scale(1.0 / r_pivot)
    r_den = R.den.scale(1.0 / r_pivot)
    worst = 0.0
    details = []
    for comp_p, comp_q, l_k in zip(P.components, Q.components, (L1, L2)):
        bracket = _bracket_bipoly(comp_q)
        power = bracket.power(ell)
        top_l = l_k.slice_axis1(ell)
        top_t = power.slice_axis1(ell)
        if top_l.is_zero or top_t.is_zero:
            details.append({"aligned": False})
            worst = float("inf")
            continue
        pivot_l = pivot(top_l)
        pivot_t = pivot(top_t)
        l_hat = l_k.scale(1.0 / pivot_l)
        t_hat = power.scale(1.0 / pivot_t)
        defect = l_hat - t_hat
        h_k = cross_difference(comp_p, comp_q)
        # Scale of H under the alignment: the power was divided by pivot_t, so
        # q is implicitly scaled by pivot_t^(-1/ell) and H scales linearly in q.
        h_scale = h_k.norm_inf() ** ell / abs(pivot_t)
        if defect.is_zero:
            numerator_norm = 0.0
        else:
            numerator_norm = defect.substitute_rationals(
                (r_num, r_den), (comp_p.num, comp_p.den)
            ).norm_inf()
        needed = (numerator_norm / h_scale) ** (1.0 / ell) if h_scale > 0 else float("inf")
        worst = max(worst, needed)
        details.append(
            {
                "defect_numerator_norm": numerator_norm,
                "h_scale": h_scale,
                "needed_eps": needed,
            }
        )
    eps_bar = eps if worst <= eps else worst
    return eps_bar, details


def _bracket_bipoly(component: RationalFunction) -> BiPoly:
    """x * q_den(s) - q_num(s) as a BiPoly with axis 0 = s, axis 1 = x."""
    return moving_line(component)


def validate_input_contract(P: PlaneParametrization, eps: float) -> None:
    """Each component must be reduced: no clear-cut common factor of num and den.

    The check runs at eps/10 rather than eps: at loose tolerances almost any
    low-degree polynomial divides within eps, and borderline factors are the
    pipeline's own business.  A genuinely shared factor certifies far below
    that guard.
    """
    guard = 0.1 * eps
    for name, comp in zip("xy", P.components):
        if comp.den.is_zero:
            raise InputContractError(f"component {name} has a zero denominator")
        cert = egcd_uni(comp.num, comp.den, guard)
        if cert.accepted and cert.degree > 0:
            raise InputContractError(
                f"component {name} is not reduced (approximate gcd of degree "
                f"{cert.degree} at {guard:.3g})",
                degree=cert.degree,
                component=name,
            )


def reparametrize(
    P: PlaneParametrization,
    eps: float,
    *,
    seed: int = 0,
    n_samples: int | None = None,
) -> ReparamReport:
    """Run the whole pipeline and certify the result.

    A parametrization with improper index 1 is returned unchanged with the
    identity inner map.  Errors raised by the stages carry the stage name.
    """
    t0 = time.perf_counter()
    validate_input_contract(P, eps)
    index: BivariateGcdResult = approx_improper_index(P, eps, n_samples=n_samples, seed=seed)
    diagnostics = {
        "votes": index.votes,
        "fit_residual": index.fit_residual,
        "n_samples": len(index.sample_points),
    }
    if index.ell == 1:
        report = ReparamReport(
            ell=1,
            S=index.S,
            R=RationalFunction.identity(),
            Qtilde=P,
            Q=P,
            eps_bar=eps,
            pair_choice=None,
            eps=eps,
            message=f"input is already proper at eps={eps}; returned unchanged",
            diagnostics=diagnostics,
        )
        return report

    R, pair = build_R(index.S, eps)
    L1, L2 = compute_L(P, R)
    qtilde = extract_Qtilde(L1, L2, index.ell)
    qtilde_alt = extract_Qtilde_derivative(L1, L2, index.ell)
    diagnostics["qtilde_route_gap"] = _route_gap(qtilde, qtilde_alt)
    Q = simplify_Q(qtilde, eps, ell=index.ell)
    eps_bar, certify_details = certify(P, Q, R, L1, L2, eps)
    diagnostics["certify"] = certify_details
    diagnostics["elapsed_s"] = time.perf_counter() - t0
    if eps_bar <= eps:
        message = f"Q is an eps-proper reparametrization of the input (eps = {eps})"
    else:
        message = (
            f"Q is an eps-bar-proper reparametrization of the input "
            f"(eps_bar = {eps_bar:.6g} > eps = {eps})"
        )
    return ReparamReport(
        ell=index.ell,
        S=index.S,
        R=R,
        Qtilde=qtilde,
        Q=Q,
        eps_bar=eps_bar,
        pair_choice=pair,
        eps=eps,
        message=message,
        diagnostics=diagnostics,
    )


def _route_gap(qa: PlaneParametrization, qb: PlaneParametrization) -> float:
    """Max relative coefficient gap between the two extraction routes.

    Each fraction is put on the canonical scale (denominator pivot = 1)
    before comparing, since the routes differ by a factorial scalar.
    """
    gap = 0.0
    for a, b in zip(qa.components, qb.components):
        pa = pivot(a.den)
        pb = pivot(b.den)
        for xa, xb in ((a.num.scale(1 / pa), b.num.scale(1 / pb)), (a.den.scale(1 / pa), b.den.scale(1 / pb))):
            size = max(xa.coeffs.size, xb.coeffs.size, 1)
            diff = np.abs(xa.padded(size) - xb.padded(size)).max()
            scale = max(xa.norm_inf(), xb.norm_inf(), 1e-300)
            gap = max(gap, float(diff) / scale)
    return gap
