"""Approximate gcds with residual certificates, and the improper-index engine.

The univariate epsilon-gcd follows the QR-of-Sylvester approach: the rows of
the triangular factor span the same space as the polynomial combinations
``u f + v g``, and the last row carrying significant mass is the gcd
candidate of maximal certified degree.  Candidates are polished by
alternating least squares (cofactors, then the divisor, then cofactors) and
accepted only when the three contract inequalities hold:

    |u f + v g - d|_2 < eps * max(|f|,|g|,|u|,|v|,|d|)_2
    |f - d f1|_2     < eps * |f|_2
    |g - d g1|_2     < eps * |g|_2

Inputs are rescaled to unit 2-norm before factoring; certificates store the
rescaled polynomials together with the original norms so cofactors can be
mapped back to the caller's scale.

The bivariate gcd S(t, s) of the two cross-difference polynomials is
recovered from many univariate specializations ``s = s_k``: the degree is
decided by majority vote and the coefficient matrix is fitted by least
squares against the monic per-sample gcds.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from . import linalg
from .errors import UnstableIndexError
from .numpoly import BiPoly, PlaneParametrization, Poly, RationalFunction, cross_difference

ROW_NOISE_REL = 1e-11
DENOMINATOR_GUARD = 1e-6
VOTE_SAMPLES = 12
MAJORITY_FRACTION = 0.6
# A true common-divisor row sits at data-noise level while an over-degree row
# sits on an O(1) plateau; refinement must not be allowed to pull plateau
# candidates under a loose tolerance, so the unrefined seed is screened first.
SEED_RESIDUAL_GUARD = 0.25


def sylvester_matrix(f: Poly, g: Poly) -> np.ndarray:
    """Sylvester matrix of f and g (descending coefficients, standard layout)."""
    if f.is_zero or g.is_zero:
        raise ValueError("Sylvester matrix requires nonzero polynomials")
    m, n = int(f.degree), int(g.degree)
    if m == 0 and n == 0:
        raise ValueError("Sylvester matrix requires a positive-degree input")
    fd = f.coeffs[::-1]
    gd = g.coeffs[::-1]
    size = m + n
    out = np.zeros((size, size), dtype=complex)
    for i in range(n):
        out[i, i : i + m + 1] = fd
    for i in range(m):
        out[n + i, i : i + n + 1] = gd
    return out


def _conv_matrix(p: Poly, cols: int, rows: int) -> np.ndarray:
    """Matrix mapping a length-``cols`` coefficient vector q to coeffs of p*q."""
    out = np.zeros((rows, cols), dtype=complex)
    pc = p.coeffs
    for k in range(cols):
        out[k : k + pc.size, k] = pc
    return out


@dataclass(frozen=True)
class EgcdCertificate:
    """Approximate-gcd result with the residuals that witness it.

    ``f`` and ``g`` are the unit-2-norm copies the residuals refer to;
    ``norm_f``/``norm_g`` recover the caller's scale (f_original = norm_f * f).
    """

    d: Poly
    u: Poly
    v: Poly
    f1: Poly
    g1: Poly
    r_bezout: float
    r_f: float
    r_g: float
    f: Poly
    g: Poly
    norm_f: float
    norm_g: float
    eps: float
    accepted: bool

    @property
    def degree(self) -> int:
        return int(self.d.degree)

    def contract_scale(self) -> float:
        return max(
            self.f.norm_2(), self.g.norm_2(), self.u.norm_2(), self.v.norm_2(), self.d.norm_2()
        )

    def inequalities_hold(self, eps: float | None = None) -> bool:
        e = self.eps if eps is None else eps
        return (
            self.r_bezout < e * self.contract_scale()
            and self.r_f < e * self.f.norm_2()
            and self.r_g < e * self.g.norm_2()
        )

    def normalized_residual(self) -> float:
        return max(
            self.r_bezout / self.contract_scale(),
            self.r_f / self.f.norm_2(),
            self.r_g / self.g.norm_2(),
        )


def _bezout_pair(fn: Poly, gn: Poly, d: Poly):
    m, n = int(fn.degree), int(gn.degree)
    k = int(d.degree)
    u_size = max(n - k, 0)
    v_size = max(m - k, 0)
    if u_size == 0 and v_size == 0:
        u_size = v_size = 1
    rows = max(m + u_size, n + v_size, k + 1)
    blocks = []
    if u_size:
        blocks.append(_conv_matrix(fn, u_size, rows))
    if v_size:
        blocks.append(_conv_matrix(gn, v_size, rows))
    a = np.hstack(blocks)
    target = d.padded(rows)
    sol = linalg.lstsq(a, target)
    u = Poly(sol.x[:u_size]) if u_size else Poly([])
    v = Poly(sol.x[u_size:]) if v_size else Poly([])
    return u, v, sol.residual


def _cofactor_fit(fn, gn, d):
    m, n = int(fn.degree), int(gn.degree)
    k = int(d.degree)
    sol_f = linalg.lstsq(_conv_matrix(d, m - k + 1, m + 1), fn.padded(m + 1))
    sol_g = linalg.lstsq(_conv_matrix(d, n - k + 1, n + 1), gn.padded(n + 1))
    return sol_f, sol_g


def _certificate_for_candidate(fn, gn, d0, norm_f, norm_g, eps, seed_guard=None) -> EgcdCertificate | None:
    m, n = int(fn.degree), int(gn.degree)
    d = d0
    sol_f, sol_g = _cofactor_fit(fn, gn, d)
    if seed_guard is not None:
        seed_res = max(sol_f.residual / fn.norm_2(), sol_g.residual / gn.norm_2())
        if seed_res > seed_guard:
            return None
    k = int(d.degree)
    f1, g1 = Poly(sol_f.x), Poly(sol_g.x)
    for _ in range(2):
        if f1.is_zero or g1.is_zero:
            break
        a = np.vstack(
            [
                _conv_matrix(f1, k + 1, m + 1),
                _conv_matrix(g1, k + 1, n + 1),
            ]
        )
        refit = linalg.lstsq(a, np.concatenate([fn.padded(m + 1), gn.padded(n + 1)]))
        d_new = Poly(refit.x)
        if d_new.is_zero or int(d_new.degree) != k:
            break
        d = d_new.monic()
        sol_f, sol_g = _cofactor_fit(fn, gn, d)
        f1, g1 = Poly(sol_f.x), Poly(sol_g.x)
    u, v, r_bezout = _bezout_pair(fn, gn, d)
    cert = EgcdCertificate(
        d=d,
        u=u,
        v=v,
        f1=f1,
        g1=g1,
        r_bezout=r_bezout,
        r_f=sol_f.residual,
        r_g=sol_g.residual,
        f=fn,
        g=gn,
        norm_f=norm_f,
        norm_g=norm_g,
        eps=eps,
        accepted=False,
    )
    return cert


def _accepted(cert: EgcdCertificate) -> EgcdCertificate:
    return replace(cert, accepted=True) if cert.inequalities_hold() else cert


def _trivial_certificate(fn, gn, norm_f, norm_g, eps) -> EgcdCertificate:
    d = Poly([1.0])
    if fn.degree == 0:
        u, v, r_bezout = Poly([1.0 / fn.coeffs[0]]), Poly([]), 0.0
    elif gn.degree == 0:
        u, v, r_bezout = Poly([]), Poly([1.0 / gn.coeffs[0]]), 0.0
    else:
        u, v, r_bezout = _bezout_pair(fn, gn, d)
    cert = EgcdCertificate(
        d=d,
        u=u,
        v=v,
        f1=fn,
        g1=gn,
        r_bezout=r_bezout,
        r_f=0.0,
        r_g=0.0,
        f=fn,
        g=gn,
        norm_f=norm_f,
        norm_g=norm_g,
        eps=eps,
        accepted=False,
    )
    return _accepted(cert)


def _candidate_rows(fn: Poly, gn: Poly):
    """Triangular-factor rows of the Sylvester matrix, keyed by candidate degree."""
    m, n = int(fn.degree), int(gn.degree)
    syl = sylvester_matrix(fn, gn)
    _, r = linalg.qr(syl)
    row_norms = np.linalg.norm(r, axis=1)
    scale = float(row_norms.max()) if row_norms.size else 0.0
    rows = {}
    for k in range(1, min(m, n) + 1):
        idx = m + n - 1 - k
        rows[k] = (r[idx], float(row_norms[idx]), scale)
    return rows


def egcd_uni(f: Poly, g: Poly, eps: float) -> EgcdCertificate:
    """Approximate gcd with the largest certifiable degree; d is returned monic."""
    if f.is_zero and g.is_zero:
        raise ValueError("egcd of two zero polynomials is undefined")
    if f.is_zero or g.is_zero:
        nz = g if f.is_zero else f
        norm = nz.norm_2()
        nzn = nz.scale(1.0 / norm)
        cofactor = Poly([nzn.leading()])
        cert = EgcdCertificate(
            d=nzn.monic(), u=Poly([]), v=Poly([]), f1=cofactor, g1=cofactor,
            r_bezout=0.0, r_f=0.0, r_g=0.0, f=nzn, g=nzn,
            norm_f=norm, norm_g=norm, eps=eps, accepted=True,
        )
        return cert
    norm_f, norm_g = f.norm_2(), g.norm_2()
    fn, gn = f.scale(1.0 / norm_f), g.scale(1.0 / norm_g)
    m, n = int(fn.degree), int(gn.degree)
    if m == 0 or n == 0:
        return _trivial_certificate(fn, gn, norm_f, norm_g, eps)
    seed_guard = max(eps, SEED_RESIDUAL_GUARD)
    for k, (row, row_norm, scale) in sorted(_candidate_rows(fn, gn).items(), reverse=True):
        if row_norm <= ROW_NOISE_REL * scale:
            continue
        d0 = Poly(row[::-1])
        if int(d0.degree) != k:
            continue
        cert = _certificate_for_candidate(
            fn, gn, d0.monic(), norm_f, norm_g, eps, seed_guard=seed_guard
        )
        if cert is None:
            continue
        cert = _accepted(cert)
        if cert.accepted:
            return cert
    return _trivial_certificate(fn, gn, norm_f, norm_g, eps)


def egcd_at_degree(f: Poly, g: Poly, k: int, eps: float) -> EgcdCertificate | None:
    """Certificate for a common divisor of the given degree, or None.

    Same candidate/refinement machinery as egcd_uni, restricted to one
    degree.  Used when the caller knows the structural degree a priori.
    """
    if f.is_zero or g.is_zero:
        raise ValueError("egcd_at_degree requires nonzero polynomials")
    norm_f, norm_g = f.norm_2(), g.norm_2()
    fn, gn = f.scale(1.0 / norm_f), g.scale(1.0 / norm_g)
    m, n = int(fn.degree), int(gn.degree)
    if k == 0:
        return _trivial_certificate(fn, gn, norm_f, norm_g, eps)
    if k > min(m, n):
        return None
    row, row_norm, scale = _candidate_rows(fn, gn)[k]
    if row_norm <= ROW_NOISE_REL * scale:
        return None
    d0 = Poly(row[::-1])
    if int(d0.degree) != k:
        return None
    cert = _certificate_for_candidate(
        fn, gn, d0.monic(), norm_f, norm_g, eps, seed_guard=max(eps, SEED_RESIDUAL_GUARD)
    )
    if cert is None:
        return None
    cert = _accepted(cert)
    return cert if cert.accepted else None


def gcd_degree_profile(f: Poly, g: Poly):
    """(degree, residual) for every candidate gcd degree, ascending.

    The residual is the worst of the three certificate ratios.  Degrees below
    the attainable gcd degree report the (noise-level) row mass directly:
    every factor of a certified divisor is itself a certified divisor, so
    those degrees are achievable by construction.
    """
    if f.is_zero or g.is_zero:
        raise ValueError("degree profile requires nonzero polynomials")
    norm_f, norm_g = f.norm_2(), g.norm_2()
    fn, gn = f.scale(1.0 / norm_f), g.scale(1.0 / norm_g)
    m, n = int(fn.degree), int(gn.degree)
    out = []
    trivial = _trivial_certificate(fn, gn, norm_f, norm_g, eps=0.0)
    out.append((0, trivial.normalized_residual()))
    if m == 0 or n == 0:
        return out
    for k, (row, row_norm, scale) in sorted(_candidate_rows(fn, gn).items()):
        if row_norm <= ROW_NOISE_REL * scale:
            out.append((k, row_norm / scale))
            continue
        d0 = Poly(row[::-1])
        if int(d0.degree) != k:
            out.append((k, float("inf")))
            continue
        cert = _certificate_for_candidate(fn, gn, d0.monic(), norm_f, norm_g, eps=0.0)
        out.append((k, cert.normalized_residual()))
    return out


def reduce_fraction(
    rf: RationalFunction, eps: float, target_degree: int | None = None
) -> RationalFunction:
    """Remove the approximate gcd of numerator and denominator, monic denominator.

    With ``target_degree`` the removed factor is pinned to that degree (the
    caller knows the structural expectation); otherwise the maximal certified
    gcd is removed repeatedly until the pair is coprime at eps.
    """
    num, den = rf.num, rf.den
    if num.is_zero:
        return RationalFunction(Poly([]), Poly([1.0]))
    if target_degree is not None and target_degree > 0:
        cert = egcd_at_degree(num, den, target_degree, eps)
        if cert is not None:
            num = cert.f1.scale(cert.norm_f)
            den = cert.g1.scale(cert.norm_g)
            lc = den.leading()
            return RationalFunction(num.scale(1.0 / lc), den.scale(1.0 / lc))
    for _ in range(4):
        if num.is_zero or (num.degree == 0 and den.degree == 0):
            break
        cert = egcd_uni(num, den, eps)
        if not cert.accepted or cert.degree < 1:
            break
        num = cert.f1.scale(cert.norm_f)
        den = cert.g1.scale(cert.norm_g)
        if den.is_zero:
            raise ValueError("reduction produced a zero denominator")
    lc = den.leading()
    return RationalFunction(num.scale(1.0 / lc), den.scale(1.0 / lc))


@dataclass(frozen=True)
class BivariateGcdResult:
    """Recovered bivariate gcd S with the degree vote that produced it.

    ``fit_residual`` is the relative joint division residual of the final S
    against both cross differences (how well S explains the data).
    """

    S: BiPoly
    ell: int
    sample_points: tuple
    fit_residual: float
    votes: dict = field(default_factory=dict)


def _bi_conv_matrix(factor: np.ndarray, target_shape) -> np.ndarray:
    """Matrix of the map m -> factor * m onto coefficient arrays of target_shape."""
    rows_m = target_shape[0] - factor.shape[0] + 1
    cols_m = target_shape[1] - factor.shape[1] + 1
    out = np.zeros((target_shape[0] * target_shape[1], rows_m * cols_m), dtype=complex)
    for i in range(rows_m):
        for j in range(cols_m):
            prod = np.zeros(target_shape, dtype=complex)
            prod[i : i + factor.shape[0], j : j + factor.shape[1]] = factor
            out[:, i * cols_m + j] = prod.ravel()
    return out


def _refine_bivariate_gcd(S: BiPoly, h_list, rounds: int = 6, antisymmetric: bool = True):
    """Polish S by alternating least squares on H_j = S * M_j.

    Returns the refined S (unit pivot) and the relative joint residual.
    The self cross differences are exactly antisymmetric, and so is the true
    gcd up to a scalar; with ``antisymmetric`` each round projects onto that
    subspace, which suppresses noise in the weakly constrained directions.
    Falls back to the input S when the refinement degenerates.
    """

    def project(arr):
        if antisymmetric and arr.shape[0] == arr.shape[1]:
            return 0.5 * (arr - arr.T)
        return arr

    s = project(S.pivot_normalized().coeffs.copy())
    h_arrs = [h.coeffs / np.abs(h.coeffs).max() for h in h_list]
    best = None
    for _ in range(rounds):
        cofactors = []
        for h in h_arrs:
            if h.shape[0] < s.shape[0] or h.shape[1] < s.shape[1]:
                return S, float("inf")
            sol = linalg.lstsq(_bi_conv_matrix(s, h.shape), h.ravel())
            rows_m = h.shape[0] - s.shape[0] + 1
            cols_m = h.shape[1] - s.shape[1] + 1
            cofactors.append(sol.x.reshape(rows_m, cols_m))
        blocks = [_bi_conv_matrix(m, h.shape) for h, m in zip(h_arrs, cofactors)]
        rhs = np.concatenate([h.ravel() for h in h_arrs])
        sol = linalg.lstsq(np.vstack(blocks), rhs)
        s_new = project(sol.x.reshape(s.shape))
        scale = np.abs(s_new.ravel()).max()
        if scale == 0.0:
            break
        s_new = s_new / s_new.ravel()[int(np.argmax(np.abs(s_new.ravel())))]
        residual = float(
            np.linalg.norm(np.vstack(blocks) @ s_new.ravel() - rhs)
        ) / np.linalg.norm(rhs)
        if best is None or residual < best[1]:
            best = (s_new, residual)
        s = s_new
    if best is None:
        return S, float("inf")
    refined = BiPoly(best[0])
    if refined.deg_t != S.deg_t or refined.deg_s != S.deg_s:
        return S, float("inf")
    return refined, best[1]


def _draw_specialization(rng, real_input, denominators, h1, h2, max_tries=200):
    """One sample point in the generic regime: away from denominator roots and
    preserving the t-degrees of both specialized cross differences."""
    for _ in range(max_tries):
        if real_input:
            s0 = complex(rng.uniform(-2.0, 2.0))
        else:
            radius = 2.0 * np.sqrt(rng.uniform(0.0, 1.0))
            angle = rng.uniform(0.0, 2.0 * np.pi)
            s0 = complex(radius * np.cos(angle), radius * np.sin(angle))
        if any(abs(den(s0)) < DENOMINATOR_GUARD * den.norm_inf() for den in denominators):
            continue
        f1 = h1.specialize_axis1(s0)
        f2 = h2.specialize_axis1(s0)
        if f1.degree != h1.deg_t or f2.degree != h2.deg_t:
            continue
        return s0, f1, f2
    raise UnstableIndexError("could not draw a generic specialization point")


def approx_improper_index(
    P: PlaneParametrization,
    eps: float,
    n_samples: int | None = None,
    seed: int = 0,
) -> BivariateGcdResult:
    """Degree and coefficients of the bivariate epsilon-gcd of the cross differences.

    The degree (the approximate improper index) is the majority vote over
    specialized univariate gcds; the coefficient matrix is recovered by a
    least-squares fit against the monic per-sample gcds.  Deterministic for a
    fixed seed.
    """
    P.assert_nondegenerate(eps)
    h1 = cross_difference(P.x, P.x)
    h2 = cross_difference(P.y, P.y)
    denominators = [P.x.den, P.y.den]
    real_input = P.is_real
    rng = np.random.default_rng(seed)

    samples = []  # (s0, monic gcd, degree)
    votes: dict[int, int] = {}

    def draw_one():
        s0, f1, f2 = _draw_specialization(rng, real_input, denominators, h1, h2)
        cert = egcd_uni(f1, f2, eps)
        deg = cert.degree
        samples.append((s0, cert.d, deg))
        votes[deg] = votes.get(deg, 0) + 1

    for _ in range(VOTE_SAMPLES):
        draw_one()
    ell = min(k for k, c in votes.items() if c == max(votes.values()))
    if votes[ell] < MAJORITY_FRACTION * len(samples) or ell < 1:
        raise UnstableIndexError(
            f"specialized gcd degrees are inconsistent (votes: {votes})", profile=dict(votes)
        )

    unknowns = (ell + 1) * (ell + 1)
    target = n_samples if n_samples is not None else 3 * unknowns
    if target <= unknowns:
        raise ValueError(f"n_samples must exceed the coefficient count {unknowns}")
    max_draws = 10 * target
    while sum(1 for s in samples if s[2] == ell) < target and len(samples) < max_draws:
        draw_one()
    kept = [(s0, d) for s0, d, deg in samples if deg == ell]
    deviants = len(samples) - len(kept)
    if deviants > 0.4 * len(samples) or len(kept) < target:
        raise UnstableIndexError(
            f"specialized gcd degrees are inconsistent (votes: {votes})", profile=dict(votes)
        )

    # Gauge on a sample with a small monic gcd norm: those carry the most
    # reliable scale for the top t-slice.
    gauge_order = sorted(range(len(kept)), key=lambda i: kept[i][1].norm_inf())
    a, b, gauge_used = None, None, None
    for gauge_idx in gauge_order[:3]:
        a, b = _fit_system(kept, ell, gauge_idx)
        sol = linalg.lstsq(a, b)
        if not sol.rank_deficient:
            gauge_used = gauge_idx
            break
    if gauge_used is None:
        sol = linalg.lstsq(a, b)
    coeffs = sol.x.reshape(ell + 1, ell + 1)
    s_poly = BiPoly(coeffs).pivot_normalized()
    s_poly, fit_residual = _refine_bivariate_gcd(s_poly, [h1, h2])
    return BivariateGcdResult(
        S=s_poly,
        ell=ell,
        sample_points=tuple(s0 for s0, _ in kept),
        fit_residual=fit_residual,
        votes=dict(sorted(votes.items())),
    )


def _fit_system(kept, ell, gauge_idx):
    """Least-squares system for the S coefficients against monic sample gcds.

    Each sample's equations are scaled by 1/|d_k|: near a root of the top
    t-slice the monic gcd blows up and would otherwise dominate the fit.
    """
    unknowns = (ell + 1) * (ell + 1)
    rows = len(kept) * ell + 1
    a = np.zeros((rows, unknowns), dtype=complex)
    b = np.zeros(rows, dtype=complex)
    row = 0
    for s0, d in kept:
        powers = s0 ** np.arange(ell + 1)
        dpad = d.padded(ell + 1)
        weight = 1.0 / max(1.0, float(np.abs(dpad).max()))
        for i in range(ell):
            a[row, i * (ell + 1) : (i + 1) * (ell + 1)] = weight * powers
            a[row, ell * (ell + 1) :] -= weight * dpad[i] * powers
            row += 1
    s_gauge = kept[gauge_idx][0]
    a[row, ell * (ell + 1) :] = s_gauge ** np.arange(ell + 1)
    b[row] = 1.0
    return a, b
