"""Direction-wise Pade pairs, their polynomial lifts, and Gauss rules.

For a direction ``theta`` with moments ``f_l = f_l(theta)`` the order-n
denominator is

    P(zeta) = det [[f_0, ..., f_n], ..., [f_{n-1}, ..., f_{2n-1}], [1, zeta, ..., zeta^n]]

and ``Q`` is the polynomial part of ``P(zeta) sum f_l zeta^(-l-1)``.  The
leading coefficient of ``P`` is the Hankel determinant ``H_n``.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from . import harmonics
from .markov import DirectionalMoments, homog_lift
from .polyalg import (
    ZERO_RTOL,
    GaussPoly,
    HomogPoly,
    InsufficientMomentsError,
    UniPoly,
    expand_det,
    hankel_det,
    hankel_matrix,
    laurent_product_head,
    polynomial_part,
    real_roots,
)

__all__ = [
    "NORMAL_TOL",
    "MAX_LIFT_ORDER",
    "DegeneratePairError",
    "RootDefectError",
    "PadePair",
    "GaussRule1D",
    "pade_pair",
    "pade_pairs",
    "lift_A",
    "lift_B",
    "lift_coefficients",
    "gauss_rule",
    "choose_R1",
]

NORMAL_TOL = 1e-10
MAX_LIFT_ORDER = 5


class DegeneratePairError(ValueError):
    """The determinant denominator vanishes identically at ``theta``."""

    def __init__(self, theta, n):
        where = "raw stream" if theta is None else np.array2string(np.asarray(theta), precision=6)
        super().__init__(f"order-{n} Pade denominator vanishes at direction {where}")
        self.theta = theta
        self.n = n


class RootDefectError(ValueError):
    """The denominator does not have ``n`` simple real roots in ``(-R, R)``."""


@dataclass(frozen=True, eq=False)
class PadePair:
    """Order-n Pade pair at one direction.

    ``P`` is monic when normal; ``P_raw``/``Q_raw`` keep the determinant
    scale (``P_raw = hankel * P``).
    """

    n: int
    theta: np.ndarray | None
    P: UniPoly
    Q: UniPoly
    P_raw: UniPoly
    Q_raw: UniPoly
    hankel: float
    normal: bool
    remainder_head: np.ndarray
    construction: str
    scale: float

    def approximant(self, zeta):
        """Diagonal approximant ``Q(zeta) / P(zeta)``."""
        return self.Q(zeta) / self.P(zeta)


@dataclass(frozen=True, eq=False)
class GaussRule1D:
    nodes: np.ndarray
    weights: np.ndarray

    def apply(self, g):
        return np.dot(self.weights, g(self.nodes))


def _as_dm(dm):
    if isinstance(dm, DirectionalMoments):
        return dm
    return DirectionalMoments(None, dm)


def _det_coeffs(f, n):
    """Coefficients ``p_j`` of the determinant denominator by cofactors of the last row."""
    M = np.array([[f[i + c] for c in range(n + 1)] for i in range(n)])
    p = np.empty(n + 1)
    for j in range(n + 1):
        minor = np.delete(M, j, axis=1)
        p[j] = (-1) ** (n + j) * (np.linalg.det(minor) if n else 1.0)
    return p


def pade_pair(dm, n, method="linear-solve"):
    """Order-n Pade pair of the directional moment sequence ``dm``.

    ``method="determinant"`` expands the defining determinant; when every
    coefficient is below ``ZERO_RTOL * scale^n`` the denominator is the zero
    polynomial and :class:`DegeneratePairError` is raised.
    ``method="linear-solve"`` solves the Hankel system for a monic
    denominator (minimum-norm least squares when the system is singular).
    """
    dm = _as_dm(dm)
    f = np.real_if_close(dm.values.values)
    if n < 1:
        raise ValueError("n must be >= 1")
    if len(f) < 2 * n:
        raise InsufficientMomentsError(f"order {n} needs {2 * n} moments, have {len(f)}")
    scale = dm.scale
    Hn = float(np.real(hankel_det(f, n)))
    normal = abs(Hn) > NORMAL_TOL * scale ** n and scale > 0
    if method == "determinant":
        p = _det_coeffs(f, n)
        if np.all(np.abs(p) <= ZERO_RTOL * max(scale, 1e-300) ** n):
            raise DegeneratePairError(dm.theta, n)
        P_raw = UniPoly(p, atol=0.0)
        P = P_raw.monic() if normal else P_raw
    elif method == "linear-solve":
        A = hankel_matrix(f, n)
        rhs = -np.asarray(f[n : 2 * n])
        sol = np.linalg.lstsq(A, rhs, rcond=None)[0] if scale > 0 else np.zeros(n)
        P = UniPoly(np.append(sol, 1.0), atol=0.0)
        P_raw = P * Hn if normal else P
    else:
        raise ValueError(f"unknown method {method!r}")
    Q_raw = polynomial_part(P_raw, f)
    Q = polynomial_part(P, f)
    head = laurent_product_head(P, f, n)
    return PadePair(n, dm.theta, P, Q, P_raw, Q_raw, Hn, bool(normal), head, method, scale)


def pade_pairs(table, thetas, n, method="linear-solve"):
    """Pade pairs at each direction of a grid."""
    return [pade_pair(table.directional(th, 2 * n - 1), n, method) for th in thetas]


# ---------------------------------------------------------------------------
# polynomial lifts
# ---------------------------------------------------------------------------


def _check_lift(table, n):
    if n < 1:
        raise ValueError("n must be >= 1")
    if n > MAX_LIFT_ORDER:
        raise ValueError(f"symbolic lifts are limited to n <= {MAX_LIFT_ORDER}")
    if table.L < 2 * n - 1:
        raise InsufficientMomentsError(f"lift of order {n} needs f_0..f_{2 * n - 1}")


def lift_coefficients(table, n):
    """Homogeneous ``R_j``, ``j = 0..n``, lifting the denominator coefficients.

    ``R_j`` is the signed minor of the ``F``-matrix with column ``j``
    deleted; it has degree ``n^2 - j`` and
    ``R_j(zeta theta) = zeta^(n^2 - j) p_j(theta)``.
    """
    _check_lift(table, n)
    F = [homog_lift(table, l) for l in range(2 * n)]
    zero = GaussPoly(table.d)
    out = []
    for j in range(n + 1):
        cols = [c for c in range(n + 1) if c != j]
        entries = [[F[i + c] for c in cols] for i in range(n)]
        det = expand_det(entries, zero)
        sign = (-1) ** (n + j)
        out.append(HomogPoly(table.d, n * n - j, (det * sign).terms))
    return out


def lift_A(table, n):
    """``A_n(x) = sum_j R_j(x) |x|^(2j)``, so ``A_n(zeta theta) = zeta^(n^2) P(zeta, theta)``."""
    Rs = lift_coefficients(table, n)
    out = GaussPoly(table.d)
    for j, Rj in enumerate(Rs):
        out = out + Rj * GaussPoly.radial_power(table.d, j)
    return out


def lift_B(table, n):
    """``B_n`` with ``B_n(zeta theta) = zeta^(n^2 - 1) Q(zeta, theta)`` (determinant scale)."""
    Rs = lift_coefficients(table, n)
    F = [homog_lift(table, l) for l in range(n)]
    out = GaussPoly(table.d)
    for k in range(n):
        for l in range(n - k):
            out = out + GaussPoly.radial_power(table.d, k) * F[l] * Rs[k + 1 + l]
    return out


# ---------------------------------------------------------------------------
# Gauss rules
# ---------------------------------------------------------------------------


def gauss_rule(dm, n, R):
    """Gauss rule from the order-n Pade pair: nodes are the roots of ``P``,
    weights ``Q(x_k) / P'(x_k)``.

    Requires a normal pair whose denominator has ``n`` simple real roots in
    ``(-R, R)``; this holds for positive-definite moment sequences of
    measures supported in ``[-R, R]``.
    """
    pair = pade_pair(dm, n, "linear-solve")
    if not pair.normal:
        raise RootDefectError(f"order {n} is not normal (H_n = {pair.hankel:.3e})")
    if not pair.P.is_real():
        raise RootDefectError("denominator has complex coefficients")
    P = UniPoly(pair.P.coeffs.real, atol=0.0)
    nodes, cplx = real_roots(P, (-R, R), return_complex=True)
    if len(nodes) != n or (n > 1 and np.min(np.diff(nodes)) <= 1e-12 * R):
        raise RootDefectError(
            f"expected {n} simple real roots in (-{R}, {R}), found {len(nodes)}"
            + (f" and {len(cplx)} complex" if len(cplx) else "")
        )
    weights = np.real(pair.Q(nodes) / P.deriv()(nodes))
    if np.any(weights <= 0):
        warnings.warn(f"Gauss rule of order {n} has non-positive weights", RuntimeWarning, stacklevel=2)
    return GaussRule1D(nodes, weights)


def choose_R1(pairs, R):
    """Smallest ``R1 = R 2^j`` (``j >= 1``) with
    ``|p_n| R1^n > sum_{j<n} |p_j| R1^j`` for every pair, so no denominator
    vanishes on ``|zeta| >= R1``."""
    if not pairs:
        raise ValueError("no pairs given")
    bad = [i for i, p in enumerate(pairs) if not p.normal]
    if bad:
        raise ValueError(f"choose_R1 needs normal pairs; pairs {bad} are not normal")
    R1 = 2.0 * R if R > 0 else 1.0
    for _ in range(200):
        ok = True
        for p in pairs:
            c = np.abs(p.P.coeffs)
            n = len(c) - 1
            if c[n] * R1 ** n - sum(c[j] * R1 ** j for j in range(n)) <= 0:
                ok = False
                break
        if ok:
            return R1
        R1 *= 2.0
    raise RuntimeError("no admissible R1 found")
