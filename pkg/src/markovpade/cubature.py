"""Cubature from direction-wise Gauss rules.

At every node ``theta_j`` of a sphere rule the order-n Pade pair of the
directional moments gives a Gauss rule ``(x_k(theta_j), alpha_k(theta_j))``.
The functional

    T_n(u) = sum_j w_j sum_k alpha_k(theta_j) u(x_k(theta_j) theta_j)

integrates every polynomial of degree <= 2n - 1 exactly against ``mu`` when
the sphere rule is exact to degree ``4n - 1`` and the measure is
Hankel-positive.  It vanishes on multiples of the lifted denominator ``A_n``
because ``A_n`` is zero at every cubature point.
"""
from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import harmonics, measures
from .markov import CoefficientTable, coefficient_table, hankel_positivity_report
from .monomials import Poly
from .pade import GaussRule1D, RootDefectError, choose_R1, gauss_rule, lift_A, pade_pair
from .polyalg import GaussPoly, UniPoly

__all__ = [
    "CubatureError",
    "NotHankelPositiveError",
    "DegenerateDirectionError",
    "CubatureRule",
    "ExactnessRow",
    "ExactnessReport",
    "PositivityReport",
    "build_cubature",
    "apply",
    "apply_via_contour",
    "exactness_report",
    "positivity_check",
    "rule_to_json",
    "write_rule_csv",
]

SCHMUDGEN_MAX_ORDER = 3


class CubatureError(ValueError):
    pass


class NotHankelPositiveError(CubatureError):
    def __init__(self, report):
        super().__init__(
            f"moments are not Hankel-positive up to order {report.N}: "
            f"H_{report.witness_n} / scale^{report.witness_n} = {report.min_ratio:.3e} "
            f"at direction {np.array2string(report.witness_theta, precision=6)}"
        )
        self.report = report


class DegenerateDirectionError(CubatureError):
    def __init__(self, directions, reasons):
        listing = "; ".join(
            f"{np.array2string(t, precision=6)}: {r}" for t, r in zip(directions[:5], reasons[:5])
        )
        more = f" (and {len(directions) - 5} more)" if len(directions) > 5 else ""
        super().__init__(f"no Gauss rule at {len(directions)} direction(s): {listing}{more}")
        self.directions = directions
        self.reasons = reasons


@dataclass(frozen=True, eq=False)
class CubatureRule:
    n: int
    d: int
    R: float
    sphere: harmonics.SphereRule
    rules: tuple  # GaussRule1D per sphere node
    table: CoefficientTable
    measure: object = None
    points: np.ndarray = field(default=None, repr=False)
    weights: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        pts, ws = [], []
        for th, w, g in zip(self.sphere.nodes, self.sphere.weights, self.rules):
            pts.append(np.outer(g.nodes, th))
            ws.append(w * g.weights)
        object.__setattr__(self, "points", np.concatenate(pts))
        object.__setattr__(self, "weights", np.concatenate(ws))

    @property
    def provenance(self):
        return self.table.provenance


def _source_table(source, n):
    if isinstance(source, CoefficientTable):
        if source.L < 2 * n - 1:
            raise CubatureError(f"order {n} needs f_0..f_{2 * n - 1}, table has L = {source.L}")
        return source.truncate(2 * n - 1), None
    return coefficient_table(source, 2 * n - 1), source


def build_cubature(source, n, sphere_degree=None, check_positivity=True):
    """Cubature rule of order ``n`` for a measure or a coefficient table.

    Parameters
    ----------
    source : measure or CoefficientTable
        Tables need ``L >= 2n - 1``.
    n : int
        Order; the rule has ``n`` nodes per sphere direction.
    sphere_degree : int, optional
        Exactness degree of the sphere rule, default ``4n - 1``.
    check_positivity : bool
        Verify Hankel positivity up to order ``n`` on the sphere grid first
        and raise :class:`NotHankelPositiveError` otherwise.

    Raises
    ------
    DegenerateDirectionError
        Lists every direction without ``n`` simple real Gauss nodes.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    table, mu = _source_table(source, n)
    deg = 4 * n - 1 if sphere_degree is None else sphere_degree
    sphere = harmonics.sphere_rule(table.d, deg)
    if check_positivity:
        rep = hankel_positivity_report(table, n, deg)
        if not rep.positive:
            raise NotHankelPositiveError(rep)
    rules, bad, why = [], [], []
    with warnings.catch_warnings():
        if not check_positivity:
            warnings.simplefilter("ignore", RuntimeWarning)
        for th in sphere.nodes:
            try:
                rules.append(gauss_rule(table.directional(th, 2 * n - 1), n, table.R))
            except RootDefectError as exc:
                bad.append(th)
                why.append(str(exc))
    if bad:
        raise DegenerateDirectionError(bad, why)
    return CubatureRule(n, table.d, table.R, sphere, tuple(rules), table, mu)


def _evaluator(u, d):
    if isinstance(u, (Poly, GaussPoly)):
        return u
    if isinstance(u, dict):
        return GaussPoly(d, u)
    if callable(u):
        return u
    if isinstance(u, (int, float)):
        return Poly.constant(d, u)
    return Poly(d, {tuple(e): c for e, c in u})


def apply(rule, u):
    """``T_n(u)`` by point evaluation.

    ``u`` may be a :class:`Poly`, a :class:`GaussPoly`, a ``{(t, k, m): c}``
    map, a monomial list or a vectorized callable on points ``(N, d)``.
    """
    f = _evaluator(u, rule.d)
    return float(np.real(np.dot(rule.weights, f(rule.points))))


def _along(u, theta):
    if isinstance(u, (Poly, GaussPoly)):
        return u.along(theta)
    raise TypeError("apply_via_contour needs a polynomial")


def apply_via_contour(pairs, sphere, u, R1=None, contour_points=None, R=None):
    """``T_n(u)`` as ``sum_j w_j (1/2 pi i) oint u(zeta theta_j) Q/P dzeta``.

    The circle ``|zeta| = R1`` is discretized by the trapezoidal rule, which
    converges geometrically for this analytic integrand.  A warning is issued
    when ``|P|`` gets small on the contour.
    """
    u = _evaluator(u, sphere.d)
    if R1 is None:
        if R is None:
            raise ValueError("give R1 or the support radius R")
        R1 = choose_R1(pairs, R)
    n = pairs[0].n
    deg = max(u.degree, 0)
    M = contour_points or max(2 * (deg + n) + 16, 64)
    if M < 2 * (deg + n) + 16:
        raise ValueError(f"need at least {2 * (deg + n) + 16} contour points")
    zeta = R1 * np.exp(2j * math.pi * np.arange(M) / M)
    total = 0.0
    min_p = np.inf
    for th, w, pair in zip(sphere.nodes, sphere.weights, pairs):
        U = np.polynomial.polynomial.polyval(zeta, _along(u, th))
        Pz = pair.P(zeta)
        min_p = min(min_p, float(np.abs(Pz).min()))
        total += w * np.mean(U * pair.Q(zeta) / Pz * zeta)
    if min_p < 1e-6 * R1 ** n:
        warnings.warn(f"contour passes close to a pole (min |P| = {min_p:.3e})", RuntimeWarning, stacklevel=2)
    return float(np.real(total))


# ---------------------------------------------------------------------------
# verification
# ---------------------------------------------------------------------------


@dataclass
class ExactnessRow:
    t: int
    k: int
    m: int
    degree: int
    cubature: float
    exact: float
    abs_error: float
    rel_error: float
    guaranteed: bool


@dataclass
class ExactnessReport:
    n: int
    rows: list
    oracle: str

    @property
    def max_rel_error(self):
        return max((r.rel_error for r in self.rows if r.guaranteed), default=0.0)

    @property
    def guaranteed_rows(self):
        return [r for r in self.rows if r.guaranteed]


def exactness_report(rule, mu=None, extra_degree=True):
    """Compare ``T_n`` with exact integrals over the basis ``|x|^{2t} Y_{k,m}``.

    Rows cover every ``2t + k <= 2n - 1``; with ``extra_degree`` the degree
    ``2n`` elements are appended as out-of-guarantee rows.  The exact values
    come from :func:`markovpade.measures.integrate_poly` (monomial path) when a
    measure is available, else from the table's distributed moments.

    ``rel_error`` is ``|T - I| / |I|``; for basis elements whose integral
    vanishes it is measured against ``mass * R^D * sqrt(a_k / omega_d)``,
    an upper bound for ``|I|``.
    """
    mu = rule.measure if mu is None else mu
    d, n = rule.d, rule.n
    dist = rule.table.distributed()
    mass = measures.mass_bound(mu) if mu is not None else rule.table.mass
    rows = []
    top = 2 * n if extra_degree else 2 * n - 1
    for D in range(top + 1):
        for t in range(D // 2 + 1):
            k = D - 2 * t
            for m in range(1, harmonics.dim_harmonic(d, k) + 1):
                u = GaussPoly(d, {(t, k, m): 1.0})
                T = apply(rule, u)
                if mu is not None:
                    exact = measures.integrate_poly(mu, u)
                elif D <= rule.table.L:
                    exact = dist.get((t, k, m), 0.0)
                else:
                    continue
                err = abs(T - exact)
                floor = (mass or 0.0) * rule.R ** D * math.sqrt(harmonics.dim_harmonic(d, k) / harmonics.omega(d))
                denom = abs(exact) if abs(exact) > 1e-14 * floor else floor
                rel = err / denom if denom > 0 else err
                rows.append(ExactnessRow(t, k, m, D, T, exact, err, rel, D <= 2 * n - 1))
    return ExactnessReport(n, rows, "measure" if mu is not None else "table")


@dataclass
class PositivityReport:
    trials: int
    seed: int
    min_normalized: float  # min of T(p^2) / (|p|^2 sum|W|)
    violations: list
    schmudgen_checked: bool
    schmudgen_max: float  # max |T(+-A_n p^2)| relative to its natural scale
    e_expansion_max: float  # max relative gap between T(p^2) and the remainder form
    passed: bool
    note: str = (
        "the cubature nodes and weights form the discrete realization of T_n; "
        "no representing measure is constructed"
    )


def _ball_max(A, d, R):
    sphere = harmonics.sphere_rule(d, 12)
    radii = np.linspace(0.0, R, 9)[1:]
    pts = (radii[:, None, None] * sphere.nodes).reshape(-1, d)
    return float(np.abs(A(pts)).max())


def positivity_check(rule, trials=100, seed=0, tol=1e-10, schmudgen_tol=1e-8, identity_tol=1e-8):
    """Positive definiteness checks on random squares.

    For ``trials`` random real polynomials ``p`` of degree ``<= 2n + 2``
    (coefficients uniform in ``[-1, 1]``):

    * ``T_n(p^2) >= -tol * |p|^2 * sum|W|`` (``|p|`` is the coefficient norm);
    * for ``n <= 3``, ``|T_n(+-A_n p^2)|`` is below ``schmudgen_tol`` relative
      to ``sum_i |W_i| max_ball|A_n| p(x_i)^2``;
    * ``T_n(p^2)`` equals ``sum_j w_j sum_{k,l} e_k e_l f_{k+l}(theta_j)``,
      ``e`` the remainder of ``p(zeta theta_j)`` modulo the denominator.
    """
    rng = np.random.default_rng(seed)
    n, d = rule.n, rule.d
    W = rule.weights
    wsum = float(np.abs(W).sum())
    A = lift_A(rule.table, n) if n <= SCHMUDGEN_MAX_ORDER else None
    if A is not None:
        A_pts = A(rule.points)
        A_max = _ball_max(A, d, rule.R)
    thetas = rule.sphere.nodes
    fvals = rule.table.values(thetas, 2 * n - 2)
    pairs = [pade_pair(rule.table.directional(th, 2 * n - 1), n) for th in thetas]
    violations = []
    min_norm = np.inf
    sch = 0.0
    gap = 0.0
    for i in range(trials):
        p = Poly.random(d, 2 * n + 2, rng)
        pv = p(rule.points)
        sq = float(np.dot(W, pv * pv))
        norm2 = p.coefficient_norm() ** 2
        ratio = sq / (norm2 * wsum) if wsum > 0 else 0.0
        min_norm = min(min_norm, ratio)
        if sq < -tol * norm2 * wsum:
            violations.append(i)
        if A is not None:
            ref = float(np.dot(np.abs(W), pv * pv)) * A_max
            val = abs(float(np.dot(W, A_pts * pv * pv)))
            sch = max(sch, val / ref if ref > 0 else val)
        b_total, b_abs = 0.0, 0.0
        for j, th in enumerate(thetas):
            _, e = UniPoly(p.along(th).real, atol=0.0).divmod(UniPoly(pairs[j].P.coeffs.real, atol=0.0))
            ec = np.zeros(n)
            ec[: e.coeffs.size] = e.coeffs.real
            F = np.add.outer(np.arange(n), np.arange(n))
            terms = np.outer(ec, ec) * fvals[j][F]
            b_total += rule.sphere.weights[j] * terms.sum()
            b_abs += rule.sphere.weights[j] * np.abs(terms).sum()
        gap = max(gap, abs(b_total - sq) / b_abs if b_abs > 0 else abs(b_total - sq))
    gap = float(gap)
    passed = not violations and gap <= identity_tol and (A is None or sch <= schmudgen_tol)
    return PositivityReport(trials, seed, float(min_norm), violations, A is not None, sch, gap, passed)


# ---------------------------------------------------------------------------
# export
# ---------------------------------------------------------------------------


def rule_to_json(rule):
    return json.dumps(
        {
            "n": rule.n,
            "d": rule.d,
            "R": rule.R,
            "sphere_degree": rule.sphere.exact_degree,
            "provenance": rule.provenance,
            "points": rule.points.tolist(),
            "weights": rule.weights.tolist(),
        },
        sort_keys=True,
    )


def write_rule_csv(rule, fh):
    cols = [f"x{i + 1}" for i in range(rule.d)] + ["weight"]
    fh.write(",".join(cols) + "\n")
    for x, w in zip(rule.points, rule.weights):
        fh.write(",".join("%.17g" % v for v in (*x, w)) + "\n")
