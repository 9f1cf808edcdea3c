"""The multivariate Markov transform of a measure.

For a measure ``mu`` on R^d supported in ``|x| <= R`` the transform

    mu_hat(zeta, theta) = (1/omega_d) int zeta^(d-1) / r(zeta theta - x)^d dmu(x)

has the expansion ``sum_l f_l(theta) zeta^(-l-1)`` for ``|zeta| > R``, where

    f_l(theta) = sum_t sum_m c_{t, l-2t, m} Y_{l-2t, m}(theta)

is built from the distributed moments ``c_{s,k,m}``.  ``r(w)^2`` is the
analytic continuation of ``|w|^2``.  Everything here is stated in the
orthonormal harmonic basis; see the README for the normalization.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from . import harmonics, measures
from .polyalg import (
    ZERO_RTOL,
    GaussPoly,
    HomogPoly,
    InsufficientMomentsError,
    MomentSeq,
    expand_det,
    hankel_det,
    hankel_matrix,
)

__all__ = [
    "HarmonicExpansion",
    "CoefficientTable",
    "DirectionalMoments",
    "DivergenceError",
    "coefficient_table",
    "coefficient_legendre",
    "homog_lift",
    "eval_series",
    "tail_bound",
    "eval_kernel",
    "eval_real",
    "hankel",
    "hankel_poly",
    "HankelPositivityReport",
    "hankel_positivity_report",
    "KroneckerReport",
    "kronecker_test",
    "SignCheckReport",
    "upper_halfplane_sign_check",
    "write_directional_csv",
    "read_directional_csv",
    "write_table_csv",
    "read_table_csv",
]

POSITIVITY_TOL = 1e-12
KRONECKER_TOL = 1e-8


class DivergenceError(ValueError):
    """The point lies inside the ball where the expansion does not converge."""


@dataclass(frozen=True, eq=False)
class HarmonicExpansion:
    """Function on the sphere ``sum c_{k,m} Y_{k,m}``."""

    d: int
    coeffs: dict = field(default_factory=dict)

    def evaluate(self, theta):
        theta = harmonics._as_unit(theta, self.d)
        out = np.zeros(theta.shape[:-1])
        for (k, m), c in self.coeffs.items():
            out = out + c * harmonics._eval_Y_unchecked(self.d, k, m, theta)
        return out

    __call__ = evaluate

    @property
    def degrees(self):
        return sorted({k for k, _ in self.coeffs})


@dataclass(frozen=True, eq=False)
class CoefficientTable:
    """The coefficient functions ``f_0, ..., f_L`` of a measure.

    ``entries[l]`` maps ``(k, m)`` to the coefficient of ``Y_{k,m}`` in
    ``f_l``; only ``k <= l`` with ``k = l mod 2`` occur.  ``mass`` is a
    total-variation bound for the underlying measure, or ``None`` for raw
    tables, in which case tail bounds are estimated from the table itself.
    """

    d: int
    R: float
    entries: tuple
    mass: float | None = None
    provenance: str = "raw"

    def __post_init__(self):
        harmonics._check_d(self.d)
        entries = tuple(dict(e) for e in self.entries)
        for l, e in enumerate(entries):
            for k, m in e:
                harmonics._check_index(self.d, k, m)
                if k > l or (l - k) % 2:
                    raise ValueError(f"f_{l} cannot contain harmonic degree {k}")
        object.__setattr__(self, "entries", entries)

    @property
    def L(self):
        return len(self.entries) - 1

    def f(self, l):
        return HarmonicExpansion(self.d, self.entries[l])

    def distributed(self):
        """``{(t, k, m): c}`` with ``l = 2t + k``."""
        return {((l - k) // 2, k, m): c for l, e in enumerate(self.entries) for (k, m), c in e.items()}

    def values(self, theta, L=None):
        """``f_l(theta)`` for ``l = 0..L`` as an array of shape ``(..., L+1)``."""
        L = self.L if L is None else L
        if L > self.L:
            raise InsufficientMomentsError(f"table holds f_0..f_{self.L}, asked for L={L}")
        theta = harmonics._as_unit(theta, self.d)
        idx = harmonics.basis_indices(self.d, L)
        B = np.stack([harmonics._eval_Y_unchecked(self.d, k, m, theta) for k, m in idx], axis=-1)
        col = {km: i for i, km in enumerate(idx)}
        C = np.zeros((len(idx), L + 1))
        for l in range(L + 1):
            for km, c in self.entries[l].items():
                C[col[km], l] = c
        return B @ C

    def directional(self, theta, L=None):
        return DirectionalMoments(np.asarray(theta, dtype=float), MomentSeq(self.values(theta, L)))

    def truncate(self, L):
        return CoefficientTable(self.d, self.R, self.entries[: L + 1], self.mass, self.provenance)


@dataclass(frozen=True, eq=False)
class DirectionalMoments:
    """``values[l] = f_l(theta)`` for one direction (``theta`` may be None for raw streams)."""

    theta: np.ndarray | None
    values: MomentSeq

    def __post_init__(self):
        if not isinstance(self.values, MomentSeq):
            object.__setattr__(self, "values", MomentSeq(self.values))

    @property
    def scale(self):
        return self.values.scale

    def __len__(self):
        return len(self.values)


# ---------------------------------------------------------------------------
# coefficient functions
# ---------------------------------------------------------------------------


def coefficient_table(mu, L):
    """Coefficient functions ``f_0..f_L`` of ``mu`` from its distributed moments."""
    if L < 0:
        raise ValueError("L must be >= 0")
    d = mu.d
    if isinstance(mu, measures.DiscreteMeasure):
        entries = mu._coefficient_entries(L)
        return CoefficientTable(d, mu.R, entries, measures.mass_bound(mu), type(mu).__name__)
    entries = []
    for l in range(L + 1):
        e = {}
        for t in range(l // 2 + 1):
            k = l - 2 * t
            for m in range(1, harmonics.dim_harmonic(d, k) + 1):
                c = measures.distributed_moment(mu, t, k, m)
                if c != 0.0:
                    e[(k, m)] = c
        entries.append(e)
    return CoefficientTable(d, mu.R, entries, measures.mass_bound(mu), type(mu).__name__)


def coefficient_legendre(mu, l, theta):
    """``f_l(theta)`` of a discrete measure through the addition theorem.

    Uses ``sum_m Y_{k,m}(u) Y_{k,m}(theta) = a_k/omega_d P_k(<u, theta>)``.
    """
    if not isinstance(mu, measures.DiscreteMeasure):
        raise TypeError("coefficient_legendre needs a discrete measure")
    d = mu.d
    theta = harmonics._as_unit(theta, d)
    total = 0.0
    for x, w in zip(mu.points, mu.weights):
        r = float(np.linalg.norm(x))
        if r == 0.0:
            if l == 0:
                total += w / harmonics.omega(d)
            continue
        cos = np.clip(np.dot(theta, x / r), -1.0, 1.0)
        s = sum(
            harmonics.dim_harmonic(d, l - 2 * t) * harmonics.legendre(d, l - 2 * t, cos)
            for t in range(l // 2 + 1)
        )
        total += w * r ** l * s / harmonics.omega(d)
    return total


def homog_lift(table, l):
    """Homogeneous polynomial ``F_l`` with ``F_l(rho theta) = rho^l f_l(theta)``."""
    if l > table.L:
        raise InsufficientMomentsError(f"table holds f_0..f_{table.L}")
    terms = {((l - k) // 2, k, m): c for (k, m), c in table.entries[l].items()}
    return HomogPoly(table.d, l, terms)


# ---------------------------------------------------------------------------
# evaluation of the transform
# ---------------------------------------------------------------------------


def _mass_for_bound(table):
    if table.mass is not None:
        return table.mass, False
    # estimate from the table: |f_l| <= C N_l R^l / omega_d
    if table.R <= 0:
        return 0.0, True
    rule = harmonics.sphere_rule(table.d, max(table.L, 1) + 4)
    vals = np.abs(table.values(rule.nodes))
    N = np.array([harmonics.dim_homogeneous(table.d, l) for l in range(table.L + 1)])
    C = harmonics.omega(table.d) * np.max(vals.max(axis=0) / (N * table.R ** np.arange(table.L + 1)))
    return float(C), True


def tail_bound(table, zeta, L):
    """Bound for ``|sum_{l>L} f_l(theta) zeta^(-l-1)|`` valid for every ``theta``.

    Uses ``|f_l(theta)| <= (C/omega_d) N_l R^l`` with ``C`` a total-variation
    bound and ``N_l`` the number of degree-l monomials.
    """
    C, _ = _mass_for_bound(table)
    return _tail(C, table.d, table.R, abs(zeta), L)


def _tail(C, d, R, rho, L):
    if C == 0.0 or R == 0.0:
        return 0.0
    q = R / rho
    scale = C / harmonics.omega(d) / rho
    total = 0.0
    l = L + 1
    while True:
        N = harmonics.dim_homogeneous(d, l)
        term = scale * N * q ** l
        total += term
        ratio = harmonics.dim_homogeneous(d, l + 1) / N * q
        if ratio < 1.0:
            rest = term * ratio / (1.0 - ratio)
            if rest <= 1e-3 * total or l > L + 100000:
                return total + rest
        l += 1


def eval_series(table, zeta, theta, L=None):
    """Truncated expansion ``sum_{l<=L} f_l(theta) zeta^(-l-1)`` and its tail bound.

    The bound covers the truncation error plus the floating-point error of
    the summation.
    """
    L = table.L if L is None else L
    zeta = complex(zeta)
    if abs(zeta) <= table.R:
        raise DivergenceError(f"|zeta| = {abs(zeta)} must exceed R = {table.R}")
    f = table.values(theta, L)
    powers = zeta ** (-np.arange(1, L + 2, dtype=float))
    terms = f * powers
    value = complex(terms.sum())
    bound = tail_bound(table, zeta, L) + 64 * np.finfo(float).eps * float(np.abs(terms).sum())
    return value, bound


def eval_kernel(mu, zeta, theta):
    """Closed-form transform of a discrete measure.

    ``r(zeta theta - x)^d = zeta^d g^(d/2)`` with
    ``g = (1 - a/zeta)(1 - conj(a)/zeta)``; the square root for odd ``d`` is
    the product of principal roots of the two factors, which is analytic for
    ``|zeta| > |x|``.
    """
    if not isinstance(mu, measures.DiscreteMeasure):
        raise TypeError("eval_kernel needs a discrete measure")
    d = mu.d
    zeta = complex(zeta)
    theta = harmonics._as_unit(theta, d)
    if not len(mu.weights):
        return 0j
    norms = np.linalg.norm(mu.points, axis=1)
    if np.any(abs(zeta) <= norms):
        raise DivergenceError("|zeta| must exceed the norm of every atom")
    proj = mu.points @ theta
    a = proj + 1j * np.sqrt(np.maximum(norms ** 2 - proj ** 2, 0.0))
    u = 1.0 - a / zeta
    v = 1.0 - np.conj(a) / zeta
    if d == 2:
        root = u * v
    else:
        root = (u * v) * np.sqrt(u) * np.sqrt(v)
    return complex(np.sum(mu.weights / (zeta * root)) / harmonics.omega(d))


def eval_real(mu, y, angular_degree=64):
    """Real transform ``(1/omega_d) int |y|^d / |y - x|^d dmu(x)`` for ``|y| > R``."""
    y = np.asarray(y, dtype=float)
    d = mu.d
    if y.shape != (d,):
        raise ValueError(f"y must be a point of R^{d}")
    ny = float(np.linalg.norm(y))
    if ny <= mu.R:
        raise DivergenceError(f"|y| = {ny} must exceed R = {mu.R}")

    def g(x):
        return ny ** d / np.linalg.norm(y - x, axis=-1) ** d

    return float(np.real(measures.integrate_function(mu, g, angular_degree))) / harmonics.omega(d)


# ---------------------------------------------------------------------------
# Hankel determinants
# ---------------------------------------------------------------------------


def hankel(table, theta, n):
    """``H_n(mu, theta) = det(f_{i+j}(theta))_{i,j<n}``."""
    if 2 * n - 2 > table.L:
        raise InsufficientMomentsError(f"H_{n} needs f_0..f_{2 * n - 2}")
    return hankel_det(table.values(theta, max(2 * n - 2, 0)), n)


def hankel_poly(table, n):
    """Homogeneous polynomial ``det(F_{i+j})`` of degree ``n(n-1)``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if 2 * n - 2 > table.L:
        raise InsufficientMomentsError(f"hankel_poly of order {n} needs f_0..f_{2 * n - 2}")
    F = [homog_lift(table, l) for l in range(2 * n - 1)]
    entries = [[F[i + j] for j in range(n)] for i in range(n)]
    det = expand_det(entries, GaussPoly(table.d))
    return HomogPoly(table.d, n * (n - 1), det.terms)


@dataclass
class HankelPositivityReport:
    positive: bool
    N: int
    tol: float
    scale: float
    directions: np.ndarray
    values: np.ndarray  # (directions, N): H_n at each direction
    min_value: float
    min_ratio: float
    witness_theta: np.ndarray
    witness_n: int
    failures: list  # (direction index, n) pairs below threshold


def _grid(d, degree):
    return harmonics.sphere_rule(d, degree).nodes


def _table_scale(table, thetas, L):
    return float(np.abs(table.values(thetas, L)).max()) if L >= 0 else 0.0


def hankel_positivity_report(table, N, sphere_degree=None, tol=POSITIVITY_TOL):
    """Check ``H_n(mu, theta) > tol * scale^n`` for ``n <= N`` on a sphere grid.

    ``scale`` is the largest ``|f_l(theta)|``, ``l <= 2N-2``, over the grid.
    The witness is the direction and order with the smallest ratio
    ``H_n / scale^n``.
    """
    if 2 * N - 2 > table.L:
        raise InsufficientMomentsError(f"order {N} needs f_0..f_{2 * N - 2}")
    thetas = _grid(table.d, 2 * N if sphere_degree is None else sphere_degree)
    vals = table.values(thetas, 2 * N - 2)
    scale = float(np.abs(vals).max())
    H = np.array([[hankel_det(v, n) for n in range(1, N + 1)] for v in vals])
    denom = np.array([scale ** n for n in range(1, N + 1)]) if scale > 0 else np.ones(N)
    ratios = H / denom
    j, n0 = np.unravel_index(np.argmin(ratios), ratios.shape)
    fails = [(int(a), int(b) + 1) for a, b in zip(*np.nonzero(ratios <= tol))]
    return HankelPositivityReport(
        positive=not fails and scale > 0,
        N=N,
        tol=tol,
        scale=scale,
        directions=thetas,
        values=H,
        min_value=float(H[j, n0]),
        min_ratio=float(ratios[j, n0]),
        witness_theta=thetas[j],
        witness_n=int(n0) + 1,
        failures=fails,
    )


@dataclass
class KroneckerReport:
    rational: bool
    detected_degree: int | None
    n_max: int
    tol: float
    directions: np.ndarray
    residual: np.ndarray  # (directions, n_max): H_m at each direction
    ratios: np.ndarray  # (directions, n_max): sigma_min / sigma_max of the Hankel matrix
    vanishing: list  # per m = 1..n_max: True when H_m is negligible on the grid


def _rank_ratio(vals, m, floor):
    H = hankel_matrix(vals, m)
    s = np.linalg.svd(H, compute_uv=False)
    if s[0] <= floor:
        return 0.0
    return float(s[-1] / s[0])


def kronecker_test(table, n_max, tol=KRONECKER_TOL, sphere_degree=None):
    """Numerical rationality test for the expansion.

    ``H_m(mu, theta)`` is taken as zero when the ``m x m`` Hankel matrix is
    numerically singular, ``sigma_min / sigma_max <= tol``, at every grid
    direction (matrices below ``ZERO_RTOL * scale`` count as zero).  The
    expansion is declared rational of degree ``n - 1`` for the smallest ``n``
    such that ``H_m`` vanishes for all ``n <= m <= n_max``.
    """
    if 2 * n_max - 2 > table.L:
        raise InsufficientMomentsError(f"n_max = {n_max} needs f_0..f_{2 * n_max - 2}")
    thetas = _grid(table.d, 2 * n_max if sphere_degree is None else sphere_degree)
    vals = table.values(thetas, 2 * n_max - 2)
    scale = float(np.abs(vals).max())
    floor = ZERO_RTOL * scale
    H = np.array([[hankel_det(v, m) for m in range(1, n_max + 1)] for v in vals])
    ratios = np.array([[_rank_ratio(v, m, floor) for m in range(1, n_max + 1)] for v in vals])
    vanish = [bool(np.all(ratios[:, m] <= tol)) for m in range(n_max)]
    start = None
    for n in range(n_max, 0, -1):
        if not vanish[n - 1]:
            break
        start = n
    return KroneckerReport(
        rational=start is not None,
        detected_degree=None if start is None else start - 1,
        n_max=n_max,
        tol=tol,
        directions=thetas,
        residual=H,
        ratios=ratios,
        vanishing=vanish,
    )


@dataclass
class SignCheckReport:
    passed: bool
    samples: int
    zetas: np.ndarray
    thetas: np.ndarray
    imag_values: np.ndarray
    bounds: np.ndarray
    violations: list


def upper_halfplane_sign_check(table, samples=20, seed=0, radius_factor=2.0):
    """Sample ``zeta`` with ``Im zeta > 0``, ``|zeta| = radius_factor * R`` and
    random directions; require ``Im mu_hat <= tail bound``."""
    rng = np.random.default_rng(seed)
    rho = radius_factor * table.R if table.R > 0 else 1.0
    phis = rng.uniform(0.05, math.pi - 0.05, samples)
    zetas = rho * np.exp(1j * phis)
    raw = rng.normal(size=(samples, table.d))
    thetas = raw / np.linalg.norm(raw, axis=1, keepdims=True)
    im = np.empty(samples)
    bounds = np.empty(samples)
    for i, (z, th) in enumerate(zip(zetas, thetas)):
        v, b = eval_series(table, z, th)
        im[i], bounds[i] = v.imag, b
    bad = [int(i) for i in np.nonzero(im > bounds)[0]]
    return SignCheckReport(not bad, samples, zetas, thetas, im, bounds, bad)


# ---------------------------------------------------------------------------
# CSV
# ---------------------------------------------------------------------------


def _fmt(x):
    return "%.17g" % x


def write_directional_csv(dm, fh):
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["l", "value"])
    for l, v in enumerate(np.real(dm.values.values)):
        w.writerow([l, _fmt(v)])


def _rows(fh):
    lines = [ln for ln in fh if ln.strip() and not ln.lstrip().startswith("#")]
    return list(csv.DictReader(lines))


def read_directional_csv(fh, theta=None):
    rows = _rows(fh)
    if not rows or set(rows[0]) != {"l", "value"}:
        raise ValueError("expected columns l,value")
    vals = {}
    for row in rows:
        vals[int(row["l"])] = float(row["value"])
    if sorted(vals) != list(range(len(vals))):
        raise ValueError("l must run over 0..L without gaps")
    return DirectionalMoments(theta, MomentSeq([vals[l] for l in range(len(vals))]))


def write_table_csv(table, fh):
    """Rows ``l,k,m,coefficient`` preceded by ``# d=`` and ``# R=`` comment lines."""
    fh.write(f"# d={table.d}\n# R={_fmt(table.R)}\n")
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["l", "k", "m", "coefficient"])
    for l, e in enumerate(table.entries):
        for (k, m), c in sorted(e.items()):
            w.writerow([l, k, m, _fmt(c)])


def read_table_csv(fh, d=None, R=None, L=None):
    """Inverse of :func:`write_table_csv`; ``d``/``R`` override the comment lines."""
    text = fh.read().splitlines()
    meta = {}
    for ln in text:
        s = ln.strip()
        if s.startswith("#") and "=" in s:
            key, _, val = s[1:].partition("=")
            meta[key.strip()] = val.strip()
    d = int(meta.get("d", 0)) if d is None else d
    R = float(meta.get("R", "nan")) if R is None else R
    if not d or not math.isfinite(R):
        raise ValueError("table CSV needs d and R (comment lines or arguments)")
    rows = _rows(text)
    if rows and set(rows[0]) != {"l", "k", "m", "coefficient"}:
        raise ValueError("expected columns l,k,m,coefficient")
    top = max((int(r["l"]) for r in rows), default=-1)
    L = top if L is None else L
    entries = [dict() for _ in range(L + 1)]
    for r in rows:
        l = int(r["l"])
        if l <= L:
            entries[l][(int(r["k"]), int(r["m"]))] = float(r["coefficient"])
    return CoefficientTable(d, R, entries, None, "csv")
