"""Univariate and truncated-Laurent algebra, Hankel determinants, root
finding, and polynomials in the Gauss decomposition basis
``|x|^{2t} Y_{k,m}(x)``.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np
import scipy.linalg
from numpy.polynomial import polynomial as P

from . import harmonics
from .monomials import Poly

__all__ = [
    "ZERO_RTOL",
    "InsufficientMomentsError",
    "RootFindingError",
    "UniPoly",
    "MomentSeq",
    "laurent_product_head",
    "polynomial_part",
    "hankel_matrix",
    "hankel_det",
    "expand_det",
    "real_roots",
    "GaussPoly",
    "HomogPoly",
    "homog_eval",
    "homog_eval_scaled",
    "gauss_decomposition",
]

# coefficients below ZERO_RTOL * (reference magnitude) are treated as zero
ZERO_RTOL = 1e-12


class InsufficientMomentsError(ValueError):
    pass


class RootFindingError(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# univariate polynomials and moment sequences
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class UniPoly:
    """Dense univariate polynomial, ``coeffs[j]`` multiplies ``z**j``.

    Trailing coefficients at or below ``atol`` (default
    ``ZERO_RTOL * max|coeffs|``) are trimmed; the zero polynomial has no
    coefficients and degree -1.
    """

    coeffs: np.ndarray
    atol: float | None = field(default=None, repr=False)

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.coeffs, dtype=complex)).copy()
        tol = self.atol
        if tol is None:
            tol = ZERO_RTOL * (np.abs(c).max() if c.size else 0.0)
        n = c.size
        while n and abs(c[n - 1]) <= tol:
            n -= 1
        c = c[:n]
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self):
        return self.coeffs.size - 1

    def is_zero(self):
        return self.coeffs.size == 0

    def is_real(self, rtol=ZERO_RTOL):
        if self.is_zero():
            return True
        return np.abs(self.coeffs.imag).max() <= rtol * np.abs(self.coeffs).max()

    def __call__(self, z):
        if self.is_zero():
            return np.zeros_like(np.asarray(z, dtype=complex))
        return P.polyval(z, self.coeffs)

    def deriv(self):
        if self.degree <= 0:
            return UniPoly([])
        return UniPoly(P.polyder(self.coeffs))

    def monic(self):
        if self.is_zero():
            raise ZeroDivisionError("zero polynomial has no leading coefficient")
        return UniPoly(self.coeffs / self.coeffs[-1])

    def __mul__(self, other):
        if isinstance(other, UniPoly):
            if self.is_zero() or other.is_zero():
                return UniPoly([])
            return UniPoly(P.polymul(self.coeffs, other.coeffs))
        return UniPoly(self.coeffs * other)

    __rmul__ = __mul__

    def __add__(self, other):
        if not isinstance(other, UniPoly):
            other = UniPoly([other])
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        return UniPoly(P.polyadd(self.coeffs, other.coeffs))

    def __sub__(self, other):
        if not isinstance(other, UniPoly):
            other = UniPoly([other])
        return self + other * -1.0

    def __truediv__(self, c):
        return UniPoly(self.coeffs / c)

    def divmod(self, other):
        """Quotient and remainder of Euclidean division by ``other``."""
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        if self.degree < other.degree:
            return UniPoly([]), self
        q, r = P.polydiv(self.coeffs, other.coeffs)
        return UniPoly(q), UniPoly(r)

    def __repr__(self):
        return f"UniPoly({np.array2string(self.coeffs, precision=6)})"


@dataclass(frozen=True, eq=False)
class MomentSeq:
    """Moment sequence ``f_0, ..., f_L`` with its magnitude scale."""

    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values)
        v = v.astype(complex if np.iscomplexobj(v) else float)
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def scale(self):
        return float(np.abs(self.values).max()) if self.values.size else 0.0

    def __len__(self):
        return self.values.size

    def __getitem__(self, i):
        return self.values[i]


def _values(f):
    if isinstance(f, MomentSeq):
        return f.values
    vals = getattr(f, "values", f)
    if isinstance(vals, MomentSeq):
        return vals.values
    return np.asarray(vals)


def laurent_product_head(p, f, count):
    """Coefficients of ``z^-1, ..., z^-count`` of ``p(z) * sum f_l z^(-l-1)``.

    The polynomial part of the product is excluded.
    """
    f = _values(f)
    n = p.degree
    if f.size < n + count:
        raise InsufficientMomentsError(
            f"need at least {n + count} moments, have {f.size}"
        )
    out = np.zeros(count, dtype=complex)
    for i in range(count):
        for j in range(n + 1):
            out[i] += p.coeffs[j] * f[i + j]
    return out


def polynomial_part(p, f):
    """Polynomial part ``Q`` of ``p(z) * sum f_l z^(-l-1)``; ``deg Q <= deg p - 1``."""
    f = _values(f)
    n = p.degree
    if n <= 0:
        return UniPoly([])
    if f.size < n:
        raise InsufficientMomentsError(f"need at least {n} moments, have {f.size}")
    q = np.zeros(n, dtype=complex)
    for k in range(n):
        for l in range(n - k):
            q[k] += p.coeffs[k + 1 + l] * f[l]
    return UniPoly(q)


def hankel_matrix(f, n, shift=0):
    """``n x n`` matrix with entry ``(i, j) = f[i + j + shift]``."""
    f = _values(f)
    if n and f.size < 2 * n - 1 + shift:
        raise InsufficientMomentsError(
            f"need at least {2 * n - 1 + shift} moments, have {f.size}"
        )
    idx = np.add.outer(np.arange(n), np.arange(n)) + shift
    return f[idx]


def hankel_det(f, n):
    """Hankel determinant ``det(f_{i+j})_{i,j<n}`` by LU with partial pivoting.

    ``H_0 = 1`` by convention.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    if n == 0:
        return 1.0
    H = hankel_matrix(f, n)
    with warnings.catch_warnings():
        # singular Hankel matrices are a legitimate outcome (determinant 0)
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(H, check_finite=True)
    sign = (-1) ** int(np.sum(piv != np.arange(n)))
    det = sign * np.prod(np.diag(lu))
    return det.real if not np.iscomplexobj(H) else det


def expand_det(entries, zero):
    """Determinant by Laplace expansion along successive rows.

    ``entries`` is a square nested sequence of ring elements supporting ``+``,
    ``-`` and ``*``; minors are memoized on the remaining column set, so the
    cost is ``O(n 2^n)`` products.
    """
    n = len(entries)
    memo = {}

    def minor(row, cols):
        if row == n:
            return None
        key = cols
        if key in memo:
            return memo[key]
        total = zero
        sign_pos = 0
        for j in range(n):
            if not cols & (1 << j):
                continue
            sub = minor(row + 1, cols & ~(1 << j))
            term = entries[row][j] if sub is None else entries[row][j] * sub
            total = total + term if sign_pos % 2 == 0 else total - term
            sign_pos += 1
        memo[key] = total
        return total

    if n == 0:
        raise ValueError("empty matrix")
    return minor(0, (1 << n) - 1)


def real_roots(p, interval, return_complex=False, imag_tol=1e-7):
    """Real roots of ``p`` inside the open ``interval``, ascending.

    Roots come from the eigenvalues of the balanced companion matrix and are
    refined by one Newton step.  Roots whose imaginary part is below
    ``imag_tol * max(1, |root|)`` are treated as real.  With
    ``return_complex=True`` the non-real roots inside the disc of radius
    ``max(|lo|, |hi|)`` are returned as a second value.
    """
    lo, hi = interval
    if p.is_zero():
        raise ValueError("the zero polynomial has no well-defined roots")
    if not p.is_real():
        raise ValueError("real_roots needs real coefficients")
    c = p.coeffs.real
    n = c.size - 1
    if n <= 0:
        roots = np.zeros(0, dtype=complex)
    else:
        comp = np.zeros((n, n))
        comp[1:, :-1] = np.eye(n - 1)
        comp[:, -1] = -c[:-1] / c[-1]
        try:
            bal, _ = scipy.linalg.matrix_balance(comp, permute=False)
            roots = scipy.linalg.eigvals(bal)
        except (np.linalg.LinAlgError, ValueError) as exc:
            raise RootFindingError(str(exc)) from exc
        if not np.all(np.isfinite(roots)):
            raise RootFindingError("eigenvalue iteration did not converge")
        dp = p.deriv()
        polished = roots.copy()
        for i, z in enumerate(roots):
            dz = dp(z)
            if dz != 0:
                z1 = z - p(z) / dz
                if abs(p(z1)) <= abs(p(z)):
                    polished[i] = z1
        roots = polished
    is_real = np.abs(roots.imag) <= imag_tol * np.maximum(1.0, np.abs(roots))
    real = np.sort(roots[is_real].real)
    real = real[(real > lo) & (real < hi)]
    if return_complex:
        radius = max(abs(lo), abs(hi))
        cplx = roots[~is_real]
        return real, cplx[np.abs(cplx) < radius]
    return real


# ---------------------------------------------------------------------------
# polynomials in the Gauss decomposition basis
# ---------------------------------------------------------------------------


def _radial_unit(x, d):
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != d:
        raise ValueError(f"dimension mismatch: expected R^{d}, got shape {x.shape}")
    r = np.linalg.norm(x, axis=-1)
    safe = np.where(r > 0, r, 1.0)
    u = x / safe[..., None]
    u = np.where((r > 0)[..., None], u, np.eye(d)[0])
    return r, u


class GaussPoly:
    """Polynomial ``sum c_{t,k,m} |x|^{2t} Y_{k,m}(x)`` in ``d`` variables.

    Homogeneous when every term has the same degree ``2t + k``; see
    :class:`HomogPoly`.
    """

    def __init__(self, d, terms: Mapping[tuple, float] | None = None):
        harmonics._check_d(d)
        clean = {}
        for key, c in (terms or {}).items():
            t, k, m = (int(v) for v in key)
            if t < 0 or not 1 <= m <= harmonics.dim_harmonic(d, k):
                raise ValueError(f"invalid basis index {key} for d={d}")
            if c != 0:
                clean[(t, k, m)] = clean.get((t, k, m), 0.0) + c
        self.d = d
        self.terms = {key: c for key, c in clean.items() if c != 0}

    # -- structure --------------------------------------------------------
    @property
    def degree(self):
        if not self.terms:
            return -1
        return max(2 * t + k for t, k, _ in self.terms)

    def is_zero(self):
        return not self.terms

    def parts(self):
        """Homogeneous components keyed by degree."""
        out = {}
        for (t, k, m), c in self.terms.items():
            out.setdefault(2 * t + k, {})[(t, k, m)] = c
        return {D: HomogPoly(self.d, D, terms) for D, terms in sorted(out.items())}

    @classmethod
    def radial_power(cls, d, j):
        """``|x|^{2j}`` expressed through the constant harmonic."""
        return HomogPoly(d, 2 * j, {(j, 0, 1): math.sqrt(harmonics.omega(d))})

    # -- arithmetic -------------------------------------------------------
    def _check(self, other):
        if other.d != self.d:
            raise ValueError("dimension mismatch")

    def __add__(self, other):
        if not isinstance(other, GaussPoly):
            other = GaussPoly(self.d, {(0, 0, 1): other * math.sqrt(harmonics.omega(self.d))})
        self._check(other)
        terms = dict(self.terms)
        for key, c in other.terms.items():
            terms[key] = terms.get(key, 0.0) + c
        return _wrap(self.d, terms)

    __radd__ = __add__

    def __neg__(self):
        return _wrap(self.d, {key: -c for key, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, GaussPoly):
            return _wrap(self.d, {key: c * other for key, c in self.terms.items()})
        self._check(other)
        out = GaussPoly(self.d)
        for a in self.parts().values():
            for b in other.parts().values():
                out = out + _mul_homog(a, b)
        return out

    __rmul__ = __mul__

    # -- evaluation -------------------------------------------------------
    def __call__(self, x):
        """Value at real points ``x`` of shape ``(..., d)``."""
        r, u = _radial_unit(x, self.d)
        out = np.zeros(r.shape)
        for (t, k, m), c in self.terms.items():
            out = out + c * r ** (2 * t + k) * harmonics._eval_Y_unchecked(self.d, k, m, u)
        return out

    def eval_scaled(self, zeta, theta):
        """Value at ``zeta * theta`` for complex ``zeta`` and unit ``theta``."""
        return P.polyval(np.asarray(zeta, dtype=complex), self.along(theta))

    def along(self, theta):
        """Ascending coefficients of ``z -> p(z theta)``."""
        theta = harmonics._as_unit(theta, self.d)
        coeffs = np.zeros(max(self.degree, 0) + 1, dtype=complex)
        for (t, k, m), c in self.terms.items():
            coeffs[2 * t + k] += c * harmonics._eval_Y_unchecked(self.d, k, m, theta)
        return coeffs

    def to_poly(self):
        """Exact conversion to the monomial basis."""
        d = self.d
        r2 = Poly(d, {tuple(2 if i == j else 0 for i in range(d)): 1.0 for j in range(d)})
        out = Poly(d)
        for (t, k, m), c in self.terms.items():
            out = out + harmonics.solid_harmonic(d, k, m) * (r2 ** t) * c
        return out

    def __repr__(self):
        return f"{type(self).__name__}(d={self.d}, degree={self.degree}, terms={len(self.terms)})"


class HomogPoly(GaussPoly):
    """Homogeneous member of :class:`GaussPoly`: every key has ``2t + k = degree``."""

    def __init__(self, d, degree, terms=None):
        super().__init__(d, terms)
        for t, k, _ in self.terms:
            if 2 * t + k != degree:
                raise ValueError(f"term (t={t}, k={k}) is not of degree {degree}")
        self._degree = degree

    @property
    def degree(self):
        return self._degree


def _wrap(d, terms):
    degrees = {2 * t + k for t, k, _ in terms if terms[(t, k, _)] != 0}
    if len(degrees) == 1:
        return HomogPoly(d, degrees.pop(), terms)
    return GaussPoly(d, terms)


def _project(d, D, values_fn):
    """Coefficients of the homogeneous degree-D polynomial whose restriction
    to the sphere is ``values_fn(nodes)``."""
    rule = harmonics.sphere_rule(d, 2 * D)
    vals = values_fn(rule.nodes)
    idx = harmonics.basis_indices(d, D, parity=D % 2)
    B = harmonics.eval_basis(d, D, rule.nodes, parity=D % 2)
    coeffs = (B * rule.weights[:, None]).T @ vals
    terms = {((D - k) // 2, k, m): float(c) for (k, m), c in zip(idx, coeffs)}
    return HomogPoly(d, D, terms)


def _mul_homog(a, b):
    if a.is_zero() or b.is_zero():
        return GaussPoly(a.d)
    D = a.degree + b.degree
    # restriction of a product is the product of restrictions; projection with
    # a rule exact to degree 2D recovers the expansion exactly
    out = _project(a.d, D, lambda nodes: _sphere_values(a, nodes) * _sphere_values(b, nodes))
    scale = max(abs(c) for c in out.terms.values()) if out.terms else 0.0
    kept = {key: c for key, c in out.terms.items() if abs(c) > 1e-15 * scale}
    return HomogPoly(a.d, D, kept)


def _sphere_values(p, nodes):
    out = np.zeros(len(nodes))
    for (t, k, m), c in p.terms.items():
        out += c * harmonics._eval_Y_unchecked(p.d, k, m, nodes)
    return out


def homog_eval(F, x):
    """Evaluate a Gauss-basis polynomial at real point(s) ``x``."""
    return F(x)


def homog_eval_scaled(F, zeta, theta):
    """``F(zeta * theta)``: each term contributes ``zeta^(2t+k) Y_{k,m}(theta)``."""
    return F.eval_scaled(zeta, theta)


def gauss_decomposition(p):
    """Rewrite a monomial :class:`Poly` as ``sum c |x|^{2t} Y_{k,m}``.

    Each homogeneous part of degree D is projected onto the harmonics of
    degree ``k <= D``, ``k = D mod 2``, using a sphere rule exact to degree 2D.
    """
    if np.iscomplexobj(np.array(list(p.terms.values()) or [0.0])):
        raise ValueError("gauss_decomposition expects real coefficients")
    out = GaussPoly(p.d)
    for D in sorted({sum(e) for e in p.terms}):
        part = p.homogeneous_part(D)
        out = out + _project(p.d, D, part)
    return out
