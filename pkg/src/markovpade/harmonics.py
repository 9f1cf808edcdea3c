"""Real orthonormal spherical harmonics on S^1 and S^2.

Index convention: ``(k, m)`` with ``1 <= m <= a_k``.

* d = 2: ``Y_0 = 1/sqrt(2 pi)``, ``Y_{k,1} = cos(k t)/sqrt(pi)``,
  ``Y_{k,2} = sin(k t)/sqrt(pi)`` for ``theta = (cos t, sin t)``.
* d = 3: ``m = 1`` is the zonal harmonic, ``m = 2j`` carries ``cos(j phi)``
  and ``m = 2j + 1`` carries ``sin(j phi)``, ``1 <= j <= k``.  No
  Condon-Shortley phase.

Harmonics are ``Re/Im (x + i y)^j`` times a derivative of the Legendre
polynomial in ``z``.  Point values use the Gegenbauer recurrence for that
factor; the monomial (solid harmonic) form expands it in powers of ``z`` and
``|x|^2``, which is exact but only well conditioned at moderate degree.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numpy.polynomial import legendre as npleg
from scipy import special

from .monomials import Poly

__all__ = [
    "SphereRule",
    "basis_indices",
    "dim_harmonic",
    "dim_homogeneous",
    "eval_Y",
    "eval_basis",
    "legendre",
    "omega",
    "solid_harmonic",
    "sphere_rule",
    "UNIT_TOL",
]

UNIT_TOL = 1e-10


def _check_d(d):
    if d not in (2, 3):
        raise ValueError(f"only d = 2 and d = 3 are supported, got d={d}")


def omega(d):
    """Surface area of S^{d-1}: 2 pi for d = 2, 4 pi for d = 3."""
    return 2.0 * math.pi ** (d / 2.0) / math.gamma(d / 2.0)


def dim_harmonic(d, k):
    """Dimension ``a_k`` of the degree-k harmonic homogeneous polynomials."""
    _check_d(d)
    if k < 0:
        return 0
    if d == 2:
        return 1 if k == 0 else 2
    return 2 * k + 1


def dim_homogeneous(d, l):
    """Number of monomials of total degree ``l`` in ``d`` variables."""
    return math.comb(l + d - 1, d - 1)


def basis_indices(d, kmax, parity=None):
    """List of ``(k, m)`` with ``k <= kmax`` (optionally ``k = parity mod 2``)."""
    out = []
    for k in range(kmax + 1):
        if parity is not None and (k - parity) % 2:
            continue
        for m in range(1, dim_harmonic(d, k) + 1):
            out.append((k, m))
    return out


def _check_index(d, k, m):
    _check_d(d)
    if k < 0 or not 1 <= m <= dim_harmonic(d, k):
        raise ValueError(f"invalid harmonic index (k={k}, m={m}) for d={d}")


def _as_unit(theta, d):
    theta = np.asarray(theta, dtype=float)
    if theta.shape[-1] != d:
        raise ValueError(f"expected vectors in R^{d}, got shape {theta.shape}")
    norms = np.linalg.norm(theta, axis=-1)
    if np.any(np.abs(norms - 1.0) > UNIT_TOL):
        raise ValueError("direction is not a unit vector")
    return theta


@lru_cache(maxsize=None)
def _zonal_factor(k, j):
    """Normalization and ascending power coefficients of d^j/dz^j P_k."""
    c = npleg.leg2poly(npleg.legder([0] * k + [1], j) if j else [0] * k + [1])
    norm = math.sqrt((2 * k + 1) / (4 * math.pi) * math.factorial(k - j) / math.factorial(k + j))
    if j:
        norm *= math.sqrt(2.0)
    return norm, np.asarray(c, dtype=float)


def _split_m(k, m):
    # d = 3: m -> (order j, use_sin)
    if m == 1:
        return 0, False
    return m // 2, bool(m % 2)


def eval_Y(d, k, m, theta):
    """Value of ``Y_{k,m}`` at unit vector(s) ``theta`` (shape ``(..., d)``)."""
    _check_index(d, k, m)
    theta = _as_unit(theta, d)
    return _eval_Y_unchecked(d, k, m, theta)


def _eval_Y_unchecked(d, k, m, theta):
    w = theta[..., 0] + 1j * theta[..., 1]
    if d == 2:
        if k == 0:
            return np.full(theta.shape[:-1], 1.0 / math.sqrt(2.0 * math.pi))
        wk = w ** k
        return (wk.imag if m == 2 else wk.real) / math.sqrt(math.pi)
    j, use_sin = _split_m(k, m)
    norm, _ = _zonal_factor(k, j)
    z = theta[..., 2]
    wj = w ** j
    ang = wj.imag if use_sin else wj.real
    return norm * ang * _legendre_derivative(k, j, z)


def _legendre_derivative(k, j, z):
    # d^j P_k = (2j-1)!! C_{k-j}^{(j+1/2)}; the Gegenbauer recurrence stays
    # accurate at high degree where the power form cancels catastrophically
    if j == 0:
        return special.eval_legendre(k, z)
    return math.prod(range(1, 2 * j, 2)) * special.eval_gegenbauer(k - j, j + 0.5, z)


def eval_basis(d, kmax, theta, parity=None):
    """Matrix of harmonics: rows follow ``theta``, columns follow
    :func:`basis_indices` ``(d, kmax, parity)``."""
    theta = _as_unit(theta, d)
    idx = basis_indices(d, kmax, parity)
    cols = [_eval_Y_unchecked(d, k, m, theta) for k, m in idx]
    return np.stack(cols, axis=-1) if cols else np.zeros(theta.shape[:-1] + (0,))


def legendre(d, k, t):
    """Legendre polynomial of degree k and dimension d, ``P_k(1) = 1``.

    d = 2 gives ``cos(k arccos t)``, d = 3 the classical Legendre polynomial.
    """
    _check_d(d)
    t = np.asarray(t, dtype=float)
    if d == 2:
        return special.eval_chebyt(k, t)
    return special.eval_legendre(k, t)


def solid_harmonic(d, k, m):
    """Monomial form of the harmonic homogeneous polynomial whose restriction
    to the sphere is ``Y_{k,m}``."""
    _check_index(d, k, m)
    x = Poly.variable(d, 0)
    y = Poly.variable(d, 1)
    # real and imaginary parts of (x + i y)^j by repeated multiplication
    def re_im(j):
        re, im = Poly.constant(d), Poly(d)
        for _ in range(j):
            re, im = re * x - im * y, re * y + im * x
        return re, im

    if d == 2:
        if k == 0:
            return Poly.constant(d, 1.0 / math.sqrt(2.0 * math.pi))
        re, im = re_im(k)
        return (im if m == 2 else re) * (1.0 / math.sqrt(math.pi))
    j, use_sin = _split_m(k, m)
    norm, c = _zonal_factor(k, j)
    z = Poly.variable(d, 2)
    r2 = x * x + y * y + z * z
    radial = Poly(d)
    for i, ci in enumerate(c):
        if ci != 0.0:
            # k - j - i is even because d^j P_k has parity k - j
            radial = radial + (z ** i) * (r2 ** ((k - j - i) // 2)) * float(ci)
    re, im = re_im(j)
    return (im if use_sin else re) * radial * norm


@dataclass(frozen=True, eq=False)
class SphereRule:
    """Positive quadrature on S^{d-1}, exact for polynomials of degree <= ``exact_degree``."""

    d: int
    nodes: np.ndarray
    weights: np.ndarray
    exact_degree: int

    def integrate(self, values):
        return np.tensordot(self.weights, np.asarray(values), axes=(0, 0))

    def __len__(self):
        return len(self.weights)


@lru_cache(maxsize=64)
def sphere_rule(d, L):
    """Sphere rule exact for spherical polynomials of degree <= L.

    d = 2 uses ``2L + 2`` equally spaced angles starting at angle 0.  d = 3 is a
    Gauss-Legendre rule in the polar cosine times ``2L + 2`` equally spaced
    azimuths.
    """
    _check_d(d)
    if L < 0:
        raise ValueError("L must be >= 0")
    M = 2 * L + 2
    t = 2.0 * math.pi * np.arange(M) / M
    if d == 2:
        nodes = np.stack([np.cos(t), np.sin(t)], axis=-1)
        weights = np.full(M, 2.0 * math.pi / M)
    else:
        nz = L // 2 + 1
        z, wz = npleg.leggauss(nz)
        s = np.sqrt(1.0 - z * z)
        nodes = np.stack(
            [
                np.outer(s, np.cos(t)).ravel(),
                np.outer(s, np.sin(t)).ravel(),
                np.repeat(z, M),
            ],
            axis=-1,
        )
        weights = np.outer(wz, np.full(M, 2.0 * math.pi / M)).ravel()
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return SphereRule(d, nodes, weights, L)
