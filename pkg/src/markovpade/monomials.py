"""Multivariate polynomials in the monomial basis.

A :class:`Poly` is a sparse map from exponent tuples to coefficients.  It is
the format users write polynomials in; the harmonic (Gauss decomposition)
form lives in :mod:`markovpade.polyalg`.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

__all__ = ["Poly"]


def _clean(terms, d):
    out = {}
    for e, c in terms.items():
        e = tuple(int(v) for v in e)
        if len(e) != d or any(v < 0 for v in e):
            raise ValueError(f"bad exponent {e} for d={d}")
        if c != 0:
            out[e] = out.get(e, 0) + c
    return {e: c for e, c in out.items() if c != 0}


@dataclass(frozen=True, eq=False)
class Poly:
    """Polynomial ``sum c_e x^e`` in ``d`` real variables."""

    d: int
    terms: Mapping[tuple, complex] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "terms", _clean(dict(self.terms), self.d))

    # -- constructors -----------------------------------------------------
    @classmethod
    def constant(cls, d, c=1.0):
        return cls(d, {(0,) * d: c})

    @classmethod
    def variable(cls, d, i):
        e = [0] * d
        e[i] = 1
        return cls(d, {tuple(e): 1.0})

    @classmethod
    def monomial(cls, exponents, c=1.0):
        return cls(len(exponents), {tuple(exponents): c})

    @classmethod
    def random(cls, d, degree, rng, low=-1.0, high=1.0):
        """All monomials of total degree <= ``degree`` with uniform coefficients."""
        terms = {}
        for e in exponents_up_to(d, degree):
            terms[e] = rng.uniform(low, high)
        return cls(d, terms)

    # -- structure --------------------------------------------------------
    @property
    def degree(self):
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def is_zero(self):
        return not self.terms

    def homogeneous_part(self, D):
        return Poly(self.d, {e: c for e, c in self.terms.items() if sum(e) == D})

    def coefficient_norm(self):
        """Euclidean norm of the coefficient vector."""
        return float(np.sqrt(sum(abs(c) ** 2 for c in self.terms.values())))

    # -- arithmetic -------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, Poly):
            if other.d != self.d:
                raise ValueError("dimension mismatch")
            return other
        return Poly.constant(self.d, other)

    def __add__(self, other):
        other = self._coerce(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, 0) + c
        return Poly(self.d, terms)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.d, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return Poly(self.d, {e: c * other for e, c in self.terms.items()})
        other = self._coerce(other)
        terms = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = terms.get(e, 0) + c1 * c2
        return Poly(self.d, terms)

    __rmul__ = __mul__

    def __pow__(self, k):
        if k < 0:
            raise ValueError("negative power")
        out = Poly.constant(self.d)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # -- evaluation -------------------------------------------------------
    def __call__(self, x):
        """Evaluate at points ``x`` of shape ``(..., d)``."""
        x = np.asarray(x)
        if x.shape[-1] != self.d:
            raise ValueError(f"expected points in R^{self.d}, got shape {x.shape}")
        dtype = np.result_type(x.dtype, *(np.asarray(c).dtype for c in self.terms.values()), float)
        out = np.zeros(x.shape[:-1], dtype=dtype)
        for e, c in self.terms.items():
            term = np.full(x.shape[:-1], c, dtype=dtype)
            for i, p in enumerate(e):
                if p:
                    term = term * x[..., i] ** p
            out = out + term
        return out

    def along(self, theta):
        """Coefficients (ascending) of the univariate polynomial ``z -> p(z theta)``."""
        theta = np.asarray(theta, dtype=float)
        coeffs = np.zeros(max(self.degree, 0) + 1, dtype=complex)
        for e, c in self.terms.items():
            coeffs[sum(e)] += c * np.prod(theta ** np.asarray(e))
        return coeffs

    def laplacian(self):
        terms = {}
        for e, c in self.terms.items():
            for i, p in enumerate(e):
                if p >= 2:
                    e2 = list(e)
                    e2[i] -= 2
                    e2 = tuple(e2)
                    terms[e2] = terms.get(e2, 0) + c * p * (p - 1)
        return Poly(self.d, terms)

    def __repr__(self):
        return f"Poly(d={self.d}, terms={len(self.terms)}, degree={self.degree})"


def exponents_up_to(d, degree):
    """All exponent tuples in ``d`` variables with total degree <= ``degree``."""
    out = []

    def rec(prefix, remaining, slots):
        if slots == 1:
            for v in range(remaining + 1):
                out.append(tuple(prefix + [v]))
            return
        for v in range(remaining + 1):
            rec(prefix + [v], remaining - v, slots - 1)

    rec([], degree, d)
    return sorted(out, key=lambda e: (sum(e), tuple(-v for v in e)))
