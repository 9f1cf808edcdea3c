"""Finite signed measures on R^d (d = 2, 3) supported in a ball, their
distributed moments, exact polynomial integrals, and a JSON description
format.

Variants
--------
``DiscreteMeasure``          weighted atoms.
``RadialProductMeasure``     ``sigma(dr) x dtheta``, uniform on spheres.
``RadialTimesDiracMeasure``  ``sigma`` on the first coordinate axis.
``PolarDensityMeasure``      ``(w0(r) + w1(r) cos t) r dr dt`` in the plane.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import special

from . import _quad, harmonics
from .monomials import Poly
from .polyalg import GaussPoly

__all__ = [
    "SchemaError",
    "RadialAtoms",
    "RadialDensity",
    "DiscreteMeasure",
    "RadialProductMeasure",
    "RadialTimesDiracMeasure",
    "PolarDensityMeasure",
    "distributed_moment",
    "integrate_poly",
    "mass_bound",
    "integrate_function",
    "sphere_monomial_integral",
    "parse_measure",
    "emit_measure",
    "load_measure",
]

_SUPPORT_SLACK = 1e-12


class SchemaError(ValueError):
    """Invalid measure description; ``path`` locates the offending field."""

    def __init__(self, path, message):
        super().__init__(f"{path}: {message}")
        self.path = path


# ---------------------------------------------------------------------------
# one-dimensional (radial or axial) measures
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class RadialAtoms:
    radii: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        r = np.atleast_1d(np.asarray(self.radii, dtype=float))
        w = np.atleast_1d(np.asarray(self.weights, dtype=float))
        if r.shape != w.shape or r.ndim != 1:
            raise ValueError("radii and weights must be 1-d arrays of equal length")
        object.__setattr__(self, "radii", r)
        object.__setattr__(self, "weights", w)

    @property
    def support(self):
        if not self.radii.size:
            return (0.0, 0.0)
        return float(self.radii.min()), float(self.radii.max())

    def integrate(self, g):
        if not self.radii.size:
            return 0.0
        return float(np.dot(self.weights, g(self.radii)))

    def moment(self, p):
        return self.integrate(lambda r: r ** p)

    def abs_mass(self):
        return float(np.abs(self.weights).sum())

    def to_json(self):
        return {"atoms": [[float(r), float(w)] for r, w in zip(self.radii, self.weights)]}


_DENSITIES = ("lebesgue", "power", "table")


@dataclass(frozen=True, eq=False)
class RadialDensity:
    """Weight function on an interval, from a small registry.

    ``lebesgue``: 1; ``power``: ``r**p``; ``table``: linear interpolation of
    ``(r, w)`` samples.  ``scale`` multiplies the weight.
    """

    kind: str
    interval: tuple = (0.0, 1.0)
    p: float = 0.0
    table: tuple | None = None
    scale: float = 1.0
    _breaks: tuple = field(default=(), repr=False)

    def __post_init__(self):
        if self.kind not in _DENSITIES:
            raise ValueError(f"unknown density {self.kind!r}")
        if self.kind == "table":
            r, w = (np.asarray(v, dtype=float) for v in self.table)
            if r.ndim != 1 or r.shape != w.shape or r.size < 2 or np.any(np.diff(r) <= 0):
                raise ValueError("table needs increasing r samples and matching w")
            object.__setattr__(self, "table", (r, w))
            object.__setattr__(self, "interval", (float(r[0]), float(r[-1])))
            object.__setattr__(self, "_breaks", tuple(r[1:-1]) + (0.0,))
        else:
            a, b = (float(v) for v in self.interval)
            if not a < b:
                raise ValueError("density interval must satisfy a < b")
            object.__setattr__(self, "interval", (a, b))
            object.__setattr__(self, "_breaks", (0.0,))

    @property
    def support(self):
        return self.interval

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        a, b = self.interval
        if self.kind == "lebesgue":
            v = np.ones_like(r)
        elif self.kind == "power":
            v = np.abs(r) ** self.p
        else:
            v = np.interp(r, *self.table)
        return np.where((r >= a) & (r <= b), self.scale * v, 0.0)

    def integrate(self, g):
        a, b = self.interval
        return float(_quad.integrate(lambda r: g(r) * self(r), a, b, breakpoints=self._breaks))

    def moment(self, p):
        return self.integrate(lambda r: r ** p)

    def abs_mass(self):
        a, b = self.interval
        return float(_quad.integrate(lambda r: np.abs(self(r)), a, b, breakpoints=self._breaks))

    def to_json(self):
        out = {"density": self.kind}
        if self.kind == "table":
            out["r"] = self.table[0].tolist()
            out["w"] = self.table[1].tolist()
        else:
            out["interval"] = list(self.interval)
        if self.kind == "power":
            out["p"] = self.p
        if self.scale != 1.0:
            out["scale"] = self.scale
        return out


def _check_support(radial, lo, hi, what):
    a, b = radial.support
    if a < lo - _SUPPORT_SLACK * max(1.0, abs(lo)) or b > hi + _SUPPORT_SLACK * max(1.0, hi):
        raise ValueError(f"{what} support [{a}, {b}] is not inside [{lo}, {hi}]")


# ---------------------------------------------------------------------------
# measures on R^d
# ---------------------------------------------------------------------------


def sphere_monomial_integral(d, e):
    """``int_{S^{d-1}} theta^e dtheta`` in closed form."""
    if any(v % 2 for v in e):
        return 0.0
    logs = sum(special.gammaln((v + 1) / 2.0) for v in e)
    return 2.0 * math.exp(logs - special.gammaln((sum(e) + d) / 2.0))


@dataclass(frozen=True, eq=False)
class DiscreteMeasure:
    d: int
    R: float
    points: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        harmonics._check_d(self.d)
        pts = np.asarray(self.points, dtype=float).reshape(-1, self.d)
        w = np.asarray(self.weights, dtype=float).reshape(-1)
        if len(pts) != len(w):
            raise ValueError("points and weights differ in length")
        if len(pts) and np.linalg.norm(pts, axis=1).max() > self.R * (1 + _SUPPORT_SLACK):
            raise ValueError(f"atom outside the ball of radius {self.R}")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "weights", w)

    def _distributed_moment(self, s, k, m):
        if not len(self.weights):
            return 0.0
        r = np.linalg.norm(self.points, axis=1)
        u = np.where(r[:, None] > 0, self.points / np.where(r > 0, r, 1.0)[:, None], np.eye(self.d)[0])
        y = harmonics._eval_Y_unchecked(self.d, k, m, u)
        return float(np.dot(self.weights, r ** (2 * s + k) * y))

    def _integrate(self, u):
        if not len(self.weights):
            return 0.0
        return float(np.real(np.dot(self.weights, u(self.points))))

    def _coefficient_entries(self, L):
        """All ``c_{t,k,m}`` with ``2t + k <= L`` at once, grouped by ``l = 2t + k``."""
        entries = [dict() for _ in range(L + 1)]
        if not len(self.weights):
            return entries
        r = np.linalg.norm(self.points, axis=1)
        u = np.where(r[:, None] > 0, self.points / np.where(r > 0, r, 1.0)[:, None], np.eye(self.d)[0])
        idx = harmonics.basis_indices(self.d, L)
        B = np.stack([harmonics._eval_Y_unchecked(self.d, k, m, u) for k, m in idx], axis=-1)
        for l in range(L + 1):
            c = (self.weights * r ** l) @ B
            for (k, m), v in zip(idx, c):
                if k <= l and (l - k) % 2 == 0 and v != 0.0:
                    entries[l][(k, m)] = float(v)
        return entries

    def _integrate_fn(self, g, angular):
        if not len(self.weights):
            return 0.0
        return complex(np.dot(self.weights, g(self.points)))

    def mass_bound(self):
        return float(np.abs(self.weights).sum())


@dataclass(frozen=True, eq=False)
class RadialProductMeasure:
    """``int f dmu = int int f(r theta) dsigma(r) dtheta`` (uniform on spheres)."""

    d: int
    R: float
    radial: RadialAtoms | RadialDensity

    def __post_init__(self):
        harmonics._check_d(self.d)
        _check_support(self.radial, 0.0, self.R, "radial measure")

    def _distributed_moment(self, s, k, m):
        if k > 0:
            return 0.0
        return math.sqrt(harmonics.omega(self.d)) * self.radial.moment(2 * s)

    def _integrate(self, u):
        total = 0.0
        for e, c in u.terms.items():
            ang = sphere_monomial_integral(self.d, e)
            if ang:
                total += c * ang * self.radial.moment(sum(e))
        return float(np.real(total))

    def _integrate_fn(self, g, angular):
        rule = harmonics.sphere_rule(self.d, angular)

        def shell(r):
            pts = np.asarray(r)[..., None, None] * rule.nodes
            return np.asarray(g(pts)) @ rule.weights

        return _complex_integrate(self.radial, shell)

    def mass_bound(self):
        return harmonics.omega(self.d) * self.radial.abs_mass()


@dataclass(frozen=True, eq=False)
class RadialTimesDiracMeasure:
    """``sigma`` placed on the first coordinate axis (``sigma x delta_0``)."""

    d: int
    R: float
    radial: RadialAtoms | RadialDensity

    def __post_init__(self):
        harmonics._check_d(self.d)
        _check_support(self.radial, -self.R, self.R, "axial measure")

    def _distributed_moment(self, s, k, m):
        e1 = np.eye(self.d)[0]
        y_pos = float(harmonics._eval_Y_unchecked(self.d, k, m, e1))
        y_neg = float(harmonics._eval_Y_unchecked(self.d, k, m, -e1))
        p = 2 * s + k
        return self.radial.integrate(lambda x: np.abs(x) ** p * np.where(x >= 0, y_pos, y_neg))

    def _integrate(self, u):
        total = 0.0
        for e, c in u.terms.items():
            if not any(e[1:]):
                total += c * self.radial.moment(e[0])
        return float(np.real(total))

    def _integrate_fn(self, g, angular):
        e1 = np.eye(self.d)[0]
        return _complex_integrate(self.radial, lambda x: g(np.asarray(x)[..., None] * e1))

    def mass_bound(self):
        return self.radial.abs_mass()


@dataclass(frozen=True, eq=False)
class PolarDensityMeasure:
    """Planar density ``(w0(r) + w1(r) cos t) r dr dt``."""

    R: float
    w0: RadialDensity
    w1: RadialDensity | None = None

    d = 2

    def __post_init__(self):
        _check_support(self.w0, 0.0, self.R, "w0")
        if self.w1 is not None:
            _check_support(self.w1, 0.0, self.R, "w1")

    def _radial(self, which, p):
        w = self.w0 if which == 0 else self.w1
        if w is None:
            return 0.0
        return w.moment(p)

    def _distributed_moment(self, s, k, m):
        if k == 0:
            return math.sqrt(2.0 * math.pi) * self._radial(0, 2 * s + 1)
        if (k, m) == (1, 1):
            return math.sqrt(math.pi) * self._radial(1, 2 * s + 2)
        return 0.0

    def _integrate(self, u):
        total = 0.0
        for (a, b), c in u.terms.items():
            deg = a + b
            i0 = sphere_monomial_integral(2, (a, b))
            i1 = sphere_monomial_integral(2, (a + 1, b))
            if i0:
                total += c * i0 * self._radial(0, deg + 1)
            if i1:
                total += c * i1 * self._radial(1, deg + 1)
        return float(np.real(total))

    def _integrate_fn(self, g, angular):
        M = 2 * angular + 2
        t = 2.0 * math.pi * np.arange(M) / M
        circle = np.stack([np.cos(t), np.sin(t)], axis=-1)

        def ring(weight):
            def h(r):
                vals = np.asarray(g(np.asarray(r)[..., None, None] * circle))
                return (vals * weight).mean(axis=-1) * 2.0 * math.pi * r
            return h

        total = _complex_integrate(self.w0, ring(1.0))
        if self.w1 is not None:
            total += _complex_integrate(self.w1, ring(np.cos(t)))
        return total

    def check_hankel_hypothesis(self, samples=2001):
        """True when ``|w1(r)| <= w0(r)`` on a uniform grid of ``[0, R]``."""
        r = np.linspace(0.0, self.R, samples)
        w1 = np.abs(self.w1(r)) if self.w1 is not None else np.zeros_like(r)
        return bool(np.all(w1 <= self.w0(r) + 1e-14))

    def mass_bound(self):
        def absw(r):
            w1 = np.abs(self.w1(r)) if self.w1 is not None else 0.0
            return (np.abs(self.w0(r)) + w1) * r

        bps = [0.0]
        for w in (self.w0, self.w1):
            if w is not None:
                bps.extend(w.support)
                bps.extend(w._breaks)
        return 2.0 * math.pi * _quad.integrate(absw, 0.0, self.R, breakpoints=bps)


def _complex_integrate(radial, h):
    re = radial.integrate(lambda r: np.real(h(r)))
    im = radial.integrate(lambda r: np.imag(h(r)))
    return complex(re, im)


_MEASURES = (DiscreteMeasure, RadialProductMeasure, RadialTimesDiracMeasure, PolarDensityMeasure)


def _check_measure(mu):
    if not isinstance(mu, _MEASURES):
        raise TypeError(f"not a measure: {type(mu).__name__}")


def distributed_moment(mu, s, k, m):
    """``c_{s,k,m} = int |x|^{2s} Y_{k,m}(x) dmu``."""
    _check_measure(mu)
    harmonics._check_index(mu.d, k, m)
    if s < 0:
        raise ValueError("s must be >= 0")
    return mu._distributed_moment(s, k, m)


def _as_poly(mu, u):
    if isinstance(u, Poly):
        p = u
    elif isinstance(u, GaussPoly):
        p = u.to_poly()
    elif isinstance(u, dict):
        p = GaussPoly(mu.d, u).to_poly()
    elif isinstance(u, (int, float)):
        p = Poly.constant(mu.d, u)
    else:
        p = Poly(mu.d, {tuple(e): c for e, c in u})
    if p.d != mu.d:
        raise ValueError("dimension mismatch")
    return p


def integrate_poly(mu, u):
    """Exact ``int u dmu``.

    ``u`` may be a monomial :class:`Poly`, a list of ``(exponents, coef)``
    pairs, a :class:`GaussPoly`, or a ``{(t, k, m): coef}`` map.
    """
    _check_measure(mu)
    return mu._integrate(_as_poly(mu, u))


def integrate_function(mu, g, angular_degree=64):
    """``int g dmu`` for a vectorized function ``g`` of points ``(..., d)``.

    Exact for discrete and axial measures up to the radial quadrature;
    sphere and circle integrals use rules of degree ``angular_degree``,
    which converge geometrically for integrands analytic near the sphere.
    """
    _check_measure(mu)
    v = mu._integrate_fn(g, angular_degree)
    return v.real if v.imag == 0 else v


def mass_bound(mu):
    """Upper bound for the total variation of ``mu``."""
    _check_measure(mu)
    return float(mu.mass_bound())


# ---------------------------------------------------------------------------
# JSON schema
# ---------------------------------------------------------------------------


def _get(obj, key, path, types=None):
    if not isinstance(obj, dict):
        raise SchemaError(path, "expected an object")
    if key not in obj:
        raise SchemaError(f"{path}.{key}", "missing field")
    v = obj[key]
    if types is not None and (not isinstance(v, types) or isinstance(v, bool)):
        raise SchemaError(f"{path}.{key}", f"expected {types}")
    return v


def _number(v, path):
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise SchemaError(path, "expected a number")
    return float(v)


def _parse_radial(obj, path):
    if not isinstance(obj, dict):
        raise SchemaError(path, "expected an object")
    if "atoms" in obj:
        atoms = obj["atoms"]
        if not isinstance(atoms, list):
            raise SchemaError(f"{path}.atoms", "expected a list")
        r, w = [], []
        for i, a in enumerate(atoms):
            if not isinstance(a, list) or len(a) != 2:
                raise SchemaError(f"{path}.atoms[{i}]", "expected [r, weight]")
            r.append(_number(a[0], f"{path}.atoms[{i}][0]"))
            w.append(_number(a[1], f"{path}.atoms[{i}][1]"))
        return RadialAtoms(np.array(r), np.array(w))
    kind = _get(obj, "density", path, str)
    scale = _number(obj.get("scale", 1.0), f"{path}.scale")
    try:
        if kind == "table":
            r = [_number(v, f"{path}.r[{i}]") for i, v in enumerate(_get(obj, "r", path, list))]
            w = [_number(v, f"{path}.w[{i}]") for i, v in enumerate(_get(obj, "w", path, list))]
            return RadialDensity("table", table=(r, w), scale=scale)
        if kind not in _DENSITIES:
            raise SchemaError(f"{path}.density", f"unknown density {kind!r}")
        iv = _get(obj, "interval", path, list)
        if len(iv) != 2:
            raise SchemaError(f"{path}.interval", "expected [a, b]")
        iv = tuple(_number(v, f"{path}.interval[{i}]") for i, v in enumerate(iv))
        p = _number(obj.get("p", 0.0), f"{path}.p")
        return RadialDensity(kind, iv, p=p, scale=scale)
    except SchemaError:
        raise
    except ValueError as exc:
        raise SchemaError(path, str(exc)) from exc


def parse_measure(text):
    """Measure from its JSON description."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError("$", f"invalid JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise SchemaError("$", "expected an object")
    d = _get(obj, "d", "$", int)
    if d not in (2, 3):
        raise SchemaError("$.d", "d must be 2 or 3")
    R = _number(_get(obj, "R", "$"), "$.R")
    if R <= 0:
        raise SchemaError("$.R", "R must be positive")
    variant = _get(obj, "variant", "$", str)
    try:
        if variant == "discrete":
            atoms = _get(obj, "atoms", "$", list)
            pts, ws = [], []
            for i, a in enumerate(atoms):
                path = f"$.atoms[{i}]"
                if not isinstance(a, list) or len(a) != 2 or not isinstance(a[0], list):
                    raise SchemaError(path, "expected [[x1, ..., xd], weight]")
                if len(a[0]) != d:
                    raise SchemaError(f"{path}[0]", f"point must have {d} coordinates")
                pts.append([_number(v, f"{path}[0][{j}]") for j, v in enumerate(a[0])])
                ws.append(_number(a[1], f"{path}[1]"))
            return DiscreteMeasure(d, R, np.array(pts).reshape(-1, d), np.array(ws))
        if variant == "radial_product":
            return RadialProductMeasure(d, R, _parse_radial(_get(obj, "radial", "$"), "$.radial"))
        if variant == "radial_times_dirac":
            return RadialTimesDiracMeasure(d, R, _parse_radial(_get(obj, "radial", "$"), "$.radial"))
        if variant == "polar_density":
            if d != 2:
                raise SchemaError("$.d", "polar_density requires d = 2")
            w0 = _parse_radial(_get(obj, "w0", "$"), "$.w0")
            w1 = _parse_radial(obj["w1"], "$.w1") if "w1" in obj else None
            for name, w in (("w0", w0), ("w1", w1)):
                if isinstance(w, RadialAtoms):
                    raise SchemaError(f"$.{name}", "polar_density needs a density, not atoms")
            mu = PolarDensityMeasure(R, w0, w1)
            if obj.get("assert_hankel_positive") and not mu.check_hankel_hypothesis():
                raise SchemaError("$.w1", "|w1(r)| <= w0(r) fails on the sample grid")
            return mu
    except SchemaError:
        raise
    except ValueError as exc:
        raise SchemaError("$", str(exc)) from exc
    raise SchemaError("$.variant", f"unknown variant {variant!r}")


def emit_measure(mu):
    """JSON description of ``mu`` (inverse of :func:`parse_measure`)."""
    _check_measure(mu)
    out = {"d": mu.d, "R": mu.R}
    if isinstance(mu, DiscreteMeasure):
        out["variant"] = "discrete"
        out["atoms"] = [[p.tolist(), float(w)] for p, w in zip(mu.points, mu.weights)]
    elif isinstance(mu, RadialProductMeasure):
        out["variant"] = "radial_product"
        out["radial"] = mu.radial.to_json()
    elif isinstance(mu, RadialTimesDiracMeasure):
        out["variant"] = "radial_times_dirac"
        out["radial"] = mu.radial.to_json()
    else:
        out["variant"] = "polar_density"
        out["w0"] = mu.w0.to_json()
        if mu.w1 is not None:
            out["w1"] = mu.w1.to_json()
    return json.dumps(out, sort_keys=True)


def load_measure(path):
    with open(path) as fh:
        return parse_measure(fh.read())
