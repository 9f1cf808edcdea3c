"""Built-in example measures and their canned verification runs.

=====================  ==========================================================
``ex0``                Lebesgue measure on ``[0, 1]`` in the radius, uniform in
                       the angle (d = 3).  Rotation invariant: odd ``f_l``
                       vanish and even ones are constant on the sphere.
``prop6-lebesgue``     Lebesgue measure on ``[0, 1]`` placed on the first axis of
                       the plane.  ``f_l`` has a closed form in the angle.
``ex1-degenerate``     The same measure seen at the direction ``(1, 0)``, where
                       all ``f_l`` coincide, ``H_2`` vanishes and the order-2
                       Pade denominator is identically zero.
``polar-positive``     Planar density ``(1 + cos(t)/2) r dr dt`` on the unit
                       disc; Hankel-positive, so the cubature applies.
``rotation-invariant`` Uniform measures on ``k`` circles; the expansion is
                       rational of degree ``2k``.
=====================  ==========================================================
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _quad, harmonics, markov, measures, pade
from . import cubature as cub

__all__ = ["EXAMPLES", "Check", "get_measure", "reproduce", "rotation_invariant"]


def radial_lebesgue(d=3):
    return measures.RadialProductMeasure(d, 1.0, measures.RadialDensity("lebesgue", (0.0, 1.0)))


def segment_lebesgue():
    return measures.RadialTimesDiracMeasure(2, 1.0, measures.RadialDensity("lebesgue", (0.0, 1.0)))


def polar_positive():
    return measures.PolarDensityMeasure(
        1.0,
        measures.RadialDensity("lebesgue", (0.0, 1.0)),
        measures.RadialDensity("lebesgue", (0.0, 1.0), scale=0.5),
    )


def rotation_invariant(k=2, d=2):
    """Unit masses on ``k`` spheres with radii spread over ``[0.5, 1]``."""
    radii = [0.8] if k == 1 else np.linspace(0.5, 1.0, k)
    return measures.RadialProductMeasure(d, 1.0, measures.RadialAtoms(radii, np.ones(k)))


EXAMPLES = {
    "ex0": radial_lebesgue,
    "prop6-lebesgue": segment_lebesgue,
    "ex1-degenerate": segment_lebesgue,
    "polar-positive": polar_positive,
    "rotation-invariant": rotation_invariant,
}

DEGENERATE_DIRECTION = np.array([1.0, 0.0])


def get_measure(name):
    try:
        return EXAMPLES[name]()
    except KeyError:
        raise KeyError(f"unknown example {name!r}; choose from {', '.join(EXAMPLES)}") from None


@dataclass
class Check:
    name: str
    passed: bool
    detail: str


def _rel(a, b):
    a, b = np.asarray(a), np.asarray(b)
    return float(np.max(np.abs(a - b) / np.maximum(np.abs(b), 1e-300)))


def _circle(count, lo=0.1, hi=math.pi - 0.1):
    t = np.linspace(lo, hi, count)
    return t, np.stack([np.cos(t), np.sin(t)], axis=-1)


def _run_radial(n, seed):
    mu = radial_lebesgue()
    L = 2 * (n or 5)
    table = markov.coefficient_table(mu, L)
    grid = harmonics.sphere_rule(3, 6).nodes
    vals = table.values(grid)
    odd_zero = all(not table.entries[l] for l in range(1, L + 1, 2))
    even = np.array([1.0 / (l + 1) for l in range(0, L + 1, 2)])
    err = _rel(vals[:, ::2], np.broadcast_to(even, vals[:, ::2].shape))
    rng = np.random.default_rng(seed)
    table40 = markov.coefficient_table(mu, 40)
    worst = 0.0
    for _ in range(10):
        z = 2.0 * np.exp(1j * rng.uniform(0.0, 2.0 * math.pi))
        th = rng.normal(size=3)
        th /= np.linalg.norm(th)
        v, b = markov.eval_series(table40, z, th)
        ref = complex(
            _quad.integrate(lambda r: (z / (z * z - r * r)).real, 0.0, 1.0),
            _quad.integrate(lambda r: (z / (z * z - r * r)).imag, 0.0, 1.0),
        )
        worst = max(worst, abs(v - ref) / abs(ref))
    return [
        Check("odd coefficient functions vanish identically", odd_zero, f"L={L}"),
        Check("f_2l = 1/(2l+1) at every grid direction", err <= 1e-12, f"max rel err {err:.2e}"),
        Check("series matches int zeta/(zeta^2 - r^2) dr", worst <= 1e-10, f"max rel err {worst:.2e}"),
    ]


def _run_segment(n, seed):
    mu = segment_lebesgue()
    table = markov.coefficient_table(mu, 8)
    t, th = _circle(20)
    vals = table.values(th)
    ref = np.array(
        [[math.sin((l + 1) * s) / ((l + 1) * math.sin(s)) for l in range(9)] for s in t]
    ) / harmonics.omega(2)
    err = _rel(vals, ref)
    return [Check("f_l(e^it) = sin((l+1)t) / (2 pi (l+1) sin t), l <= 8", err <= 1e-10, f"max rel err {err:.2e}")]


def _run_degenerate(n, seed):
    mu = segment_lebesgue()
    table = markov.coefficient_table(mu, 6)
    e1 = DEGENERATE_DIRECTION
    f = table.values(e1)
    const = float(np.max(np.abs(harmonics.omega(2) * f - 1.0)))
    H2 = markov.hankel(table, e1, 2)
    try:
        pade.pade_pair(table.directional(e1), 2, "determinant")
        raised = False
    except pade.DegeneratePairError:
        raised = True
    rep = markov.hankel_positivity_report(table, 3)
    flagged = any(np.allclose(rep.directions[j], e1) for j, _ in rep.failures)
    return [
        Check("2 pi f_l(1, 0) = 1 for l <= 6", const <= 1e-12, f"max dev {const:.2e}"),
        Check("H_2 vanishes at (1, 0)", abs(H2) <= 1e-12, f"H_2 = {H2:.2e}"),
        Check("order-2 determinant pair is degenerate", raised, "DegeneratePairError" if raised else "no error"),
        Check("positivity report flags (1, 0)", (not rep.positive) and flagged, f"{len(rep.failures)} failures"),
    ]


def _run_polar(n, seed):
    n = n or 3
    mu = polar_positive()
    table = markov.coefficient_table(mu, 2 * n - 1)
    rep = markov.hankel_positivity_report(table, n, 4 * n - 1)
    rule = cub.build_cubature(mu, n)
    ex = cub.exactness_report(rule)
    pos = cub.positivity_check(rule, 100, seed)
    return [
        Check("Hankel-positive on the sphere grid", rep.positive, f"min H_n/scale^n {rep.min_ratio:.2e}"),
        Check("weights positive, nodes inside the disc",
              bool(np.all(rule.weights > 0) and np.all(np.linalg.norm(rule.points, axis=1) < 1.0)),
              f"{len(rule.weights)} points"),
        Check(f"exact to degree {2 * n - 1}", ex.max_rel_error <= 1e-8, f"max rel err {ex.max_rel_error:.2e}"),
        Check("T_n(p^2) >= 0 on 100 random squares", not pos.violations, f"{len(pos.violations)} violations"),
        Check("e-expansion identity", pos.e_expansion_max <= 1e-8, f"max gap {pos.e_expansion_max:.2e}"),
    ]


def _run_rotation(n, seed):
    out = []
    for k in (1, 2, 3):
        mu = rotation_invariant(k)
        nmax = 2 * k + 2
        table = markov.coefficient_table(mu, 2 * nmax - 2)
        rep = markov.kronecker_test(table, nmax)
        out.append(Check(f"k={k}: rational of degree {2 * k}", rep.rational and rep.detected_degree == 2 * k,
                         f"detected {rep.detected_degree}"))
    mu = rotation_invariant(2)
    rule = cub.build_cubature(mu, n or 2)
    first = rule.rules[0]
    same = all(np.allclose(g.nodes, first.nodes, atol=1e-12) and np.allclose(g.weights, first.weights, atol=1e-12)
               for g in rule.rules)
    out.append(Check("Gauss rules identical across directions", same, f"{len(rule.rules)} directions"))
    table = markov.coefficient_table(mu, 40)
    sign = markov.upper_halfplane_sign_check(table, 20, seed)
    out.append(Check("Im transform <= 0 in the upper half-plane", sign.passed, f"{len(sign.violations)} violations"))
    return out


_RUNS = {
    "ex0": _run_radial,
    "prop6-lebesgue": _run_segment,
    "ex1-degenerate": _run_degenerate,
    "polar-positive": _run_polar,
    "rotation-invariant": _run_rotation,
}


def reproduce(name, n=None, seed=0):
    """Run the canned checks for example ``name``; returns a list of :class:`Check`."""
    if name not in _RUNS:
        raise KeyError(f"unknown example {name!r}; choose from {', '.join(_RUNS)}")
    return _RUNS[name](n, seed)
