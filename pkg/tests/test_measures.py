import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from numpy.polynomial import legendre as npleg

from markovpade import harmonics, measures
from markovpade.measures import (
    DiscreteMeasure,
    PolarDensityMeasure,
    RadialAtoms,
    RadialDensity,
    RadialProductMeasure,
    RadialTimesDiracMeasure,
    SchemaError,
    distributed_moment,
    emit_measure,
    integrate_poly,
    mass_bound,
    parse_measure,
)
from markovpade.monomials import Poly
from markovpade.polyalg import GaussPoly

from conftest import random_discrete


def _polar_grid(mu, g, nr=40, nt=64):
    """Brute-force tensor quadrature of g over the polar density."""
    x, w = npleg.leggauss(nr)
    r = 0.5 * mu.R * (x + 1)
    wr = 0.5 * mu.R * w
    t = 2 * math.pi * np.arange(nt) / nt
    rr, tt = np.meshgrid(r, t, indexing="ij")
    dens = mu.w0(rr) + (mu.w1(rr) if mu.w1 is not None else 0.0) * np.cos(tt)
    pts = np.stack([rr * np.cos(tt), rr * np.sin(tt)], axis=-1)
    return float(np.sum(wr[:, None] * (2 * math.pi / nt) * g(pts) * dens * rr))


def test_radial_product_harmonic_moments_are_exactly_zero():
    mu = RadialProductMeasure(3, 1.0, RadialDensity("lebesgue", (0.0, 1.0)))
    for s in range(3):
        for k in range(1, 4):
            for m in range(1, 2 * k + 2):
                assert distributed_moment(mu, s, k, m) == 0.0


def test_zero_measure_moments(zero2):
    assert distributed_moment(zero2, 2, 1, 2) == 0.0
    assert integrate_poly(zero2, Poly.constant(2)) == 0.0


def test_polar_moments_against_brute_force(polar):
    for s in range(3):
        for k in range(0, 4):
            for m in range(1, harmonics.dim_harmonic(2, k) + 1):
                ref = _polar_grid(polar, lambda x: GaussPoly(2, {(s, k, m): 1.0})(x.reshape(-1, 2)).reshape(x.shape[:-1]))
                assert distributed_moment(polar, s, k, m) == pytest.approx(ref, abs=1e-12)
    # closed forms for w0 = 1, w1 = 1/2
    assert distributed_moment(polar, 1, 0, 1) == pytest.approx(math.sqrt(2 * math.pi) / 4)
    assert distributed_moment(polar, 1, 1, 1) == pytest.approx(math.sqrt(math.pi) * 0.5 / 5)
    assert distributed_moment(polar, 0, 2, 1) == 0.0


def test_integrate_poly_examples():
    mu = DiscreteMeasure(2, 1.0, [[0.5, 0.0], [0.0, -0.2]], [1.5, -0.25])
    assert integrate_poly(mu, Poly.constant(2)) == pytest.approx(1.25)
    line = RadialTimesDiracMeasure(3, 1.0, RadialDensity("lebesgue", (0.0, 1.0)))
    assert integrate_poly(line, Poly.monomial((2, 0, 0))) == pytest.approx(1 / 3)
    r0 = 0.7
    atom = DiscreteMeasure(3, 1.0, [[0.0, r0, 0.0]], [1.0])
    r2 = Poly.monomial((2, 0, 0)) + Poly.monomial((0, 2, 0)) + Poly.monomial((0, 0, 2))
    assert integrate_poly(atom, r2) == pytest.approx(r0 ** 2)
    assert integrate_poly(atom, [((0, 2, 0), 1.0)]) == pytest.approx(r0 ** 2)


@pytest.mark.parametrize(
    "mu",
    [
        RadialProductMeasure(2, 1.0, RadialAtoms([0.3, 0.9], [1.0, 0.5])),
        RadialProductMeasure(3, 1.0, RadialDensity("power", (0.0, 1.0), p=2.0)),
        RadialTimesDiracMeasure(3, 1.0, RadialDensity("lebesgue", (-0.5, 1.0))),
        RadialTimesDiracMeasure(2, 1.0, RadialAtoms([-0.4, 0.8], [1.0, 2.0])),
        DiscreteMeasure(3, 1.0, [[0.1, 0.2, -0.3], [0.0, 0.0, 0.0], [0.5, -0.5, 0.5]], [1.0, 2.0, -0.5]),
    ],
)
def test_integrate_poly_agrees_with_distributed_moment(mu):
    for s in range(3):
        for k in range(4):
            for m in range(1, harmonics.dim_harmonic(mu.d, k) + 1):
                a = integrate_poly(mu, {(s, k, m): 1.0})
                b = distributed_moment(mu, s, k, m)
                assert abs(a - b) <= 1e-12 * max(1.0, abs(b))


def test_polar_integrate_poly_against_brute_force(polar):
    rng = np.random.default_rng(7)
    p = Poly.random(2, 6, rng)
    ref = _polar_grid(polar, lambda x: p(x))
    assert integrate_poly(polar, p) == pytest.approx(ref, rel=1e-12, abs=1e-13)


def test_sphere_monomial_integral_against_rule():
    rule = harmonics.sphere_rule(3, 12)
    for e in [(0, 0, 0), (2, 0, 0), (2, 2, 2), (4, 0, 2), (1, 2, 0)]:
        num = rule.integrate(np.prod(rule.nodes ** np.array(e), axis=1))
        assert measures.sphere_monomial_integral(3, e) == pytest.approx(num, abs=1e-13)


@given(st.integers(0, 2**32 - 1))
def test_discrete_moments_linear_and_additive(seed):
    rng = np.random.default_rng(seed)
    a = random_discrete(rng, d=3, signed=True)
    b = random_discrete(rng, d=3, signed=True)
    both = DiscreteMeasure(3, 1.0, np.vstack([a.points, b.points]), np.concatenate([a.weights, b.weights]))
    scaled = DiscreteMeasure(3, 1.0, a.points, 2.5 * a.weights)
    for s, k, m in [(0, 0, 1), (1, 2, 3), (0, 3, 7), (2, 1, 2)]:
        ca, cb = distributed_moment(a, s, k, m), distributed_moment(b, s, k, m)
        assert distributed_moment(both, s, k, m) == pytest.approx(ca + cb, rel=1e-12, abs=1e-14)
        assert distributed_moment(scaled, s, k, m) == pytest.approx(2.5 * ca, rel=1e-12, abs=1e-14)


def test_density_registry():
    tab = RadialDensity("table", table=([0.0, 0.5, 1.0], [0.0, 1.0, 0.0]))
    assert tab.moment(0) == pytest.approx(0.5)
    assert RadialDensity("power", (0.0, 1.0), p=3.0).moment(2) == pytest.approx(1 / 6)
    assert RadialDensity("lebesgue", (0.0, 2.0), scale=3.0).moment(1) == pytest.approx(6.0)
    with pytest.raises(ValueError):
        RadialDensity("gaussian")


def test_mass_bounds(polar):
    assert mass_bound(polar) == pytest.approx(2 * math.pi * 0.75)
    assert mass_bound(DiscreteMeasure(2, 1.0, [[0.1, 0.1], [0.2, 0.0]], [1.0, -2.0])) == 3.0
    assert mass_bound(RadialProductMeasure(2, 1.0, RadialAtoms([0.5], [2.0]))) == pytest.approx(4 * math.pi)


def test_support_violations():
    with pytest.raises(ValueError):
        DiscreteMeasure(2, 1.0, [[1.5, 0.0]], [1.0])
    with pytest.raises(ValueError):
        RadialProductMeasure(2, 1.0, RadialDensity("lebesgue", (0.0, 2.0)))


def test_integrate_function_matches_discrete_sum():
    mu = DiscreteMeasure(2, 1.0, [[0.2, 0.1], [-0.3, 0.4]], [1.0, 2.0])
    g = lambda x: np.exp(x[..., 0]) * x[..., 1]
    assert measures.integrate_function(mu, g) == pytest.approx(np.exp(0.2) * 0.1 + 2 * np.exp(-0.3) * 0.4)


# -- JSON ------------------------------------------------------------------


def test_parse_examples():
    mu = parse_measure('{"d":2,"R":1,"variant":"discrete","atoms":[[[0.5,0.0],1.0]]}')
    assert isinstance(mu, DiscreteMeasure) and len(mu.weights) == 1
    line = parse_measure(
        '{"d":3,"R":1,"variant":"radial_times_dirac","radial":{"density":"lebesgue","interval":[0,1]}}'
    )
    assert isinstance(line, RadialTimesDiracMeasure) and line.d == 3
    assert integrate_poly(line, Poly.monomial((2, 0, 0))) == pytest.approx(1 / 3)


@pytest.mark.parametrize(
    "text, path",
    [
        ('{"d":2,"R":1,"variant":"cloud"}', "$.variant"),
        ('{"d":4,"R":1,"variant":"discrete","atoms":[]}', "$.d"),
        ('{"d":2,"R":1,"variant":"discrete","atoms":[[[0.5],1.0]]}', "$.atoms[0][0]"),
        ('{"d":2,"R":1,"variant":"radial_product","radial":{"density":"lebesgue"}}', "$.radial.interval"),
        ('{"d":2,"R":1,"variant":"radial_product","radial":{"density":"bump","interval":[0,1]}}', "$.radial.density"),
        ('{"d":2,"R":1,"variant":"discrete"}', "$.atoms"),
        ("", "$"),
    ],
)
def test_schema_errors_carry_paths(text, path):
    with pytest.raises(SchemaError) as info:
        parse_measure(text)
    assert info.value.path == path


def test_hankel_hypothesis_assertion():
    good = {"d": 2, "R": 1, "variant": "polar_density", "assert_hankel_positive": True,
            "w0": {"density": "lebesgue", "interval": [0, 1]},
            "w1": {"density": "lebesgue", "interval": [0, 1], "scale": 0.5}}
    assert parse_measure(json.dumps(good)).check_hankel_hypothesis()
    bad = dict(good, w1={"density": "lebesgue", "interval": [0, 1], "scale": 1.5})
    with pytest.raises(SchemaError):
        parse_measure(json.dumps(bad))


@pytest.mark.parametrize(
    "mu",
    [
        DiscreteMeasure(3, 2.0, [[0.1, 0.2, 0.3]], [0.5]),
        RadialProductMeasure(2, 1.0, RadialAtoms([0.3, 0.9], [1.0, 0.5])),
        RadialTimesDiracMeasure(3, 1.0, RadialDensity("power", (0.0, 1.0), p=1.5, scale=2.0)),
        PolarDensityMeasure(1.0, RadialDensity("table", table=([0, 0.5, 1], [1, 2, 1])),
                            RadialDensity("lebesgue", (0.0, 1.0), scale=0.5)),
        PolarDensityMeasure(1.0, RadialDensity("lebesgue", (0.0, 1.0))),
    ],
)
def test_json_round_trip(mu):
    text = emit_measure(mu)
    again = parse_measure(text)
    assert emit_measure(again) == text
    for key in [(0, 0, 1), (1, 1, 1), (1, 2, 2)]:
        assert distributed_moment(again, *key) == distributed_moment(mu, *key)
