import math
import warnings

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from markovpade import catalog, harmonics, markov, measures, pade
from markovpade.markov import DirectionalMoments, coefficient_table
from markovpade.pade import (
    DegeneratePairError,
    RootDefectError,
    choose_R1,
    gauss_rule,
    lift_A,
    lift_B,
    pade_pair,
)
from markovpade.polyalg import GaussPoly, MomentSeq, laurent_product_head

from conftest import random_discrete, random_unit

LEGENDRE = [2.0, 0.0, 2 / 3, 0.0, 2 / 5, 0.0]


def test_order_one_pair():
    f = [2.0, 0.6, 0.3]
    det = pade_pair(f, 1, "determinant")
    assert np.allclose(det.P_raw.coeffs, [-0.6, 2.0])  # f_0 zeta - f_1
    assert np.allclose(det.P.coeffs, [-0.3, 1.0])
    assert np.allclose(det.Q_raw.coeffs, [4.0])  # p_1 f_0
    assert np.allclose(det.Q.coeffs, [2.0])
    assert abs(det.remainder_head[0]) <= 1e-15
    lin = pade_pair(f, 1)
    assert np.allclose(lin.P.coeffs, det.P.coeffs)


def test_legendre_denominator():
    pr = pade_pair(LEGENDRE, 2)
    assert pr.normal
    assert np.allclose(pr.P.coeffs, [-1 / 3, 0.0, 1.0])
    assert pr.hankel == pytest.approx(4 / 3)
    det = pade_pair(LEGENDRE, 2, "determinant")
    assert np.allclose(det.P_raw.coeffs, pr.hankel * pr.P.coeffs)


def test_singular_sequence_uses_least_squares():
    pr = pade_pair([1.0] * 4, 2)
    assert not pr.normal
    assert np.allclose(pr.P.coeffs, [-0.5, -0.5, 1.0])
    assert np.allclose(laurent_product_head(pr.P, [1.0] * 4, 2), 0.0, atol=1e-15)


def test_degenerate_direction_raises(line_measure):
    table = coefficient_table(line_measure, 6)
    dm = table.directional(np.array([1.0, 0.0]))
    with pytest.raises(DegeneratePairError) as info:
        pade_pair(dm, 2, "determinant")
    assert np.allclose(info.value.theta, [1.0, 0.0])
    for n in (3,):
        with pytest.raises(DegeneratePairError):
            pade_pair(dm, n, "determinant")


def test_pair_validation():
    with pytest.raises(ValueError):
        pade_pair([1.0, 0.5, 0.2], 2)
    with pytest.raises(ValueError):
        pade_pair(LEGENDRE, 1, "continued-fraction")


@given(st.integers(0, 2**32 - 1), st.integers(1, 4))
def test_pade_property_on_random_discrete_measures(seed, n):
    rng = np.random.default_rng(seed)
    mu = random_discrete(rng)
    table = coefficient_table(mu, 2 * n - 1)
    for th in harmonics.sphere_rule(2, 4 * n - 1).nodes:
        dm = table.directional(th)
        pr = pade_pair(dm, n)
        if pr.normal:
            assert pr.P.degree == n
            assert np.abs(pr.remainder_head).max() <= 1e-10 * dm.scale


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_constructions_agree(n, polar):
    table = coefficient_table(polar, 2 * n - 1)
    rng = np.random.default_rng(n)
    for _ in range(3):
        dm = table.directional(random_unit(rng, 2))
        a = pade_pair(dm, n, "determinant")
        b = pade_pair(dm, n, "linear-solve")
        z = 1.5 * np.exp(1j * rng.uniform(0, 2 * math.pi, 10))
        ra, rb = a.Q_raw(z) / a.P_raw(z), b.approximant(z)
        assert np.allclose(ra, rb, rtol=1e-9, atol=0)


def test_approximant_exact_for_finite_atomic_sequence():
    # rotation-invariant measure on two circles: directional moments are those
    # of four symmetric atoms, so the order-4 approximant is exact
    table = coefficient_table(catalog.rotation_invariant(2), 30)
    dm = table.directional(np.array([0.0, 1.0]))
    for n in (4, 5):
        pr = pade_pair(DirectionalMoments(None, dm.values.values[: 2 * n]), n)
        head = laurent_product_head(pr.P, dm.values.values, 30 - n)
        assert np.abs(head).max() <= 1e-10 * dm.scale


def test_gauss_rule_examples():
    g = gauss_rule(LEGENDRE[:4], 2, 1.0)
    assert np.allclose(g.nodes, [-1 / math.sqrt(3), 1 / math.sqrt(3)], atol=1e-12)
    assert np.allclose(g.weights, [1.0, 1.0], atol=1e-12)
    one = gauss_rule([1.0, 0.4], 1, 1.0)
    assert np.allclose(one.nodes, [0.4]) and np.allclose(one.weights, [1.0])
    sym = gauss_rule([1.0, 0.0, 1.0, 0.0], 2, 1.5)
    assert np.allclose(sym.nodes, [-1.0, 1.0]) and np.allclose(sym.weights, [0.5, 0.5])


@given(st.lists(st.floats(-0.9, 0.9), min_size=1, max_size=5), st.integers(0, 1000))
def test_gauss_rule_reproduces_moments(xs, seed):
    xs = np.unique(np.round(xs, 2))
    n = len(xs)
    if n > 1 and np.min(np.diff(xs)) < 0.1:
        return
    w = np.random.default_rng(seed).uniform(0.2, 1.0, n)
    f = np.array([np.dot(w, xs ** l) for l in range(2 * n)])
    assume(pade_pair(f, n).normal)  # clustered atoms can fall below the normality tolerance
    g = gauss_rule(f, n, 1.0)
    for l in range(2 * n):
        assert np.dot(g.weights, g.nodes ** l) == pytest.approx(f[l], rel=1e-9, abs=1e-9 * np.abs(f).max())


def test_gauss_rule_defects():
    with pytest.raises(RootDefectError):
        gauss_rule([1.0, 0.0, -1.0, 0.0], 2, 2.0)  # denominator zeta^2 + 1
    with pytest.raises(RootDefectError):
        gauss_rule([1.0, 1.0, 1.0, 1.0], 2, 2.0)  # not normal
    f = [0.5 ** l - 0.5 * (-0.5) ** l for l in range(4)]
    with pytest.warns(RuntimeWarning):
        gauss_rule(f, 2, 1.0)


def test_choose_R1():
    pr = pade_pair(LEGENDRE, 2)
    assert choose_R1([pr], 1.0) == 2.0
    pr1 = pade_pair([1.0, 0.7], 1)
    assert choose_R1([pr1], 1.0) == 2.0
    with pytest.raises(ValueError):
        choose_R1([pade_pair([1.0] * 4, 2)], 1.0)


def test_lift_A_order_one(polar):
    table = coefficient_table(polar, 3)
    A = lift_A(table, 1)
    F0, F1 = markov.homog_lift(table, 0), markov.homog_lift(table, 1)
    pts = np.random.default_rng(0).normal(size=(5, 2))
    expected = F0(pts) * np.sum(pts ** 2, axis=1) - F1(pts)
    assert np.allclose(A(pts), expected, atol=1e-13)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_lift_identities(n, polar):
    table = coefficient_table(polar, 2 * n - 1)
    A, B = lift_A(table, n), lift_B(table, n)
    assert A.degree <= n * n + n and B.degree <= n * n + n - 2
    rng = np.random.default_rng(n)
    for _ in range(5):
        th = random_unit(rng, 2)
        z = 1.7 * np.exp(1j * rng.uniform(0, 2 * math.pi))
        pr = pade_pair(table.directional(th), n, "determinant")
        a = z ** (n * n) * pr.P_raw(z)
        b = z ** (n * n - 1) * pr.Q_raw(z)
        assert abs(A.eval_scaled(z, th) - a) <= 1e-9 * abs(a)
        assert abs(B.eval_scaled(z, th) - b) <= 1e-9 * abs(b)


def test_lift_in_three_dimensions():
    table = coefficient_table(catalog.radial_lebesgue(), 3)
    A = lift_A(table, 2)
    th = np.array([0.0, 0.6, 0.8])
    z = 1.7j
    pr = pade_pair(table.directional(th), 2, "determinant")
    assert A.eval_scaled(z, th) == pytest.approx(z ** 4 * pr.P_raw(z), rel=1e-10)


def test_lift_edge_cases(zero2, polar):
    table = coefficient_table(zero2, 5)
    assert lift_A(table, 2).is_zero()
    with pytest.raises(ValueError):
        lift_A(coefficient_table(polar, 13), 6)
