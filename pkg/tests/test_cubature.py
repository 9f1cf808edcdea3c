import io
import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from markovpade import catalog, harmonics, measures
from markovpade import cubature as cub
from markovpade.markov import coefficient_table
from markovpade.monomials import Poly
from markovpade.pade import lift_A, pade_pair
from markovpade.polyalg import GaussPoly


@pytest.fixture(scope="module")
def polar_rule():
    return cub.build_cubature(catalog.polar_positive(), 3)


def test_polar_rule_shape(polar_rule):
    rule = polar_rule
    assert all(len(g.nodes) == 3 for g in rule.rules)
    assert len(rule.rules) == len(rule.sphere.nodes)
    assert np.all(rule.weights > 0)
    assert np.all(np.linalg.norm(rule.points, axis=1) < 1.0)
    assert rule.sphere.exact_degree >= 11


def test_rotation_invariant_rules_coincide():
    rule = cub.build_cubature(catalog.rotation_invariant(2), 2)
    first = rule.rules[0]
    for g in rule.rules[1:]:
        assert np.allclose(g.nodes, first.nodes, atol=1e-12)
        assert np.allclose(g.weights, first.weights, atol=1e-12)


def test_degenerate_example_errors():
    mu = catalog.segment_lebesgue()
    with pytest.raises(cub.NotHankelPositiveError) as info:
        cub.build_cubature(mu, 2)
    assert info.value.report.failures
    with pytest.raises(cub.DegenerateDirectionError) as info:
        cub.build_cubature(mu, 2, check_positivity=False)
    assert np.allclose(info.value.directions[0], catalog.DEGENERATE_DIRECTION)
    assert len(info.value.reasons) == len(info.value.directions)


def test_apply_constant_is_mass(polar_rule):
    mass = measures.integrate_poly(catalog.polar_positive(), 1.0)
    assert cub.apply(polar_rule, 1.0) == pytest.approx(mass, rel=1e-13)
    assert mass == pytest.approx(math.pi, rel=1e-13)


@given(st.integers(0, 2**32 - 1))
def test_apply_random_polynomials(seed):
    rng = np.random.default_rng(seed)
    mu = catalog.polar_positive()
    rule = _polar_rule_cached()
    p = Poly.random(2, 5, rng)
    assert cub.apply(rule, p) == pytest.approx(measures.integrate_poly(mu, p), rel=1e-10, abs=1e-12)


_CACHE = {}


def _polar_rule_cached():
    if "r" not in _CACHE:
        _CACHE["r"] = cub.build_cubature(catalog.polar_positive(), 3)
    return _CACHE["r"]


def test_lift_annihilated(polar_rule):
    A = lift_A(polar_rule.table, 3)
    rng = np.random.default_rng(0)
    Apts = A(polar_rule.points)
    scale = np.abs(polar_rule.weights).sum() * cub._ball_max(A, 2, 1.0)
    assert np.abs(Apts).max() <= 1e-10 * cub._ball_max(A, 2, 1.0)
    for _ in range(20):
        v = Poly.random(2, 4, rng)
        val = np.dot(polar_rule.weights, Apts * v(polar_rule.points))
        assert abs(val) <= 1e-10 * scale * np.abs(v(polar_rule.points)).max()


def test_contour_matches_point_evaluation(polar_rule):
    pairs = [pade_pair(polar_rule.table.directional(th, 5), 3) for th in polar_rule.sphere.nodes]
    assert cub.apply_via_contour(pairs, polar_rule.sphere, 1.0, R=1.0) == pytest.approx(math.pi, rel=1e-12)
    rng = np.random.default_rng(1)
    mu = catalog.polar_positive()
    for _ in range(5):
        p = Poly.random(2, 5, rng)
        exact = measures.integrate_poly(mu, p)
        assert cub.apply_via_contour(pairs, polar_rule.sphere, p, R=1.0) == pytest.approx(exact, rel=1e-7, abs=1e-9)
        assert cub.apply_via_contour(pairs, polar_rule.sphere, p, R=1.0) == pytest.approx(
            cub.apply(polar_rule, p), rel=1e-12, abs=1e-13)


def test_contour_zero_measure(zero2):
    table = coefficient_table(zero2, 3)
    sphere = harmonics.sphere_rule(2, 7)
    pairs = [pade_pair(table.directional(th), 2) for th in sphere.nodes]
    assert cub.apply_via_contour(pairs, sphere, Poly.random(2, 3, np.random.default_rng(0)), R1=2.0) == 0.0


def test_contour_pole_warning(polar_rule):
    pairs = [pade_pair(polar_rule.table.directional(th, 5), 3) for th in polar_rule.sphere.nodes]
    R1 = abs(polar_rule.rules[0].nodes[-1]) * (1 + 1e-9)
    with pytest.warns(RuntimeWarning, match="pole"):
        cub.apply_via_contour(pairs, polar_rule.sphere, 1.0, R1=R1, contour_points=4096)


def test_contour_validation(polar_rule):
    pairs = [pade_pair(polar_rule.table.directional(th, 5), 3) for th in polar_rule.sphere.nodes]
    with pytest.raises(ValueError):
        cub.apply_via_contour(pairs, polar_rule.sphere, 1.0)
    with pytest.raises(ValueError):
        cub.apply_via_contour(pairs, polar_rule.sphere, 1.0, R=1.0, contour_points=8)


def test_exactness_row_count(polar_rule):
    rep = cub.exactness_report(polar_rule)
    assert len(rep.guaranteed_rows) == 21  # 1 + 2 * (1 + 2 + 3 + 4 + 5) in the plane
    assert all(r.degree == 6 for r in rep.rows if not r.guaranteed)
    assert rep.max_rel_error <= 1e-8
    assert rep.oracle == "measure"


def test_exactness_ignores_zero_weight_atoms():
    t = 2 * math.pi * np.arange(16) / 16
    circ = np.stack([np.cos(t), np.sin(t)], axis=-1)
    pts = np.concatenate([0.5 * circ, 0.9 * circ])
    w = np.ones(32)
    mu = measures.DiscreteMeasure(2, 1.0, pts, w)
    mu0 = measures.DiscreteMeasure(2, 1.0, np.vstack([pts, [[0.3, 0.2]]]), np.append(w, 0.0))
    a = cub.exactness_report(cub.build_cubature(mu, 2))
    b = cub.exactness_report(cub.build_cubature(mu0, 2))
    assert [r.cubature for r in a.rows] == pytest.approx([r.cubature for r in b.rows], rel=1e-13, abs=1e-15)
    assert a.max_rel_error <= 1e-8


@pytest.mark.parametrize("name,d", [("polar-positive", 2), ("rotation-invariant", 2), ("ex0", 3)])
@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_exactness_through_order_five(name, d, n):
    mu = catalog.get_measure(name)
    if name == "rotation-invariant" and n > 3:
        # rank-4 directional sequences: no real Gauss rule of order >= 4
        with pytest.raises(cub.CubatureError):
            cub.build_cubature(mu, n)
        return
    rule = cub.build_cubature(mu, n)
    assert rule.d == d
    assert cub.exactness_report(rule, extra_degree=False).max_rel_error <= 1e-8


def test_table_oracle(polar_rule):
    table = coefficient_table(catalog.polar_positive(), 7)
    rule = cub.build_cubature(table, 3)
    rep = cub.exactness_report(rule)
    assert rep.oracle == "table"
    assert rep.max_rel_error <= 1e-8
    assert np.allclose(rule.points, polar_rule.points) and np.allclose(rule.weights, polar_rule.weights)


def test_table_too_short():
    table = coefficient_table(catalog.polar_positive(), 3)
    with pytest.raises(cub.CubatureError):
        cub.build_cubature(table, 3)


def test_positivity_check(polar_rule):
    rep = cub.positivity_check(polar_rule, 100, 0)
    assert rep.passed and not rep.violations
    assert rep.schmudgen_checked and rep.schmudgen_max <= 1e-8
    assert rep.e_expansion_max <= 1e-8
    assert rep.min_normalized > 0
    assert "no representing measure" in rep.note


def test_positivity_check_is_seeded(polar_rule):
    a = cub.positivity_check(polar_rule, 10, 3)
    b = cub.positivity_check(polar_rule, 10, 3)
    assert a.min_normalized == b.min_normalized


def test_exports(polar_rule):
    obj = json.loads(cub.rule_to_json(polar_rule))
    assert obj["n"] == 3 and obj["d"] == 2
    assert np.allclose(obj["weights"], polar_rule.weights)
    buf = io.StringIO()
    cub.write_rule_csv(polar_rule, buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "x1,x2,weight"
    back = np.loadtxt(io.StringIO("\n".join(lines[1:])), delimiter=",")
    assert np.array_equal(back[:, :2], polar_rule.points)
    assert np.array_equal(back[:, 2], polar_rule.weights)


def test_gauss_basis_polynomial_input(polar_rule):
    u = GaussPoly(2, {(1, 1, 1): 1.0, (0, 2, 2): -0.5})
    assert cub.apply(polar_rule, u) == pytest.approx(
        measures.integrate_poly(catalog.polar_positive(), u), rel=1e-10, abs=1e-13)
