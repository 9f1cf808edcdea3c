"""
Pade pairs and Gauss rules along a direction
============================================

For a fixed direction the coefficient functions form a scalar moment
sequence.  Its diagonal Pade approximant ``Q/P`` has poles at Gauss nodes
and residues equal to Gauss weights.
"""
import math

import numpy as np

from markovpade import catalog, markov, pade

# The Legendre moments (2, 0, 2/3, 0) give the two-point Gauss-Legendre rule.
rule = pade.gauss_rule([2.0, 0.0, 2.0 / 3.0, 0.0], 2, 1.0)
print("nodes", rule.nodes, "expected", [-1 / math.sqrt(3), 1 / math.sqrt(3)])
print("weights", rule.weights)

# A planar density: pairs from the determinant and from the linear solve
# agree as rational functions.
table = markov.coefficient_table(catalog.polar_positive(), 5)
theta = np.array([0.6, 0.8])
dm = table.directional(theta)
a = pade.pade_pair(dm, 3, "determinant")
b = pade.pade_pair(dm, 3, "linear-solve")
z = 1.5 + 1.0j
print(f"determinant Q/P = {a.Q_raw(z) / a.P_raw(z):.12f}")
print(f"monic       Q/P = {b.approximant(z):.12f}")
print("remainder head (should be ~0):", np.abs(b.remainder_head).max())

# The denominators fit together into one polynomial in x.
A = pade.lift_A(table, 2)
zeta = 1.7j
lhs = A.eval_scaled(zeta, theta)
rhs = zeta ** 4 * pade.pade_pair(table.directional(theta, 3), 2, "determinant").P_raw(zeta)
print(f"A_2(zeta theta) = {lhs:.10f}, zeta^4 P(zeta) = {rhs:.10f}")

# Along the segment's own direction the order-2 denominator is identically zero.
table = markov.coefficient_table(catalog.segment_lebesgue(), 4)
try:
    pade.pade_pair(table.directional(catalog.DEGENERATE_DIRECTION), 2, "determinant")
except pade.DegeneratePairError as exc:
    print("degenerate:", exc)
