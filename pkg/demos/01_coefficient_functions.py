"""
Coefficient functions of a measure
==================================

The transform of a compactly supported measure expands at infinity as
``sum_l f_l(theta) zeta^(-l-1)``.  Each ``f_l`` is a finite sum of spherical
harmonics.  Here we compute them for two built-in measures and compare with
closed forms.
"""
import numpy as np

from markovpade import catalog, harmonics, markov, measures

# Lebesgue measure on [0, 1] carried by the first axis of the plane.
mu = catalog.segment_lebesgue()
table = markov.coefficient_table(mu, 8)

# Along the direction e^{it} the coefficient functions have a closed form.
t = np.linspace(0.2, 2.9, 5)
theta = np.stack([np.cos(t), np.sin(t)], axis=-1)
vals = table.values(theta)
for l in (0, 3, 8):
    closed = np.sin((l + 1) * t) / ((l + 1) * np.sin(t)) / harmonics.omega(2)
    print(f"l={l}: max |f_l - closed form| = {np.abs(vals[:, l] - closed).max():.1e}")

# A truncated series evaluates the transform with a rigorous tail bound.  For
# a finite sum of atoms the kernel gives the exact value to compare with.
atoms = measures.DiscreteMeasure(2, 1.0, np.array([[0.3, -0.4], [0.0, 0.9], [-0.5, 0.1]]), np.array([1.0, 0.5, 2.0]))
zeta = 2.0 + 0.5j
value, bound = markov.eval_series(markov.coefficient_table(atoms, 40), zeta, theta[1])
direct = markov.eval_kernel(atoms, zeta, theta[1])
print(f"series {value:.12f}  kernel {direct:.12f}  |gap| {abs(value - direct):.1e} <= bound {bound:.1e}")

# A rotation invariant measure in R^3: odd coefficients vanish and the even
# ones do not depend on the direction.
table = markov.coefficient_table(catalog.radial_lebesgue(), 6)
grid = harmonics.sphere_rule(3, 5).nodes
print("f_0..f_6 at two directions:")
print(np.round(table.values(grid[:2]), 12))
print("expected even values:", [round(1 / (l + 1), 12) for l in range(0, 7, 2)])
