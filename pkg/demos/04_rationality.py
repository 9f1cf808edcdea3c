"""
Detecting a rational transform
==============================

A measure spread uniformly over ``k`` circles has a rational transform of
degree ``2k``; its directional Hankel matrices drop rank beyond that order.
A planar density with a continuous radial profile is not rational.
"""
from markovpade import catalog, markov

for k in (1, 2, 3):
    n_max = 2 * k + 2
    table = markov.coefficient_table(catalog.rotation_invariant(k), 2 * n_max - 2)
    rep = markov.kronecker_test(table, n_max)
    ratios = ", ".join(f"{r:.1e}" for r in rep.ratios.max(axis=0))
    print(f"k={k}: rational={rep.rational}, degree={rep.detected_degree}; max sigma_min/sigma_max per order: {ratios}")

table = markov.coefficient_table(catalog.polar_positive(), 10)
rep = markov.kronecker_test(table, 6)
print(f"polar density: rational={rep.rational}")

# For a rotation invariant measure the transform maps the upper half-plane
# into the lower one.
table = markov.coefficient_table(catalog.rotation_invariant(2), 40)
print("sign check passed:", markov.upper_halfplane_sign_check(table, 20, seed=0).passed)
