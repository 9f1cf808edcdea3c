"""
Hankel positivity on a direction grid
=====================================

Cubature needs every directional moment sequence ``f_l(theta)`` to be
strictly positive definite.  We check the Hankel determinants ``H_n`` on a
sphere grid for a positive planar density and for a measure concentrated on
a segment, which fails at one direction.
"""
import numpy as np

from markovpade import catalog, markov

for name in ("polar-positive", "ex1-degenerate"):
    mu = catalog.get_measure(name)
    table = markov.coefficient_table(mu, 6)
    rep = markov.hankel_positivity_report(table, 3)
    print(f"{name}: positive={rep.positive}, min H_n/scale^n = {rep.min_ratio:.2e}")
    if rep.failures:
        j, n = rep.failures[0]
        print(f"  first failure at theta = {np.round(rep.directions[j], 6)}, order {n}")

# On the segment measure every f_l equals 1/(2 pi) along (1, 0), so the
# directional sequence has rank one and H_2 vanishes there.
table = markov.coefficient_table(catalog.segment_lebesgue(), 6)
print("f_l(1, 0) * 2 pi:", np.round(2 * np.pi * table.values(catalog.DEGENERATE_DIRECTION), 14))
print("H_2(1, 0) =", markov.hankel(table, catalog.DEGENERATE_DIRECTION, 2))
