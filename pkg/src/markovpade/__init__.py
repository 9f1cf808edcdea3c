"""Multivariate Markov transforms, direction-wise Pade approximation and
Gauss-type cubature for measures on R^2 and R^3."""
from . import catalog, cubature, harmonics, markov, measures, pade, polyalg
from .cubature import apply, apply_via_contour, build_cubature, exactness_report, positivity_check
from .markov import (
    CoefficientTable,
    DirectionalMoments,
    coefficient_table,
    eval_kernel,
    eval_real,
    eval_series,
    hankel,
    hankel_poly,
    hankel_positivity_report,
    homog_lift,
    kronecker_test,
    upper_halfplane_sign_check,
)
from .measures import (
    DiscreteMeasure,
    PolarDensityMeasure,
    RadialAtoms,
    RadialDensity,
    RadialProductMeasure,
    RadialTimesDiracMeasure,
    distributed_moment,
    emit_measure,
    integrate_poly,
    parse_measure,
)
from .monomials import Poly
from .pade import choose_R1, gauss_rule, lift_A, lift_B, pade_pair
from .polyalg import GaussPoly, HomogPoly, MomentSeq, UniPoly

__version__ = "0.1.0"
