"""Energy of Schrodinger cat states built from translated thermal mass distributions.

Gaussian characteristic functionals on a discretized wave-number grid, their
star product, Wick moments, and closed-form dip analysis of the cat energy.
"""
from .analytic import (
    ASYMPTOTIC_DEPTH,
    DipReport,
    EnergyCurve,
    ScalingFit,
    cat_energy_closed,
    cat_energy_slope,
    coherent_cat_energy,
    coherent_dip,
    energy_curve,
    energy_of_h,
    find_dip,
    g_h,
    scaling_sweep,
)
from .catstate import CatParameters, cat_chi, cat_chi_via_star, lambda_param, overlap_mu
from .charfunc import (
    CharacteristicFunctional,
    GaussianTerm,
    star,
    star_terms,
    thermal_chi,
    translation_chi,
    translation_functional,
)
from .errors import (
    CatDipError,
    DegenerateOperatorError,
    DivergenceError,
    DomainError,
    GridMismatchError,
    NormalizationError,
    OracleError,
    PoleError,
    SymmetryError,
    TruncationError,
)
from .kernel import (
    DiagonalKernel,
    ModeFunction,
    WaveGrid,
    default_grid,
    diamond,
    energy_kernel,
    flat_kernel,
    gauss_legendre_grid,
    gaussian_mode,
    identity_kernel,
    make_grid,
    phase_kernel,
    trapezoid_grid,
)
from .observables import (
    QuarticKernel,
    cat_energy_numeric,
    energy_moment,
    fiducial_energy,
    normalized_cat_energy_numeric,
    quartic_moment,
)

__version__ = "0.1.0"
