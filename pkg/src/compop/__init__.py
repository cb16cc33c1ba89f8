"""Composition operators ``f -> f∘phi`` on the Schwartz space of rapidly decreasing functions.

Symbols are parsed from a small expression grammar; the package classifies
power boundedness and mean ergodicity, runs orbit and Cesaro experiments and
builds spectral objects (eigenfunctions, resolvents, Zak witnesses).
"""

__version__ = "0.1.0"

from .errors import DomainError, ParseError, PreconditionError
from .symbols import SymbolExpr, compose, parse_symbol
from .jets import Jet, LogJet, eval_jet, iterate_eval
from .poly import Poly, fixed_points, isolate_real_roots, poly_from_expr, sturm_root_count
from .grid import DEFAULT_GRID, PROBE_GRID, GridSpec
from .monotone import Monotonicity, monotonicity_classify
from .schwartz import SchwartzFn, bump, gaussian, hermite, make_builtin, plateau
from .dynamics import cesaro_mean, orbit_seminorm_profile, phi_star, seminorm
from .involution import InvolutionSymbol, involution_from_even
from .classifier import ClassificationReport, ClassifierConfig, check_symbol_conditions, classify, non_me_witness
from .spectral import (
    PiecewiseFn,
    SpectrumReport,
    dilation_nonsurjectivity_witness,
    eigenfunction_sqrt,
    injective_point_spectrum,
    neumann_resolvent,
    power_bounded_resolvent,
    translation_spectrum_witness,
    zak_transform,
)
