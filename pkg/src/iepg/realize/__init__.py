"""Constructions of matrices in S(G) with prescribed spectra."""

from .cycles import circulant_seed, cycle_realize, cycle_spectrum_check
from .generic import (
    DEFAULT_T_SCHEDULE,
    MARGIN_FLOOR,
    BlockRealization,
    NowhereZeroError,
    RealizationError,
    complete_realize,
    eigenbasis_for_test_vectors,
    generic_realize,
    nowhere_zero_eigenbasis,
    random_orthogonal,
    realize_01_multiplicity,
)
from .homotopy import (
    DecayTable,
    ExponentSchedule,
    decay_ratio_table,
    exponent_schedule,
    tree_eigenvectors,
    tree_homotopy_solve,
)
from .jacobi import jacobi_from_spectrum
