"""Symmetric matrices with prescribed graphs and spectra."""

from .certificate import CertificationError, RealizationCertificate, certify, verify
from .graphcore import Graph, GraphError, join, make_family, partial_join
from .joinbuild import join_two_eigenvalues, partial_join_distinct, partial_join_extend
from .multiplicity import compatible, construct_diff2, fits, is_multiplicity_matrix, search_compatible_01
from .realize import cycle_realize, generic_realize, jacobi_from_spectrum
from .ssp import ssp_check, ssp_edge_extend

__all__ = [
    "CertificationError", "Graph", "GraphError", "RealizationCertificate", "certify", "compatible",
    "construct_diff2", "cycle_realize", "fits", "generic_realize", "is_multiplicity_matrix",
    "jacobi_from_spectrum", "join", "join_two_eigenvalues", "make_family", "partial_join",
    "partial_join_distinct", "partial_join_extend", "search_compatible_01", "ssp_check",
    "ssp_edge_extend", "verify",
]
