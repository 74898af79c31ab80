"""Losslessness analysis for feedback delay networks."""

from .charpoly import charpoly_oracle, generalized_charpoly, is_self_inversive, principal_minor, zeros_poly
from .model import FdnError, FdnSystem, Poly, delay_matrix_eval, system_order, transfer_eval
from .roots import RootSet, cohn_is_unimodular, is_lossless_poly, poly_roots
from .structure import BlockDecomposition, adjacency, decompose, is_irreducible
from .unilossless import (
    UnilosslessReport,
    diagonal_conjugate,
    find_witness,
    io_gain_transform,
    is_unilossless,
    rotate_feedback,
    unitary_similarity_certificate,
)

__all__ = [
    "BlockDecomposition",
    "FdnError",
    "FdnSystem",
    "Poly",
    "RootSet",
    "UnilosslessReport",
    "adjacency",
    "charpoly_oracle",
    "cohn_is_unimodular",
    "decompose",
    "delay_matrix_eval",
    "diagonal_conjugate",
    "find_witness",
    "generalized_charpoly",
    "io_gain_transform",
    "is_irreducible",
    "is_lossless_poly",
    "is_self_inversive",
    "is_unilossless",
    "poly_roots",
    "principal_minor",
    "rotate_feedback",
    "system_order",
    "transfer_eval",
    "unitary_similarity_certificate",
    "zeros_poly",
]
