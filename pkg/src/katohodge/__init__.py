"""Hodge, Betti, Bott-Chern and Aeppli numbers of Kato manifolds from their
modification data, with independent cross-checks."""

from .diamond import (
    BettiVector,
    HodgeDiamond,
    PartialDolbeaultTable,
    PartialHermitianTable,
    check_decomposition,
    hodge_sums,
    render_diamond,
    serre_dual,
    standard_table,
)
from .kato import KatoInput, blowup_points_kato, kato_numbers
from .modifications import ModificationSequence, builtin_center, evaluate_sequence
from .toric import cone_counts, orthant_fan, star_subdivide, toric_kato_numbers

__version__ = "0.1.0"
