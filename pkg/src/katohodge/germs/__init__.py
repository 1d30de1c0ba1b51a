"""Exact jet-level analysis of ``Id - gamma^*`` for polynomial contraction germs."""

from .gaussian import GaussianRational, gq
from .jets import JetForm, PolyGermMap, compose_germs, jet_basis, jet_dimension, pullback_jet, wedge
from .operator import (
    ContractionReport,
    NeumannResult,
    NotAContraction,
    OperatorReport,
    beta_matrix,
    contraction_report,
    gamma_star_matrix,
    iterate_pullback_check,
    neumann_batch,
    neumann_solve,
    random_contraction_germ,
)
from .battery import BatteryConfig, battery_germs, neumann_checks, operator_checks
