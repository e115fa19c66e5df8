"""Exact and statistical moments of entanglement entropy in random bipartite states."""

__version__ = "0.1.0"

from .dims import Dims, as_dims
from .errors import ConvergenceError, DegenerateParameterError, DomainError
from .exactnum import GAMMA, ONE, PI2, ZERO, BigRational, SymExpr, sym_eval, to_float
from .moments import (
    IA_closed,
    IB_closed,
    assemble_E_T2,
    induced_T2_target,
    induced_T_mean,
    moment_report,
    page_mean,
    variance_S_via_relation,
    vpo_variance,
)
from .polygamma import psi0_int, psi1_int

__all__ = [
    "BigRational",
    "ConvergenceError",
    "DegenerateParameterError",
    "Dims",
    "DomainError",
    "GAMMA",
    "IA_closed",
    "IB_closed",
    "ONE",
    "PI2",
    "SymExpr",
    "ZERO",
    "as_dims",
    "assemble_E_T2",
    "induced_T2_target",
    "induced_T_mean",
    "moment_report",
    "page_mean",
    "psi0_int",
    "psi1_int",
    "sym_eval",
    "to_float",
    "variance_S_via_relation",
    "vpo_variance",
]
