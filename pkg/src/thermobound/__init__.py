"""Thermodynamic bound on two-state discrimination: bounds, work ledger, gas simulator."""

from .bounds import (
    BoundResult,
    ConvergenceError,
    binary_entropy,
    bound_table,
    delta_hol,
    delta_qi,
    delta_th,
    inverse_binary_entropy_upper,
    mutual_information_gas_memory,
)
from .cycle import CycleParams, WorkLedger, ledger, second_law_margin
from .gassim import SimConfig, SimReport, simulate_cycle
from .qstate import StatePair, eig2, mixture_spectrum, von_neumann_entropy_even_mixture

__version__ = "0.1.0"
