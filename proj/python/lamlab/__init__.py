"""Relaxed two-slip energies, laminates and homogenization (C++ core)."""

from ._lamlab import (
    DomainError,
    Error,
    InvalidSlipSystem,
    OffManifold,
    PreconditionError,
    SlipSystem,
    bc_to_matrix,
    chi,
    classify,
    decompose,
    homogenize_sweep,
    run_cli,
    w_condensed,
    w_hom,
    w_hom_scalar,
    wlc_numeric,
)

__all__ = [
    "DomainError",
    "Error",
    "InvalidSlipSystem",
    "OffManifold",
    "PreconditionError",
    "SlipSystem",
    "bc_to_matrix",
    "chi",
    "classify",
    "decompose",
    "homogenize_sweep",
    "run_cli",
    "w_condensed",
    "w_hom",
    "w_hom_scalar",
    "wlc_numeric",
]
