"""Hopf bifurcation analysis of the four-compartment host-parasitoid model."""

from ._core import (
    HpbifError,
    ModelParams,
    classify,
    classify_hopf,
    delta,
    eigenvalues_at_A4,
    equilibria,
    find_periodic_orbit,
    find_tangency,
    integrate,
    jacobian,
    k1_max,
    lyapunov_l1,
    reference_hopf_point,
    reproduction_numbers,
    solve_sigma_k2,
    table_parameters,
    trace_sigma,
    vector_field,
)

__all__ = [
    "HpbifError",
    "ModelParams",
    "classify",
    "classify_hopf",
    "delta",
    "eigenvalues_at_A4",
    "equilibria",
    "find_periodic_orbit",
    "find_tangency",
    "integrate",
    "jacobian",
    "k1_max",
    "lyapunov_l1",
    "reference_hopf_point",
    "reproduction_numbers",
    "solve_sigma_k2",
    "table_parameters",
    "trace_sigma",
    "vector_field",
]
