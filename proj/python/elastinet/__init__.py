"""Elastic flow of planar Theta networks and Triods."""

from ._elastinet import (
    ElastinetError,
    Network,
    geometric_admissibility,
    ls_verify,
    parametric_admissibility,
    reparametrize,
    scenario,
    scenario_names,
    simulate,
)

__all__ = [
    "ElastinetError",
    "Network",
    "geometric_admissibility",
    "ls_verify",
    "parametric_admissibility",
    "reparametrize",
    "scenario",
    "scenario_names",
    "simulate",
]
