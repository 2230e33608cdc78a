"""Cartesian decomposition of operators and two-particle counterfactual measurement."""

from ._cartop import (
    DimensionError,
    InternalConsistencyError,
    InvariantError,
    NonNormalError,
    decompose,
    direct_joint_measure,
    expectation,
    hermitian_eig,
    imag_part,
    is_normal,
    network_born_check,
    real_part,
    realize_measurement,
    reck_decompose,
    recompose,
    reconstruct,
    run_protocol,
    verify_certainty,
)

__all__ = [
    "DimensionError",
    "InternalConsistencyError",
    "InvariantError",
    "NonNormalError",
    "decompose",
    "direct_joint_measure",
    "expectation",
    "hermitian_eig",
    "imag_part",
    "is_normal",
    "network_born_check",
    "real_part",
    "realize_measurement",
    "reck_decompose",
    "recompose",
    "reconstruct",
    "run_protocol",
    "verify_certainty",
]
