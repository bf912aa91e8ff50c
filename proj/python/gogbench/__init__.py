"""Python interface to the gogbench workbench."""

from ._gogbench import (
    DocKind,
    Document,
    InvalidInput,
    NotFound,
    SearchLimit,
    build_tower,
    chain,
    cokernel,
    degree,
    elevations,
    enumerate_covers,
    enumerate_subgroups,
    euler_characteristic,
    find_torsion_piece,
    h1,
    load,
    loads,
    predegree,
    run_cli,
    snf,
    torsion_exponent,
    validate,
)

__all__ = [
    "DocKind",
    "Document",
    "InvalidInput",
    "NotFound",
    "SearchLimit",
    "build_tower",
    "chain",
    "cokernel",
    "degree",
    "elevations",
    "enumerate_covers",
    "enumerate_subgroups",
    "euler_characteristic",
    "find_torsion_piece",
    "h1",
    "load",
    "loads",
    "predegree",
    "run_cli",
    "snf",
    "torsion_exponent",
    "validate",
]
