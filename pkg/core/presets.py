"""
Named Schürmann triples for the shipped fixtures.
Each preset checks that it is applied to the algebra it was written for.
"""

from typing import Callable

import numpy as np

from core.algebra import FiniteBialgebra
from core.classical import evaluation_triple
from core.groups import cyclic_group, permutation_sign, symmetric_group_s3
from core.schurmann import (
    Representation,
    SchurmannError,
    SchurmannTriple,
    triple_from_rep_vector,
)


def _expect(algebra: FiniteBialgebra, labels: tuple[str, ...], preset: str) -> None:
    if algebra.labels != labels:
        raise SchurmannError(
            f"Preset {preset!r} expects basis {list(labels)}, fixture has {list(algebra.labels)}"
        )


def poisson_z2(algebra: FiniteBialgebra) -> SchurmannTriple:
    """C(Z/2), k = C, nu(f) = f(1), xi~ = 1: jumps by 1 at rate 1."""
    _expect(algebra, ("e0", "e1"), "poisson_z2")
    return evaluation_triple(algebra, cyclic_group(2), [1], [1.0], name="poisson_z2")


def evaluation_s3(algebra: FiniteBialgebra) -> SchurmannTriple:
    """C(S3), k = C^2, evaluation at a transposition and a 3-cycle, xi~ = (1, 1)/sqrt(2)."""
    group = symmetric_group_s3()
    _expect(algebra, tuple(f"e{label}" for label in group.labels), "evaluation_s3")
    points = [group.index("102"), group.index("120")]
    return evaluation_triple(algebra, group, points, [0.5, 0.5], name="evaluation_s3")


def character_z3(algebra: FiniteBialgebra) -> SchurmannTriple:
    """C[Z/3], k = C, nu(lambda_g) = omega^g with omega = e^{2 pi i/3}, xi~ = 1."""
    group = cyclic_group(3)
    _expect(algebra, tuple(f"l{label}" for label in group.labels), "character_z3")
    omega = np.exp(2j * np.pi / 3)
    mats = np.array([[[omega ** g]] for g in range(3)], dtype=complex)
    return triple_from_rep_vector(algebra, Representation(mats=mats), [1.0], name="character_z3")


def sign_s3(algebra: FiniteBialgebra) -> SchurmannTriple:
    """C[S3], k = C, nu(lambda_g) = sign(g), xi~ = 1."""
    group = symmetric_group_s3()
    _expect(algebra, tuple(f"l{label}" for label in group.labels), "sign_s3")
    mats = np.array([[[permutation_sign(label)]] for label in group.labels], dtype=complex)
    return triple_from_rep_vector(algebra, Representation(mats=mats), [1.0], name="sign_s3")


KAC_PALJUTKIN_LABELS = ("e1", "e2", "e3", "e4", "E11", "E12", "E21", "E22")


def kac_paljutkin_block(algebra: FiniteBialgebra) -> SchurmannTriple:
    """Kac–Paljutkin algebra, nu = projection onto the M_2 block, k = C^2, xi~ = (1, 0)."""
    _expect(algebra, KAC_PALJUTKIN_LABELS, "kac_paljutkin_block")
    mats = np.zeros((8, 2, 2), dtype=complex)
    for index, (row, col) in zip(range(4, 8), [(0, 0), (0, 1), (1, 0), (1, 1)]):
        mats[index, row, col] = 1.0
    return triple_from_rep_vector(
        algebra, Representation(mats=mats), [1.0, 0.0], name="kac_paljutkin_block"
    )


def kac_paljutkin_mixed(algebra: FiniteBialgebra) -> SchurmannTriple:
    """Kac–Paljutkin, nu = character e2 (+) M_2 block on C^3, xi~ = (1, 1, i)/sqrt(3)."""
    _expect(algebra, KAC_PALJUTKIN_LABELS, "kac_paljutkin_mixed")
    mats = np.zeros((8, 3, 3), dtype=complex)
    mats[1, 0, 0] = 1.0
    for index, (row, col) in zip(range(4, 8), [(0, 0), (0, 1), (1, 0), (1, 1)]):
        mats[index, 1 + row, 1 + col] = 1.0
    xi = np.array([1.0, 1.0, 1.0j]) / np.sqrt(3)
    return triple_from_rep_vector(algebra, Representation(mats=mats), xi, name="kac_paljutkin_mixed")


PRESETS: dict[str, Callable[[FiniteBialgebra], SchurmannTriple]] = {
    "poisson_z2": poisson_z2,
    "evaluation_s3": evaluation_s3,
    "character_z3": character_z3,
    "sign_s3": sign_s3,
    "kac_paljutkin_block": kac_paljutkin_block,
    "kac_paljutkin_mixed": kac_paljutkin_mixed,
}

PRESET_FIXTURES: dict[str, str] = {
    "poisson_z2": "function:Z2",
    "evaluation_s3": "function:S3",
    "character_z3": "group:Z3",
    "sign_s3": "group:S3",
    "kac_paljutkin_block": "fixtures/kac_paljutkin.json",
    "kac_paljutkin_mixed": "fixtures/kac_paljutkin.json",
}


def build_preset(name: str, algebra: FiniteBialgebra) -> SchurmannTriple:
    try:
        factory = PRESETS[name]
    except KeyError as e:
        raise SchurmannError(f"Unknown triple preset {name!r}; choose from {sorted(PRESETS)}") from e
    return factory(algebra)
