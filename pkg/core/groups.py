"""
Finite groups given by Cayley tables on element indices.
Supplies the standard examples (cyclic groups, S3) for the bialgebra builders.
"""

from dataclasses import dataclass
from itertools import permutations
from typing import Sequence

import numpy as np

from utils.logger import setup_logger

logger = setup_logger(__name__)


class InvalidGroupTableError(ValueError):
    """Raised when a Cayley table does not describe a group."""
    pass


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    """
    A finite group as an index -> label lookup and a Cayley table on indices.

    `table[g, h]` is the index of the product g·h.
    """

    labels: tuple[str, ...]
    table: np.ndarray

    @property
    def order(self) -> int:
        return len(self.labels)

    @property
    def identity(self) -> int:
        for e in range(self.order):
            if np.array_equal(self.table[e], np.arange(self.order)):
                return e
        raise InvalidGroupTableError("Cayley table has no identity element")

    def mult(self, g: int, h: int) -> int:
        return int(self.table[g, h])

    def inverse(self, g: int) -> int:
        e = self.identity
        for h in range(self.order):
            if self.table[g, h] == e:
                return h
        raise InvalidGroupTableError(f"Element {self.labels[g]} has no inverse")

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError as e:
            raise KeyError(f"Unknown group element: {label}") from e


def group_from_table(table: Sequence[Sequence[int]], labels: Sequence[str] | None = None) -> FiniteGroup:
    """
    Build a group from a Cayley table, checking closure, associativity,
    identity and inverses.

    Raises:
        InvalidGroupTableError: If any group axiom fails
    """
    arr = np.asarray(table, dtype=int)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
        raise InvalidGroupTableError(f"Cayley table must be a non-empty square, got shape {arr.shape}")
    n = arr.shape[0]
    if labels is None:
        labels = [str(i) for i in range(n)]
    if len(labels) != n:
        raise InvalidGroupTableError(f"Expected {n} labels, got {len(labels)}")
    if arr.min() < 0 or arr.max() >= n:
        raise InvalidGroupTableError("Cayley table entries must be element indices")

    # (gh)k == g(hk) for all triples
    left = arr[arr, :]
    right = arr[:, arr]
    if not np.array_equal(left, right):
        raise InvalidGroupTableError("Cayley table is not associative")

    group = FiniteGroup(labels=tuple(labels), table=arr)
    e = group.identity
    if not np.array_equal(arr[:, e], np.arange(n)):
        raise InvalidGroupTableError("Identity is not two-sided")
    for g in range(n):
        if not (np.any(arr[g] == e) and np.any(arr[:, g] == e)):
            raise InvalidGroupTableError(f"Element {labels[g]} has no inverse")

    logger.debug(f"Validated group table of order {n}")
    return group


def cyclic_group(n: int) -> FiniteGroup:
    """Z/n with labels '0'..'n-1'."""
    table = [[(g + h) % n for h in range(n)] for g in range(n)]
    return group_from_table(table, [str(g) for g in range(n)])


def symmetric_group_s3() -> FiniteGroup:
    """
    S3 as permutations of (0, 1, 2) in lexicographic order, composed as
    (p·q)(x) = p(q(x)); index 0 is the identity.
    """
    perms = list(permutations(range(3)))
    index = {p: i for i, p in enumerate(perms)}
    table = [
        [index[tuple(p[q[x]] for x in range(3))] for q in perms]
        for p in perms
    ]
    labels = ["".join(str(x) for x in p) for p in perms]
    return group_from_table(table, labels)


def permutation_sign(label: str) -> int:
    """Sign of a permutation given as a digit string such as '102'."""
    perm = [int(c) for c in label]
    sign = 1
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                sign = -sign
    return sign
