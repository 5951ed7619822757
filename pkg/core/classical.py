"""
Classical compound Poisson processes on a finite group, the commutative
special case of the Lévy processes: a particle at the identity jumps at rate
lambda, each jump multiplying by a group element drawn from a fixed measure.
"""

import numpy as np
from scipy import linalg

from core.algebra import FiniteBialgebra
from core.groups import FiniteGroup
from core.schurmann import Representation, SchurmannTriple, triple_from_rep_vector


def compound_poisson_law(
    group: FiniteGroup, rate: float, jump_measure: np.ndarray, t: float
) -> np.ndarray:
    """
    Distribution at time t of the right random walk started at the identity,
    e^{-rate t} sum_n (rate t)^n mu^{*n} / n!, via the generator
    Q[g, g h] += rate * mu(h), Q[g, g] -= rate.
    """
    jump_measure = np.asarray(jump_measure, dtype=float)
    if jump_measure.shape != (group.order,):
        raise ValueError(f"Jump measure must have {group.order} entries")
    if np.any(jump_measure < 0) or not np.isclose(jump_measure.sum(), 1.0):
        raise ValueError("Jump measure must be a probability vector")
    if rate < 0 or t < 0:
        raise ValueError("Rate and time must be non-negative")

    n = group.order
    generator = -rate * np.eye(n)
    for g in range(n):
        for h in range(n):
            generator[g, group.mult(g, h)] += rate * jump_measure[h]
    start = np.zeros(n)
    start[group.identity] = 1.0
    return start @ linalg.expm(t * generator)


def evaluation_triple(
    algebra: FiniteBialgebra,
    group: FiniteGroup,
    points: list[int],
    weights: list[float],
    name: str = "",
) -> SchurmannTriple:
    """
    Triple on C(G) with nu(f) = diag(f(g_1), ..., f(g_k)) and xi~ = (sqrt(w_1), ..., sqrt(w_k)).

    Its generator is gamma(f) = sum_l w_l (f(g_l) - f(e)): jumps to g_l at rate w_l.
    """
    if len(points) != len(weights) or not points:
        raise ValueError("Need one weight per evaluation point")
    k = len(points)
    mats = np.zeros((algebra.dim, k, k), dtype=complex)
    for slot, g in enumerate(points):
        mats[g, slot, slot] = 1.0
    xi = np.sqrt(np.asarray(weights, dtype=float)).astype(complex)
    return triple_from_rep_vector(algebra, Representation(mats=mats), xi, name=name)


def jump_measure_of(group: FiniteGroup, points: list[int], weights: list[float]) -> tuple[float, np.ndarray]:
    """(rate, jump measure) of the evaluation triple with these points and weights."""
    rate = float(np.sum(weights))
    measure = np.zeros(group.order)
    for g, w in zip(points, weights):
        measure[g] += w / rate
    return rate, measure
