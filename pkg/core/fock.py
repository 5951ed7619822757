"""
Discretized exponential vectors and matrix elements of the walk and of the
limiting quantum Lévy process.

The Lévy process is represented only through its matrix elements between
exponential vectors of step functions: on each interval where f = c and
g = d are constant, the increment contributes
    e^{D <c, d>} exp_*(D gamma_{c,d}),   gamma_{c,d}(a) = <(1, c), phi(a) (1, d)>,
and increments compose by convolution in time order.
"""

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy import linalg

from core.algebra import FiniteBialgebra, Functional, ordered_convolution
from core.schurmann import SchurmannTriple, assemble_phi
from core.walk import WalkStep, walk_dense
from utils.logger import setup_logger

logger = setup_logger(__name__)


class FockError(Exception):
    """Raised on malformed step functions or slot data."""
    pass


@dataclass(frozen=True, eq=False)
class StepFunction:
    """
    Right-open piecewise-constant k-valued function on [0, T), zero beyond T.

    `durations[i] > 0` is the length of piece i and `values[i]` its value.
    """

    durations: np.ndarray
    values: np.ndarray

    def __post_init__(self) -> None:
        durations = np.array(self.durations, dtype=float).reshape(-1)
        values = np.array(self.values, dtype=complex)
        if values.ndim != 2 or values.shape[0] != durations.shape[0]:
            raise FockError(
                f"Step function needs one value per piece: {durations.shape[0]} durations, "
                f"values of shape {values.shape}"
            )
        if np.any(durations <= 0):
            raise FockError("Step function durations must be positive")
        durations.setflags(write=False)
        values.setflags(write=False)
        object.__setattr__(self, "durations", durations)
        object.__setattr__(self, "values", values)

    @classmethod
    def zero(cls, k_dim: int) -> "StepFunction":
        return cls(durations=np.zeros(0), values=np.zeros((0, k_dim), dtype=complex))

    @classmethod
    def constant(cls, value: Sequence[complex], duration: float) -> "StepFunction":
        return cls(durations=[duration], values=[list(value)])

    @classmethod
    def from_pieces(cls, pieces: Iterable[tuple[float, Sequence[complex]]], k_dim: int) -> "StepFunction":
        pieces = list(pieces)
        if not pieces:
            return cls.zero(k_dim)
        return cls(
            durations=[duration for duration, _ in pieces],
            values=[list(value) for _, value in pieces],
        )

    @property
    def k_dim(self) -> int:
        return self.values.shape[1]

    @property
    def total(self) -> float:
        return float(np.sum(self.durations))

    @property
    def breakpoints(self) -> np.ndarray:
        """Piece boundaries including 0 and T."""
        return np.concatenate([[0.0], np.cumsum(self.durations)])

    def __call__(self, t: float) -> np.ndarray:
        bounds = self.breakpoints
        if t < 0 or t >= bounds[-1]:
            return np.zeros(self.k_dim, dtype=complex)
        index = int(np.searchsorted(bounds, t, side="right")) - 1
        return self.values[index].copy()

    def integral(self, a: float, b: float) -> np.ndarray:
        """Exact integral of f over [a, b)."""
        bounds = self.breakpoints
        lo = np.clip(bounds[:-1], a, b)
        hi = np.clip(bounds[1:], a, b)
        return (hi - lo) @ self.values if self.values.size else np.zeros(self.k_dim, dtype=complex)

    def antiderivative(self, points: np.ndarray) -> np.ndarray:
        """F(x) = int_0^x f for each point, shape (len(points), k)."""
        points = np.asarray(points, dtype=float).reshape(-1, 1)
        if not self.values.size:
            return np.zeros((points.shape[0], self.k_dim), dtype=complex)
        bounds = self.breakpoints
        covered = np.clip(points, bounds[:-1], bounds[1:]) - bounds[:-1]
        return covered @ self.values

    def average(self, a: float, b: float) -> np.ndarray:
        return self.integral(a, b) / (b - a)


def inner_integral(f: StepFunction, g: StepFunction, t: float) -> complex:
    """int_0^t <f(s), g(s)> ds."""
    total = 0j
    for a, b in _pieces(f, g, 0.0, t):
        total += (b - a) * np.vdot(f((a + b) / 2), g((a + b) / 2))
    return complex(total)


@dataclass(frozen=True, eq=False)
class SlotVectors:
    """n slot vectors (1, sqrt(h) fbar_i) in C (+) k."""

    h: float
    slots: np.ndarray

    @property
    def n(self) -> int:
        return self.slots.shape[0]

    def product_vector(self) -> np.ndarray:
        """The tensor product of all slots (toy Fock space vector)."""
        vec = np.ones(1, dtype=complex)
        for slot in self.slots:
            vec = np.kron(vec, slot)
        return vec


def discretize_exponential(f: StepFunction, h: float, n: int) -> SlotVectors:
    """
    Slot i (1-based) is (1, sqrt(h) fbar_i) with fbar_i the average of f over
    [(i-1)h, ih); the zero function gives the vacuum.
    """
    if h <= 0:
        raise FockError(f"Step size must be positive, got {h}")
    if n < 0:
        raise FockError(f"Slot count must be non-negative, got {n}")
    slots = np.zeros((n, 1 + f.k_dim), dtype=complex)
    slots[:, 0] = 1.0
    cumulative = f.antiderivative(h * np.arange(n + 1))
    slots[:, 1:] = np.diff(cumulative, axis=0) / np.sqrt(h)
    return SlotVectors(h=h, slots=slots)


def slot_count(t: float, h: float) -> int:
    """floor(t/h), tolerant of rounding when t is a multiple of h."""
    if t < 0:
        raise FockError(f"Time must be non-negative, got {t}")
    return int(math.floor(t / h * (1 + 1e-12)))


def _check_dims(beta_size: int, f: StepFunction, g: StepFunction) -> None:
    if f.k_dim != beta_size - 1 or g.k_dim != beta_size - 1:
        raise FockError(
            f"Step functions take values in C^{f.k_dim} / C^{g.k_dim}, walk acts on C (+) C^{beta_size - 1}"
        )


def slot_functionals(beta: WalkStep, u: SlotVectors, v: SlotVectors) -> np.ndarray:
    """Rows omega_i(a) = <u_i, beta(a) v_i>, conjugate-linear in u."""
    return np.einsum("na,iab,nb->ni", np.conj(u.slots), beta.mats, v.slots)


def walk_matrix_element(
    algebra: FiniteBialgebra,
    beta: WalkStep,
    f: StepFunction,
    g: StepFunction,
    t: float,
    a: np.ndarray,
) -> complex:
    """
    <D_h(f), J_n(a) D_h(g)> with n = floor(t/h), computed as the ordered
    convolution of slot functionals (O(n d^2) after setup).
    """
    _check_dims(beta.size, f, g)
    n = slot_count(t, beta.h)
    u = discretize_exponential(f, beta.h, n)
    v = discretize_exponential(g, beta.h, n)
    row = ordered_convolution(algebra, slot_functionals(beta, u, v))
    return complex(row @ np.asarray(a, dtype=complex))


def walk_matrix_element_dense(
    algebra: FiniteBialgebra,
    beta: WalkStep,
    f: StepFunction,
    g: StepFunction,
    t: float,
    a: np.ndarray,
    cap: int | None = None,
) -> complex:
    """Same matrix element through the materialized J_n (oracle path)."""
    _check_dims(beta.size, f, g)
    n = slot_count(t, beta.h)
    dense = walk_dense(algebra, beta, n, cap)
    u = discretize_exponential(f, beta.h, n).product_vector()
    v = discretize_exponential(g, beta.h, n).product_vector()
    operator = np.einsum("i,iab->ab", np.asarray(a, dtype=complex), dense)
    return complex(np.vdot(u, operator @ v))


def _pieces(
    f: StepFunction, g: StepFunction, s: float, t: float, extra: Iterable[float] = ()
) -> list[tuple[float, float]]:
    """Intervals of [s, t) on which f and g are both constant."""
    cuts = {s, t}
    for point in (*f.breakpoints, *g.breakpoints, *extra):
        if s < point < t:
            cuts.add(float(point))
    ordered = sorted(cuts)
    return [(a, b) for a, b in zip(ordered, ordered[1:]) if b > a]


def increment_generator(
    algebra: FiniteBialgebra, phi: np.ndarray, c: np.ndarray, d: np.ndarray
) -> np.ndarray:
    """gamma_{c,d}(b_i) = <(1, c), phi(b_i) (1, d)>."""
    c_hat = np.concatenate([[1.0], c]).astype(complex)
    d_hat = np.concatenate([[1.0], d]).astype(complex)
    return np.einsum("a,iab,b->i", np.conj(c_hat), phi, d_hat)


def levy_interval_functional(
    algebra: FiniteBialgebra,
    triple: SchurmannTriple,
    f: StepFunction,
    g: StepFunction,
    s: float,
    t: float,
    extra_breakpoints: Iterable[float] = (),
) -> Functional:
    """
    Functional a -> <e(f 1_[s,t)), l_{[s,t)}(a) e(g 1_[s,t))> of the increment over [s, t):
    the ordered convolution of e^{D<c,d>} exp_*(D gamma_{c,d}) over constant pieces.
    """
    if not 0 <= s <= t:
        raise FockError(f"Need 0 <= s <= t, got s={s}, t={t}")
    _check_dims(triple.k_dim + 1, f, g)
    phi = assemble_phi(triple).mats
    acc = algebra.counit.astype(complex)
    pieces = _pieces(f, g, s, t, extra_breakpoints)
    logger.debug(f"Lévy increment from {s:g} to {t:g}: {len(pieces)} constant pieces")
    for a, b in pieces:
        mid = (a + b) / 2
        c, d = f(mid), g(mid)
        duration = b - a
        generator = increment_generator(algebra, phi, c, d)
        op = np.einsum("jki,k->ji", algebra.coproduct3, generator)
        # acc * (scalar * exp_*(D gamma)) = scalar * acc @ expm(D M_gamma)
        acc = np.exp(duration * np.vdot(c, d)) * (acc @ linalg.expm(duration * op))
    return Functional(algebra, acc)


def levy_matrix_element(
    algebra: FiniteBialgebra,
    triple: SchurmannTriple,
    f: StepFunction,
    g: StepFunction,
    t: float,
    a: np.ndarray,
    extra_breakpoints: Iterable[float] = (),
) -> complex:
    """<e(f), l_t(a) e(g)> for step functions f, g restricted to [0, t)."""
    functional = levy_interval_functional(algebra, triple, f, g, 0.0, t, extra_breakpoints)
    return functional(np.asarray(a, dtype=complex))
