"""
Finite-dimensional C*-bialgebras given by dense structure constants.

Provides the bialgebra type, axiom validation, functionals with state
certification, the convolution calculus (convolution, convolution powers,
convolution exponentials) and the sampled map-norm estimate.

Conventions:
    - b_i * b_j = sum_k mult[i, j, k] b_k
    - b_i^* = sum_k star[i, k] b_k, extended antilinearly
    - Delta(b_i) = sum_{j,k} coproduct[j*d + k, i] b_j (x) b_k
"""

from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np
from scipy import linalg

from config.settings import settings
from data.models import Axiom, AxiomResidual, ValidationReport
from utils.logger import setup_logger

logger = setup_logger(__name__)


class BialgebraError(Exception):
    """Base class for bialgebra failures."""
    pass


class BialgebraStructureError(BialgebraError):
    """Raised when structure tensors have inconsistent dimensions."""
    pass


class StateCertificationError(BialgebraError):
    """Raised when a functional expected to be a state is not one."""
    pass


@dataclass(frozen=True, eq=False)
class FiniteBialgebra:
    """
    A finite-dimensional C*-bialgebra as structure constants plus a faithful
    unital *-representation used for element norms.

    Immutable after construction; arrays are made read-only.
    """

    labels: tuple[str, ...]
    mult: np.ndarray
    unit: np.ndarray
    star: np.ndarray
    counit: np.ndarray
    coproduct: np.ndarray
    faithful_rep: np.ndarray
    name: str = ""

    def __post_init__(self) -> None:
        d = len(self.labels)
        expected = {
            "mult": (d, d, d),
            "unit": (d,),
            "star": (d, d),
            "counit": (d,),
            "coproduct": (d * d, d),
        }
        for attr, shape in expected.items():
            value = np.asarray(getattr(self, attr), dtype=complex)
            if value.shape != shape:
                raise BialgebraStructureError(
                    f"{attr} has shape {value.shape}, expected {shape} for dim {d}"
                )
            value.setflags(write=False)
            object.__setattr__(self, attr, value)
        rep = np.asarray(self.faithful_rep, dtype=complex)
        if rep.ndim != 3 or rep.shape[0] != d or rep.shape[1] != rep.shape[2]:
            raise BialgebraStructureError(
                f"faithful_rep has shape {rep.shape}, expected ({d}, r, r)"
            )
        rep.setflags(write=False)
        object.__setattr__(self, "faithful_rep", rep)

    @property
    def dim(self) -> int:
        return len(self.labels)

    @property
    def rep_dim(self) -> int:
        return self.faithful_rep.shape[1]

    @cached_property
    def coproduct3(self) -> np.ndarray:
        """Coproduct as a (d, d, d) tensor D[j, k, i]."""
        return self.coproduct.reshape(self.dim, self.dim, self.dim)

    @cached_property
    def star_products(self) -> np.ndarray:
        """Coefficients of b_i^* b_j as a (d, d, d) tensor."""
        return np.einsum("ip,pjk->ijk", self.star, self.mult)

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError as e:
            raise KeyError(f"Unknown basis label: {label}") from e

    def basis_vector(self, i: int) -> np.ndarray:
        v = np.zeros(self.dim, dtype=complex)
        v[i] = 1.0
        return v

    def multiply(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """Product of two elements given as coefficient vectors."""
        return np.einsum("i,j,ijk->k", x, y, self.mult)

    def adjoint(self, x: np.ndarray) -> np.ndarray:
        """Involution on coefficient vectors (antilinear)."""
        return np.conj(x) @ self.star

    def represent(self, x: np.ndarray) -> np.ndarray:
        """Faithful representation of an element."""
        return np.einsum("i,iab->ab", x, self.faithful_rep)

    def element_norm(self, x: np.ndarray) -> float:
        """C*-norm of an element via the faithful representation."""
        return float(np.linalg.norm(self.represent(x), ord=2))

    def same_structure(self, other: "FiniteBialgebra") -> bool:
        """Identical object, or equal structure tensors on the same basis labels."""
        if other is self:
            return True
        return self.labels == other.labels and all(
            np.array_equal(getattr(self, attr), getattr(other, attr))
            for attr in ("mult", "unit", "star", "counit", "coproduct")
        )

    def functional(self, coeffs: Sequence[complex] | np.ndarray) -> "Functional":
        return Functional(self, np.asarray(coeffs, dtype=complex))

    @property
    def counit_functional(self) -> "Functional":
        return Functional(self, self.counit.copy())

    def check_functional(self, coeffs: np.ndarray) -> np.ndarray:
        coeffs = np.asarray(coeffs, dtype=complex)
        if coeffs.shape != (self.dim,):
            raise BialgebraStructureError(
                f"Functional has shape {coeffs.shape}, expected ({self.dim},)"
            )
        return coeffs


@dataclass(frozen=True, eq=False)
class Functional:
    """A linear functional on a bialgebra as a coefficient row."""

    algebra: FiniteBialgebra = field(repr=False)
    coeffs: np.ndarray

    def __post_init__(self) -> None:
        coeffs = self.algebra.check_functional(self.coeffs).copy()
        coeffs.setflags(write=False)
        object.__setattr__(self, "coeffs", coeffs)

    def __call__(self, x: np.ndarray) -> complex:
        return complex(np.dot(self.coeffs, np.asarray(x, dtype=complex)))

    def at(self, label: str) -> complex:
        return complex(self.coeffs[self.algebra.index(label)])

    @cached_property
    def gram(self) -> np.ndarray:
        """The matrix [lambda(b_i^* b_j)]."""
        return self.algebra.star_products @ self.coeffs

    @cached_property
    def hermitian_residual(self) -> float:
        return float(np.max(np.abs(self.algebra.star @ self.coeffs - np.conj(self.coeffs))))

    @cached_property
    def positivity_residual(self) -> float:
        """Smallest eigenvalue of the Hermitian part of the Gram matrix."""
        g = self.gram
        return float(np.min(np.linalg.eigvalsh((g + g.conj().T) / 2)))

    @property
    def unit_value(self) -> complex:
        return complex(np.dot(self.coeffs, self.algebra.unit))

    def is_hermitian(self, tol: float | None = None) -> bool:
        return self.hermitian_residual <= (settings.axiom_tol if tol is None else tol)

    def is_state(self, tol: float | None = None) -> bool:
        tol = settings.axiom_tol if tol is None else tol
        return self.positivity_residual >= -tol and abs(self.unit_value - 1) <= tol

    def certify_state(self, tol: float | None = None) -> "Functional":
        """
        Return self if it is a state.

        Raises:
            StateCertificationError: If positivity or unitality fails
        """
        tol = settings.axiom_tol if tol is None else tol
        if self.positivity_residual < -tol:
            raise StateCertificationError(
                f"Gram matrix has eigenvalue {self.positivity_residual:.3e} < -{tol:g}"
            )
        if abs(self.unit_value - 1) > tol:
            raise StateCertificationError(f"State is not unital: value at 1 is {self.unit_value}")
        return self

    def __add__(self, other: "Functional") -> "Functional":
        return Functional(self.algebra, self.coeffs + other.coeffs)

    def __sub__(self, other: "Functional") -> "Functional":
        return Functional(self.algebra, self.coeffs - other.coeffs)

    def scale(self, c: complex) -> "Functional":
        return Functional(self.algebra, c * self.coeffs)

    def max_deviation(self, other: "Functional") -> float:
        return float(np.max(np.abs(self.coeffs - other.coeffs)))


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------


def _max_abs(x: np.ndarray) -> float:
    return float(np.max(np.abs(x))) if np.size(x) else 0.0


def homomorphism_residuals(algebra: FiniteBialgebra, mats: np.ndarray) -> dict[str, float]:
    """
    Residuals of a linear map A -> matrices (given on the basis) being a unital
    *-homomorphism.

    Returns:
        Dict with keys 'unital', 'multiplicative', 'star'
    """
    mats = np.asarray(mats, dtype=complex)
    if mats.ndim != 3 or mats.shape[0] != algebra.dim:
        raise BialgebraStructureError(
            f"Map has shape {mats.shape}, expected ({algebra.dim}, n, n)"
        )
    size = mats.shape[1]
    unital = np.einsum("i,iab->ab", algebra.unit, mats) - np.eye(size)
    products = np.einsum("iab,jbc->ijac", mats, mats)
    images = np.einsum("ijk,kac->ijac", algebra.mult, mats)
    star_images = np.einsum("ik,kab->iab", algebra.star, mats)
    adjoints = np.conj(np.transpose(mats, (0, 2, 1)))
    return {
        "unital": _max_abs(unital),
        "multiplicative": _max_abs(products - images),
        "star": _max_abs(star_images - adjoints),
    }


def validate_bialgebra(
    algebra: FiniteBialgebra, tol: float | None = None, name: str | None = None
) -> ValidationReport:
    """
    Check every bialgebra axiom and report its max absolute residual.

    Dimension mismatches are caught at construction time and raise
    BialgebraStructureError; axiom failures are reported, not raised.
    """
    tol = settings.axiom_tol if tol is None else tol
    d = algebra.dim
    m, u, s, e = algebra.mult, algebra.unit, algebra.star, algebra.counit
    D = algebra.coproduct3
    eye = np.eye(d)
    residuals: dict[Axiom, float] = {}

    residuals[Axiom.ASSOCIATIVITY] = _max_abs(
        np.einsum("ijp,pkq->ijkq", m, m) - np.einsum("jkp,ipq->ijkq", m, m)
    )
    residuals[Axiom.UNIT] = max(
        _max_abs(np.einsum("j,jik->ik", u, m) - eye),
        _max_abs(np.einsum("j,ijk->ik", u, m) - eye),
    )

    # (x*)* = x, (b_i b_j)* = b_j* b_i*, 1* = 1
    product_adjoints = np.einsum("ijp,pq->ijq", np.conj(m), s)
    reversed_products = np.einsum("jp,iq,pqk->ijk", s, s, m)
    residuals[Axiom.INVOLUTION] = max(
        _max_abs(np.conj(s) @ s - eye),
        _max_abs(product_adjoints - reversed_products),
        _max_abs(np.conj(u) @ s - u),
    )

    residuals[Axiom.COUNIT_HOMOMORPHISM] = max(
        _max_abs(np.einsum("ijk,k->ij", m, e) - np.outer(e, e)),
        abs(complex(u @ e) - 1),
        _max_abs(s @ e - np.conj(e)),
    )

    coproduct_of_products = np.einsum("ijk,abk->ijab", m, D)
    products_of_coproducts = np.einsum(
        "abi,cdj,acp,bdq->ijpq", D, D, m, m, optimize=True
    )
    coproduct_of_adjoints = np.einsum("ik,pqk->ipq", s, D)
    adjoints_of_coproducts = np.einsum("abi,ap,bq->ipq", np.conj(D), s, s)
    residuals[Axiom.COPRODUCT_HOMOMORPHISM] = max(
        _max_abs(coproduct_of_products - products_of_coproducts),
        _max_abs(algebra.coproduct @ u - np.kron(u, u)),
        _max_abs(coproduct_of_adjoints - adjoints_of_coproducts),
    )

    residuals[Axiom.COASSOCIATIVITY] = _max_abs(
        np.einsum("jki,pqj->pqki", D, D) - np.einsum("pki,qrk->pqri", D, D)
    )
    residuals[Axiom.COUNIT_LAW] = max(
        _max_abs(np.einsum("jki,j->ki", D, e) - eye),
        _max_abs(np.einsum("jki,k->ji", D, e) - eye),
    )

    rep_residuals = homomorphism_residuals(algebra, algebra.faithful_rep)
    rank = np.linalg.matrix_rank(algebra.faithful_rep.reshape(d, -1))
    residuals[Axiom.FAITHFUL_REPRESENTATION] = max(
        float(d - rank), *rep_residuals.values()
    )

    report = ValidationReport(
        name=name if name is not None else algebra.name,
        dim=d,
        tol=tol,
        residuals=[
            AxiomResidual(axiom=axiom, residual=value, passed=value <= tol)
            for axiom, value in residuals.items()
        ],
    )
    if report.passed:
        logger.debug(f"Bialgebra {report.name or '<anonymous>'} (dim {d}) passed validation")
    else:
        logger.warning(
            f"Bialgebra {report.name or '<anonymous>'} failed: "
            f"{', '.join(a.value for a in report.failing())}"
        )
    return report


# ---------------------------------------------------------------------------
# Convolution calculus
# ---------------------------------------------------------------------------


def _coeffs(algebra: FiniteBialgebra, f: "Functional | np.ndarray") -> np.ndarray:
    if isinstance(f, Functional):
        if not algebra.same_structure(f.algebra):
            raise BialgebraStructureError("Functional belongs to a different algebra")
        return f.coeffs
    return algebra.check_functional(f)


def convolution_operator(algebra: FiniteBialgebra, gamma: "Functional | np.ndarray") -> np.ndarray:
    """
    The d x d matrix M of T_gamma = (id (x) gamma) Delta acting on rows:
    (mu * gamma) = mu @ M.
    """
    g = _coeffs(algebra, gamma)
    return np.einsum("jki,k->ji", algebra.coproduct3, g)


def convolve(
    algebra: FiniteBialgebra, mu: "Functional | np.ndarray", nu: "Functional | np.ndarray"
) -> Functional:
    """(mu * nu)(a) = (mu (x) nu) Delta(a)."""
    return Functional(
        algebra,
        np.einsum("j,k,jki->i", _coeffs(algebra, mu), _coeffs(algebra, nu), algebra.coproduct3),
    )


def ordered_convolution(algebra: FiniteBialgebra, factors: np.ndarray) -> np.ndarray:
    """
    Coefficient row of factors[0] * factors[1] * ... * factors[n-1];
    the empty product is the counit.
    """
    factors = np.asarray(factors, dtype=complex).reshape(-1, algebra.dim)
    operators = np.einsum("jki,nk->nji", algebra.coproduct3, factors)
    acc = algebra.counit.copy()
    for op in operators:
        acc = acc @ op
    return acc


def convolution_power(algebra: FiniteBialgebra, mu: "Functional | np.ndarray", n: int) -> Functional:
    """mu^{*n}, with mu^{*0} = counit."""
    if n < 0:
        raise ValueError(f"Convolution power must be non-negative, got {n}")
    op = convolution_operator(algebra, mu)
    return Functional(algebra, algebra.counit @ np.linalg.matrix_power(op, n))


def convolution_exponential(
    algebra: FiniteBialgebra, gamma: "Functional | np.ndarray", t: float
) -> Functional:
    """
    exp_*(t gamma) = sum_n t^n gamma^{*n} / n!, computed as counit @ expm(t M_gamma)
    with scipy's Padé scaling-and-squaring.
    """
    if t < 0:
        raise ValueError(f"Time must be non-negative, got {t}")
    op = convolution_operator(algebra, gamma)
    return Functional(algebra, algebra.counit @ linalg.expm(t * op))


def convolution_series(
    algebra: FiniteBialgebra, gamma: "Functional | np.ndarray", t: float, order: int
) -> Functional:
    """Degree-`order` truncation of the convolution exponential series."""
    op = convolution_operator(algebra, gamma)
    term = algebra.counit.astype(complex)
    total = term.copy()
    for k in range(1, order + 1):
        term = (term @ op) * (t / k)
        total = total + term
    return Functional(algebra, total)


def iterated_coproduct(algebra: FiniteBialgebra, n: int) -> np.ndarray:
    """
    Delta^{(n)}: A -> A^{(x)n} as a (d^n, d) matrix, with Delta^{(1)} = id and
    Delta^{(n)} = (Delta^{(n-1)} (x) id) Delta.
    """
    if n < 1:
        raise ValueError(f"Iterated coproduct needs n >= 1, got {n}")
    d = algebra.dim
    result = np.eye(d, dtype=complex)
    for _ in range(n - 1):
        # result: (d^k, d); new[(J, k), i] = sum_j result[J, j] D[j, k, i]
        result = np.einsum("Jj,jki->Jki", result, algebra.coproduct3).reshape(-1, d)
    return result


# ---------------------------------------------------------------------------
# Norm estimates
# ---------------------------------------------------------------------------


def map_norm_estimate(
    algebra: FiniteBialgebra,
    psi: np.ndarray,
    samples: int | None = None,
    seed: int | None = None,
) -> float:
    """
    Sampled lower-bound estimate of the norm of a linear map psi: A -> matrices.

    Takes the max of ||psi(x)||_op over normalized basis elements and
    `samples` complex-Gaussian elements x with ||x|| = 1. The RNG is reseeded
    on each call, so the same samples are used across step sizes.

    Args:
        psi: Map on the basis, shape (d,), (d, n) or (d, n, m)
    """
    samples = settings.norm_samples if samples is None else samples
    seed = settings.seed if seed is None else seed
    psi = np.asarray(psi, dtype=complex)
    if psi.shape[0] != algebra.dim:
        raise BialgebraStructureError(
            f"Map defined on {psi.shape[0]} basis elements, algebra has {algebra.dim}"
        )
    if psi.ndim == 1:
        psi = psi[:, None, None]
    elif psi.ndim == 2:
        psi = psi[:, :, None]

    def op_norm(x: np.ndarray) -> float:
        return float(np.linalg.norm(np.einsum("i,iab->ab", x, psi), ord=2))

    best = 0.0
    for i in range(algebra.dim):
        b = algebra.basis_vector(i)
        best = max(best, op_norm(b) / algebra.element_norm(b))

    rng = np.random.default_rng(seed)
    for _ in range(samples):
        x = rng.standard_normal(algebra.dim) + 1j * rng.standard_normal(algebra.dim)
        norm = algebra.element_norm(x)
        if norm > 0:
            best = max(best, op_norm(x / norm))
    return best
