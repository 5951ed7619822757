"""
Schürmann triples built from a representation and a vector, the block
stochastic generator on C (+) k, the numerical GNS construction, and the
Markov convolution semigroup P_t = exp_*(t gamma).
"""

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from pydantic import ValidationError
from scipy import linalg

from config.settings import settings
from core.algebra import (
    FiniteBialgebra,
    Functional,
    StateCertificationError,
    convolution_exponential,
    convolution_operator,
    homomorphism_residuals,
)
from data.fixture_models import TripleFile
from utils.complex_codec import encode_array
from utils.logger import setup_logger

logger = setup_logger(__name__)


class SchurmannError(Exception):
    """Base class for triple construction failures."""
    pass


class RepresentationError(SchurmannError):
    """Raised when matrices fail to form a unital *-representation."""

    def __init__(self, axiom: str, residual: float):
        super().__init__(f"Not a representation: {axiom} residual {residual:.3e}")
        self.axiom = axiom
        self.residual = residual


@dataclass(frozen=True, eq=False)
class Representation:
    """A unital *-representation nu: A -> B(k), stored as one matrix per basis element."""

    mats: np.ndarray

    def __post_init__(self) -> None:
        mats = np.array(self.mats, dtype=complex)
        if mats.ndim != 3 or mats.shape[1] != mats.shape[2]:
            raise SchurmannError(f"Representation matrices have shape {mats.shape}")
        mats.setflags(write=False)
        object.__setattr__(self, "mats", mats)

    @property
    def target_dim(self) -> int:
        return self.mats.shape[1]

    def __call__(self, x: np.ndarray) -> np.ndarray:
        return np.einsum("i,iab->ab", x, self.mats)

    def residuals(self, algebra: FiniteBialgebra) -> dict[str, float]:
        if self.mats.shape[0] != algebra.dim:
            raise SchurmannError(
                f"Representation given on {self.mats.shape[0]} elements, algebra has {algebra.dim}"
            )
        return homomorphism_residuals(algebra, self.mats)

    def check(self, algebra: FiniteBialgebra, tol: float | None = None) -> "Representation":
        """
        Raises:
            RepresentationError: Naming the first failing axiom
        """
        tol = settings.axiom_tol if tol is None else tol
        for axiom, residual in self.residuals(algebra).items():
            if residual > tol:
                raise RepresentationError(axiom, residual)
        return self


@dataclass(frozen=True, eq=False)
class SchurmannTriple:
    """
    (nu, delta, gamma) generated by a vector xi~:
        gamma(a) = <xi~, (nu(a) - eps(a)) xi~>,  delta(a) = (nu(a) - eps(a)) xi~.
    """

    algebra: FiniteBialgebra = field(repr=False)
    rep: Representation
    xi: np.ndarray
    gamma: Functional
    delta: np.ndarray
    name: str = ""

    @property
    def lam(self) -> float:
        """lambda = ||xi~||^2."""
        return float(np.real(np.vdot(self.xi, self.xi)))

    @property
    def k_dim(self) -> int:
        return self.rep.target_dim

    @property
    def unit_xi(self) -> np.ndarray:
        """xi = xi~ / ||xi~|| (zero vector when xi~ = 0)."""
        lam = self.lam
        return self.xi / np.sqrt(lam) if lam > 0 else np.zeros_like(self.xi)

    def to_dict(self) -> dict:
        return {
            "fixture": self.algebra.name,
            "rep": encode_array(self.rep.mats),
            "xi": encode_array(self.xi),
        }


@dataclass(frozen=True, eq=False)
class BlockGenerator:
    """phi(b_i) = [[gamma, delta^dagger], [delta, nu - eps I]] on C (+) k; Omega is coordinate 0."""

    mats: np.ndarray

    @property
    def size(self) -> int:
        return self.mats.shape[1]

    def __call__(self, x: np.ndarray) -> np.ndarray:
        return np.einsum("i,iab->ab", x, self.mats)


def triple_from_rep_vector(
    algebra: FiniteBialgebra,
    nu: Representation,
    xi: np.ndarray,
    tol: float | None = None,
    name: str = "",
) -> SchurmannTriple:
    """
    Build the Schürmann triple of (nu, xi~). xi~ = 0 is allowed and gives the
    zero triple.

    Raises:
        RepresentationError: If nu is not a unital *-representation of the algebra
    """
    nu.check(algebra, tol)
    xi = np.array(xi, dtype=complex).reshape(-1)
    if xi.shape != (nu.target_dim,):
        raise SchurmannError(f"xi has dimension {xi.shape[0]}, representation acts on {nu.target_dim}")
    xi.setflags(write=False)

    shifted = nu.mats - algebra.counit[:, None, None] * np.eye(nu.target_dim)
    delta = shifted @ xi
    gamma = Functional(algebra, np.einsum("a,iab,b->i", np.conj(xi), shifted, xi))
    delta.setflags(write=False)
    triple = SchurmannTriple(
        algebra=algebra, rep=nu, xi=xi, gamma=gamma, delta=delta, name=name
    )
    logger.debug(f"Built triple {name or '<anonymous>'}: dim k = {nu.target_dim}, lambda = {triple.lam:.6g}")
    return triple


def assemble_phi(triple: SchurmannTriple) -> BlockGenerator:
    """Assemble the block generator; phi(1) = 0 is checked."""
    algebra = triple.algebra
    d, k = algebra.dim, triple.k_dim
    # delta^dagger(a) := <delta(a^*), .>, so that phi(a^*) = phi(a)^dagger
    delta_star = np.einsum("ij,ja->ia", algebra.star, triple.delta)
    mats = np.zeros((d, 1 + k, 1 + k), dtype=complex)
    mats[:, 0, 0] = triple.gamma.coeffs
    mats[:, 0, 1:] = np.conj(delta_star)
    mats[:, 1:, 0] = triple.delta
    mats[:, 1:, 1:] = triple.rep.mats - algebra.counit[:, None, None] * np.eye(k)

    at_unit = np.einsum("i,iab->ab", algebra.unit, mats)
    residual = float(np.max(np.abs(at_unit)))
    if residual > settings.axiom_tol:
        raise SchurmannError(f"phi(1) != 0 (residual {residual:.3e})")
    mats.setflags(write=False)
    return BlockGenerator(mats=mats)


def conditional_positivity_residual(algebra: FiniteBialgebra, gamma: Functional) -> float:
    """Smallest eigenvalue of [gamma(b_i^* b_j)] compressed to ker eps."""
    kernel = linalg.null_space(algebra.counit[None, :])
    if kernel.size == 0:
        return 0.0
    g = gamma.gram
    compressed = kernel.conj().T @ ((g + g.conj().T) / 2) @ kernel
    return float(np.min(np.linalg.eigvalsh(compressed)))


def generator_norm(algebra: FiniteBialgebra, gamma: Functional) -> float:
    """Operator norm of T_gamma = (id (x) gamma) Delta on coefficient rows."""
    return float(np.linalg.norm(convolution_operator(algebra, gamma), ord=2))


@dataclass(frozen=True, eq=False)
class GNSResult:
    """
    GNS data of a state: representation on the quotient, cyclic vector, and
    the (d, r) matrix whose columns are coefficient representatives of the
    orthonormal quotient basis.
    """

    rep: Representation
    cyclic_vector: np.ndarray
    embedding: np.ndarray

    @property
    def dim(self) -> int:
        return self.rep.target_dim


def gns_from_state(
    algebra: FiniteBialgebra, omega: Functional, tol: float | None = None
) -> GNSResult:
    """
    GNS construction from the Gram matrix G[i, j] = omega(b_i^* b_j).

    The null space (eigenvalues below gns_relative_cut * max eigenvalue) is
    quotiented; pi(b_i) is left multiplication in the orthonormal quotient basis.

    Raises:
        StateCertificationError: If omega is not a state
    """
    tol = settings.axiom_tol if tol is None else tol
    omega.certify_state(tol)
    g = omega.gram
    w, v = np.linalg.eigh((g + g.conj().T) / 2)
    cut = settings.gns_relative_cut * max(float(w[-1]), 0.0)
    keep = w > cut
    w, v = w[keep], v[:, keep]

    sqrt_w = np.sqrt(w)
    coords = sqrt_w[:, None] * v.conj().T          # class of x -> coordinates
    embedding = v / sqrt_w[None, :]                 # coordinates -> representative
    left_mult = np.einsum("ijk->ikj", algebra.mult)  # L_i[k, j] = m[i, j, k]
    mats = np.einsum("rk,ikj,js->irs", coords, left_mult, embedding)

    rep = Representation(mats=mats)
    rep.check(algebra, tol)
    cyclic = coords @ algebra.unit
    logger.debug(f"GNS space of dimension {rep.target_dim} (Gram rank cut {cut:.3e})")
    return GNSResult(rep=rep, cyclic_vector=cyclic, embedding=embedding)


def vector_state(algebra: FiniteBialgebra, rep: Representation, vector: np.ndarray) -> Functional:
    """a -> <v, rep(a) v>."""
    vector = np.asarray(vector, dtype=complex)
    return Functional(algebra, np.einsum("a,iab,b->i", np.conj(vector), rep.mats, vector))


def markov_semigroup(algebra: FiniteBialgebra, triple: SchurmannTriple, t: float) -> Functional:
    """
    P_t = exp_*(t gamma), certified as a state.

    Raises:
        StateCertificationError: If positivity or unitality fails
    """
    p_t = convolution_exponential(algebra, triple.gamma, t)
    try:
        return p_t.certify_state()
    except StateCertificationError as e:
        raise StateCertificationError(f"P_{t:g} is not a state: {e}") from e


def save_triple(triple: SchurmannTriple, path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(triple.to_dict(), indent=2), encoding="utf-8")


def load_triple(algebra: FiniteBialgebra, path: Path, name: str = "") -> SchurmannTriple:
    """
    Raises:
        SchurmannError: If the file cannot be read or parsed
        RepresentationError: If the matrices are not a representation of the algebra
    """
    try:
        triple_file = TripleFile(**json.loads(Path(path).read_text(encoding="utf-8")))
        rep_mats, xi = triple_file.arrays()
    except (OSError, json.JSONDecodeError) as e:
        raise SchurmannError(f"Failed to read triple {path}: {e}") from e
    except (ValidationError, ValueError, TypeError) as e:
        raise SchurmannError(f"Malformed triple {path}: {e}") from e
    return triple_from_rep_vector(
        algebra, Representation(mats=rep_mats), xi, name=name or Path(path).stem
    )
