"""
Scaled single-step homomorphisms beta^(h) and the quantum random walks they drive.

Two constructions of beta^(h) are provided: closed-form block formulas
(beta_direct) and conjugation of eps (+) nu by the rotation U_h taken from
the GNS construction of (1 - lambda h) eps + lambda h nu_xi (beta_gns).
Walk states are evaluated by convolution (kappa_n = kappa_{n-1} * (phi o beta));
walk_dense materializes J_n on the toy Fock space as the oracle path.
"""

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from config.settings import settings
from core.algebra import (
    FiniteBialgebra,
    Functional,
    homomorphism_residuals,
    iterated_coproduct,
    map_norm_estimate,
)
from core.schurmann import SchurmannTriple
from utils.complex_codec import encode_array
from utils.logger import setup_logger

logger = setup_logger(__name__)


class WalkError(Exception):
    """Base class for walk construction and evaluation failures."""
    pass


class InadmissibleStepError(WalkError):
    """Raised when h lies outside (0, 1/lambda]."""

    def __init__(self, h: float, upper: float):
        interval = f"(0, {upper:.17g}]" if np.isfinite(upper) else "(0, inf)"
        super().__init__(f"Step size h = {h:.17g} outside admissible interval {interval}")
        self.h = h
        self.upper = upper


class InvalidDensityError(WalkError):
    """Raised when a density matrix is not Hermitian, PSD and trace one."""
    pass


class DenseCapExceededError(WalkError):
    """Raised when the dense walk would exceed the configured matrix size."""
    pass


@dataclass(frozen=True, eq=False)
class WalkStep:
    """
    beta^(h): A -> B(C (+) k) as one (1+k) x (1+k) matrix per basis element,
    with blocks beta_1 (scalar), beta_2 (row), beta_3 (column), beta_4 (corner).
    """

    h: float
    mats: np.ndarray

    def __post_init__(self) -> None:
        mats = np.array(self.mats, dtype=complex)
        mats.setflags(write=False)
        object.__setattr__(self, "mats", mats)

    @property
    def size(self) -> int:
        return self.mats.shape[1]

    @property
    def k_dim(self) -> int:
        return self.size - 1

    @property
    def beta1(self) -> np.ndarray:
        return self.mats[:, 0, 0]

    @property
    def beta2(self) -> np.ndarray:
        return self.mats[:, 0, 1:]

    @property
    def beta3(self) -> np.ndarray:
        return self.mats[:, 1:, 0]

    @property
    def beta4(self) -> np.ndarray:
        return self.mats[:, 1:, 1:]

    def __call__(self, x: np.ndarray) -> np.ndarray:
        return np.einsum("i,iab->ab", x, self.mats)

    def residuals(self, algebra: FiniteBialgebra) -> dict[str, float]:
        """Unital / multiplicative / star residuals, plus beta_2 = beta_3(.^*)^dagger."""
        residuals = homomorphism_residuals(algebra, self.mats)
        beta3_star = np.einsum("ij,ja->ia", algebra.star, self.beta3)
        residuals["block_adjoint"] = float(np.max(np.abs(self.beta2 - np.conj(beta3_star))))
        return residuals

    def to_dict(self) -> dict:
        return {"h": self.h, "mats": encode_array(self.mats)}


def admissible_upper(triple: SchurmannTriple) -> float:
    lam = triple.lam
    return 1.0 / lam if lam > 0 else np.inf


def check_step(triple: SchurmannTriple, h: float) -> None:
    """
    Raises:
        InadmissibleStepError: If h is not in (0, 1/lambda] (any h > 0 when lambda = 0)
    """
    upper = admissible_upper(triple)
    # the endpoint 1/lambda is admissible; allow rounding in its computation
    if not (h > 0 and h <= upper * (1 + 1e-12)):
        raise InadmissibleStepError(h, upper)


def _trivial_step(triple: SchurmannTriple, h: float) -> WalkStep:
    """beta^(h) = eps (+) nu, the xi~ = 0 branch."""
    algebra = triple.algebra
    k = triple.k_dim
    mats = np.zeros((algebra.dim, 1 + k, 1 + k), dtype=complex)
    mats[:, 0, 0] = algebra.counit
    mats[:, 1:, 1:] = triple.rep.mats
    return WalkStep(h=h, mats=mats)


def _root_terms(triple: SchurmannTriple, h: float) -> tuple[float, float]:
    """(sqrt(1 - lambda h), sqrt(lambda h)), clipped at the endpoint."""
    lh = min(triple.lam * h, 1.0)
    return float(np.sqrt(1.0 - lh)), float(np.sqrt(lh))


def beta_direct(algebra: FiniteBialgebra, triple: SchurmannTriple, h: float) -> WalkStep:
    """
    beta^(h) from the closed-form block formulas, with s = sqrt(1 - lambda h),
    r = sqrt(lambda h), xi = xi~/||xi~||, nu_xi(a) = <xi, nu(a) xi>:

        beta_1(a) = (1 - lambda h) eps(a) + lambda h nu_xi(a)
        beta_3(a) = r (nu(a) xi - s eps(a) xi + (s - 1) nu_xi(a) xi)
        beta_4(a) = nu(a) + (lambda h eps(a) + (2 - 2 s - lambda h) nu_xi(a)) |xi><xi|
                    + (s - 1) |nu(a) xi><xi| + (s - 1) |xi><nu(a^*) xi|
        beta_2(a) = beta_3(a^*)^dagger

    Raises:
        InadmissibleStepError: If h is outside (0, 1/lambda]
    """
    check_step(triple, h)
    if triple.lam == 0.0:
        logger.debug("xi~ = 0: using the trivial step eps (+) nu")
        return _trivial_step(triple, h)

    eps = algebra.counit
    nu = triple.rep.mats
    xi = triple.unit_xi
    lh = triple.lam * h
    s, r = _root_terms(triple, h)
    k = triple.k_dim

    nu_xi_vec = nu @ xi                                   # nu(b_i) xi, shape (d, k)
    nu_xi = nu_xi_vec @ np.conj(xi)                       # <xi, nu(b_i) xi>
    xi_row = np.conj(xi)                                  # <xi|
    xi_nu_row = np.einsum("a,iab->ib", xi_row, nu)        # <nu(b_i^*) xi| = <xi| nu(b_i)
    projector = np.outer(xi, xi_row)

    beta1 = (1 - lh) * eps + lh * nu_xi
    beta3 = r * (
        nu_xi_vec
        - s * eps[:, None] * xi[None, :]
        + (s - 1) * nu_xi[:, None] * xi[None, :]
    )
    beta4 = (
        nu
        + (lh * eps + (2 - 2 * s - lh) * nu_xi)[:, None, None] * projector
        + (s - 1) * np.einsum("ia,b->iab", nu_xi_vec, xi_row)
        + (s - 1) * np.einsum("a,ib->iab", xi, xi_nu_row)
    )
    beta3_star = np.einsum("ij,ja->ia", algebra.star, beta3)

    mats = np.zeros((algebra.dim, 1 + k, 1 + k), dtype=complex)
    mats[:, 0, 0] = beta1
    mats[:, 0, 1:] = np.conj(beta3_star)
    mats[:, 1:, 0] = beta3
    mats[:, 1:, 1:] = beta4
    return WalkStep(h=h, mats=mats)


def gns_rotation_vectors(triple: SchurmannTriple, h: float) -> tuple[np.ndarray, np.ndarray]:
    """
    Omega_h = s Omega (+) r xi and Sigma_h = -r Omega (+) s xi in C (+) k.

    Sigma_h uses Omega in its first summand; this is the choice that makes
    {Omega_h, Sigma_h} orthonormal. At h = 1/lambda this is the continuous
    extension Omega_h = xi, Sigma_h = -Omega.
    """
    s, r = _root_terms(triple, h)
    xi = triple.unit_xi
    k = triple.k_dim
    omega_h = np.zeros(1 + k, dtype=complex)
    sigma_h = np.zeros(1 + k, dtype=complex)
    omega_h[0], omega_h[1:] = s, r * xi
    sigma_h[0], sigma_h[1:] = -r, s * xi
    return omega_h, sigma_h


def beta_gns(algebra: FiniteBialgebra, triple: SchurmannTriple, h: float) -> WalkStep:
    """
    beta^(h)(a) = U_h beta~(a) U_h^dagger with beta~ = eps (+) nu compressed by
    the projections onto C Omega_h and its complement, and
    U_h(alpha Omega_h + alpha' Sigma_h + eta) = alpha Omega + alpha' xi + eta.

    Raises:
        InadmissibleStepError: If h is outside (0, 1/lambda]
    """
    check_step(triple, h)
    if triple.lam == 0.0:
        return _trivial_step(triple, h)

    k = triple.k_dim
    size = 1 + k
    omega_h, sigma_h = gns_rotation_vectors(triple, h)
    omega = np.zeros(size, dtype=complex)
    omega[0] = 1.0
    xi_hat = np.zeros(size, dtype=complex)
    xi_hat[1:] = triple.unit_xi

    beta_tilde = _trivial_step(triple, h).mats
    p_omega = np.outer(omega_h, np.conj(omega_h))
    p_perp = np.eye(size) - p_omega
    compressions = [
        p_omega @ beta_tilde @ p_omega,
        p_omega @ beta_tilde @ p_perp,
        p_perp @ beta_tilde @ p_omega,
        p_perp @ beta_tilde @ p_perp,
    ]

    rotation = (
        np.outer(omega, np.conj(omega_h))
        + np.outer(xi_hat, np.conj(sigma_h))
        + (np.eye(size) - p_omega - np.outer(sigma_h, np.conj(sigma_h)))
    )
    rotation_adj = rotation.conj().T
    mats = sum(rotation @ block @ rotation_adj for block in compressions)
    return WalkStep(h=h, mats=mats)


def density_functional(algebra: FiniteBialgebra, beta: WalkStep, rho: np.ndarray) -> np.ndarray:
    """Coefficient row of a -> tr(rho beta(a))."""
    return np.einsum("ab,iba->i", rho, beta.mats)


def check_density(rho: np.ndarray, size: int, tol: float | None = None) -> np.ndarray:
    """
    Raises:
        InvalidDensityError: If rho is not a size x size density matrix
    """
    tol = settings.axiom_tol if tol is None else tol
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (size, size):
        raise InvalidDensityError(f"Density matrix has shape {rho.shape}, expected ({size}, {size})")
    if np.max(np.abs(rho - rho.conj().T)) > tol:
        raise InvalidDensityError("Density matrix is not Hermitian")
    if np.min(np.linalg.eigvalsh((rho + rho.conj().T) / 2)) < -tol:
        raise InvalidDensityError("Density matrix is not positive semidefinite")
    if abs(np.trace(rho) - 1) > tol:
        raise InvalidDensityError(f"Density matrix has trace {np.trace(rho)}")
    return rho


def vacuum_density(size: int) -> np.ndarray:
    rho = np.zeros((size, size), dtype=complex)
    rho[0, 0] = 1.0
    return rho


def walk_vacuum_sequence(
    algebra: FiniteBialgebra,
    beta: WalkStep,
    n: int,
    phi_state: np.ndarray | None = None,
) -> list[Functional]:
    """
    kappa_0 = eps, kappa_m = kappa_{m-1} * (phi o beta) for m = 1..n,
    with phi the state of density `phi_state` (vacuum by default).

    Raises:
        InvalidDensityError: If phi_state is not a density matrix
    """
    rho = vacuum_density(beta.size) if phi_state is None else check_density(phi_state, beta.size)
    step = density_functional(algebra, beta, rho)
    op = np.einsum("jki,k->ji", algebra.coproduct3, step)
    kappas = [algebra.counit.astype(complex)]
    for _ in range(n):
        kappas.append(kappas[-1] @ op)
    return [Functional(algebra, kappa) for kappa in kappas]


def walk_state(
    algebra: FiniteBialgebra, beta: WalkStep, n: int, phi_state: np.ndarray | None = None
) -> Functional:
    """kappa_n alone."""
    return walk_vacuum_sequence(algebra, beta, n, phi_state)[-1]


def _check_cap(size: int, n: int, cap: int) -> None:
    if size ** n > cap:
        raise DenseCapExceededError(
            f"Dense walk needs matrices of size {size}^{n} = {size ** n} > cap {cap}; "
            "use the convolution paths (walk_vacuum_sequence / walk_matrix_element)"
        )


def walk_dense(
    algebra: FiniteBialgebra, beta: WalkStep, n: int, cap: int | None = None
) -> np.ndarray:
    """
    J_n on the toy Fock space by the recursion J_0 = eps, J_n = (J_{n-1} (x) beta) Delta.

    Returns:
        Array of shape (d, (1+k)^n, (1+k)^n), J_n(b_i) per basis element

    Raises:
        DenseCapExceededError: If (1+k)^n exceeds the cap
    """
    cap = settings.dense_cap if cap is None else cap
    _check_cap(beta.size, n, cap)
    d = algebra.dim
    current = algebra.counit.reshape(d, 1, 1).astype(complex)
    for _ in range(n):
        m = current.shape[1]
        current = np.einsum(
            "jki,jab,kcd->iacbd", algebra.coproduct3, current, beta.mats, optimize=True
        ).reshape(d, m * beta.size, m * beta.size)
    logger.debug(f"Dense walk J_{n}: matrices of size {current.shape[1]}")
    return current


def walk_tensor_power(
    algebra: FiniteBialgebra, beta: WalkStep, n: int, cap: int | None = None
) -> np.ndarray:
    """J_n as (beta^{(x)n}) o Delta^{(n)}, summing over the iterated coproduct."""
    cap = settings.dense_cap if cap is None else cap
    _check_cap(beta.size, n, cap)
    d = algebra.dim
    if n == 0:
        return algebra.counit.reshape(d, 1, 1).astype(complex)
    coproduct_n = iterated_coproduct(algebra, n)
    size = beta.size ** n
    result = np.zeros((d, size, size), dtype=complex)
    for multi_index, row in zip(np.ndindex(*(d,) * n), coproduct_n):
        if not np.any(row):
            continue
        term = np.ones((1, 1), dtype=complex)
        for j in multi_index:
            term = np.kron(term, beta.mats[j])
        result += row[:, None, None] * term[None, :, :]
    return result


class BlockErrors(NamedTuple):
    """Sampled norms of the three block deviations."""

    e1: float
    e3: float
    e4: float


def beta_block_errors(
    algebra: FiniteBialgebra,
    triple: SchurmannTriple,
    beta: WalkStep,
    h: float,
    samples: int | None = None,
    seed: int | None = None,
) -> BlockErrors:
    """
    e1 = ||beta_1 - (eps + h gamma)||, e3 = ||beta_3 - sqrt(h) delta||,
    e4 = ||beta_4 - nu||, each via map_norm_estimate under a fixed seed.
    """
    dev1 = beta.beta1 - (algebra.counit + h * triple.gamma.coeffs)
    dev3 = beta.beta3 - np.sqrt(h) * triple.delta
    dev4 = beta.beta4 - triple.rep.mats
    return BlockErrors(
        e1=map_norm_estimate(algebra, dev1, samples, seed),
        e3=map_norm_estimate(algebra, dev3, samples, seed),
        e4=map_norm_estimate(algebra, dev4, samples, seed),
    )
