"""
Resolution of a validated ExperimentConfig into numerical objects:
the bialgebra, the Schürmann triple, matrix-element cases and the h grid.
"""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from core.algebra import FiniteBialgebra
from core.builders import resolve_fixture
from core.fock import FockError, StepFunction
from core.harness import MatrixElementCase, default_h_grid
from core.presets import build_preset
from core.schurmann import Representation, SchurmannTriple, load_triple, triple_from_rep_vector
from data.experiment import ExperimentConfig, PieceSpec, TestCaseSpec
from utils.complex_codec import decode_array, decode_complex
from utils.logger import setup_logger

logger = setup_logger(__name__)


@dataclass(frozen=True, eq=False)
class ResolvedExperiment:
    config: ExperimentConfig
    algebra: FiniteBialgebra
    triple: SchurmannTriple
    cases: list[MatrixElementCase] = field(default_factory=list)

    def h_grid(self) -> list[float]:
        grid = self.config.grid
        return default_h_grid(self.triple.lam, grid.j_min, grid.j_max, grid.base)

    def observables(self) -> list[tuple[str, np.ndarray]]:
        """(label, coefficients) of the configured observables, the basis by default."""
        if not self.config.observables:
            return [
                (label, self.algebra.basis_vector(i)) for i, label in enumerate(self.algebra.labels)
            ]
        return [
            (spec if isinstance(spec, str) else f"obs{i}", resolve_element(self.algebra, spec))
            for i, spec in enumerate(self.config.observables)
        ]


def resolve_element(algebra: FiniteBialgebra, spec: str | Sequence) -> np.ndarray:
    """A basis label, 'unit', or a coefficient vector."""
    if isinstance(spec, str):
        if spec == "unit":
            return algebra.unit.astype(complex)
        return algebra.basis_vector(algebra.index(spec))
    coeffs = np.array([decode_complex(c) for c in spec], dtype=complex)
    if coeffs.shape != (algebra.dim,):
        raise ValueError(f"Element has {coeffs.shape[0]} coefficients, algebra has dimension {algebra.dim}")
    return coeffs


def _step_function(pieces: list[PieceSpec], k_dim: int) -> StepFunction:
    decoded = []
    for piece in pieces:
        value = [decode_complex(c) for c in piece.value]
        if len(value) != k_dim:
            raise FockError(f"Step value {piece.value} has {len(value)} entries, k has dimension {k_dim}")
        decoded.append((piece.duration, value))
    return StepFunction.from_pieces(decoded, k_dim)


def resolve_case(algebra: FiniteBialgebra, k_dim: int, spec: TestCaseSpec) -> MatrixElementCase:
    return MatrixElementCase(
        name=spec.name,
        f=_step_function(spec.f, k_dim),
        g=_step_function(spec.g, k_dim),
        t=spec.t,
        a=resolve_element(algebra, spec.a),
    )


def resolve_triple(algebra: FiniteBialgebra, config: ExperimentConfig) -> SchurmannTriple:
    spec = config.triple
    if spec.preset is not None:
        return build_preset(spec.preset, algebra)
    if spec.file is not None:
        return load_triple(algebra, Path(spec.file))
    rep = Representation(mats=decode_array(spec.rep, 3))
    xi = decode_array(spec.xi, 1)
    return triple_from_rep_vector(algebra, rep, xi, name=f"{config.name}_inline")


def resolve_experiment(config: ExperimentConfig, base_dir: Path | None = None) -> ResolvedExperiment:
    """
    Raises:
        FixtureError, SchurmannError, FockError, ValueError: On inconsistent config contents
    """
    algebra = resolve_fixture(config.fixture, base_dir)
    triple = resolve_triple(algebra, config)
    cases = [resolve_case(algebra, triple.k_dim, case) for case in config.testcases]
    logger.debug(
        f"Resolved {config.name}: dim {algebra.dim}, k = {triple.k_dim}, lambda = {triple.lam:.6g}, "
        f"{len(cases)} test cases"
    )
    return ResolvedExperiment(config=config, algebra=algebra, triple=triple, cases=cases)
